//! Exact integer and rational linear algebra.
//!
//! Everything here works on arbitrary-precision entries. The matrices are
//! small (tens of rows at most), so the algorithms are the textbook ones:
//! fraction-free elimination for determinants, pivoting Smith reduction,
//! extended-gcd row reduction for Hermite forms.

mod matrix;
mod smith;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use matrix::{int_vec, parse_rational, rat, rat_vec, sign_normalized, IntMatrix, RatMatrix};
pub use smith::{smith_normal_form, Smith};

use crate::error::{Error, Result};

/// Row-style Hermite normal form of an integer matrix.
///
/// Pivots are positive, entries above a pivot are reduced into `[0, pivot)`,
/// and zero rows are dropped. The row lattice is unchanged.
pub fn row_hermite_form(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        for i in r + 1..rows {
            if a[(i, col)].is_zero() {
                continue;
            }
            let p = a[(r, col)].clone();
            let q = a[(i, col)].clone();
            let eg = p.extended_gcd(&q);
            let g = &eg.x * &p + &eg.y * &q;
            // [x y; -q/g p/g] has determinant 1
            let (qg, pg) = (&q / &g, &p / &g);
            for j in col..cols {
                let top = &eg.x * &a[(r, j)] + &eg.y * &a[(i, j)];
                let bottom = -&qg * &a[(r, j)] + &pg * &a[(i, j)];
                a[(r, j)] = top;
                a[(i, j)] = bottom;
            }
        }
        if a[(r, col)].is_zero() {
            continue;
        }
        if a[(r, col)].is_negative() {
            a.negate_row(r);
        }
        for i in 0..r {
            let q = -a[(i, col)].div_floor(&a[(r, col)]);
            a.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    a.select_rows(&(0..r).collect::<Vec<_>>())
}

/// Basis of `ker M ∩ ℤ^cols` as the columns of the returned matrix.
///
/// The basis is canonical: its transpose is in row Hermite normal form.
/// The kernel of an integer matrix is always saturated, so the result spans
/// a direct summand.
pub fn integer_kernel_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let cols: Vec<usize> = (r..m.cols()).collect();
    let raw = snf.v.select_columns(&cols);
    if raw.cols() == 0 {
        return raw;
    }
    row_hermite_form(&raw.transpose()).transpose()
}

/// True when the columns of `m` are independent and span a direct summand of
/// `ℤ^rows`, i.e. every Smith invariant factor equals one.
pub fn spans_direct_summand(m: &IntMatrix) -> bool {
    let snf = smith_normal_form(m);
    snf.rank() == m.cols() && snf.diagonal().iter().all(One::is_one)
}

/// `v / gcd(v)`.
pub fn primitive_vector(v: &[BigInt]) -> Result<Vec<BigInt>> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

/// Exact solution of `M x = rhs` for square nonsingular `M`.
pub fn solve_rational(m: &RatMatrix, rhs: &[BigRational]) -> Result<Vec<BigRational>> {
    let n = m.rows();
    if m.cols() != n {
        return Err(Error::dims("solve_rational (square)", n, m.cols()));
    }
    if rhs.len() != n {
        return Err(Error::dims("solve_rational rhs", n, rhs.len()));
    }
    let mut a: Vec<Vec<BigRational>> = m.to_rows();
    for (row, b) in a.iter_mut().zip(rhs) {
        row.push(b.clone());
    }
    gauss_jordan(&mut a, n)?;
    Ok(a.into_iter().map(|row| row[n].clone()).collect())
}

/// Reduces the left `n×n` block of the augmented rows to the identity.
fn gauss_jordan(a: &mut [Vec<BigRational>], n: usize) -> Result<()> {
    for col in 0..n {
        let p = (col..n).find(|&i| !a[i][col].is_zero()).ok_or(Error::Singular)?;
        a.swap(p, col);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[col].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
    }
    Ok(())
}

/// Rational inverse of a square matrix.
pub fn invert_rational(m: &RatMatrix) -> Result<RatMatrix> {
    let n = m.rows();
    if m.cols() != n {
        return Err(Error::dims("invert_rational (square)", n, m.cols()));
    }
    let mut a: Vec<Vec<BigRational>> = m.to_rows();
    for (i, row) in a.iter_mut().enumerate() {
        row.extend((0..n).map(|j| {
            if i == j {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        }));
    }
    gauss_jordan(&mut a, n)?;
    let rows: Vec<Vec<BigRational>> = a.into_iter().map(|r| r[n..].to_vec()).collect();
    RatMatrix::from_rows(&rows, n)
}

/// Integer inverse of a matrix with determinant ±1.
pub fn unimodular_inverse(m: &IntMatrix) -> Result<IntMatrix> {
    let det = m.determinant()?;
    if !det.abs().is_one() {
        return Err(Error::NotUnimodular { det });
    }
    let inv = invert_rational(&m.to_rational())?;
    inv.to_integer()
        .ok_or_else(|| Error::CrossCheck("unimodular inverse is not integral".into()))
}
