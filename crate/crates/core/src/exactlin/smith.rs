use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Result of a Smith decomposition: `u * m * v == s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// Nonnegative diagonal entries `d_1 | d_2 | ...`, including trailing zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Smith normal form with unimodular transforms.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (rows, cols) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = &s[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < s[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return Smith { u, s, v };
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = -s[(i, t)].div_floor(&s[(t, t)]);
                s.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= s[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = -s[(t, j)].div_floor(&s[(t, t)]);
                s.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= s[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }

            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !s[(i, j)].is_multiple_of(&s[(t, t)]))
            });
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    Smith { u, s, v }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> Smith {
        let snf = smith_normal_form(m);
        assert_eq!(snf.u.mul(m).unwrap().mul(&snf.v).unwrap(), snf.s);
        assert_eq!(snf.u.determinant().unwrap().abs(), BigInt::from(1));
        assert_eq!(snf.v.determinant().unwrap().abs(), BigInt::from(1));
        snf
    }

    #[test]
    fn identity_is_fixed() {
        let i3 = IntMatrix::identity(3);
        let snf = check(&i3);
        assert_eq!(snf.s, i3);
        assert_eq!(snf.u, i3);
        assert_eq!(snf.v, i3);
    }

    #[test]
    fn projective_space_matrix() {
        for n in 1..=4 {
            let mut rows = vec![vec![0i64; n + 1]; n];
            for (i, r) in rows.iter_mut().enumerate() {
                r[i] = 1;
                r[n] = -1;
            }
            let snf = check(&IntMatrix::from_rows(&rows));
            let d = snf.diagonal();
            assert!(d.iter().all(|x| *x == BigInt::from(1)));
            assert!(snf.s.column(n).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn small_two_by_two() {
        let snf = check(&IntMatrix::from_rows(&[[2, 4], [6, 8]]));
        assert_eq!(snf.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn zero_and_empty() {
        let z = IntMatrix::zeros(2, 3);
        assert_eq!(check(&z).rank(), 0);
        let e = IntMatrix::zeros(0, 3);
        let snf = check(&e);
        assert_eq!(snf.v, IntMatrix::identity(3));
    }

    #[test]
    fn divisibility_chain_forced() {
        // diag(2, 3) has invariant factors 1, 6
        let snf = check(&IntMatrix::from_rows(&[[2, 0], [0, 3]]));
        assert_eq!(snf.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }
}
