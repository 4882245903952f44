//! The moment-angle manifold `Z_P ⊂ C^m` as an intersection of real quadrics
//! and its section over the polytope.

use std::f64::consts::TAU;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{integer_kernel_basis, IntMatrix};
use crate::polytope::{fmt_vec, HPolytope};

/// `Σ_k c_jk (|z_k|^2 - b_k) = 0` for `j = 1..m-n`, with `coeffs · A = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadricSystem {
    /// `(m-n) × m`.
    pub coeffs: IntMatrix,
    /// `coeffs · b`.
    pub rhs: Vec<BigRational>,
}

impl QuadricSystem {
    pub fn len(&self) -> usize {
        self.coeffs.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.rows() == 0
    }

    /// One line per equation, e.g. `|z1|^2 + |z4|^2 = 3`.
    pub fn equations(&self) -> Vec<String> {
        (0..self.len()).map(|j| render_equation(self.coeffs.row(j), &self.rhs[j])).collect()
    }
}

impl fmt::Display for QuadricSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.equations() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

fn render_equation(row: &[BigInt], rhs: &BigRational) -> String {
    let mut s = String::new();
    for (k, c) in row.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if s.is_empty() {
            if c.is_negative() {
                s.push('-');
            }
        } else {
            s.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let a = c.abs();
        if !a.is_one() {
            s.push_str(&a.to_string());
        }
        s.push_str(&format!("|z{}|^2", k + 1));
    }
    if s.is_empty() {
        s.push('0');
    }
    format!("{s} = {rhs}")
}

/// Quadrics of `Z_P`. A supplied kernel basis `C` is used as `C^T` when it
/// annihilates `A`; otherwise the canonical basis of the left kernel of `A`.
pub fn quadric_system(p: &HPolytope, kernel: Option<&IntMatrix>) -> Result<QuadricSystem> {
    let coeffs = match kernel {
        Some(c) if c.rows() == p.m() && c.cols() == p.m() - p.n() && annihilates(c, p) => c.transpose(),
        _ => {
            let at = p.a().transpose().clear_denominators();
            integer_kernel_basis(&at).transpose()
        }
    };
    let rhs = (0..coeffs.rows())
        .map(|j| {
            coeffs
                .row(j)
                .iter()
                .zip(p.b())
                .map(|(c, b)| BigRational::from_integer(c.clone()) * b)
                .sum()
        })
        .collect();
    Ok(QuadricSystem { coeffs, rhs })
}

fn annihilates(c: &IntMatrix, p: &HPolytope) -> bool {
    let ct = c.transpose().to_rational();
    (0..ct.rows()).all(|j| {
        (0..p.n()).all(|i| {
            (0..p.m())
                .map(|k| &ct[(j, k)] * &p.a()[(k, i)])
                .sum::<BigRational>()
                .is_zero()
        })
    })
}

/// A point `t · s(i_P(p))` of `Z_P`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZPoint {
    pub z: Vec<Complex64>,
    pub base: Vec<BigRational>,
    pub angles: Vec<f64>,
}

/// `z_k = exp(2πi θ_k) sqrt(y_k)` with `y = i_P(p)`; angles are in turns.
pub fn sample_zpoint(p: &HPolytope, base: &[BigRational], angles: &[f64]) -> Result<ZPoint> {
    if angles.len() != p.m() {
        return Err(Error::dims("angles", p.m(), angles.len()));
    }
    let y = p.image_point(base)?;
    if let Some(k) = y.iter().position(Signed::is_negative) {
        return Err(Error::OutsidePolytope(format!(
            "{} violates inequality {}",
            fmt_vec(base),
            k + 1
        )));
    }
    let z = y
        .iter()
        .zip(angles)
        .map(|(yk, th)| {
            let r = yk.to_f64().expect("finite rational").sqrt();
            Complex64::from_polar(r, TAU * th)
        })
        .collect();
    Ok(ZPoint {
        z,
        base: base.to_vec(),
        angles: angles.to_vec(),
    })
}

/// `Σ_k c_jk |z_k|^2 - rhs_j` per equation.
pub fn quadric_residual(q: &QuadricSystem, z: &[Complex64]) -> Result<Vec<f64>> {
    if z.len() != q.coeffs.cols() {
        return Err(Error::dims("point in C^m", q.coeffs.cols(), z.len()));
    }
    Ok((0..q.len())
        .map(|j| {
            let lhs: f64 = q
                .coeffs
                .row(j)
                .iter()
                .zip(z)
                .map(|(c, zk)| c.to_f64().expect("small coefficient") * zk.norm_sqr())
                .sum();
            lhs - q.rhs[j].to_f64().expect("finite rational")
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{rat, rat_vec};
    use crate::models;

    #[test]
    fn segment_is_the_three_sphere() {
        let q = quadric_system(&models::segment(), None).unwrap();
        assert_eq!(q.equations(), vec!["|z1|^2 + |z2|^2 = 1"]);
    }

    #[test]
    fn simplex_is_a_sphere() {
        for n in 1..=4 {
            let q = quadric_system(&models::simplex(n), None).unwrap();
            assert_eq!(q.len(), 1);
            assert!(q.coeffs.row(0).iter().all(|c| c.is_one()));
            assert!(q.rhs[0].is_one());
        }
    }

    #[test]
    fn stasheff_equations_with_fixed_kernel() {
        let k5 = models::stasheff();
        let q = quadric_system(&k5.polytope, k5.kernel.as_ref()).unwrap();
        assert_eq!(
            q.equations(),
            vec![
                "|z1|^2 + |z4|^2 = 3",
                "|z2|^2 + |z5|^2 = 3",
                "|z3|^2 + |z6|^2 = 3",
                "|z1|^2 + |z3|^2 + |z7|^2 + |z9|^2 = 7",
                "|z7|^2 + |z8|^2 + |z9|^2 = 6",
                "|z2|^2 + |z3|^2 + |z7|^2 = 5",
            ]
        );
    }

    #[test]
    fn wrong_user_kernel_falls_back_to_canonical() {
        let k5 = models::stasheff();
        let bad = IntMatrix::identity(9).select_columns(&[0, 1, 2, 3, 4, 5]);
        let q = quadric_system(&k5.polytope, Some(&bad)).unwrap();
        assert_eq!(q, quadric_system(&k5.polytope, None).unwrap());
        assert_eq!(q.coeffs.to_rational().rank(), 6);
    }

    #[test]
    fn rational_right_hand_side() {
        let p = HPolytope::new(
            crate::exactlin::RatMatrix::from_rows(&[rat_vec(&[2]), rat_vec(&[-1])], 1).unwrap(),
            vec![rat(0, 1), rat(1, 3)],
        )
        .unwrap();
        let q = quadric_system(&p, None).unwrap();
        assert_eq!(q.equations(), vec!["|z1|^2 + 2|z2|^2 = 2/3"]);
    }

    #[test]
    fn section_point_on_segment() {
        let p = models::segment();
        let pt = sample_zpoint(&p, &[rat(1, 2)], &[0.0, 0.0]).unwrap();
        assert!((pt.z[0].re - 0.5f64.sqrt()).abs() < 1e-15);
        let q = quadric_system(&p, None).unwrap();
        assert!(quadric_residual(&q, &pt.z).unwrap()[0].abs() < 1e-15);
        let doubled: Vec<Complex64> = pt.z.iter().map(|z| z * 2.0).collect();
        assert!((quadric_residual(&q, &doubled).unwrap()[0] - 3.0).abs() < 1e-12);
        assert!(sample_zpoint(&p, &[rat(2, 1)], &[0.0, 0.0]).is_err());
    }

    #[test]
    fn origin_misses_the_sphere() {
        let q = quadric_system(&models::simplex(3), None).unwrap();
        assert_eq!(quadric_residual(&q, &[Complex64::zero(); 4]).unwrap(), vec![-1.0]);
    }

    #[test]
    fn vertices_give_exact_zeros() {
        let k5 = models::stasheff();
        let faces = k5.polytope.enumerate_faces().unwrap();
        let angles: Vec<f64> = (0..9).map(|k| 0.1 * k as f64 + 0.03).collect();
        for v in &faces.vertices {
            let pt = sample_zpoint(&k5.polytope, &v.coords, &angles).unwrap();
            for k in 0..9 {
                assert_eq!(pt.z[k] == Complex64::zero(), v.facets.contains(&k));
            }
        }
    }

    #[test]
    fn stasheff_interior_residuals() {
        let k5 = models::stasheff();
        let q = quadric_system(&k5.polytope, k5.kernel.as_ref()).unwrap();
        let angles = [0.12, 0.5, 0.77, 0.01, 0.33, 0.9, 0.41, 0.68, 0.25];
        let pt = sample_zpoint(&k5.polytope, &[rat(3, 2), rat(3, 2), rat(3, 2)], &angles).unwrap();
        for r in quadric_residual(&q, &pt.z).unwrap() {
            assert!(r.abs() < 1e-12);
        }
    }
}
