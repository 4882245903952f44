//! Toric data: `A^T = B Λ D` with `B` unimodular and `D = diag(±1)`, and
//! integral `b`. The vertex and edge lattice points of `i_P(P)` then give a
//! projective embedding, and the log-modulus Jacobian is positive definite.

use itertools::Itertools;
use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::chardata::{restrict_character, CharMatrix, Character};
use crate::embed::{build_character_set, EmbeddingSpec, Monomial};
use crate::error::{Error, Result};
use crate::exactlin::{unimodular_inverse, IntMatrix};
use crate::polytope::{FaceLattice, HPolytope};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricCertificate {
    pub integral_b: bool,
    pub b_matrix: Option<IntMatrix>,
    /// Diagonal of `D`.
    pub signs: Option<Vec<i8>>,
    /// `C^T b`, when `b` is integral.
    pub character: Option<Character>,
    /// `C^T D b`: the character whose vertex lifts are `D i_P(v)`.
    pub lattice_character: Option<Character>,
    pub failures: Vec<String>,
}

impl ToricCertificate {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.b_matrix.as_ref().is_some_and(|b| *b == IntMatrix::identity(b.rows()))
            && self.signs.as_ref().is_some_and(|d| d.iter().all(|&s| s == 1))
    }
}

/// Searches for `(B, D)` with `A^T = B Λ D`.
///
/// The signs of `D` on the facets of the first vertex are enumerated; each
/// choice fixes `B = A^T_I D_I Λ_I^{-1}`, and the remaining signs are forced
/// by `B λ_j = ±A^T_j`. Among all solutions the one whose `D` is smallest when
/// compared from the last entry backwards (`+1 < -1`) is reported.
pub fn check_toric(p: &HPolytope, faces: &FaceLattice, cm: &CharMatrix) -> Result<ToricCertificate> {
    let at = p
        .a()
        .transpose()
        .to_integer()
        .ok_or_else(|| Error::Toric("A is not integral".into()))?;
    let (n, m) = (p.n(), p.m());
    if cm.n() != n || cm.m() != m {
        return Err(Error::dims("Lambda shape", format!("{n}x{m}"), format!("{}x{}", cm.n(), cm.m())));
    }
    let mut failures = Vec::new();
    let b_int: Option<Vec<BigInt>> = p.b().iter().map(|x| x.is_integer().then(|| x.to_integer())).collect();
    if b_int.is_none() {
        failures.push("b is not integral".to_string());
    }

    let v0 = faces.vertices.first().ok_or_else(|| Error::Toric("polytope has no vertices".into()))?;
    let idx = &v0.facets;
    let lambda_inv = unimodular_inverse(&cm.lambda.select_columns(idx)).map_err(|e| Error::IndependenceViolated {
        vertex: idx.clone(),
        detail: e.to_string(),
    })?;
    let at_i = at.select_columns(idx);

    let mut best: Option<(IntMatrix, Vec<i8>)> = None;
    for pattern in (0..n).map(|_| [1i8, -1]).multi_cartesian_product() {
        let mut scaled = at_i.clone();
        for (c, &s) in pattern.iter().enumerate() {
            if s < 0 {
                for r in 0..n {
                    scaled[(r, c)] = -&scaled[(r, c)];
                }
            }
        }
        let b = scaled.mul(&lambda_inv)?;
        if !b.determinant()?.abs().is_one() {
            continue;
        }
        let bl = b.mul(&cm.lambda)?;
        let mut signs = vec![0i8; m];
        let mut ok = true;
        for (j, sign) in signs.iter_mut().enumerate() {
            let col = bl.column(j);
            let target = at.column(j);
            *sign = if col == target {
                1
            } else if col.iter().zip(&target).all(|(x, y)| *x == -y) {
                -1
            } else {
                ok = false;
                break;
            };
        }
        if !ok {
            continue;
        }
        let key = |d: &[i8]| d.iter().rev().map(|&s| s < 0).collect::<Vec<_>>();
        if best.as_ref().is_none_or(|(_, d)| key(&signs) < key(d)) {
            best = Some((b, signs));
        }
    }
    let (b_matrix, signs) = match best {
        Some((b, d)) => (Some(b), Some(d)),
        None => {
            failures.push("no unimodular B and sign matrix D with A^T = B Lambda D".to_string());
            (None, None)
        }
    };

    let character = b_int.as_ref().map(|b| restrict_character(&cm.kernel, b)).transpose()?;
    let lattice_character = match (&b_int, &signs) {
        (Some(b), Some(d)) => Some(restrict_character(&cm.kernel, &apply_signs(d, b))?),
        _ => None,
    };
    Ok(ToricCertificate {
        integral_b: b_int.is_some(),
        b_matrix,
        signs,
        character,
        lattice_character,
        failures,
    })
}

fn apply_signs(d: &[i8], v: &[BigInt]) -> Vec<BigInt> {
    d.iter().zip(v).map(|(&s, x)| if s < 0 { -x } else { x.clone() }).collect()
}

/// Character set of the toric embedding, with `D a` being the lattice point
/// of `i_P(P)` behind each entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeEmbedding {
    pub certificate: ToricCertificate,
    pub spec: EmbeddingSpec,
    pub lattice_points: Vec<Vec<BigInt>>,
}

/// Builds `X_k̃` for `k̃ = C^T D b` and checks the lattice structure: every
/// `D b_v` is `i_P(v)`, every `D a` is nonnegative and each `b_v` has exactly
/// `n` zeros.
pub fn lattice_embedding_set(p: &HPolytope, faces: &FaceLattice, cm: &CharMatrix) -> Result<LatticeEmbedding> {
    let certificate = check_toric(p, faces, cm)?;
    if !certificate.passes() {
        return Err(Error::Toric(certificate.failures.join("; ")));
    }
    let signs = certificate.signs.clone().expect("certificate passed");
    let character = certificate.lattice_character.clone().expect("certificate passed");
    let spec = build_character_set(faces, cm, &character)?;

    for (vi, v) in faces.vertices.iter().enumerate() {
        let image: Vec<BigInt> = p.image_point(&v.coords)?.iter().map(|x| x.to_integer()).collect();
        let bv = apply_signs(&signs, &spec.vertex_characters[vi].0);
        if bv != image {
            return Err(Error::Toric(format!(
                "vertex character {} differs from the image of vertex {}",
                Monomial(bv),
                crate::polytope::fmt_vec(&v.coords)
            )));
        }
        if bv.iter().filter(|x| x.is_zero()).count() != p.n() {
            return Err(Error::Toric(format!("vertex {} image does not have exactly n zeros", vi + 1)));
        }
    }
    let lattice_points: Vec<Vec<BigInt>> = spec.entries.iter().map(|e| apply_signs(&signs, &e.exponent.0)).collect();
    if let Some(bad) = lattice_points.iter().find(|a| a.iter().any(Signed::is_negative)) {
        return Err(Error::Toric(format!("entry {} has a negative degree", Monomial(bad.clone()))));
    }
    Ok(LatticeEmbedding {
        certificate,
        spec,
        lattice_points,
    })
}

#[derive(Clone, Debug)]
pub struct JacobianReport {
    pub g: DMatrix<f64>,
    pub symmetric: bool,
    pub positive_definite: bool,
    pub min_eigenvalue: f64,
    pub condition_number: f64,
}

/// `G_ik = Σ_j L_ji L_jk / β_j`.
pub fn log_jacobian(beta: &[f64], l1: &DMatrix<f64>) -> Result<JacobianReport> {
    if beta.len() != l1.nrows() {
        return Err(Error::dims("weights", l1.nrows(), beta.len()));
    }
    if let Some((index, &value)) = beta.iter().enumerate().find(|(_, b)| b.is_nan() || **b <= 0.0) {
        return Err(Error::NonPositiveWeight { index, value });
    }
    let k = l1.ncols();
    let mut g = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        for c in i..k {
            let s: f64 = (0..beta.len()).map(|j| l1[(j, i)] * l1[(j, c)] / beta[j]).sum();
            g[(i, c)] = s;
            g[(c, i)] = s;
        }
    }
    Ok(certify(g))
}

/// Symmetry, Cholesky and eigenvalue summary of `g`.
pub fn certify(g: DMatrix<f64>) -> JacobianReport {
    let symmetric = g == g.transpose();
    let positive_definite = symmetric && g.clone().cholesky().is_some();
    let eig = SymmetricEigen::new(g.clone()).eigenvalues;
    let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let max = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    JacobianReport {
        g,
        symmetric,
        positive_definite,
        min_eigenvalue: min,
        condition_number: if min > 0.0 { max / min } else { f64::INFINITY },
    }
}

pub fn to_dmatrix(m: &crate::exactlin::RatMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)].to_f64().expect("finite rational"))
}

/// `i_P(x)` in floating point.
pub fn image_f64(p: &HPolytope, x: &[f64]) -> Vec<f64> {
    (0..p.m())
        .map(|j| {
            let row: f64 = (0..p.n()).map(|i| p.a()[(j, i)].to_f64().expect("finite") * x[i]).sum();
            row + p.b()[j].to_f64().expect("finite")
        })
        .collect()
}

/// `x ↦ A^T log i_P(x)`, whose Jacobian is `G` with `L = A`.
pub fn log_gradient(p: &HPolytope, x: &[f64]) -> Vec<f64> {
    let y = image_f64(p, x);
    (0..p.n())
        .map(|i| (0..p.m()).map(|j| p.a()[(j, i)].to_f64().expect("finite") * y[j].ln()).sum())
        .collect()
}

/// `log_jacobian` of the whole polytope at a rational interior point.
pub fn polytope_log_jacobian(p: &HPolytope, x: &[BigRational]) -> Result<JacobianReport> {
    let beta: Vec<f64> = p.image_point(x)?.iter().map(|b| b.to_f64().expect("finite")).collect();
    log_jacobian(&beta, &to_dmatrix(p.a()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{rat, rat_vec};
    use crate::models;

    fn setup(model: &models::Model) -> (FaceLattice, CharMatrix) {
        let faces = model.polytope.enumerate_faces().unwrap();
        let cm = CharMatrix::new(model.lambda.clone(), model.kernel.clone()).unwrap();
        (faces, cm)
    }

    #[test]
    fn stasheff_is_normalized() {
        let k5 = models::stasheff();
        let (faces, cm) = setup(&k5);
        let cert = check_toric(&k5.polytope, &faces, &cm).unwrap();
        assert!(cert.passes() && cert.is_normalized());
        assert_eq!(cert.character, Some(Character::from_i64(&[3, 3, 3, 7, 6, 5])));
    }

    #[test]
    fn signed_simplex_certificate() {
        let n = 3;
        for c in [[1i64, 1, 1, 1], [1, -1, -1, 1], [-1, 1, 1, -1], [1, 1, -1, -1]] {
            let mut rows = vec![vec![0i64; n + 1]; n];
            for i in 0..n {
                rows[i][i] = 1;
                rows[i][n] = -c[i] * c[n];
            }
            let model = models::Model {
                name: "signed".into(),
                polytope: models::simplex(n),
                lambda: IntMatrix::from_rows(&rows),
                kernel: Some(IntMatrix::from_rows(&c.iter().map(|&x| [x]).collect::<Vec<_>>())),
            };
            let (faces, cm) = setup(&model);
            let cert = check_toric(&model.polytope, &faces, &cm).unwrap();
            let diag: Vec<i64> = (0..n).map(|i| c[i] * c[n]).collect();
            let mut b = IntMatrix::zeros(n, n);
            for i in 0..n {
                b[(i, i)] = diag[i].into();
            }
            assert_eq!(cert.b_matrix, Some(b));
            let mut d: Vec<i8> = diag.iter().map(|&x| x as i8).collect();
            d.push(1);
            assert_eq!(cert.signs, Some(d));
            assert_eq!(cert.character, Some(Character::from_i64(&[c[n]])));

            let emb = lattice_embedding_set(&model.polytope, &faces, &cm).unwrap();
            let mut points = emb.lattice_points.clone();
            points.sort();
            let mut unit: Vec<Vec<BigInt>> = (0..=n)
                .map(|i| (0..=n).map(|j| BigInt::from((i == j) as i64)).collect())
                .collect();
            unit.sort();
            assert_eq!(points, unit);
            // b_v = c_i c_{n+1} e_i
            for (vi, v) in faces.vertices.iter().enumerate() {
                let i = (0..=n).find(|i| !v.facets.contains(i)).unwrap();
                assert_eq!(emb.spec.vertex_characters[vi].0[i], BigInt::from(c[i] * c[n]));
            }
        }
    }

    #[test]
    fn half_integral_offset_fails() {
        let k5 = models::stasheff();
        let mut b = k5.polytope.b().to_vec();
        b[8] = rat(1, 2);
        let p = HPolytope::new(k5.polytope.a().clone(), b).unwrap();
        let faces = p.enumerate_faces().unwrap();
        let cm = CharMatrix::new(k5.lambda.clone(), k5.kernel.clone()).unwrap();
        let cert = check_toric(&p, &faces, &cm).unwrap();
        assert!(!cert.integral_b && !cert.passes());
        assert!(lattice_embedding_set(&p, &faces, &cm).is_err());
    }

    #[test]
    fn non_toric_lambda_has_no_certificate() {
        let model = models::cube_model(2, 1);
        let lambda = IntMatrix::from_rows(&[[1, 0, -1, 0], [0, 1, -2, -1]]);
        let cm = CharMatrix::new(lambda, None).unwrap();
        let faces = model.polytope.enumerate_faces().unwrap();
        let cert = check_toric(&model.polytope, &faces, &cm).unwrap();
        assert!(cert.b_matrix.is_none() && !cert.passes());
    }

    #[test]
    fn stasheff_lattice_set_has_32_points() {
        let k5 = models::stasheff();
        let (faces, cm) = setup(&k5);
        let emb = lattice_embedding_set(&k5.polytope, &faces, &cm).unwrap();
        assert_eq!(emb.spec.q(), 32);
        assert_eq!(emb.spec.entries.iter().filter(|e| e.is_vertex_entry()).count(), 14);
    }

    #[test]
    fn unit_square_lattice_set_is_its_vertices() {
        let model = models::cube_model(2, 1);
        let (faces, cm) = setup(&model);
        let emb = lattice_embedding_set(&model.polytope, &faces, &cm).unwrap();
        assert_eq!(emb.spec.q(), 4);
        let mut got: Vec<Vec<BigInt>> = emb.lattice_points.clone();
        got.sort();
        let mut want: Vec<Vec<BigInt>> = [[0, 0], [1, 0], [0, 1], [1, 1]]
            .iter()
            .map(|x| model.polytope.image_point(&rat_vec(x)).unwrap().iter().map(|y| y.to_integer()).collect())
            .collect();
        want.sort();
        assert_eq!(got, want);
        assert_eq!(emb.spec.edge_characters.len(), 8);
    }

    #[test]
    fn segment_jacobian() {
        let l = DMatrix::from_row_slice(2, 1, &[1.0, -1.0]);
        for b in [0.5, 0.1, 0.9] {
            let r = log_jacobian(&[b, 1.0 - b], &l).unwrap();
            assert!((r.g[(0, 0)] - (1.0 / b + 1.0 / (1.0 - b))).abs() < 1e-12);
            assert!(r.positive_definite);
        }
        assert!(matches!(log_jacobian(&[0.0, 1.0], &l), Err(Error::NonPositiveWeight { index: 0, .. })));
    }

    #[test]
    fn rank_deficient_jacobian_is_not_definite() {
        let l = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 2.0, 0.0, -1.0, 0.0]);
        let r = log_jacobian(&[1.0, 2.0, 3.0], &l).unwrap();
        assert!(r.symmetric && !r.positive_definite);
    }

    #[test]
    fn stasheff_jacobian_center() {
        let k5 = models::stasheff();
        let r = polytope_log_jacobian(&k5.polytope, &[rat(3, 2), rat(3, 2), rat(3, 2)]).unwrap();
        assert!(r.symmetric && r.positive_definite && r.min_eigenvalue > 0.0);
    }
}
