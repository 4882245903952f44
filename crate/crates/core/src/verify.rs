//! Sampling checks for a character set: torus equivariance, invariance
//! under `K`, nonvanishing of the vertex coordinates, orbit separation, and
//! the positive-definite log-modulus Jacobian.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chardata::CharMatrix;
use crate::embed::{EmbeddingMode, EmbeddingSpec, Monomial};
use crate::error::{Error, Result};
use crate::exactlin::{solve_rational, RatMatrix};
use crate::momentangle::{sample_zpoint, ZPoint};
use crate::polytope::{FaceLattice, HPolytope};
use crate::toric::{certify, image_f64, log_jacobian, to_dmatrix, JacobianReport};

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub samples: usize,
    pub seed: u64,
    pub tol_eq: f64,
    pub tol_sep: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            samples: 200,
            seed: 42,
            tol_eq: 1e-9,
            tol_sep: 1e-6,
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_eq > 0.0 && self.tol_sep > self.tol_eq) {
            return Err(Error::Config(format!(
                "need tol_sep > tol_eq > 0, got tol_eq = {}, tol_sep = {}",
                self.tol_eq, self.tol_sep
            )));
        }
        if self.samples == 0 {
            return Err(Error::Config("samples must be positive".into()));
        }
        Ok(())
    }
}

/// Product of `z_i^{a_i}` for `a_i > 0` and `conj(z_i)^{-a_i}` for `a_i < 0`.
pub fn eval_monomial(a: &Monomial, z: &[Complex64]) -> Complex64 {
    let mut out = Complex64::new(1.0, 0.0);
    for (e, zi) in a.0.iter().zip(z) {
        if e.is_zero() {
            continue;
        }
        let k = e.abs().to_u32().expect("exponent fits in u32");
        let base = if e.is_negative() { zi.conj() } else { *zi };
        out *= base.powu(k);
    }
    out
}

pub fn evaluate(spec: &EmbeddingSpec, z: &[Complex64]) -> Vec<Complex64> {
    spec.exponents().map(|a| eval_monomial(a, z)).collect()
}

/// Distance between the fibre parts of two images. Affine: max coordinate
/// difference relative to `max(1, |φ|_∞)`. Projective: `|u - ω v|` for unit
/// representatives with the best phase `ω`.
pub fn image_distance(mode: EmbeddingMode, phi: &[Complex64], psi: &[Complex64]) -> f64 {
    match mode {
        EmbeddingMode::Affine => {
            let scale = phi.iter().map(|c| c.norm()).fold(1.0, f64::max);
            phi.iter().zip(psi).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale
        }
        EmbeddingMode::Projective => {
            let nu = phi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            let nv = psi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            let inner: Complex64 = phi.iter().zip(psi).map(|(a, b)| a * b.conj()).sum();
            let omega = if inner.norm() > 0.0 { inner / inner.norm() } else { Complex64::new(1.0, 0.0) };
            phi.iter()
                .zip(psi)
                .map(|(a, b)| (a / nu - omega * b / nv).norm_sqr())
                .sum::<f64>()
                .sqrt()
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckSummary {
    pub checked: usize,
    pub failures: usize,
    pub max_deviation: f64,
}

impl CheckSummary {
    fn record(&mut self, deviation: f64, ok: bool) {
        self.checked += 1;
        if deviation > self.max_deviation || deviation.is_nan() {
            self.max_deviation = deviation;
        }
        if !ok {
            self.failures += 1;
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SeparationSummary {
    pub checked: usize,
    pub failures: usize,
    pub inconclusive: usize,
    pub min_distance: f64,
    pub distinct_base_failures: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub check: &'static str,
    pub trial: usize,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub equivariance: CheckSummary,
    pub k_invariance: CheckSummary,
    pub modulus: CheckSummary,
    pub nonvanishing: CheckSummary,
    pub separation: SeparationSummary,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

const MODULUS_TOL: f64 = 1e-12;
const PAIRING_MARGIN: f64 = 1e-3;

/// Runs `config.samples` independent trials. Trial `i` draws from its own
/// ChaCha8 stream, so reports depend only on the seed and the data.
pub fn run_checks(
    p: &HPolytope,
    faces: &FaceLattice,
    cm: &CharMatrix,
    spec: &EmbeddingSpec,
    config: &VerifyConfig,
) -> Result<VerifyReport> {
    config.validate()?;
    let mut report = VerifyReport {
        config: config.clone(),
        equivariance: CheckSummary::default(),
        k_invariance: CheckSummary::default(),
        modulus: CheckSummary::default(),
        nonvanishing: CheckSummary::default(),
        separation: SeparationSummary {
            min_distance: f64::INFINITY,
            ..Default::default()
        },
        violations: Vec::new(),
    };
    for trial in 0..config.samples {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(trial as u64);
        let interior = random_interior(p, faces, &mut rng)?;
        let boundary = random_boundary(p, faces, &mut rng)?;
        for z in [&interior, &boundary] {
            equivariance(spec, z, config, &mut rng, trial, &mut report);
            k_invariance(spec, cm, z, config, &mut rng, trial, &mut report);
            modulus(spec, z, trial, &mut report);
            nonvanishing(p, faces, spec, z, trial, &mut report)?;
        }
        separation(p, faces, cm, spec, &interior, config, &mut rng, trial, &mut report)?;
    }
    Ok(report)
}

fn random_angles(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.random::<f64>()).collect()
}

/// Positive integer combination of the given vertices, normalized.
fn combination(faces: &FaceLattice, vertices: &[usize], rng: &mut ChaCha8Rng) -> Vec<BigRational> {
    let mut sum = vec![BigRational::zero(); faces.n];
    let mut total = BigInt::zero();
    for &v in vertices {
        let w: i64 = rng.random_range(1..=10);
        total += w;
        for (s, c) in sum.iter_mut().zip(&faces.vertices[v].coords) {
            *s += c * BigRational::from_integer(w.into());
        }
    }
    let total = BigRational::from_integer(total);
    sum.into_iter().map(|s| s / &total).collect()
}

fn random_interior(p: &HPolytope, faces: &FaceLattice, rng: &mut ChaCha8Rng) -> Result<ZPoint> {
    let all: Vec<usize> = (0..faces.f0()).collect();
    let base = combination(faces, &all, rng);
    sample_zpoint(p, &base, &random_angles(rng, p.m()))
}

/// A point in the relative interior of a random proper face through a random
/// vertex.
fn random_boundary(p: &HPolytope, faces: &FaceLattice, rng: &mut ChaCha8Rng) -> Result<ZPoint> {
    let v = rng.random_range(0..faces.f0());
    let facets = &faces.vertices[v].facets;
    let mut chosen: Vec<usize> = facets.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
    if chosen.is_empty() {
        chosen.push(facets[rng.random_range(0..facets.len())]);
    }
    let base = combination(faces, &faces.vertices_on(&chosen), rng);
    sample_zpoint(p, &base, &random_angles(rng, p.m()))
}

fn act(z: &[Complex64], angles: &[f64]) -> Vec<Complex64> {
    z.iter().zip(angles).map(|(zk, th)| zk * Complex64::from_polar(1.0, TAU * th)).collect()
}

fn phase(exponents: &[BigInt], angles: &[f64]) -> Complex64 {
    let s: f64 = exponents
        .iter()
        .zip(angles)
        .map(|(a, th)| (a.to_f64().expect("small exponent") * th).rem_euclid(1.0))
        .sum();
    Complex64::from_polar(1.0, TAU * s)
}

fn relative(diff: Complex64, reference: Complex64) -> f64 {
    diff.norm() / reference.norm().max(1.0)
}

fn equivariance(
    spec: &EmbeddingSpec,
    z: &ZPoint,
    config: &VerifyConfig,
    rng: &mut ChaCha8Rng,
    trial: usize,
    report: &mut VerifyReport,
) {
    let t = random_angles(rng, spec.m);
    let tz = act(&z.z, &t);
    let mut worst: f64 = 0.0;
    for a in spec.exponents() {
        let expected = phase(&a.0, &t) * eval_monomial(a, &z.z);
        worst = worst.max(relative(eval_monomial(a, &tz) - expected, expected));
    }
    let ok = worst < config.tol_eq;
    report.equivariance.record(worst, ok);
    if !ok {
        report.violations.push(Violation {
            check: "equivariance",
            trial,
            detail: format!("deviation {worst:e}"),
        });
    }
}

fn k_invariance(
    spec: &EmbeddingSpec,
    cm: &CharMatrix,
    z: &ZPoint,
    config: &VerifyConfig,
    rng: &mut ChaCha8Rng,
    trial: usize,
    report: &mut VerifyReport,
) {
    let tau = random_angles(rng, cm.kernel_rank());
    let t: Vec<f64> = (0..spec.m)
        .map(|k| {
            cm.kernel
                .row(k)
                .iter()
                .zip(&tau)
                .map(|(c, x)| c.to_f64().expect("small entry") * x)
                .sum()
        })
        .collect();
    let tz = act(&z.z, &t);
    let factor = phase(&spec.character.0, &tau);
    let phi = evaluate(spec, &z.z);
    let psi = evaluate(spec, &tz);
    let mut worst: f64 = 0.0;
    for (a, b) in phi.iter().zip(&psi) {
        worst = worst.max(relative(b - factor * a, *a));
    }
    worst = worst.max(image_distance(spec.mode, &phi, &psi));
    let ok = worst < config.tol_eq;
    report.k_invariance.record(worst, ok);
    if !ok {
        report.violations.push(Violation {
            check: "k-invariance",
            trial,
            detail: format!("deviation {worst:e}"),
        });
    }
}

fn modulus(spec: &EmbeddingSpec, z: &ZPoint, trial: usize, report: &mut VerifyReport) {
    let mut worst: f64 = 0.0;
    for a in spec.exponents() {
        let direct: f64 = a
            .0
            .iter()
            .zip(&z.z)
            .filter(|(e, _)| !e.is_zero())
            .map(|(e, zk)| zk.norm().powi(e.abs().to_i32().expect("small exponent")))
            .product();
        let got = eval_monomial(a, &z.z).norm();
        worst = worst.max((got - direct).abs() / direct.max(f64::MIN_POSITIVE).max(got));
    }
    let ok = worst < MODULUS_TOL;
    report.modulus.record(worst, ok);
    if !ok {
        report.violations.push(Violation {
            check: "modulus",
            trial,
            detail: format!("relative deviation {worst:e}"),
        });
    }
}

/// Every vertex of the face containing `ρ(z)` has a nonzero vertex monomial.
fn nonvanishing(
    p: &HPolytope,
    faces: &FaceLattice,
    spec: &EmbeddingSpec,
    z: &ZPoint,
    trial: usize,
    report: &mut VerifyReport,
) -> Result<()> {
    let y = p.image_point(&z.base)?;
    let tight: Vec<usize> = (0..p.m()).filter(|&k| y[k].is_zero()).collect();
    let face_vertices = if tight.is_empty() {
        (0..faces.f0()).collect()
    } else {
        faces.vertices_on(&tight)
    };
    let smallest = face_vertices
        .iter()
        .map(|&v| eval_monomial(&spec.vertex_characters[v], &z.z).norm())
        .fold(f64::INFINITY, f64::min);
    let ok = smallest > 0.0 && !face_vertices.is_empty();
    report.nonvanishing.record(if ok { 0.0 } else { 1.0 }, ok);
    if !ok {
        report.violations.push(Violation {
            check: "nonvanishing",
            trial,
            detail: format!("vertex monomial vanishes over facets {tight:?}"),
        });
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn separation(
    p: &HPolytope,
    faces: &FaceLattice,
    cm: &CharMatrix,
    spec: &EmbeddingSpec,
    z: &ZPoint,
    config: &VerifyConfig,
    rng: &mut ChaCha8Rng,
    trial: usize,
    report: &mut VerifyReport,
) -> Result<()> {
    let other = random_interior(p, faces, rng)?;
    if other.base != z.base {
        let moved = z
            .base
            .iter()
            .zip(&other.base)
            .any(|(a, b)| (a.to_f64().expect("finite") - b.to_f64().expect("finite")).abs() > 0.0);
        if !moved {
            report.separation.distinct_base_failures += 1;
            report.violations.push(Violation {
                check: "separation",
                trial,
                detail: "distinct base points share a moment image".into(),
            });
        }
    }

    let t = loop {
        let t = random_angles(rng, spec.m);
        let paired = (0..cm.n()).any(|i| {
            let s: f64 = cm.lambda.row(i).iter().zip(&t).map(|(l, x)| l.to_f64().expect("small") * x).sum();
            let frac = s - s.round();
            frac.abs() > PAIRING_MARGIN
        });
        if paired {
            break t;
        }
    };
    let phi = evaluate(spec, &z.z);
    let psi = evaluate(spec, &act(&z.z, &t));
    let d = image_distance(spec.mode, &phi, &psi);
    let sep = &mut report.separation;
    sep.checked += 1;
    sep.min_distance = sep.min_distance.min(d);
    if d > config.tol_sep {
        return Ok(());
    }
    if d > config.tol_eq {
        sep.inconclusive += 1;
        return Ok(());
    }
    sep.failures += 1;
    report.violations.push(Violation {
        check: "separation",
        trial,
        detail: format!("torus element outside K leaves the image fixed (distance {d:e})"),
    });
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankMethod {
    /// `D L0 = A^T`: finite differences of `x ↦ D L0 log i_P(x)` against `G`.
    Lattice,
    /// Trivial character without the lattice relation: only `L0 diag(1/β) L0^T`.
    Weighted,
    Unsupported,
}

#[derive(Clone, Debug)]
pub struct RankReport {
    pub method: RankMethod,
    pub jacobian: Option<JacobianReport>,
    pub fd_relative_error: Option<f64>,
    pub tolerance: f64,
}

impl RankReport {
    pub fn passes(&self) -> bool {
        match self.method {
            RankMethod::Unsupported => false,
            _ => {
                self.jacobian.as_ref().is_some_and(|j| j.symmetric && j.positive_definite)
                    && self.fd_relative_error.is_none_or(|e| e < self.tolerance)
            }
        }
    }
}

/// Central differences with per-coordinate step `h`.
pub fn finite_difference_jacobian<F: Fn(&[f64]) -> Vec<f64>>(f: F, x: &[f64], h: f64) -> DMatrix<f64> {
    let n = x.len();
    let rows = f(x).len();
    let mut jac = DMatrix::zeros(rows, n);
    let mut xp = x.to_vec();
    for i in 0..n {
        xp[i] = x[i] + h;
        let up = f(&xp);
        xp[i] = x[i] - h;
        let down = f(&xp);
        xp[i] = x[i];
        for k in 0..rows {
            jac[(k, i)] = (up[k] - down[k]) / (2.0 * h);
        }
    }
    jac
}

/// Rank evidence at an interior point from the edge monomials at the first
/// vertex: rows `a_{v,r} - b_v` form `L0`.
pub fn check_rank(p: &HPolytope, faces: &FaceLattice, spec: &EmbeddingSpec, x: &[BigRational]) -> Result<RankReport> {
    const TOL: f64 = 1e-5;
    let y = p.image_point(x)?;
    if y.iter().any(|b| !b.is_positive()) {
        return Err(Error::OutsidePolytope(format!(
            "{} is not an interior point",
            crate::polytope::fmt_vec(x)
        )));
    }
    let beta: Vec<f64> = y.iter().map(|b| b.to_f64().expect("finite")).collect();
    let bv = &spec.vertex_characters[0];
    let l0: Vec<Vec<BigRational>> = spec
        .edge_characters
        .iter()
        .filter(|e| e.vertex == 0)
        .map(|e| {
            e.exponent
                .0
                .iter()
                .zip(&bv.0)
                .map(|(a, b)| BigRational::from_integer(a - b))
                .collect()
        })
        .collect();
    let l0 = RatMatrix::from_rows(&l0, p.m())?;

    if let Some(d) = lattice_relation(p, faces, &l0) {
        let dl0 = to_dmatrix(&d) * to_dmatrix(&l0);
        let g = log_jacobian(&beta, &to_dmatrix(p.a()))?;
        let xf: Vec<f64> = x.iter().map(|c| c.to_f64().expect("finite")).collect();
        let scale = (0..p.m())
            .flat_map(|j| (0..p.n()).map(move |i| (j, i)))
            .map(|(j, i)| p.a()[(j, i)].to_f64().expect("finite").abs())
            .fold(1.0, f64::max);
        let min_beta = beta.iter().copied().fold(f64::INFINITY, f64::min);
        let h = 1e-4 * (min_beta / scale).min(1.0);
        let f = |pt: &[f64]| {
            let logs: Vec<f64> = image_f64(p, pt).iter().map(|v| v.ln()).collect();
            (0..dl0.nrows()).map(|k| (0..p.m()).map(|j| dl0[(k, j)] * logs[j]).sum()).collect()
        };
        let fd = finite_difference_jacobian(f, &xf, h);
        let fd = (&fd + fd.transpose()) * 0.5;
        let err = (&fd - &g.g).amax() / g.g.amax();
        return Ok(RankReport {
            method: RankMethod::Lattice,
            jacobian: Some(g),
            fd_relative_error: Some(err),
            tolerance: TOL,
        });
    }
    if spec.character.is_trivial() {
        let l = to_dmatrix(&l0);
        let g = DMatrix::from_fn(l.nrows(), l.nrows(), |i, k| {
            (0..beta.len()).map(|j| l[(i, j)] * l[(k, j)] / beta[j]).sum()
        });
        return Ok(RankReport {
            method: RankMethod::Weighted,
            jacobian: Some(certify(g)),
            fd_relative_error: None,
            tolerance: TOL,
        });
    }
    Ok(RankReport {
        method: RankMethod::Unsupported,
        jacobian: None,
        fd_relative_error: None,
        tolerance: TOL,
    })
}

/// `D` with `D L0 = A^T`, solved on the facet columns of the first vertex.
fn lattice_relation(p: &HPolytope, faces: &FaceLattice, l0: &RatMatrix) -> Option<RatMatrix> {
    let idx = &faces.vertices[0].facets;
    if l0.rows() != p.n() {
        return None;
    }
    let l0_cols = l0.transpose().select_rows(idx);
    let at_cols = p.a().select_rows(idx);
    // D L0_I = A^T_I  <=>  L0_I^T D^T = A_I
    let mut dt = Vec::with_capacity(p.n());
    for i in 0..p.n() {
        let rhs: Vec<BigRational> = (0..idx.len()).map(|r| at_cols[(r, i)].clone()).collect();
        dt.push(solve_rational(&l0_cols, &rhs).ok()?);
    }
    let d = RatMatrix::from_rows(&dt, p.n()).ok()?;
    let at = p.a().transpose();
    for i in 0..p.n() {
        for j in 0..p.m() {
            let s: BigRational = (0..p.n()).map(|k| &d[(i, k)] * &l0[(k, j)]).sum();
            if s != at[(i, j)] {
                return None;
            }
        }
    }
    Some(d)
}
