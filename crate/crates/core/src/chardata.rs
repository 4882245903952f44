//! Characteristic matrices, the kernel embedding `C` and characters of `K`.
//!
//! A characteristic matrix `Λ` (n×m) determines the free subtorus
//! `K = ker Λ ⊂ T^m`; the columns of `C` (m×(m−n)) are a basis of its
//! lattice. Characters of `K` are stored as coordinates `b̃` with respect to
//! that basis, so every report says which basis is in force.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{integer_kernel_basis, smith_normal_form, spans_direct_summand, unimodular_inverse, IntMatrix};
use crate::polytope::{FaceLattice, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelSource {
    /// Transpose of the row Hermite form of `ker Λ`.
    Canonical,
    UserSupplied,
}

impl fmt::Display for KernelSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelSource::Canonical => write!(f, "canonical (Hermite normal form)"),
            KernelSource::UserSupplied => write!(f, "user-supplied"),
        }
    }
}

/// A character of `K` in coordinates of the chosen kernel basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character(pub Vec<BigInt>);

impl Character {
    pub fn trivial(rank: usize) -> Self {
        Character(vec![BigInt::zero(); rank])
    }

    pub fn from_i64(v: &[i64]) -> Self {
        Character(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(", "))
    }
}

/// `Λ` together with the kernel basis `C` in force.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharMatrix {
    pub lambda: IntMatrix,
    pub kernel: IntMatrix,
    pub source: KernelSource,
}

impl CharMatrix {
    pub fn new(lambda: IntMatrix, user_kernel: Option<IntMatrix>) -> Result<Self> {
        let (kernel, source) = kernel_embedding(&lambda, user_kernel)?;
        Ok(CharMatrix { lambda, kernel, source })
    }

    pub fn n(&self) -> usize {
        self.lambda.rows()
    }

    pub fn m(&self) -> usize {
        self.lambda.cols()
    }

    /// `m − n`, the rank of `K`.
    pub fn kernel_rank(&self) -> usize {
        self.kernel.cols()
    }

    pub fn restrict(&self, lift: &[BigInt]) -> Result<Character> {
        restrict_character(&self.kernel, lift)
    }
}

/// Returns the user basis if it is valid, the canonical one otherwise.
///
/// A user basis must satisfy `Λ C = 0`, have `m − rank Λ` columns and span a
/// direct summand of `ℤ^m`.
pub fn kernel_embedding(lambda: &IntMatrix, user: Option<IntMatrix>) -> Result<(IntMatrix, KernelSource)> {
    let canonical = integer_kernel_basis(lambda);
    let Some(c) = user else {
        return Ok((canonical, KernelSource::Canonical));
    };
    if c.rows() != lambda.cols() {
        return Err(Error::InvalidKernel(format!(
            "C has {} rows, Lambda has {} columns",
            c.rows(),
            lambda.cols()
        )));
    }
    if c.cols() != canonical.cols() {
        return Err(Error::InvalidKernel(format!(
            "C has {} columns, the kernel of Lambda has rank {}",
            c.cols(),
            canonical.cols()
        )));
    }
    if !lambda.mul(&c)?.is_zero() {
        return Err(Error::InvalidKernel("Lambda * C != 0".into()));
    }
    if !spans_direct_summand(&c) {
        let d = smith_normal_form(&c).diagonal();
        return Err(Error::InvalidKernel(format!(
            "C does not span a direct summand (invariant factors {})",
            d.iter().join(", ")
        )));
    }
    Ok((c, KernelSource::UserSupplied))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexMinor {
    pub vertex: usize,
    pub facets: Vec<usize>,
    pub det: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceReport {
    pub minors: Vec<VertexMinor>,
}

impl IndependenceReport {
    pub fn passes(&self) -> bool {
        self.minors.iter().all(|v| v.det.abs().is_one())
    }

    pub fn offending(&self) -> impl Iterator<Item = &VertexMinor> {
        self.minors.iter().filter(|v| !v.det.abs().is_one())
    }
}

/// `det Λ_v` at every vertex, where `Λ_v` keeps the columns of the facets
/// through `v` in increasing order.
pub fn validate_characteristic(faces: &FaceLattice, lambda: &IntMatrix) -> Result<IndependenceReport> {
    if lambda.rows() != faces.n || lambda.cols() != faces.m {
        return Err(Error::dims(
            "characteristic matrix shape",
            format!("{}x{}", faces.n, faces.m),
            format!("{}x{}", lambda.rows(), lambda.cols()),
        ));
    }
    let minors = faces
        .vertices
        .iter()
        .enumerate()
        .map(|(vi, v)| {
            let det = lambda.select_columns(&v.facets).determinant()?;
            Ok(VertexMinor {
                vertex: vi,
                facets: v.facets.clone(),
                det,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IndependenceReport { minors })
}

/// `Λ_v^{-1} Λ`; its columns at the facets of `v` form the identity.
pub fn reduced_form(lambda: &IntMatrix, v: &Vertex) -> Result<IntMatrix> {
    let lv = lambda.select_columns(&v.facets);
    let inv = unimodular_inverse(&lv).map_err(|e| Error::IndependenceViolated {
        vertex: v.facets.clone(),
        detail: e.to_string(),
    })?;
    inv.mul(lambda)
}

/// `b̃ = C^T a`, the restriction of the `T^m`-character `a` to `K`.
pub fn restrict_character(kernel: &IntMatrix, lift: &[BigInt]) -> Result<Character> {
    if lift.len() != kernel.rows() {
        return Err(Error::dims("restrict_character", kernel.rows(), lift.len()));
    }
    Ok(Character(kernel.transpose().mul_vec(lift)?))
}

/// `det C_I`: the kernel basis with the rows of `facets` removed.
pub fn complement_minor(kernel: &IntMatrix, facets: &[usize]) -> Result<BigInt> {
    kernel.delete_rows(facets).determinant()
}
