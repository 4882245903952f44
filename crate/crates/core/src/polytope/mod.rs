//! Exact H-representation polytopes `P = {x : A x + b >= 0}`.

mod cut;

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{integer_kernel_basis, solve_rational, RatMatrix};

pub use cut::{cut_codim2_face, CutResult};

/// Polytope given by `m` inequalities `<a_i, x> + b_i >= 0` in `R^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPolytope {
    a: RatMatrix,
    b: Vec<BigRational>,
}

/// A vertex with the sorted indices of the facets through it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Vertex {
    pub facets: Vec<usize>,
    pub coords: Vec<BigRational>,
}

/// An edge `F_J`; `ends` index into [`FaceLattice::vertices`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub facets: Vec<usize>,
    pub ends: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceLattice {
    pub n: usize,
    pub m: usize,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    incident: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolytopeFailure {
    Empty,
    Unbounded { direction: Vec<BigInt> },
    NotFullDimensional { affine_dim: usize },
    NotSimple { coords: Vec<BigRational>, facets: Vec<usize> },
    /// Facet supports no vertex, or only a lower-dimensional face.
    RedundantFacet { facet: usize, face_dim: Option<usize> },
    /// Facet defines the same face as an earlier inequality.
    DuplicateFacet { facet: usize, duplicate_of: usize },
}

impl fmt::Display for PolytopeFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolytopeFailure::Empty => write!(f, "empty: no feasible vertex"),
            PolytopeFailure::Unbounded { direction } => {
                write!(f, "unbounded: recession direction {}", fmt_vec(direction))
            }
            PolytopeFailure::NotFullDimensional { affine_dim } => {
                write!(f, "not full-dimensional: affine dimension {affine_dim}")
            }
            PolytopeFailure::NotSimple { coords, facets } => write!(
                f,
                "not simple at vertex {} lying on {} facets {}",
                fmt_vec(coords),
                facets.len(),
                fmt_indices(facets)
            ),
            PolytopeFailure::RedundantFacet { facet, face_dim } => match face_dim {
                None => write!(f, "redundant facet {}: supports no vertex", facet + 1),
                Some(d) => write!(f, "redundant facet {}: supports a face of dimension {d}", facet + 1),
            },
            PolytopeFailure::DuplicateFacet { facet, duplicate_of } => write!(
                f,
                "redundant facet {}: same face as facet {}",
                facet + 1,
                duplicate_of + 1
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub failures: Vec<PolytopeFailure>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.failures.is_empty() {
            return write!(f, "valid");
        }
        write!(f, "{}", self.failures.iter().join("; "))
    }
}

impl HPolytope {
    pub fn new(a: RatMatrix, b: Vec<BigRational>) -> Result<Self> {
        if a.rows() != b.len() {
            return Err(Error::dims("HPolytope offsets", a.rows(), b.len()));
        }
        if a.cols() == 0 || a.rows() == 0 {
            return Err(Error::dims("HPolytope shape", "positive n and m", format!("{}x{}", a.rows(), a.cols())));
        }
        Ok(HPolytope { a, b })
    }

    pub fn from_integer(a: &[Vec<i64>], b: &[i64]) -> Result<Self> {
        let n = a.first().map_or(0, Vec::len);
        let rows: Vec<Vec<BigRational>> = a
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        let a = RatMatrix::from_rows(&rows, n)?;
        Self::new(a, b.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    /// Ambient dimension.
    pub fn n(&self) -> usize {
        self.a.cols()
    }

    /// Number of inequalities.
    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn a(&self) -> &RatMatrix {
        &self.a
    }

    pub fn b(&self) -> &[BigRational] {
        &self.b
    }

    /// The affine map `x ↦ A x + b`.
    pub fn image_point(&self, x: &[BigRational]) -> Result<Vec<BigRational>> {
        if x.len() != self.n() {
            return Err(Error::dims("image_point", self.n(), x.len()));
        }
        let mut y = self.a.mul_vec(x)?;
        for (yi, bi) in y.iter_mut().zip(&self.b) {
            *yi += bi;
        }
        Ok(y)
    }

    pub fn contains(&self, x: &[BigRational]) -> Result<bool> {
        Ok(self.image_point(x)?.iter().all(|v| !v.is_negative()))
    }

    /// Appends one inequality.
    pub fn with_inequality(&self, a: &[BigRational], b: BigRational) -> Result<Self> {
        let mut offsets = self.b.clone();
        offsets.push(b);
        Self::new(self.a.append_row(a)?, offsets)
    }

    /// Every feasible point cut out by `n` independent tight inequalities,
    /// deduplicated, each with its full tight set.
    fn basic_feasible_points(&self) -> Vec<Vertex> {
        let (n, m) = (self.n(), self.m());
        let mut found: BTreeMap<Vec<BigRational>, Vec<usize>> = BTreeMap::new();
        for subset in (0..m).combinations(n) {
            let sub = self.a.select_rows(&subset);
            let rhs: Vec<BigRational> = subset.iter().map(|&i| -&self.b[i]).collect();
            let Ok(x) = solve_rational(&sub, &rhs) else {
                continue;
            };
            if found.contains_key(&x) {
                continue;
            }
            let y = self.image_point(&x).expect("dimension checked");
            if y.iter().any(Signed::is_negative) {
                continue;
            }
            let tight = (0..m).filter(|&i| y[i].is_zero()).collect();
            found.insert(x, tight);
        }
        let mut vertices: Vec<Vertex> = found
            .into_iter()
            .map(|(coords, facets)| Vertex { facets, coords })
            .collect();
        vertices.sort();
        vertices
    }

    /// Nonzero `d` with `A d >= 0`, if any. Requires rank `A = n` to be
    /// meaningful; callers check that first.
    fn recession_direction(&self) -> Option<Vec<BigInt>> {
        let (n, m) = (self.n(), self.m());
        let a_int = self.a.clear_denominators();
        for subset in (0..m).combinations(n - 1) {
            let k = integer_kernel_basis(&a_int.select_rows(&subset));
            if k.cols() != 1 {
                continue;
            }
            let d = k.column(0);
            let ad = a_int.mul_vec(&d).expect("dimension checked");
            if ad.iter().all(|x| !x.is_negative()) {
                return Some(d);
            }
            if ad.iter().all(|x| !x.is_positive()) {
                return Some(d.iter().map(|x| -x).collect());
            }
        }
        None
    }

    /// Boundedness, full dimension, simplicity and irredundancy.
    pub fn validate(&self) -> ValidationReport {
        let mut failures = Vec::new();
        let (n, m) = (self.n(), self.m());

        if self.a.rank() < n {
            // a lineality direction is a recession direction too
            let k = integer_kernel_basis(&self.a.clear_denominators());
            failures.push(PolytopeFailure::Unbounded { direction: k.column(0) });
        } else if let Some(direction) = self.recession_direction() {
            failures.push(PolytopeFailure::Unbounded { direction });
        }

        let vertices = self.basic_feasible_points();
        if vertices.is_empty() {
            failures.push(PolytopeFailure::Empty);
            return ValidationReport { failures };
        }

        let dim = affine_dimension(vertices.iter().map(|v| &v.coords));
        if dim < n {
            failures.push(PolytopeFailure::NotFullDimensional { affine_dim: dim });
        }

        for v in &vertices {
            if v.facets.len() != n {
                failures.push(PolytopeFailure::NotSimple {
                    coords: v.coords.clone(),
                    facets: v.facets.clone(),
                });
            }
        }

        let mut supports: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (vi, v) in vertices.iter().enumerate() {
            for &f in &v.facets {
                supports[f].push(vi);
            }
        }
        for facet in 0..m {
            if supports[facet].is_empty() {
                failures.push(PolytopeFailure::RedundantFacet { facet, face_dim: None });
                continue;
            }
            let d = affine_dimension(supports[facet].iter().map(|&vi| &vertices[vi].coords));
            if d + 1 < n {
                failures.push(PolytopeFailure::RedundantFacet { facet, face_dim: Some(d) });
                continue;
            }
            if let Some(earlier) = (0..facet).find(|&e| supports[e] == supports[facet]) {
                failures.push(PolytopeFailure::DuplicateFacet { facet, duplicate_of: earlier });
            }
        }
        ValidationReport { failures }
    }

    /// Vertices and edges of a valid polytope, in canonical order: vertices
    /// sorted by facet index set, edges by facet index set.
    pub fn enumerate_faces(&self) -> Result<FaceLattice> {
        let report = self.validate();
        if !report.is_valid() {
            return Err(Error::InvalidPolytope(report.to_string()));
        }
        Ok(FaceLattice::from_vertices(self.n(), self.m(), self.basic_feasible_points()))
    }
}

impl FaceLattice {
    fn from_vertices(n: usize, m: usize, vertices: Vec<Vertex>) -> Self {
        let mut edges = Vec::new();
        for (i, j) in (0..vertices.len()).tuple_combinations() {
            let common: Vec<usize> = vertices[i]
                .facets
                .iter()
                .copied()
                .filter(|f| vertices[j].facets.contains(f))
                .collect();
            if common.len() + 1 == n {
                edges.push(Edge { facets: common, ends: (i, j) });
            }
        }
        edges.sort_by(|x, y| x.facets.cmp(&y.facets).then(x.ends.cmp(&y.ends)));
        let mut incident = vec![Vec::new(); vertices.len()];
        for (ei, e) in edges.iter().enumerate() {
            incident[e.ends.0].push(ei);
            incident[e.ends.1].push(ei);
        }
        FaceLattice {
            n,
            m,
            vertices,
            edges,
            incident,
        }
    }

    pub fn f0(&self) -> usize {
        self.vertices.len()
    }

    pub fn f1(&self) -> usize {
        self.edges.len()
    }

    /// Edges through vertex `v`, in edge order.
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    /// The endpoint of `edge` that is not `v`.
    pub fn opposite(&self, edge: usize, v: usize) -> usize {
        let (a, b) = self.edges[edge].ends;
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn vertex_with_facets(&self, facets: &[usize]) -> Option<usize> {
        self.vertices.iter().position(|v| v.facets == facets)
    }

    /// Vertices lying on every facet in `facets`.
    pub fn vertices_on(&self, facets: &[usize]) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| facets.iter().all(|f| self.vertices[v].facets.contains(f)))
            .collect()
    }

    /// Edges contained in every facet in `facets`.
    pub fn edges_on(&self, facets: &[usize]) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| facets.iter().all(|f| self.edges[e].facets.contains(f)))
            .collect()
    }
}

/// Dimension of the affine hull of a point set.
pub fn affine_dimension<'a>(points: impl Iterator<Item = &'a Vec<BigRational>>) -> usize {
    let pts: Vec<&Vec<BigRational>> = points.collect();
    let Some(first) = pts.first() else {
        return 0;
    };
    let n = first.len();
    let rows: Vec<Vec<BigRational>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(first.iter()).map(|(x, y)| x - y).collect())
        .collect();
    if rows.is_empty() {
        return 0;
    }
    RatMatrix::from_rows(&rows, n).expect("uniform length").rank()
}

pub(crate) fn fmt_vec<T: fmt::Display>(v: &[T]) -> String {
    format!("({})", v.iter().join(", "))
}

/// 1-based facet labels.
pub(crate) fn fmt_indices(v: &[usize]) -> String {
    format!("{{{}}}", v.iter().map(|i| i + 1).join(", "))
}
