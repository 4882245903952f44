//! The character set `X_k̃` of a character `k̃` of `K` and the monomial
//! embeddings it defines.
//!
//! For every vertex `v = F_I` the vertex character `b_v` is the unique lift of
//! `k̃` vanishing on `I`. For every edge `r = F_J` through `v` the edge
//! character `a_{v,r}` is the first lattice point after `b_v` on the ray
//! towards `b_{v'}`; when `b_v = b_{v'}` it is `b_v + u_r`, with `u_r` the
//! primitive character of `T^m` that is trivial on `K` and on `T_J`.

mod monomial;

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use monomial::Monomial;

use crate::chardata::{restrict_character, CharMatrix, Character, KernelSource};
use crate::error::{Error, Result};
use crate::exactlin::{integer_kernel_basis, primitive_vector, sign_normalized, unimodular_inverse, IntMatrix};
use crate::polytope::{FaceLattice, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbeddingMode {
    /// `π × φ: M → R^n × C^{q-1}`, for the trivial character.
    Affine,
    /// `π × φ: M → P × CP^{q-1}`.
    Projective,
}

impl fmt::Display for EmbeddingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EmbeddingMode::Affine => write!(f, "affine"),
            EmbeddingMode::Projective => write!(f, "projective"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntrySource {
    Vertex { vertex: usize },
    Edge { vertex: usize, edge: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharSetEntry {
    pub exponent: Monomial,
    /// Every (vertex) or (vertex, edge) that produced this vector, first
    /// occurrence first.
    pub sources: Vec<EntrySource>,
}

impl CharSetEntry {
    pub fn is_vertex_entry(&self) -> bool {
        matches!(self.sources[0], EntrySource::Vertex { .. })
    }
}

/// `u_r = α_r^T Λ`, sign-normalized so the first nonzero entry of `u_r` is
/// positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeDirection {
    pub edge: usize,
    pub alpha: Vec<BigInt>,
    pub u: Monomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeCharacter {
    pub vertex: usize,
    pub edge: usize,
    pub exponent: Monomial,
    /// `b_v = b_{v'}`, so the edge direction was used.
    pub degenerate: bool,
}

/// Edge where `primitive(b_{v'} - b_v)` is not `±u_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollinearityViolation {
    pub vertex: usize,
    pub edge: usize,
    pub step: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingSpec {
    pub mode: EmbeddingMode,
    pub character: Character,
    pub kernel_source: KernelSource,
    pub n: usize,
    pub m: usize,
    pub f0: usize,
    pub f1: usize,
    pub vertex_facets: Vec<Vec<usize>>,
    pub vertex_characters: Vec<Monomial>,
    pub edge_directions: Vec<EdgeDirection>,
    /// One per incident (vertex, edge) pair, before deduplication.
    pub edge_characters: Vec<EdgeCharacter>,
    pub entries: Vec<CharSetEntry>,
    pub collinearity_violations: Vec<CollinearityViolation>,
}

impl EmbeddingSpec {
    pub fn q(&self) -> usize {
        self.entries.len()
    }

    /// Switches the target. The affine target needs the trivial character.
    pub fn with_mode(mut self, mode: EmbeddingMode) -> Result<Self> {
        if mode == EmbeddingMode::Affine && !self.character.is_trivial() {
            return Err(Error::Embedding(format!(
                "affine embedding needs the trivial character, got {}",
                self.character
            )));
        }
        self.mode = mode;
        Ok(self)
    }

    pub fn exponents(&self) -> impl Iterator<Item = &Monomial> {
        self.entries.iter().map(|e| &e.exponent)
    }
}

/// `b_v`: zero on the facets of `v`, `(C_I^T)^{-1} b̃` elsewhere.
pub fn vertex_character(cm: &CharMatrix, character: &Character, v: &Vertex) -> Result<Monomial> {
    check_character_rank(cm, character)?;
    let ci = cm.kernel.delete_rows(&v.facets);
    let inv = unimodular_inverse(&ci.transpose()).map_err(|e| Error::IndependenceViolated {
        vertex: v.facets.clone(),
        detail: format!("kernel minor C_I: {e}"),
    })?;
    let reduced = inv.mul_vec(&character.0)?;
    let mut out = vec![BigInt::zero(); cm.m()];
    let free = (0..cm.m()).filter(|i| !v.facets.contains(i));
    for (i, x) in free.zip(reduced) {
        out[i] = x;
    }
    let b = Monomial(out);
    if restrict_character(&cm.kernel, &b.0)? != *character {
        return Err(Error::CrossCheck(format!("C^T b_v != b̃ at vertex {:?}", v.facets)));
    }
    Ok(b)
}

/// `u_r` computed from `Λ` and, independently, from the cokernel of `C_J`.
pub fn edge_direction(faces: &FaceLattice, cm: &CharMatrix, edge: usize) -> Result<EdgeDirection> {
    let j = &faces.edges[edge].facets;
    let (alpha, u) = direction_from_lambda(&cm.lambda, j)?;
    let from_kernel = direction_from_kernel(&cm.kernel, j)?;
    if u != from_kernel {
        return Err(Error::CrossCheck(format!(
            "edge {:?}: alpha^T Lambda = {:?} but cokernel of C_J gives {:?}",
            j, u, from_kernel
        )));
    }
    Ok(EdgeDirection {
        edge,
        alpha,
        u: Monomial(u),
    })
}

/// Primitive `α` orthogonal to the columns `J` of `Λ`, and `α^T Λ`, both
/// flipped so that `α^T Λ` starts positive.
pub fn direction_from_lambda(lambda: &IntMatrix, j: &[usize]) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
    let lj = lambda.select_columns(j).transpose();
    let k = integer_kernel_basis(&lj);
    if k.cols() != 1 {
        return Err(Error::CrossCheck(format!(
            "columns {:?} of Lambda leave a {}-dimensional orthogonal complement",
            j,
            k.cols()
        )));
    }
    let mut alpha = primitive_vector(&k.column(0))?;
    let mut u = lambda.transpose().mul_vec(&alpha)?;
    if u.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
        alpha = alpha.iter().map(|x| -x).collect();
        u = u.iter().map(|x| -x).collect();
    }
    Ok((alpha, u))
}

/// Primitive `w` with `w^T C_J = 0`, zero-extended at the positions `J`.
pub fn direction_from_kernel(kernel: &IntMatrix, j: &[usize]) -> Result<Vec<BigInt>> {
    let cj = kernel.delete_rows(j);
    let k = integer_kernel_basis(&cj.transpose());
    if k.cols() != 1 {
        return Err(Error::CrossCheck(format!(
            "cokernel of C with rows {:?} removed has rank {}",
            j,
            k.cols()
        )));
    }
    let w = primitive_vector(&k.column(0))?;
    let mut out = vec![BigInt::zero(); kernel.rows()];
    let free = (0..kernel.rows()).filter(|i| !j.contains(i));
    for (i, x) in free.zip(w) {
        out[i] = x;
    }
    Ok(sign_normalized(&out))
}

/// `a_{v,r}`; also reports whether `primitive(b_{v'} - b_v)` is `±u_r`.
pub fn edge_character(
    faces: &FaceLattice,
    cm: &CharMatrix,
    character: &Character,
    vertex: usize,
    edge: usize,
) -> Result<(EdgeCharacter, bool)> {
    let other = faces.opposite(edge, vertex);
    let bv = vertex_character(cm, character, &faces.vertices[vertex])?;
    let bw = vertex_character(cm, character, &faces.vertices[other])?;
    let dir = edge_direction(faces, cm, edge)?;
    let (a, degenerate, collinear) = edge_step(&bv, &bw, &dir.u)?;
    if restrict_character(&cm.kernel, &a.0)? != *character {
        return Err(Error::CrossCheck(format!("C^T a_(v,r) != b̃ at vertex {vertex}, edge {edge}")));
    }
    Ok((
        EdgeCharacter {
            vertex,
            edge,
            exponent: a,
            degenerate,
        },
        collinear,
    ))
}

fn edge_step(bv: &Monomial, bw: &Monomial, u: &Monomial) -> Result<(Monomial, bool, bool)> {
    if bv == bw {
        let a = bv.0.iter().zip(&u.0).map(|(x, y)| x + y).collect();
        return Ok((Monomial(a), true, true));
    }
    let diff: Vec<BigInt> = bw.0.iter().zip(&bv.0).map(|(x, y)| x - y).collect();
    let step = primitive_vector(&diff)?;
    let collinear = sign_normalized(&step) == u.0;
    let a = bv.0.iter().zip(&step).map(|(x, y)| x + y).collect();
    Ok((Monomial(a), false, collinear))
}

fn check_character_rank(cm: &CharMatrix, character: &Character) -> Result<()> {
    if character.rank() != cm.kernel_rank() {
        return Err(Error::dims("character rank (m - n)", cm.kernel_rank(), character.rank()));
    }
    Ok(())
}

/// Builds `X_k̃` with provenance, deduplicated by exact vector equality.
///
/// Entry order: vertex characters in vertex order, then edge characters in
/// (vertex, incident edge) order.
pub fn build_character_set(faces: &FaceLattice, cm: &CharMatrix, character: &Character) -> Result<EmbeddingSpec> {
    check_character_rank(cm, character)?;
    if cm.n() != faces.n || cm.m() != faces.m {
        return Err(Error::dims(
            "characteristic matrix shape",
            format!("{}x{}", faces.n, faces.m),
            format!("{}x{}", cm.n(), cm.m()),
        ));
    }
    let vertex_characters = faces
        .vertices
        .iter()
        .map(|v| vertex_character(cm, character, v))
        .collect::<Result<Vec<_>>>()?;
    let edge_directions = (0..faces.f1())
        .map(|e| edge_direction(faces, cm, e))
        .collect::<Result<Vec<_>>>()?;

    let mut edge_characters = Vec::new();
    let mut collinearity_violations = Vec::new();
    for vertex in 0..faces.f0() {
        for &edge in faces.incident_edges(vertex) {
            let other = faces.opposite(edge, vertex);
            let bv = &vertex_characters[vertex];
            let (a, degenerate, collinear) =
                edge_step(bv, &vertex_characters[other], &edge_directions[edge].u)?;
            if !collinear {
                collinearity_violations.push(CollinearityViolation {
                    vertex,
                    edge,
                    step: a.0.iter().zip(&bv.0).map(|(x, y)| x - y).collect(),
                });
            }
            edge_characters.push(EdgeCharacter {
                vertex,
                edge,
                exponent: a,
                degenerate,
            });
        }
    }

    let mut entries: Vec<CharSetEntry> = Vec::new();
    let mut push = |exponent: &Monomial, source: EntrySource| {
        match entries.iter_mut().find(|e| e.exponent == *exponent) {
            Some(e) => e.sources.push(source),
            None => entries.push(CharSetEntry {
                exponent: exponent.clone(),
                sources: vec![source],
            }),
        }
    };
    for (vertex, b) in vertex_characters.iter().enumerate() {
        push(b, EntrySource::Vertex { vertex });
    }
    for ec in &edge_characters {
        push(&ec.exponent, EntrySource::Edge { vertex: ec.vertex, edge: ec.edge });
    }

    for e in &entries {
        if restrict_character(&cm.kernel, &e.exponent.0)? != *character {
            return Err(Error::CrossCheck(format!("entry {} does not restrict to b̃", e.exponent)));
        }
    }
    let q = entries.len();
    if q > faces.f0() * (faces.n + 1) {
        return Err(Error::CrossCheck(format!("q = {q} exceeds f0 (n + 1)")));
    }
    if character.is_trivial() && q > faces.f1() + 1 {
        return Err(Error::CrossCheck(format!("q = {q} exceeds f1 + 1 for the trivial character")));
    }

    Ok(EmbeddingSpec {
        mode: if character.is_trivial() {
            EmbeddingMode::Affine
        } else {
            EmbeddingMode::Projective
        },
        character: character.clone(),
        kernel_source: cm.source,
        n: faces.n,
        m: faces.m,
        f0: faces.f0(),
        f1: faces.f1(),
        vertex_facets: faces.vertices.iter().map(|v| v.facets.clone()).collect(),
        vertex_characters,
        edge_directions,
        edge_characters,
        entries,
        collinearity_violations,
    })
}

/// For each vertex, an entry whose monomial does not involve the variables of
/// the facets through the vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonvanishingWitness {
    pub vertex: usize,
    pub entry: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub mode: EmbeddingMode,
    pub target: String,
    /// Entry indices used as coordinates, in entry order.
    pub coordinates: Vec<usize>,
    /// Affine mode: row `i` is the weight `α` of coordinate `i` under `T^n`.
    pub torus_weights: Option<IntMatrix>,
    pub nonvanishing: Vec<NonvanishingWitness>,
}

/// Assembles the target description and the nonvanishing certificate.
pub fn assemble_embedding(spec: &EmbeddingSpec) -> Result<Embedding> {
    let mut nonvanishing = Vec::new();
    let mut missing = Vec::new();
    for (vertex, facets) in spec.vertex_facets.iter().enumerate() {
        let own = spec.entries.iter().position(|e| {
            e.sources
                .iter()
                .any(|s| matches!(s, EntrySource::Vertex { vertex: w } if *w == vertex))
        });
        let disjoint = |i: &usize| facets.iter().all(|f| spec.entries[*i].exponent.0[*f].is_zero());
        let witness = own
            .filter(disjoint)
            .or_else(|| (0..spec.q()).find(disjoint));
        match witness {
            Some(entry) => nonvanishing.push(NonvanishingWitness { vertex, entry }),
            None => missing.push(vertex),
        }
    }

    match spec.mode {
        EmbeddingMode::Projective => {
            if !missing.is_empty() {
                return Err(Error::Embedding(format!(
                    "no coordinate is nonzero over vertices {}",
                    missing.iter().map(|v| crate::polytope::fmt_indices(&spec.vertex_facets[*v])).join(", ")
                )));
            }
            Ok(Embedding {
                mode: spec.mode,
                target: format!("P x CP^{}", spec.q() - 1),
                coordinates: (0..spec.q()).collect(),
                torus_weights: None,
                nonvanishing,
            })
        }
        EmbeddingMode::Affine => {
            if !spec.character.is_trivial() {
                return Err(Error::Embedding("affine embedding needs the trivial character".into()));
            }
            let coordinates: Vec<usize> = (0..spec.q()).filter(|&i| !spec.entries[i].exponent.is_constant()).collect();
            let mut weights = Vec::with_capacity(coordinates.len());
            for &i in &coordinates {
                let entry = &spec.entries[i];
                let alpha = entry
                    .sources
                    .iter()
                    .find_map(|s| match s {
                        EntrySource::Edge { edge, .. } if spec.edge_directions[*edge].u == entry.exponent => {
                            Some(spec.edge_directions[*edge].alpha.clone())
                        }
                        _ => None,
                    })
                    .ok_or_else(|| Error::Embedding(format!("coordinate {} is not an edge direction", entry.exponent)))?;
                weights.push(alpha);
            }
            let torus_weights = IntMatrix::from_big_rows(&weights, spec.n)?;
            Ok(Embedding {
                mode: spec.mode,
                target: format!("R^{} x C^{}", spec.n, coordinates.len()),
                coordinates,
                torus_weights: Some(torus_weights),
                nonvanishing,
            })
        }
    }
}

/// Failures of the local structure at vertices: unit coordinates of the
/// edge directions and exactness of `C_I` against the edge rows.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureReport {
    pub unit_failures: Vec<(usize, usize)>,
    pub exactness_failures: Vec<(usize, Vec<usize>)>,
    pub checked_faces: usize,
}

impl StructureReport {
    pub fn passes(&self) -> bool {
        self.unit_failures.is_empty() && self.exactness_failures.is_empty()
    }
}

/// At every vertex `v` and edge `r ∋ v`: `u_r` is `±1` at the facet leaving
/// `r` and `0` on the facets containing `r`. For each face `F_I ∋ v` spanned
/// by a subset of the edges at `v`: the rows `u_r` with columns `I` deleted
/// annihilate `C_I`, contain a signed unit block on the facets of `v` outside
/// `I`, and `C_I` spans a direct summand.
pub fn check_local_structure(faces: &FaceLattice, cm: &CharMatrix, spec: &EmbeddingSpec) -> Result<StructureReport> {
    let mut report = StructureReport::default();
    for (vi, v) in faces.vertices.iter().enumerate() {
        let incident = faces.incident_edges(vi);
        for &e in incident {
            let j = &faces.edges[e].facets;
            let u = &spec.edge_directions[e].u.0;
            let leaving: Vec<usize> = v.facets.iter().copied().filter(|f| !j.contains(f)).collect();
            let ok = leaving.len() == 1 && u[leaving[0]].abs().is_one() && j.iter().all(|f| u[*f].is_zero());
            if !ok {
                report.unit_failures.push((vi, e));
            }
        }
        for subset in incident.iter().copied().powerset().filter(|s| !s.is_empty()) {
            report.checked_faces += 1;
            let face: Vec<usize> = v
                .facets
                .iter()
                .copied()
                .filter(|f| subset.iter().all(|&e| faces.edges[e].facets.contains(f)))
                .collect();
            let rows: Vec<Vec<BigInt>> = subset
                .iter()
                .map(|&e| {
                    let u = &spec.edge_directions[e].u.0;
                    (0..cm.m()).filter(|c| !face.contains(c)).map(|c| u[c].clone()).collect()
                })
                .collect();
            let li = IntMatrix::from_big_rows(&rows, cm.m() - face.len())?;
            let ci = cm.kernel.delete_rows(&face);
            let annihilates = li.mul(&ci)?.is_zero();
            let free: Vec<usize> = (0..cm.m()).filter(|c| !face.contains(c)).collect();
            let unit_cols: Vec<usize> = v
                .facets
                .iter()
                .filter(|f| !face.contains(f))
                .map(|f| free.iter().position(|c| c == f).expect("free column"))
                .collect();
            let block = li.select_columns(&unit_cols);
            let unit = block.determinant()?.abs().is_one()
                && (0..block.rows()).all(|r| block.row(r).iter().filter(|x| !x.is_zero()).count() == 1);
            let summand = crate::exactlin::spans_direct_summand(&ci);
            if !(annihilates && unit && summand) {
                report.exactness_failures.push((vi, face));
            }
        }
    }
    Ok(report)
}
