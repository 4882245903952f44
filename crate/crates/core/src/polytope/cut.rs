use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use super::{FaceLattice, HPolytope};
use crate::error::{Error, Result};
use crate::exactlin::IntMatrix;

#[derive(Clone, Debug)]
pub struct CutResult {
    pub polytope: HPolytope,
    pub lambda: IntMatrix,
    pub faces: FaceLattice,
}

/// Cuts off the codimension-2 face `F_i ∩ F_j` by the inequality
/// `<a_i + a_j, x> + b_i + b_j - eps >= 0` and extends `lambda` by the column
/// `λ_i + λ_j`.
///
/// The depth `eps` is validated after the fact: the new polytope must be
/// valid and simple, every old vertex off the face must survive strictly, and
/// the f-vector must change by `f0 += f0(G)`, `f1 += f0(G) + f1(G)`.
pub fn cut_codim2_face(
    p: &HPolytope,
    lambda: &IntMatrix,
    i: usize,
    j: usize,
    eps: &BigRational,
) -> Result<CutResult> {
    let (n, m) = (p.n(), p.m());
    if lambda.rows() != n || lambda.cols() != m {
        return Err(Error::dims("cut: Lambda shape", format!("{n}x{m}"), format!("{}x{}", lambda.rows(), lambda.cols())));
    }
    if i >= m || j >= m || i == j {
        return Err(Error::InvalidCut(format!("facet pair ({}, {}) out of range or repeated", i + 1, j + 1)));
    }
    if !eps.is_positive() {
        return Err(Error::InvalidCut("cut depth must be positive".into()));
    }
    let faces = p.enumerate_faces()?;
    let face = [i.min(j), i.max(j)];
    let face_vertices = faces.vertices_on(&face);
    if face_vertices.is_empty() {
        return Err(Error::InvalidCut(format!(
            "facets {} and {} do not meet",
            i + 1,
            j + 1
        )));
    }
    let face_edges = faces.edges_on(&face).len();

    let row: Vec<BigRational> = p.a().row(i).iter().zip(p.a().row(j)).map(|(x, y)| x + y).collect();
    let offset = &p.b()[i] + &p.b()[j] - eps;
    let cut = p.with_inequality(&row, offset)?;

    for (vi, v) in faces.vertices.iter().enumerate() {
        if face_vertices.contains(&vi) {
            continue;
        }
        let y = cut.image_point(&v.coords)?;
        if !y[m].is_positive() {
            return Err(Error::InvalidCut(format!(
                "depth too large: vertex {} is not strictly kept",
                super::fmt_vec(&v.coords)
            )));
        }
    }
    let new_faces = cut
        .enumerate_faces()
        .map_err(|e| Error::InvalidCut(format!("depth too large: {e}")))?;
    let expected = (
        faces.f0() + face_vertices.len(),
        faces.f1() + face_vertices.len() + face_edges,
    );
    if (new_faces.f0(), new_faces.f1()) != expected {
        return Err(Error::InvalidCut(format!(
            "depth too large: f-vector ({}, {}) instead of ({}, {})",
            new_faces.f0(),
            new_faces.f1(),
            expected.0,
            expected.1
        )));
    }

    let column: Vec<BigInt> = lambda.column(i).iter().zip(lambda.column(j)).map(|(x, y)| x + y).collect();
    Ok(CutResult {
        polytope: cut,
        lambda: lambda.append_column(&column)?,
        faces: new_faces,
    })
}
