//! Standard input data: simplices, cubes, the Stasheff polytope `K5` and a
//! few degenerate shapes used as negative examples.

use num_rational::BigRational;

use crate::exactlin::IntMatrix;
use crate::polytope::HPolytope;

/// Combinatorial data `(P, Λ)` with an optional fixed kernel basis.
#[derive(Clone, Debug)]
pub struct Model {
    pub name: String,
    pub polytope: HPolytope,
    pub lambda: IntMatrix,
    pub kernel: Option<IntMatrix>,
}

/// Standard simplex `x_i >= 0`, `1 - Σ x_i >= 0`.
pub fn simplex(n: usize) -> HPolytope {
    let mut a = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut row = vec![0; n];
        row[i] = 1;
        a.push(row);
    }
    a.push(vec![-1; n]);
    let mut b = vec![0; n];
    b.push(1);
    HPolytope::from_integer(&a, &b).expect("well-formed simplex")
}

/// Cube `[0, side]^n`; facets `x_i >= 0` come first, then `side - x_i >= 0`.
pub fn cube(n: usize, side: i64) -> HPolytope {
    let mut a = Vec::with_capacity(2 * n);
    for i in 0..n {
        let mut row = vec![0; n];
        row[i] = 1;
        a.push(row);
    }
    for i in 0..n {
        let mut row = vec![0; n];
        row[i] = -1;
        a.push(row);
    }
    let mut b = vec![0; n];
    b.extend(std::iter::repeat_n(side, n));
    HPolytope::from_integer(&a, &b).expect("well-formed cube")
}

pub fn segment() -> HPolytope {
    HPolytope::from_integer(&[vec![1], vec![-1]], &[0, 1]).expect("well-formed segment")
}

/// Pyramid over `[0,2]^2` with apex `(1,1,1)`; the apex lies on four facets.
pub fn square_pyramid() -> HPolytope {
    HPolytope::from_integer(
        &[
            vec![0, 0, 1],
            vec![1, 0, -1],
            vec![-1, 0, -1],
            vec![0, 1, -1],
            vec![0, -1, -1],
        ],
        &[0, 0, 2, 0, 2],
    )
    .expect("well-formed pyramid")
}

/// `Λ = A^T` for a polytope with integral `A`.
pub fn toric_lambda(p: &HPolytope) -> Option<IntMatrix> {
    p.a().transpose().to_integer()
}

/// `ℂP^n` over the standard simplex with `Λ = [I | -1]`.
pub fn projective_space(n: usize) -> Model {
    let polytope = simplex(n);
    let lambda = toric_lambda(&polytope).expect("integral simplex");
    Model {
        name: format!("CP{n}"),
        polytope,
        lambda,
        kernel: None,
    }
}

/// Cube `[0, side]^n` with `Λ = A^T` (a product of projective lines).
pub fn cube_model(n: usize, side: i64) -> Model {
    let polytope = cube(n, side);
    let lambda = toric_lambda(&polytope).expect("integral cube");
    Model {
        name: format!("cube{n}"),
        polytope,
        lambda,
        kernel: None,
    }
}

/// The three-dimensional Stasheff polytope with `Λ = A^T`,
/// `b = (0,0,0,3,3,3,5,-1,2)` and the 0/1 kernel basis.
pub fn stasheff() -> Model {
    let lambda = IntMatrix::from_rows(&[
        [1, 0, 0, -1, 0, 0, 0, 1, -1],
        [0, 1, 0, 0, -1, 0, -1, 0, 1],
        [0, 0, 1, 0, 0, -1, -1, 1, 0],
    ]);
    let a = lambda.transpose().to_rational();
    let b: Vec<BigRational> = [0, 0, 0, 3, 3, 3, 5, -1, 2]
        .iter()
        .map(|&x: &i64| BigRational::from_integer(x.into()))
        .collect();
    let polytope = HPolytope::new(a, b).expect("well-formed K5");
    let kernel = IntMatrix::from_rows(&[
        [1, 0, 0, 1, 0, 0],
        [0, 1, 0, 0, 0, 1],
        [0, 0, 1, 1, 0, 1],
        [1, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0],
        [0, 0, 0, 1, 1, 1],
        [0, 0, 0, 0, 1, 0],
        [0, 0, 0, 1, 1, 0],
    ]);
    Model {
        name: "K5".into(),
        polytope,
        lambda,
        kernel: Some(kernel),
    }
}
