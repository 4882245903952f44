//! Acceptance criteria, one line of output each. Runs without the libtest
//! harness so that the summary is printed in order.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qtembed::chardata::{validate_characteristic, CharMatrix, Character};
use qtembed::embed::{build_character_set, direction_from_kernel, direction_from_lambda, edge_direction, EmbeddingMode, Monomial};
use qtembed::exactlin::{rat, rat_vec, IntMatrix};
use qtembed::models::{self, Model};
use qtembed::momentangle::quadric_system;
use qtembed::polytope::{cut_codim2_face, FaceLattice, HPolytope};
use qtembed::toric::{lattice_embedding_set, log_gradient, polytope_log_jacobian};
use qtembed::verify::{check_rank, finite_difference_jacobian, run_checks, VerifyConfig};

const TOL_EQ: f64 = 1e-9;
const TOL_SEP: f64 = 1e-6;
const TOL_FD: f64 = 1e-5;

const K5_QUADRICS: [&str; 6] = [
    "|z1|^2 + |z4|^2 = 3",
    "|z2|^2 + |z5|^2 = 3",
    "|z3|^2 + |z6|^2 = 3",
    "|z1|^2 + |z3|^2 + |z7|^2 + |z9|^2 = 7",
    "|z7|^2 + |z8|^2 + |z9|^2 = 6",
    "|z2|^2 + |z3|^2 + |z7|^2 = 5",
];

const K5_VERTICES: [[i64; 3]; 14] = [
    [1, 0, 0],
    [0, 0, 1],
    [1, 3, 0],
    [0, 3, 1],
    [2, 0, 0],
    [3, 1, 0],
    [3, 1, 3],
    [2, 0, 3],
    [3, 2, 3],
    [0, 2, 3],
    [0, 3, 2],
    [3, 3, 2],
    [0, 0, 3],
    [3, 3, 0],
];

const K5_EDGE_POINTS: [[i64; 3]; 18] = [
    [1, 1, 0],
    [1, 2, 0],
    [2, 3, 0],
    [3, 2, 0],
    [0, 1, 1],
    [0, 2, 1],
    [3, 3, 1],
    [3, 1, 1],
    [2, 0, 1],
    [1, 3, 2],
    [2, 3, 2],
    [3, 1, 2],
    [2, 0, 2],
    [0, 0, 2],
    [1, 0, 3],
    [0, 1, 3],
    [1, 2, 3],
    [2, 2, 3],
];

/// Edge (1-based facet pair) and its monomial, `w` standing for a conjugated variable.
const K5_EDGE_MONOMIALS: [((usize, usize), &str); 21] = [
    ((1, 2), "z3 w6 w7 z8"),
    ((1, 5), "w3 z6 z7 w8"),
    ((1, 6), "w2 z5 z7 w9"),
    ((1, 7), "w2 z3 z5 w6 z8 w9"),
    ((1, 8), "z2 w5 w7 z9"),
    ((2, 3), "z1 w4 z8 w9"),
    ((2, 6), "z1 w4 z8 w9"),
    ((2, 8), "w1 z3 z4 w6 w7 z9"),
    ((2, 9), "w3 z6 z7 w8"),
    ((3, 4), "w2 z5 z7 w9"),
    ((3, 5), "w1 z4 w8 z9"),
    ((3, 8), "z2 w5 w7 z9"),
    ((3, 9), "z1 z2 w4 w5 w7 z8"),
    ((4, 5), "z3 w6 w7 z8"),
    ((4, 6), "z2 w5 w7 z9"),
    ((4, 7), "w2 z3 z5 w6 z8 w9"),
    ((4, 9), "z3 w6 w7 z8"),
    ((5, 7), "w1 z4 w8 z9"),
    ((5, 8), "w1 z3 z4 w6 w7 z9"),
    ((6, 7), "w1 z4 w8 z9"),
    ((6, 9), "z1 z2 w4 w5 w7 z8"),
];

const K5_VERTEX_MONOMIALS: [&str; 14] = [
    "z1 z4^2 z5^3 z6^3 z7^5 z9",
    "z3 z4^3 z5^3 z6^2 z7^4 z9^2",
    "z1 z2^3 z4^2 z6^3 z7^2 z9^4",
    "z2^3 z3 z4^3 z6^2 z7 z9^5",
    "z1^2 z4 z5^3 z6^3 z7^5 z8",
    "z1^3 z2 z5^2 z6^3 z7^4 z8^2",
    "z1^3 z2 z3^3 z5^2 z7 z8^5",
    "z1^2 z3^3 z4 z5^3 z7^2 z8^4",
    "z1^3 z2^2 z3^3 z5 z8^5 z9",
    "z2^2 z3^3 z4^3 z5 z8^2 z9^4",
    "z2^3 z3^2 z4^3 z6 z8 z9^5",
    "z1^3 z2^3 z3^2 z6 z8^4 z9^2",
    "z3^3 z4^3 z5^3 z7^2 z8^2 z9^2",
    "z1^3 z2^3 z6^3 z7^2 z8^2 z9^2",
];

const K5_EDGE_POINT_MONOMIALS: [&str; 18] = [
    "z1 z2 z4^2 z5^2 z6^3 z7^4 z9^2",
    "z1 z2^2 z4^2 z5 z6^3 z7^3 z9^3",
    "z1^2 z2^3 z4 z6^3 z7^2 z8 z9^3",
    "z1^3 z2^2 z5 z6^3 z7^3 z8^2 z9",
    "z2 z3 z4^3 z5^2 z6^2 z7^3 z9^3",
    "z2^2 z3 z4^3 z5 z6^2 z7^2 z9^4",
    "z1^3 z2^3 z3 z6^2 z7 z8^3 z9^2",
    "z1^3 z2 z3 z5^2 z6^2 z7^3 z8^3",
    "z1^2 z3 z4 z5^3 z6^2 z7^4 z8^2",
    "z1 z2^3 z3^2 z4^2 z6 z8^2 z9^4",
    "z1^2 z2^3 z3^2 z4 z6 z8^3 z9^3",
    "z1^3 z2 z3^2 z5^2 z6 z7^2 z8^4",
    "z1^2 z3^2 z4 z5^3 z6 z7^3 z8^3",
    "z3^2 z4^3 z5^3 z6 z7^3 z8 z9^2",
    "z1 z3^3 z4^2 z5^3 z7^2 z8^3 z9",
    "z2 z3^3 z4^3 z5^2 z7 z8^2 z9^3",
    "z1 z2^2 z3^3 z4^2 z5 z8^3 z9^3",
    "z1^2 z2^2 z3^3 z4 z5 z8^4 z9^2",
];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($fmt)+));
        }
    };
}

fn setup(model: &Model) -> (FaceLattice, CharMatrix) {
    let faces = model.polytope.enumerate_faces().expect("valid polytope");
    let cm = CharMatrix::new(model.lambda.clone(), model.kernel.clone()).expect("valid kernel");
    (faces, cm)
}

fn image(p: &HPolytope, x: &[i64]) -> Vec<BigInt> {
    p.image_point(&rat_vec(x)).unwrap().iter().map(|y| y.to_integer()).collect()
}

fn k5_quadrics() -> Outcome {
    let k5 = models::stasheff();
    let q = quadric_system(&k5.polytope, k5.kernel.as_ref()).map_err(|e| e.to_string())?;
    let got: BTreeSet<String> = q.equations().into_iter().collect();
    let want: BTreeSet<String> = K5_QUADRICS.iter().map(|s| s.to_string()).collect();
    ensure!(got == want, "equations differ: {got:?}");
    ensure!(q.rhs.iter().all(|r| r.is_integer()), "non-integral right-hand side");
    Ok(format!("{} equations", got.len()))
}

fn k5_faces() -> Outcome {
    let k5 = models::stasheff();
    let faces = k5.polytope.enumerate_faces().map_err(|e| e.to_string())?;
    ensure!(faces.f0() == 14 && faces.f1() == 21 && faces.m == 9, "f0 = {}, f1 = {}, m = {}", faces.f0(), faces.f1(), faces.m);
    let got: BTreeSet<Vec<BigRational>> = faces.vertices.iter().map(|v| v.coords.clone()).collect();
    let want: BTreeSet<Vec<BigRational>> = K5_VERTICES.iter().map(|v| rat_vec(v)).collect();
    ensure!(got == want, "vertex sets differ");
    Ok("f0 = 14, f1 = 21, m = 9".into())
}

fn k5_affine() -> Outcome {
    let k5 = models::stasheff();
    let (faces, cm) = setup(&k5);
    let spec = build_character_set(&faces, &cm, &Character::trivial(6)).map_err(|e| e.to_string())?;
    ensure!(spec.mode == EmbeddingMode::Affine, "mode {}", spec.mode);
    let directions: BTreeSet<Monomial> = spec.exponents().filter(|a| !a.is_constant()).cloned().collect();
    ensure!(directions.len() == 6 && spec.q() == 7, "{} distinct directions", directions.len());
    for ((i, j), text) in K5_EDGE_MONOMIALS {
        let expected = Monomial::parse(text, 9).map_err(|e| e.to_string())?;
        let edge = faces
            .edges
            .iter()
            .position(|e| e.facets == vec![i - 1, j - 1])
            .ok_or(format!("no edge ({i}, {j})"))?;
        let u = edge_direction(&faces, &cm, edge).map_err(|e| e.to_string())?.u;
        ensure!(u == expected || u == expected.negated(), "edge ({i}, {j}): got {u}, expected ±{expected}");
        ensure!(
            directions.contains(&expected) || directions.contains(&expected.negated()),
            "{expected} is not one of the directions"
        );
    }
    Ok("6 directions, 21/21 edges".into())
}

fn k5_projective() -> Outcome {
    let k5 = models::stasheff();
    let (faces, cm) = setup(&k5);
    let emb = lattice_embedding_set(&k5.polytope, &faces, &cm).map_err(|e| e.to_string())?;
    let character = emb.certificate.character.clone().ok_or("no character")?;
    ensure!(character == Character::from_i64(&[3, 3, 3, 7, 6, 5]), "character {character}");
    ensure!(emb.spec.q() == 32, "q = {}", emb.spec.q());
    let mut want = BTreeSet::new();
    for (text, x) in K5_VERTEX_MONOMIALS.iter().zip(&K5_VERTICES) {
        let m = Monomial::parse(text, 9).map_err(|e| e.to_string())?;
        ensure!(m.0 == image(&k5.polytope, x), "{text} is not the image of {x:?}");
        want.insert(m);
    }
    for (text, x) in K5_EDGE_POINT_MONOMIALS.iter().zip(&K5_EDGE_POINTS) {
        let m = Monomial::parse(text, 9).map_err(|e| e.to_string())?;
        ensure!(m.0 == image(&k5.polytope, x), "{text} is not the image of {x:?}");
        want.insert(m);
    }
    let got: BTreeSet<Monomial> = emb.spec.exponents().cloned().collect();
    ensure!(got == want, "entry sets differ: extra {:?}", got.difference(&want).map(|m| m.to_string()).collect::<Vec<_>>());
    let vertex_entries: BTreeSet<Monomial> = emb
        .spec
        .entries
        .iter()
        .filter(|e| e.is_vertex_entry())
        .map(|e| e.exponent.clone())
        .collect();
    ensure!(vertex_entries.len() == 14, "{} vertex entries", vertex_entries.len());
    Ok("32 entries (14 vertex, 18 edge)".into())
}

fn projective_spaces() -> Outcome {
    for n in [2usize, 3] {
        let model = models::projective_space(n);
        let (faces, cm) = setup(&model);
        let unit = |i: usize| -> Vec<BigInt> { (0..=n).map(|j| BigInt::from((i == j) as i64)).collect() };

        let trivial = build_character_set(&faces, &cm, &Character::trivial(1)).map_err(|e| e.to_string())?;
        ensure!(trivial.q() == 1 + n * (n + 1) / 2, "CP{n} trivial q = {}", trivial.q());
        let mut want: BTreeSet<Vec<BigInt>> = BTreeSet::new();
        want.insert(vec![BigInt::zero(); n + 1]);
        for (i, j) in (0..=n).tuple_combinations() {
            want.insert(unit(i).iter().zip(unit(j)).map(|(a, b)| a - b).collect());
        }
        let got: BTreeSet<Vec<BigInt>> = trivial.exponents().map(|a| a.0.clone()).collect();
        ensure!(got == want, "CP{n} trivial entries differ");

        let identity = build_character_set(&faces, &cm, &Character::from_i64(&[1])).map_err(|e| e.to_string())?;
        let got: BTreeSet<Vec<BigInt>> = identity.exponents().map(|a| a.0.clone()).collect();
        let want: BTreeSet<Vec<BigInt>> = (0..=n).map(unit).collect();
        ensure!(got == want, "CP{n} identity entries differ");
    }
    Ok("CP2, CP3".into())
}

fn det3(m: [[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn independence() -> Outcome {
    let k5 = models::stasheff();
    let faces = k5.polytope.enumerate_faces().map_err(|e| e.to_string())?;
    let base: Vec<Vec<i64>> = k5.lambda.to_rows().iter().map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect()).collect();
    let oracle = |l: &Vec<Vec<i64>>| -> BTreeSet<Vec<usize>> {
        faces
            .vertices
            .iter()
            .filter(|v| {
                let mut m = [[0i64; 3]; 3];
                for (c, &f) in v.facets.iter().enumerate() {
                    for r in 0..3 {
                        m[r][c] = l[r][f];
                    }
                }
                det3(m).abs() != 1
            })
            .map(|v| v.facets.clone())
            .collect()
    };
    let report = validate_characteristic(&faces, &k5.lambda).map_err(|e| e.to_string())?;
    ensure!(report.passes() && report.minors.len() == 14, "unmodified data fails");
    ensure!(oracle(&base).is_empty(), "oracle disagrees on unmodified data");
    let mut breaking = 0;
    for r in 0..3 {
        for c in 0..9 {
            let mut l = base.clone();
            l[r][c] += 1;
            let lambda = IntMatrix::from_rows(&l);
            let got: BTreeSet<Vec<usize>> = validate_characteristic(&faces, &lambda)
                .map_err(|e| e.to_string())?
                .offending()
                .map(|v| v.facets.clone())
                .collect();
            ensure!(got == oracle(&l), "mutation ({r}, {c}) disagrees with brute force");
            if !got.is_empty() {
                breaking += 1;
            }
        }
    }
    // Some mutations keep every minor unimodular; brute force confirms those.
    ensure!(breaking > 0, "no single-entry mutation is rejected");
    Ok(format!("14/14 vertices; {breaking}/27 single-entry mutations rejected, all 27 matching brute force"))
}

/// Random sequence of codimension-2 cuts of `[0, side]^n` with integral depth.
fn random_truncated_cube(rng: &mut ChaCha8Rng, n: usize, side: i64, cuts: usize) -> Model {
    let mut p = models::cube(n, side);
    let mut lambda = models::toric_lambda(&p).unwrap();
    let mut done = 0;
    let mut attempts = 0;
    while done < cuts {
        attempts += 1;
        assert!(attempts < 200, "could not place {cuts} cuts");
        let faces = p.enumerate_faces().unwrap();
        let edge = &faces.edges[rng.random_range(0..faces.f1())];
        let pairs: Vec<(usize, usize)> = edge.facets.iter().copied().tuple_combinations().collect();
        let (i, j) = pairs[rng.random_range(0..pairs.len())];
        let eps = BigRational::from_integer(rng.random_range(1..=2).into());
        if let Ok(r) = cut_codim2_face(&p, &lambda, i, j, &eps) {
            p = r.polytope;
            lambda = r.lambda;
            done += 1;
        }
    }
    Model {
        name: format!("truncated cube {n}"),
        polytope: p,
        lambda,
        kernel: None,
    }
}

fn cross_check() -> Outcome {
    let mut models_list = vec![models::stasheff(), models::projective_space(3), models::cube_model(3, 1)];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for k in 0..10 {
        let n = 3 + k % 2;
        let cuts = 1 + k % 4;
        models_list.push(random_truncated_cube(&mut rng, n, 8, cuts));
    }
    let mut edges = 0;
    for model in &models_list {
        let (faces, cm) = setup(model);
        ensure!(validate_characteristic(&faces, &cm.lambda).unwrap().passes(), "{}: independence fails", model.name);
        for e in &faces.edges {
            let (_, u) = direction_from_lambda(&cm.lambda, &e.facets).map_err(|e| e.to_string())?;
            let w = direction_from_kernel(&cm.kernel, &e.facets).map_err(|e| e.to_string())?;
            ensure!(u == w, "{}: edge {:?} gives {u:?} vs {w:?}", model.name, e.facets);
            edges += 1;
        }
    }
    Ok(format!("{edges} edges on {} polytopes", models_list.len()))
}

fn character_restriction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut checked = 0;
    for model in [models::stasheff(), models::cube_model(3, 1)] {
        let (faces, cm) = setup(&model);
        let r = cm.kernel_rank();
        for _ in 0..50 {
            let k = Character((0..r).map(|_| BigInt::from(rng.random_range(-5i64..=5))).collect());
            let spec = build_character_set(&faces, &cm, &k).map_err(|e| e.to_string())?;
            for a in spec.exponents() {
                ensure!(cm.restrict(&a.0).map_err(|e| e.to_string())? == k, "{}: {a} restricts wrongly", model.name);
                checked += 1;
            }
            ensure!(spec.q() <= faces.f0() * (faces.n + 1), "{}: q = {} too large", model.name, spec.q());
        }
        let trivial = build_character_set(&faces, &cm, &Character::trivial(r)).map_err(|e| e.to_string())?;
        ensure!(trivial.q() <= faces.f1() + 1, "{}: trivial q = {}", model.name, trivial.q());
    }
    Ok(format!("{checked} entries over 100 characters"))
}

fn numerical_suite() -> Outcome {
    let config = VerifyConfig {
        samples: 200,
        seed: 42,
        tol_eq: TOL_EQ,
        tol_sep: TOL_SEP,
    };
    let k5 = models::stasheff();
    let cp2 = models::projective_space(2);
    let cases = [
        (&k5, Character::from_i64(&[3, 3, 3, 7, 6, 5])),
        (&k5, Character::trivial(6)),
        (&cp2, Character::from_i64(&[1])),
    ];
    let mut lines = Vec::new();
    for (model, k) in cases {
        let (faces, cm) = setup(model);
        let spec = build_character_set(&faces, &cm, &k).map_err(|e| e.to_string())?;
        let r = run_checks(&model.polytope, &faces, &cm, &spec, &config).map_err(|e| e.to_string())?;
        ensure!(r.passes(), "{} {}: {:?}", model.name, spec.mode, r.violations.first());
        for s in [&r.equivariance, &r.k_invariance, &r.modulus, &r.nonvanishing] {
            ensure!(s.failures == 0 && s.checked == 400, "{}: summary {s:?}", model.name);
        }
        ensure!(
            r.separation.failures == 0 && r.separation.checked == 200,
            "{}: separation {:?}",
            model.name,
            r.separation
        );
        lines.push(format!("{} {} (inconclusive {})", model.name, spec.mode, r.separation.inconclusive));
    }
    Ok(lines.join(", "))
}

fn jacobian() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    for model in [models::stasheff(), models::projective_space(3)] {
        let (faces, cm) = setup(&model);
        let k = match model.name.as_str() {
            "K5" => Character::from_i64(&[3, 3, 3, 7, 6, 5]),
            _ => Character::from_i64(&[1]),
        };
        let spec = build_character_set(&faces, &cm, &k).map_err(|e| e.to_string())?;
        for _ in 0..50 {
            let mut x = vec![BigRational::zero(); faces.n];
            let mut total = 0i64;
            for v in &faces.vertices {
                let w: i64 = rng.random_range(1..=20);
                total += w;
                for (xi, c) in x.iter_mut().zip(&v.coords) {
                    *xi += c * BigRational::from_integer(w.into());
                }
            }
            let x: Vec<BigRational> = x.into_iter().map(|c| c / BigRational::from_integer(total.into())).collect();
            let g = polytope_log_jacobian(&model.polytope, &x).map_err(|e| e.to_string())?;
            ensure!(g.symmetric && g.g == g.g.transpose(), "{}: not symmetric", model.name);
            ensure!(g.positive_definite, "{}: Cholesky failed", model.name);
            let xf: Vec<f64> = x.iter().map(|c| c.to_f64().unwrap()).collect();
            let fd = finite_difference_jacobian(|pt| log_gradient(&model.polytope, pt), &xf, 1e-5);
            let fd = (&fd + fd.transpose()) * 0.5;
            let err = (&fd - &g.g).amax() / g.g.amax();
            ensure!(err < TOL_FD, "{}: finite differences off by {err:e}", model.name);
            worst = worst.max(err);
            let rank = check_rank(&model.polytope, &faces, &spec, &x).map_err(|e| e.to_string())?;
            ensure!(rank.passes(), "{}: rank report {rank:?}", model.name);
        }
    }
    Ok(format!("100 points, worst relative error {worst:.1e}"))
}

fn generator() -> Outcome {
    let cube = models::cube(3, 1);
    let lambda = models::toric_lambda(&cube).unwrap();
    let one = cut_codim2_face(&cube, &lambda, 0, 1, &rat(1, 2)).map_err(|e| e.to_string())?;
    let f = (one.faces.f0(), one.faces.f1(), one.polytope.m());
    ensure!(f == (10, 15, 7), "one cut gives {f:?}");

    let cube = models::cube(3, 3);
    let lambda = models::toric_lambda(&cube).unwrap();
    let mut p = cube;
    let mut l = lambda;
    let mut last = None;
    for (i, j) in [(4, 5), (0, 2), (3, 1)] {
        let r = cut_codim2_face(&p, &l, i, j, &BigRational::one()).map_err(|e| e.to_string())?;
        ensure!(r.faces.f0() + r.polytope.m() == r.faces.f1() + 2, "Euler relation fails");
        p = r.polytope.clone();
        l = r.lambda.clone();
        last = Some(r);
    }
    let r = last.unwrap();
    let f = (r.faces.f0(), r.faces.f1(), r.polytope.m());
    ensure!(f == (14, 21, 9), "three cuts give {f:?}");
    let report = validate_characteristic(&r.faces, &r.lambda).map_err(|e| e.to_string())?;
    ensure!(report.passes(), "extended Lambda fails independence");
    ensure!(report.minors.iter().all(|v| v.det.abs().is_one()), "minor not unimodular");
    ensure!(r.polytope == models::stasheff().polytope, "three cuts do not reproduce K5");
    Ok("(10, 15, 7) and (14, 21, 9)".into())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("K5 quadrics", k5_quadrics),
        ("K5 face lattice", k5_faces),
        ("K5 affine embedding", k5_affine),
        ("K5 projective toric embedding", k5_projective),
        ("projective spaces", projective_spaces),
        ("independence validation", independence),
        ("edge direction cross-check", cross_check),
        ("character restriction", character_restriction),
        ("numerical suite", numerical_suite),
        ("Jacobian certificate", jacobian),
        ("codimension-2 cuts", generator),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
