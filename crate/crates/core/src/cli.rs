//! Command-line front end. `run` returns the process exit code: 0 when all
//! checks pass, 1 on a validation failure, 2 on unusable input.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::chardata::{validate_characteristic, CharMatrix, Character};
use crate::document::{integer_value, rational_value, Document};
use crate::embed::{assemble_embedding, build_character_set, EmbeddingMode, EmbeddingSpec, EntrySource};
use crate::error::Error;
use crate::exactlin::{parse_rational, IntMatrix};
use crate::momentangle::quadric_system;
use crate::polytope::{cut_codim2_face, fmt_indices, fmt_vec, FaceLattice};
use crate::toric::{check_toric, lattice_embedding_set};
use crate::verify::{check_rank, run_checks, VerifyConfig};

#[derive(Parser, Debug)]
#[command(name = "qtembed", version, about = "Monomial embeddings of quasitoric manifolds")]
pub struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the polytope, the independence condition and the kernel basis.
    Validate { file: PathBuf },
    /// List vertices and edges.
    Faces { file: PathBuf },
    /// Quadrics cutting out the moment-angle manifold.
    Quadrics { file: PathBuf },
    /// Character set and embedding target.
    Embed {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Comma-separated integers, or `trivial`.
        #[arg(long)]
        character: Option<String>,
    },
    /// Toric certificate and the lattice-point embedding.
    Toric { file: PathBuf },
    /// Sampling checks of an embedding.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long)]
        character: Option<String>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long = "tol-sep", default_value_t = 1e-6)]
        tol_sep: f64,
    },
    /// Cut off a codimension-2 face and print the new data.
    Cut {
        file: PathBuf,
        /// Two 1-based facet labels, e.g. `1,2`.
        #[arg(long)]
        face: String,
        /// Cut depth as an integer or `p/q`.
        #[arg(long)]
        eps: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Affine,
    Projective,
}

enum Failure {
    Input(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Config(_) | Error::DimensionMismatch { .. } => Failure::Input(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

struct Output {
    text: String,
    json: Value,
    pass: bool,
}

/// Parses `args` (including the program name) and runs one command.
pub fn run<I, T>(args: I, ci: bool, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let json = cli.json;
    match dispatch(cli, ci) {
        Ok(o) => {
            let _ = if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&o.json).expect("serializable"))
            } else {
                write!(out, "{}", o.text)
            };
            if o.pass {
                0
            } else {
                1
            }
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Check(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn dispatch(cli: Cli, ci: bool) -> Result<Output, Failure> {
    match cli.command {
        Command::Validate { file } => validate(&load(&file)?),
        Command::Faces { file } => faces(&load(&file)?),
        Command::Quadrics { file } => quadrics(&load(&file)?),
        Command::Embed { file, mode, character } => embed(&load(&file)?, mode, character.as_deref()),
        Command::Toric { file } => toric(&load(&file)?),
        Command::Verify {
            file,
            mode,
            character,
            samples,
            seed,
            tol,
            tol_sep,
        } => {
            let seed = match seed {
                Some(s) => s,
                None if ci => return Err(Failure::Input("--seed is required when QTEMBED_CI=1".into())),
                None => 42,
            };
            let config = VerifyConfig {
                samples,
                seed,
                tol_eq: tol,
                tol_sep,
            };
            verify(&load(&file)?, mode, character.as_deref(), &config)
        }
        Command::Cut { file, face, eps } => cut(&load(&file)?, &face, &eps),
    }
}

fn load(path: &PathBuf) -> Result<Document, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Document::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn labels(v: &[usize]) -> Value {
    json!(v.iter().map(|i| i + 1).collect::<Vec<_>>())
}

fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(integer_value).collect())
}

fn int_rows(m: &IntMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| ints(r)).collect())
}

fn rats(v: &[BigRational]) -> Value {
    Value::Array(v.iter().map(rational_value).collect())
}

fn setup(doc: &Document) -> Result<(FaceLattice, CharMatrix), Failure> {
    let faces = doc.polytope.enumerate_faces()?;
    let cm = CharMatrix::new(doc.lambda.clone(), doc.kernel.clone())?;
    let report = validate_characteristic(&faces, &cm.lambda)?;
    if let Some(bad) = report.offending().next() {
        return Err(Failure::Check(format!(
            "independence condition fails at vertex {} (det = {})",
            fmt_indices(&bad.facets),
            bad.det
        )));
    }
    Ok((faces, cm))
}

fn validate(doc: &Document) -> Result<Output, Failure> {
    let mut text = String::new();
    if let Some(name) = &doc.name {
        let _ = writeln!(text, "name: {name}");
    }
    let report = doc.polytope.validate();
    let mut json = json!({ "name": doc.name });
    if !report.is_valid() {
        let _ = writeln!(text, "polytope: FAIL");
        for f in &report.failures {
            let _ = writeln!(text, "  - {f}");
        }
        let _ = writeln!(text, "result: fail");
        json["polytope"] = json!({
            "valid": false,
            "failures": report.failures.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        });
        json["pass"] = json!(false);
        return Ok(Output { text, json, pass: false });
    }
    let faces = doc.polytope.enumerate_faces()?;
    let _ = writeln!(
        text,
        "polytope: ok (n = {}, m = {}, f0 = {}, f1 = {})",
        faces.n,
        faces.m,
        faces.f0(),
        faces.f1()
    );
    json["polytope"] = json!({ "valid": true, "failures": [], "n": faces.n, "m": faces.m, "f0": faces.f0(), "f1": faces.f1() });

    let independence = validate_characteristic(&faces, &doc.lambda)?;
    let bad: Vec<_> = independence.offending().collect();
    if bad.is_empty() {
        let _ = writeln!(text, "independence: ok at {} vertices", faces.f0());
    } else {
        let _ = writeln!(text, "independence: FAIL at {} of {} vertices", bad.len(), faces.f0());
        for v in &bad {
            let _ = writeln!(text, "  - vertex {}: det = {}", fmt_indices(&v.facets), v.det);
        }
    }
    json["independence"] = json!({
        "pass": bad.is_empty(),
        "vertices": independence.minors.iter().map(|v| json!({
            "facets": labels(&v.facets),
            "det": integer_value(&v.det),
        })).collect::<Vec<_>>(),
    });

    let mut pass = bad.is_empty();
    match CharMatrix::new(doc.lambda.clone(), doc.kernel.clone()) {
        Ok(cm) => {
            let _ = writeln!(text, "kernel: ok, {}, rank {}", cm.source, cm.kernel_rank());
            json["kernel"] = json!({ "pass": true, "source": cm.source.to_string(), "C": int_rows(&cm.kernel) });
            if let Some(k) = &doc.character {
                if k.rank() != cm.kernel_rank() {
                    pass = false;
                    let _ = writeln!(text, "character: FAIL rank {} instead of {}", k.rank(), cm.kernel_rank());
                } else {
                    let _ = writeln!(text, "character: {k}");
                }
            }
        }
        Err(e) => {
            pass = false;
            let _ = writeln!(text, "kernel: FAIL {e}");
            json["kernel"] = json!({ "pass": false, "error": e.to_string() });
        }
    }
    let _ = writeln!(text, "result: {}", if pass { "pass" } else { "fail" });
    json["pass"] = json!(pass);
    Ok(Output { text, json, pass })
}

fn faces(doc: &Document) -> Result<Output, Failure> {
    let faces = doc.polytope.enumerate_faces()?;
    let mut text = format!("f0: {}\nf1: {}\nm: {}\nvertices:\n", faces.f0(), faces.f1(), faces.m);
    for (i, v) in faces.vertices.iter().enumerate() {
        let _ = writeln!(text, "  {} {} facets {}", i + 1, fmt_vec(&v.coords), fmt_indices(&v.facets));
    }
    text.push_str("edges:\n");
    for (i, e) in faces.edges.iter().enumerate() {
        let _ = writeln!(text, "  {} facets {} vertices {} {}", i + 1, fmt_indices(&e.facets), e.ends.0 + 1, e.ends.1 + 1);
    }
    let json = json!({
        "f0": faces.f0(),
        "f1": faces.f1(),
        "m": faces.m,
        "vertices": faces.vertices.iter().map(|v| json!({ "coords": rats(&v.coords), "facets": labels(&v.facets) })).collect::<Vec<_>>(),
        "edges": faces.edges.iter().map(|e| json!({ "facets": labels(&e.facets), "vertices": [e.ends.0 + 1, e.ends.1 + 1] })).collect::<Vec<_>>(),
    });
    Ok(Output { text, json, pass: true })
}

fn quadrics(doc: &Document) -> Result<Output, Failure> {
    doc.polytope.enumerate_faces()?;
    let q = quadric_system(&doc.polytope, doc.kernel.as_ref())?;
    let equations = q.equations();
    let mut text = String::new();
    for e in &equations {
        let _ = writeln!(text, "{e}");
    }
    let json = json!({ "equations": equations, "coefficients": int_rows(&q.coeffs), "rhs": rats(&q.rhs) });
    Ok(Output { text, json, pass: true })
}

fn parse_character(arg: Option<&str>, doc: &Document, rank: usize) -> Result<Character, Failure> {
    let k = match arg {
        Some("trivial") => Character::trivial(rank),
        Some(s) => {
            let parts: Result<Vec<BigInt>, _> = s.split(',').map(|x| x.trim().parse::<BigInt>()).collect();
            Character(parts.map_err(|_| Failure::Input(format!("bad --character {s:?}: expected integers or `trivial`")))?)
        }
        None => doc.character.clone().unwrap_or_else(|| Character::trivial(rank)),
    };
    if k.rank() != rank {
        return Err(Failure::Input(format!("character has {} entries, expected m - n = {rank}", k.rank())));
    }
    Ok(k)
}

fn build_spec(
    doc: &Document,
    faces: &FaceLattice,
    cm: &CharMatrix,
    mode: Option<ModeArg>,
    character: Option<&str>,
) -> Result<EmbeddingSpec, Failure> {
    let k = parse_character(character, doc, cm.kernel_rank())?;
    let spec = build_character_set(faces, cm, &k)?;
    match mode {
        None => Ok(spec),
        Some(m) => {
            let mode = match m {
                ModeArg::Affine => EmbeddingMode::Affine,
                ModeArg::Projective => EmbeddingMode::Projective,
            };
            spec.with_mode(mode).map_err(|e| Failure::Input(e.to_string()))
        }
    }
}

fn source_label(faces: &FaceLattice, s: &EntrySource) -> String {
    match *s {
        EntrySource::Vertex { vertex } => format!("vertex {}", fmt_indices(&faces.vertices[vertex].facets)),
        EntrySource::Edge { vertex, edge } => format!(
            "edge {} at vertex {}",
            fmt_indices(&faces.edges[edge].facets),
            fmt_indices(&faces.vertices[vertex].facets)
        ),
    }
}

fn source_json(faces: &FaceLattice, s: &EntrySource) -> Value {
    match *s {
        EntrySource::Vertex { vertex } => json!({ "kind": "vertex", "vertex": labels(&faces.vertices[vertex].facets) }),
        EntrySource::Edge { vertex, edge } => json!({
            "kind": "edge",
            "vertex": labels(&faces.vertices[vertex].facets),
            "edge": labels(&faces.edges[edge].facets),
        }),
    }
}

fn embed(doc: &Document, mode: Option<ModeArg>, character: Option<&str>) -> Result<Output, Failure> {
    let (faces, cm) = setup(doc)?;
    let spec = build_spec(doc, &faces, &cm, mode, character)?;
    let emb = assemble_embedding(&spec)?;
    let character_text = if spec.character.is_trivial() {
        "trivial".to_string()
    } else {
        spec.character.to_string()
    };
    let mut text = format!(
        "mode: {}\ncharacter: {}\nkernel: {}\nq: {}\ntarget: {}\n",
        spec.mode,
        character_text,
        spec.kernel_source,
        spec.q(),
        emb.target
    );
    let mut entries = Vec::new();
    match spec.mode {
        EmbeddingMode::Affine => {
            let _ = writeln!(text, "moment map: the R^{} factor is the projection onto the polytope", spec.n);
            text.push_str("coordinates:\n");
            let weights = emb.torus_weights.as_ref().expect("affine weights");
            for (row, &i) in emb.coordinates.iter().enumerate() {
                let e = &spec.entries[i];
                let edges = e
                    .sources
                    .iter()
                    .filter_map(|s| match s {
                        EntrySource::Edge { edge, .. } => Some(*edge),
                        _ => None,
                    })
                    .unique()
                    .map(|edge| fmt_indices(&faces.edges[edge].facets))
                    .join(" ");
                let _ = writeln!(
                    text,
                    "  {} {} {} weight {} edges {}",
                    row + 1,
                    e.exponent,
                    fmt_vec(&e.exponent.0),
                    fmt_vec(weights.row(row)),
                    edges
                );
                entries.push(json!({
                    "monomial": e.exponent.to_string(),
                    "exponent": ints(&e.exponent.0),
                    "weight": ints(weights.row(row)),
                    "sources": e.sources.iter().map(|s| source_json(&faces, s)).collect::<Vec<_>>(),
                }));
            }
        }
        EmbeddingMode::Projective => {
            text.push_str("coordinates:\n");
            for (i, e) in spec.entries.iter().enumerate() {
                let _ = writeln!(
                    text,
                    "  {} {} {} from {}",
                    i + 1,
                    e.exponent,
                    fmt_vec(&e.exponent.0),
                    source_label(&faces, &e.sources[0])
                );
                entries.push(json!({
                    "monomial": e.exponent.to_string(),
                    "exponent": ints(&e.exponent.0),
                    "sources": e.sources.iter().map(|s| source_json(&faces, s)).collect::<Vec<_>>(),
                }));
            }
        }
    }
    if spec.collinearity_violations.is_empty() {
        text.push_str("collinearity: ok\n");
    } else {
        for v in &spec.collinearity_violations {
            let _ = writeln!(
                text,
                "collinearity: FAIL edge {} at vertex {}",
                fmt_indices(&faces.edges[v.edge].facets),
                fmt_indices(&faces.vertices[v.vertex].facets)
            );
        }
    }
    let pass = spec.collinearity_violations.is_empty();
    let json = json!({
        "mode": spec.mode.to_string(),
        "character": ints(&spec.character.0),
        "kernel": spec.kernel_source.to_string(),
        "q": spec.q(),
        "target": emb.target,
        "coordinates": entries,
        "raw_edge_characters": spec.edge_characters.iter().map(|e| json!({
            "vertex": labels(&faces.vertices[e.vertex].facets),
            "edge": labels(&faces.edges[e.edge].facets),
            "exponent": ints(&e.exponent.0),
            "degenerate": e.degenerate,
        })).collect::<Vec<_>>(),
        "nonvanishing": emb.nonvanishing.iter().map(|w| json!({
            "vertex": labels(&faces.vertices[w.vertex].facets),
            "entry": w.entry + 1,
        })).collect::<Vec<_>>(),
        "collinearity_violations": spec.collinearity_violations.len(),
        "pass": pass,
    });
    Ok(Output { text, json, pass })
}

fn toric(doc: &Document) -> Result<Output, Failure> {
    let (faces, cm) = setup(doc)?;
    let cert = check_toric(&doc.polytope, &faces, &cm)?;
    let mut text = format!("integral b: {}\n", if cert.integral_b { "yes" } else { "no" });
    match (&cert.b_matrix, &cert.signs) {
        (Some(b), Some(d)) => {
            let _ = writeln!(text, "B: {b}");
            let _ = writeln!(text, "D: diag{}", fmt_vec(d));
        }
        _ => text.push_str("B, D: none\n"),
    }
    if let Some(k) = &cert.character {
        let _ = writeln!(text, "character C^T b: {k}");
    }
    if let Some(k) = &cert.lattice_character {
        let _ = writeln!(text, "character C^T D b: {k}");
    }
    for f in &cert.failures {
        let _ = writeln!(text, "FAIL {f}");
    }
    let mut json = json!({
        "integral_b": cert.integral_b,
        "B": cert.b_matrix.as_ref().map(int_rows),
        "D": cert.signs,
        "character": cert.character.as_ref().map(|k| ints(&k.0)),
        "lattice_character": cert.lattice_character.as_ref().map(|k| ints(&k.0)),
        "failures": cert.failures,
    });
    let mut pass = cert.passes();
    if pass {
        match lattice_embedding_set(&doc.polytope, &faces, &cm) {
            Ok(emb) => {
                let target = assemble_embedding(&emb.spec)?.target;
                let _ = writeln!(text, "q: {}\ntarget: {target}\ncoordinates:", emb.spec.q());
                let mut coords = Vec::new();
                for (i, (e, point)) in emb.spec.entries.iter().zip(&emb.lattice_points).enumerate() {
                    let kind = if e.is_vertex_entry() { "vertex" } else { "edge" };
                    let _ = writeln!(text, "  {} {} {} {kind} point {}", i + 1, e.exponent, fmt_vec(&e.exponent.0), fmt_vec(point));
                    coords.push(json!({
                        "monomial": e.exponent.to_string(),
                        "exponent": ints(&e.exponent.0),
                        "lattice_point": ints(point),
                        "kind": kind,
                    }));
                }
                json["q"] = json!(emb.spec.q());
                json["target"] = json!(target);
                json["coordinates"] = Value::Array(coords);
            }
            Err(e) => {
                pass = false;
                let _ = writeln!(text, "FAIL {e}");
                json["failures"] = json!([e.to_string()]);
            }
        }
    }
    let _ = writeln!(text, "result: {}", if pass { "pass" } else { "fail" });
    json["pass"] = json!(pass);
    Ok(Output { text, json, pass })
}

fn verify(doc: &Document, mode: Option<ModeArg>, character: Option<&str>, config: &VerifyConfig) -> Result<Output, Failure> {
    config.validate()?;
    let (faces, cm) = setup(doc)?;
    let spec = build_spec(doc, &faces, &cm, mode, character)?;
    assemble_embedding(&spec)?;
    let report = run_checks(&doc.polytope, &faces, &cm, &spec, config)?;

    let count = BigRational::from_integer(faces.f0().into());
    let centroid: Vec<BigRational> = (0..faces.n)
        .map(|i| faces.vertices.iter().map(|v| v.coords[i].clone()).sum::<BigRational>() / &count)
        .collect();
    let rank = check_rank(&doc.polytope, &faces, &spec, &centroid)?;

    let mut text = format!(
        "mode: {}\nsamples: {}\nseed: {}\ntol_eq: {:e}\ntol_sep: {:e}\n",
        spec.mode, config.samples, config.seed, config.tol_eq, config.tol_sep
    );
    let summaries = [
        ("equivariance", &report.equivariance),
        ("k-invariance", &report.k_invariance),
        ("modulus", &report.modulus),
        ("nonvanishing", &report.nonvanishing),
    ];
    let mut json = json!({
        "mode": spec.mode.to_string(),
        "samples": config.samples,
        "seed": config.seed,
        "tol_eq": config.tol_eq,
        "tol_sep": config.tol_sep,
    });
    for (name, s) in summaries {
        let _ = writeln!(
            text,
            "{name}: {} checked, {} failed, max deviation {:e}",
            s.checked, s.failures, s.max_deviation
        );
        json[name] = json!({ "checked": s.checked, "failures": s.failures, "max_deviation": s.max_deviation });
    }
    let sep = &report.separation;
    let _ = writeln!(
        text,
        "separation: {} checked, {} failed, {} inconclusive, min distance {:e}",
        sep.checked, sep.failures, sep.inconclusive, sep.min_distance
    );
    json["separation"] = json!({
        "checked": sep.checked,
        "failures": sep.failures,
        "inconclusive": sep.inconclusive,
        "min_distance": sep.min_distance,
        "distinct_base_failures": sep.distinct_base_failures,
    });
    let method = format!("{:?}", rank.method).to_lowercase();
    match &rank.jacobian {
        Some(j) => {
            let _ = writeln!(
                text,
                "rank: {method}, positive definite {}, condition number {:e}{}",
                if j.positive_definite { "yes" } else { "no" },
                j.condition_number,
                rank.fd_relative_error.map(|e| format!(", finite-difference error {e:e}")).unwrap_or_default()
            );
        }
        None => {
            let _ = writeln!(text, "rank: {method}");
        }
    }
    json["rank"] = json!({
        "method": method,
        "positive_definite": rank.jacobian.as_ref().map(|j| j.positive_definite),
        "condition_number": rank.jacobian.as_ref().map(|j| j.condition_number),
        "fd_relative_error": rank.fd_relative_error,
        "pass": rank.passes(),
    });
    for v in &report.violations {
        let _ = writeln!(text, "FAIL {} trial {}: {}", v.check, v.trial, v.detail);
    }
    json["violations"] = Value::Array(
        report
            .violations
            .iter()
            .map(|v| json!({ "check": v.check, "trial": v.trial, "detail": v.detail }))
            .collect(),
    );
    let pass = report.passes() && rank.passes();
    let _ = writeln!(text, "result: {}", if pass { "pass" } else { "fail" });
    json["pass"] = json!(pass);
    Ok(Output { text, json, pass })
}

fn cut(doc: &Document, face: &str, eps: &str) -> Result<Output, Failure> {
    let pair: Vec<usize> = face
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Input(format!("bad --face {face:?}: expected two labels like 1,2")))?;
    let (i, j) = match pair[..] {
        [i, j] if i >= 1 && j >= 1 => (i - 1, j - 1),
        _ => return Err(Failure::Input(format!("bad --face {face:?}: expected two labels like 1,2"))),
    };
    let eps = parse_rational(eps).ok_or_else(|| Failure::Input(format!("bad --eps {eps:?}")))?;
    let r = cut_codim2_face(&doc.polytope, &doc.lambda, i, j, &eps)?;
    let name = format!("{} cut {}", doc.name.as_deref().unwrap_or("polytope"), fmt_indices(&[i, j]));
    let out_doc = Document {
        name: Some(name),
        polytope: r.polytope,
        lambda: r.lambda,
        kernel: None,
        character: None,
    };
    let text = out_doc.render();
    let json = json!({
        "f0": r.faces.f0(),
        "f1": r.faces.f1(),
        "m": r.faces.m,
        "document": text,
    });
    Ok(Output { text, json, pass: true })
}
