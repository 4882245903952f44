//! Text format for `(P, Λ)` data.
//!
//! Each entry is `key: value` where the value is JSON and may continue over
//! several lines until its brackets balance. Lines starting with `#` are
//! comments. Rationals are strings `"p/q"`; integers may be numbers or
//! strings.
//!
//! ```text
//! name: "segment"
//! n: 1
//! m: 2
//! A: [
//!   [1],
//!   [-1]
//! ]
//! b: [0, 1]
//! Lambda: [[1, -1]]
//! ```

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::Value;

use crate::chardata::Character;
use crate::error::{Error, Result};
use crate::exactlin::{parse_rational, IntMatrix, RatMatrix};
use crate::models::Model;
use crate::polytope::HPolytope;

const KEYS: [&str; 8] = ["name", "n", "m", "A", "b", "Lambda", "C", "character"];

#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub name: Option<String>,
    pub polytope: HPolytope,
    pub lambda: IntMatrix,
    pub kernel: Option<IntMatrix>,
    pub character: Option<Character>,
}

impl Document {
    pub fn from_model(model: &Model) -> Self {
        Document {
            name: Some(model.name.clone()),
            polytope: model.polytope.clone(),
            lambda: model.lambda.clone(),
            kernel: model.kernel.clone(),
            character: None,
        }
    }

    pub fn model(&self) -> Model {
        Model {
            name: self.name.clone().unwrap_or_default(),
            polytope: self.polytope.clone(),
            lambda: self.lambda.clone(),
            kernel: self.kernel.clone(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let entries = split_entries(text)?;
        let get = |k: &str| entries.get(k);
        let need = |k: &str| get(k).ok_or_else(|| parse_err(0, format!("missing key {k:?}")));

        let name = match get("name") {
            Some((line, v)) => Some(
                v.as_str()
                    .ok_or_else(|| parse_err(*line, "name must be a string".into()))?
                    .to_string(),
            ),
            None => None,
        };
        let (nl, nv) = need("n")?;
        let n = count(*nl, nv)?;
        let (ml, mv) = need("m")?;
        let m = count(*ml, mv)?;

        let (al, av) = need("A")?;
        let a_rows = rational_matrix(*al, av, m, n, "A")?;
        let (bl, bv) = need("b")?;
        let b = rational_vector(*bl, bv, m, "b")?;
        let (ll, lv) = need("Lambda")?;
        let lambda = integer_matrix(*ll, lv, n, m, "Lambda")?;
        let kernel = match get("C") {
            Some((line, v)) => {
                let rows = v.as_array().map_or(0, Vec::len);
                if rows != m {
                    return Err(parse_err(*line, format!("C must have {m} rows, found {rows}")));
                }
                let cols = m.checked_sub(n).ok_or_else(|| parse_err(*line, "m < n".into()))?;
                Some(integer_matrix(*line, v, m, cols, "C")?)
            }
            None => None,
        };
        let character = match get("character") {
            Some((line, v)) => {
                let len = m.checked_sub(n).ok_or_else(|| parse_err(*line, "m < n".into()))?;
                Some(Character(integer_vector(*line, v, len, "character")?))
            }
            None => None,
        };
        let polytope = HPolytope::new(RatMatrix::from_rows(&a_rows, n)?, b)?;
        Ok(Document {
            name,
            polytope,
            lambda,
            kernel,
            character,
        })
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.name {
            out.push_str(&format!("name: {}\n", Value::String(name.clone())));
        }
        out.push_str(&format!("n: {}\nm: {}\n", self.polytope.n(), self.polytope.m()));
        let a: Vec<Vec<Value>> = self.polytope.a().to_rows().iter().map(|r| r.iter().map(rational_value).collect()).collect();
        out.push_str(&render_matrix("A", &a));
        let b: Vec<Value> = self.polytope.b().iter().map(rational_value).collect();
        out.push_str(&format!("b: {}\n", render_row(&b)));
        out.push_str(&render_matrix("Lambda", &integer_rows(&self.lambda)));
        if let Some(c) = &self.kernel {
            out.push_str(&render_matrix("C", &integer_rows(c)));
        }
        if let Some(k) = &self.character {
            let row: Vec<Value> = k.0.iter().map(integer_value).collect();
            out.push_str(&format!("character: {}\n", render_row(&row)));
        }
        out
    }
}

fn parse_err(line: usize, message: String) -> Error {
    Error::Parse { line, message }
}

fn split_entries(text: &str) -> Result<BTreeMap<String, (usize, Value)>> {
    let mut out = BTreeMap::new();
    let mut lines = text.lines().enumerate().peekable();
    while let Some((i, raw)) = lines.next() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| parse_err(i + 1, format!("expected `key: value`, got {line:?}")))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(parse_err(i + 1, format!("unknown key {key:?}")));
        }
        let mut buf = rest.trim().to_string();
        while depth(&buf) > 0 {
            let (_, next) = lines
                .next()
                .ok_or_else(|| parse_err(i + 1, format!("unterminated value for {key:?}")))?;
            let next = next.trim();
            if next.starts_with('#') {
                continue;
            }
            buf.push(' ');
            buf.push_str(next);
        }
        let value: Value = serde_json::from_str(&buf).map_err(|e| parse_err(i + 1, format!("{key}: {e}")))?;
        if out.insert(key.to_string(), (i + 1, value)).is_some() {
            return Err(parse_err(i + 1, format!("duplicate key {key:?}")));
        }
    }
    Ok(out)
}

fn depth(s: &str) -> i64 {
    let mut d = 0;
    let mut in_str = false;
    for c in s.chars() {
        match c {
            '"' => in_str = !in_str,
            '[' | '{' if !in_str => d += 1,
            ']' | '}' if !in_str => d -= 1,
            _ => {}
        }
    }
    d
}

fn count(line: usize, v: &Value) -> Result<usize> {
    v.as_u64()
        .filter(|&x| x > 0)
        .map(|x| x as usize)
        .ok_or_else(|| parse_err(line, format!("expected a positive integer, got {v}")))
}

fn rational(line: usize, v: &Value, what: &str) -> Result<BigRational> {
    match v {
        Value::Number(x) => x
            .as_i64()
            .map(|i| BigRational::from_integer(i.into()))
            .ok_or_else(|| parse_err(line, format!("{what}: {x} is not an integer; write fractions as \"p/q\""))),
        Value::String(s) => parse_rational(s).ok_or_else(|| parse_err(line, format!("{what}: bad rational {s:?}"))),
        _ => Err(parse_err(line, format!("{what}: expected a number, got {v}"))),
    }
}

fn integer(line: usize, v: &Value, what: &str) -> Result<BigInt> {
    let r = rational(line, v, what)?;
    if !r.is_integer() {
        return Err(parse_err(line, format!("{what}: {r} is not an integer")));
    }
    Ok(r.to_integer())
}

fn array<'a>(line: usize, v: &'a Value, len: usize, what: &str) -> Result<&'a Vec<Value>> {
    let arr = v
        .as_array()
        .ok_or_else(|| parse_err(line, format!("{what}: expected an array")))?;
    if arr.len() != len {
        return Err(parse_err(line, format!("{what}: expected {len} entries, found {}", arr.len())));
    }
    Ok(arr)
}

fn rational_vector(line: usize, v: &Value, len: usize, what: &str) -> Result<Vec<BigRational>> {
    array(line, v, len, what)?.iter().map(|x| rational(line, x, what)).collect()
}

fn integer_vector(line: usize, v: &Value, len: usize, what: &str) -> Result<Vec<BigInt>> {
    array(line, v, len, what)?.iter().map(|x| integer(line, x, what)).collect()
}

fn rational_matrix(line: usize, v: &Value, rows: usize, cols: usize, what: &str) -> Result<Vec<Vec<BigRational>>> {
    array(line, v, rows, what)?
        .iter()
        .map(|r| rational_vector(line, r, cols, what))
        .collect()
}

fn integer_matrix(line: usize, v: &Value, rows: usize, cols: usize, what: &str) -> Result<IntMatrix> {
    let data: Vec<Vec<BigInt>> = array(line, v, rows, what)?
        .iter()
        .map(|r| integer_vector(line, r, cols, what))
        .collect::<Result<_>>()?;
    IntMatrix::from_big_rows(&data, cols)
}

pub fn integer_value(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(i) => Value::from(i),
        None => Value::String(x.to_string()),
    }
}

pub fn rational_value(x: &BigRational) -> Value {
    if x.is_integer() {
        integer_value(&x.to_integer())
    } else {
        Value::String(x.to_string())
    }
}

fn integer_rows(m: &IntMatrix) -> Vec<Vec<Value>> {
    m.to_rows().iter().map(|r| r.iter().map(integer_value).collect()).collect()
}

fn render_row(row: &[Value]) -> String {
    format!("[{}]", row.iter().map(Value::to_string).collect::<Vec<_>>().join(", "))
}

fn render_matrix(key: &str, rows: &[Vec<Value>]) -> String {
    let mut out = format!("{key}: [\n");
    for (i, r) in rows.iter().enumerate() {
        out.push_str("  ");
        out.push_str(&render_row(r));
        if i + 1 < rows.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("]\n");
    out
}
