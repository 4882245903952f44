use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exponent vector of a monomial in `z_1, ..., z_m` and their conjugates.
///
/// A positive entry `k` at position `i` is the factor `z_i^k`; a negative
/// entry `-k` is `conj(z_i)^k`.
///
/// The text form lists factors in increasing index order, separated by single
/// spaces: `z3 w6^2` means `z_3 conj(z_6)^2`, and `1` is the empty monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<BigInt>);

impl Monomial {
    pub fn one(m: usize) -> Self {
        Monomial(vec![BigInt::zero(); m])
    }

    pub fn from_i64(v: &[i64]) -> Self {
        Monomial(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn exponents(&self) -> &[BigInt] {
        &self.0
    }

    /// Indices with nonzero exponent.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| !self.0[i].is_zero()).collect()
    }

    pub fn negated(&self) -> Self {
        Monomial(self.0.iter().map(|x| -x).collect())
    }

    /// Parses the text form for a monomial in `m` variables.
    pub fn parse(s: &str, m: usize) -> Result<Self> {
        let err = |msg: String| Error::Parse { line: 0, message: msg };
        let s = s.trim();
        let mut exps = vec![BigInt::zero(); m];
        if s == "1" {
            return Ok(Monomial(exps));
        }
        let mut last: Option<usize> = None;
        for term in s.split(' ') {
            let (conj, rest) = match term.as_bytes().first() {
                Some(b'z') => (false, &term[1..]),
                Some(b'w') => (true, &term[1..]),
                _ => return Err(err(format!("bad monomial term {term:?}"))),
            };
            let (idx, pow) = match rest.split_once('^') {
                Some((i, p)) => (i, p),
                None => (rest, "1"),
            };
            let idx: usize = idx
                .parse()
                .map_err(|_| err(format!("bad variable index in {term:?}")))?;
            let pow: BigInt = pow
                .parse()
                .map_err(|_| err(format!("bad power in {term:?}")))?;
            if idx == 0 || idx > m {
                return Err(err(format!("variable index {idx} outside 1..={m}")));
            }
            if !pow.is_positive() || (term.contains('^') && pow.is_one()) {
                return Err(err(format!("power in {term:?} must be an integer above 1")));
            }
            if last.is_some_and(|l| l >= idx) {
                return Err(err(format!("variables must appear in increasing order at {term:?}")));
            }
            last = Some(idx);
            exps[idx - 1] = if conj { -pow } else { pow };
        }
        Ok(Monomial(exps))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, e) in self.0.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let var = if e.is_negative() { 'w' } else { 'z' };
            write!(f, "{var}{}", i + 1)?;
            let k = e.abs();
            if !k.is_one() {
                write!(f, "^{k}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}
