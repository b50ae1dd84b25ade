//! Sparse integer polynomials in the power-sum generators `p_1, p_2, ...`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::eval::{EvalError, EvalSpec};
use crate::partition::Partition;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct PPolyParseError {
    pub line: usize,
    pub msg: String,
}

/// `sum_lambda a_lambda p_lambda` with arbitrary-precision coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct PPoly {
    terms: BTreeMap<Partition, BigInt>,
}

impl PPoly {
    pub fn zero() -> Self {
        PPoly::default()
    }

    pub fn one() -> Self {
        PPoly::monomial(Partition::empty(), 1)
    }

    pub fn monomial(lambda: Partition, coeff: impl Into<BigInt>) -> Self {
        let mut out = PPoly::zero();
        out.add_term(lambda, coeff.into());
        out
    }

    /// The generator `p_i`.
    pub fn p(i: u32) -> Self {
        PPoly::monomial(Partition::single(i), 1)
    }

    /// Builds a polynomial from `(coefficient, parts)` pairs; repeated
    /// partitions are summed.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (C, Vec<u32>)>,
        C: Into<BigInt>,
    {
        let mut out = PPoly::zero();
        for (c, parts) in terms {
            let lambda = Partition::from_parts(parts).expect("positive parts");
            out.add_term(lambda, c.into());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, lambda: &Partition) -> Option<&BigInt> {
        self.terms.get(lambda)
    }

    /// Terms in canonical partition order.
    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &BigInt)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, lambda: Partition, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(lambda) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Multiplication by the generator `p_i`.
    pub fn scale_by_p(&self, i: u32) -> PPoly {
        PPoly { terms: self.terms.iter().map(|(l, c)| (l.with_part(i), c.clone())).collect() }
    }

    /// True when every term has partition weight `w`.
    pub fn is_homogeneous(&self, w: u32) -> bool {
        self.terms.keys().all(|l| l.weight() == w)
    }

    /// Sum of absolute values of the coefficients.
    pub fn coefficient_mass(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Keeps only the terms whose parts are all at most `k`.
    pub fn truncate(&self, k: u32) -> PPoly {
        PPoly {
            terms: self.terms.iter().filter(|(l, _)| l.largest() <= k).map(|(l, c)| (l.clone(), c.clone())).collect(),
        }
    }

    /// Image under `p_i -> C_i (mod q)`.
    pub fn eval_mod(&self, spec: &EvalSpec) -> Result<u64, EvalError> {
        let q = spec.modulus();
        let big_q = BigInt::from(q);
        let mut acc: u128 = 0;
        for (lambda, coeff) in &self.terms {
            // `%` truncates toward zero, so shift negatives back into [0, q).
            let reduced = ((coeff % &big_q) + &big_q) % &big_q;
            let mut term = reduced.to_u64().expect("residue below q") as u128;
            for &part in lambda.parts() {
                term = term * spec.coefficient(part as usize)? as u128 % q as u128;
            }
            acc = (acc + term) % q as u128;
        }
        Ok(acc as u64)
    }

    /// Bit-exact text form: `COEFF<TAB>parts` per line in canonical order,
    /// or `0` for the zero polynomial. No trailing newline.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let lines: Vec<String> = self.terms.iter().map(|(l, c)| format!("{c}\t{l}")).collect();
        lines.join("\n")
    }
}

impl fmt::Display for PPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for PPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (l, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*p{l:?}")?;
        }
        Ok(())
    }
}

impl FromStr for PPoly {
    type Err = PPolyParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.strip_suffix('\n').unwrap_or(s);
        if body == "0" {
            return Ok(PPoly::zero());
        }
        let mut out = PPoly::zero();
        let mut previous: Option<Partition> = None;
        for (i, line) in body.split('\n').enumerate() {
            let err = |msg: String| PPolyParseError { line: i + 1, msg };
            let (coeff, parts) = line.split_once('\t').ok_or_else(|| err(format!("missing tab in {line:?}")))?;
            let coeff: BigInt = coeff.parse().map_err(|_| err(format!("bad coefficient {coeff:?}")))?;
            if coeff.is_zero() {
                return Err(err("zero coefficient".into()));
            }
            let lambda: Partition = parts.parse().map_err(|e| err(format!("{e}")))?;
            if previous.as_ref().is_some_and(|p| *p >= lambda) {
                return Err(err("terms out of canonical order".into()));
            }
            previous = Some(lambda.clone());
            out.terms.insert(lambda, coeff);
        }
        Ok(out)
    }
}

impl Add for &PPoly {
    type Output = PPoly;

    fn add(self, rhs: &PPoly) -> PPoly {
        let mut out = self.clone();
        for (l, c) in &rhs.terms {
            out.add_term(l.clone(), c.clone());
        }
        out
    }
}

impl Sub for &PPoly {
    type Output = PPoly;

    fn sub(self, rhs: &PPoly) -> PPoly {
        let mut out = self.clone();
        for (l, c) in &rhs.terms {
            out.add_term(l.clone(), -c);
        }
        out
    }
}

impl Neg for &PPoly {
    type Output = PPoly;

    fn neg(self) -> PPoly {
        PPoly { terms: self.terms.iter().map(|(l, c)| (l.clone(), -c)).collect() }
    }
}

impl Mul for &PPoly {
    type Output = PPoly;

    fn mul(self, rhs: &PPoly) -> PPoly {
        let mut out = PPoly::zero();
        for (la, ca) in &self.terms {
            for (lb, cb) in &rhs.terms {
                out.add_term(la.union(lb), ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for PPoly {
            type Output = PPoly;
            fn $method(self, rhs: PPoly) -> PPoly {
                (&self).$method(&rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for PPoly {
    type Output = PPoly;

    fn neg(self) -> PPoly {
        -&self
    }
}
