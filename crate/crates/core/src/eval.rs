//! Modular fingerprints of chromatic symmetric functions.
//!
//! `phi_{q,C}` sends `p_i` to `C_i` in `Z/qZ`. Because it is a ring
//! homomorphism, the symmetric function sequence recursion can run entirely
//! on residues, never materialising the polynomial.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::primes::is_prime;
use crate::tree::{root_at, RootedView, Tree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("evaluation tuple has {have} entries, need at least {need}")]
    TupleTooShort { need: usize, have: usize },
    #[error("partition part {part} exceeds the evaluation tuple length {len}")]
    PartExceedsTuple { part: usize, len: usize },
    #[error("truncation level must be at least 1")]
    ZeroTruncation,
    #[error("C_{index} is nonzero beyond the truncation level {k}")]
    NonZeroTail { index: usize, k: usize },
    #[error("evaluation spec has no truncation level")]
    TruncationUnset,
    #[error("malformed evaluation spec: {0}")]
    Malformed(String),
}

/// A prime modulus `q` with a residue tuple `(C_1, ..., C_n)`, optionally
/// marked as truncated at `k` (then `C_j = 0` for every `j > k`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EvalSpec {
    q: u64,
    c: Vec<u64>,
    trunc: Option<usize>,
}

impl EvalSpec {
    /// Residues are reduced mod `q`.
    pub fn new(q: u64, c: Vec<u64>, trunc: Option<usize>) -> Result<Self, EvalError> {
        if !is_prime(q) {
            return Err(EvalError::NotPrime(q));
        }
        let c: Vec<u64> = c.into_iter().map(|x| x % q).collect();
        if let Some(k) = trunc {
            if k == 0 {
                return Err(EvalError::ZeroTruncation);
            }
            if let Some(j) = c.iter().skip(k).position(|&x| x != 0) {
                return Err(EvalError::NonZeroTail { index: k + j + 1, k });
            }
        }
        Ok(EvalSpec { q, c, trunc })
    }

    /// A length-`n` tuple whose first `head.len()` entries are `head` and
    /// the rest zero, truncated at `k = head.len()`.
    pub fn truncated(q: u64, mut head: Vec<u64>, n: usize) -> Result<Self, EvalError> {
        let k = head.len();
        if head.len() < n {
            head.resize(n, 0);
        }
        EvalSpec::new(q, head, Some(k))
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn tuple(&self) -> &[u64] {
        &self.c
    }

    pub fn truncation(&self) -> Option<usize> {
        self.trunc
    }

    /// The same spec without the truncation mark.
    pub fn untruncated(&self) -> EvalSpec {
        EvalSpec { trunc: None, ..self.clone() }
    }

    /// `C_i` for 1-based `i`.
    pub fn coefficient(&self, i: usize) -> Result<u64, EvalError> {
        debug_assert!(i >= 1);
        self.c.get(i - 1).copied().ok_or(EvalError::PartExceedsTuple { part: i, len: self.c.len() })
    }

    fn require_len(&self, n: usize) -> Result<(), EvalError> {
        if self.c.len() < n {
            return Err(EvalError::TupleTooShort { need: n, have: self.c.len() });
        }
        Ok(())
    }
}

/// `q;C_1,C_2,...,C_n`
impl fmt::Display for EvalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", self.q, join_residues(&self.c))
    }
}

impl FromStr for EvalSpec {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (q, c) = s.split_once(';').ok_or_else(|| EvalError::Malformed(format!("missing ';' in {s:?}")))?;
        let q: u64 = q.parse().map_err(|_| EvalError::Malformed(format!("bad modulus {q:?}")))?;
        EvalSpec::new(q, parse_residues(c)?, None)
    }
}

pub(crate) fn join_residues(c: &[u64]) -> String {
    c.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

pub(crate) fn parse_residues(s: &str) -> Result<Vec<u64>, EvalError> {
    s.split(',').map(|x| x.parse::<u64>().map_err(|_| EvalError::Malformed(format!("bad residue {x:?}")))).collect()
}

/// Residues `(r_1, ..., r_d)` of a symmetric function sequence, with the
/// number of modular operations spent producing them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueSeq {
    pub r: Vec<u64>,
    pub opcount: u64,
}

/// Modular arithmetic that tallies additions, multiplications and
/// reductions the way the quadratic operation bound does: a fused
/// `acc + a*b mod q` is three operations.
struct Counted {
    q: u128,
    ops: u64,
}

impl Counted {
    fn mul_add(&mut self, acc: u64, a: u64, b: u64) -> u64 {
        self.ops += 3;
        ((acc as u128 + a as u128 * b as u128) % self.q) as u64
    }

    fn neg(&mut self, x: u64) -> u64 {
        self.ops += 1;
        if x == 0 {
            0
        } else {
            (self.q as u64) - x
        }
    }
}

/// Shared recursion for the full (`limit = None`) and truncated paths.
/// Post-order over the rooted tree with an explicit vertex order, so deep
/// paths do not grow the call stack.
fn residue_sequence(rv: &RootedView<'_>, spec: &EvalSpec, limit: Option<usize>) -> ResidueSeq {
    let n = rv.tree().vertex_count();
    let cap = limit.unwrap_or(usize::MAX);
    let mut arith = Counted { q: spec.q as u128, ops: 0 };
    let mut seqs: Vec<Vec<u64>> = vec![Vec::new(); n];

    for &v in rv.preorder().iter().rev() {
        let mut acc = vec![1u64];
        for &child in rv.children(v) {
            let mut s = std::mem::take(&mut seqs[child]);
            // s_0 = phi(X_child) = sum_j C_j s_j
            let mut s0 = 0;
            for (j, &sj) in s.iter().enumerate() {
                s0 = arith.mul_add(s0, spec.c[j], sj);
            }
            for sj in s.iter_mut() {
                *sj = arith.neg(*sj);
            }
            s.insert(0, s0);

            // acc <- acc * (s_0, -s_1, ..., -s_m), keeping at most `cap` entries
            let len = (acc.len() + s.len() - 1).min(cap);
            let mut next = vec![0u64; len];
            for (j, &a) in acc.iter().enumerate() {
                for (p, &b) in s.iter().enumerate().take(len.saturating_sub(j)) {
                    next[j + p] = arith.mul_add(next[j + p], a, b);
                }
            }
            acc = next;
        }
        acc.truncate(cap);
        seqs[v] = acc;
    }

    ResidueSeq { r: std::mem::take(&mut seqs[rv.root()]), opcount: arith.ops }
}

/// Residues of the symmetric function sequence of `rv` under `spec`.
/// Any truncation mark on `spec` is ignored here.
pub fn eval_sfs(rv: &RootedView<'_>, spec: &EvalSpec) -> Result<ResidueSeq, EvalError> {
    spec.require_len(rv.tree().vertex_count())?;
    Ok(residue_sequence(rv, spec, None))
}

fn combine(r: &[u64], spec: &EvalSpec) -> u64 {
    let q = spec.q as u128;
    r.iter().zip(&spec.c).fold(0u128, |acc, (&ri, &ci)| (acc + ri as u128 * ci as u128) % q) as u64
}

/// `phi_{q,C}(X_T)`, rooted at vertex 0.
pub fn eval_csf(t: &Tree, spec: &EvalSpec) -> Result<u64, EvalError> {
    let rv = root_at(t, 0).expect("vertex 0 exists");
    let seq = eval_sfs(&rv, spec)?;
    Ok(combine(&seq.r, spec))
}

/// Residue sequence of the truncated fast path: only `r_1..r_k` are kept at
/// every level of the recursion.
pub fn eval_sfs_truncated(rv: &RootedView<'_>, spec: &EvalSpec) -> Result<ResidueSeq, EvalError> {
    let k = spec.trunc.ok_or(EvalError::TruncationUnset)?;
    spec.require_len(k.min(rv.tree().vertex_count()))?;
    Ok(residue_sequence(rv, spec, Some(k)))
}

/// Same residue as [`eval_csf`] for a spec with a zero tail beyond `k`, in
/// `O(n k^2)` modular operations instead of `O(n^2)`.
pub fn eval_csf_truncated(t: &Tree, spec: &EvalSpec) -> Result<u64, EvalError> {
    let rv = root_at(t, 0).expect("vertex 0 exists");
    let seq = eval_sfs_truncated(&rv, spec)?;
    Ok(combine(&seq.r, spec))
}

/// Modular operations consumed by [`eval_sfs`].
pub fn count_ops(rv: &RootedView<'_>, spec: &EvalSpec) -> Result<u64, EvalError> {
    Ok(eval_sfs(rv, spec)?.opcount)
}
