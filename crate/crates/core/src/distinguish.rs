//! Randomized proof that two trees have different chromatic symmetric
//! functions.
//!
//! Equal CSFs always give equal residues, so a single `(q, C)` with
//! different residues is a proof of distinctness that anyone can re-check.
//! For distinct CSFs a random tuple over a prime `q` misses with probability
//! at most `n / q`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use crate::eval::{eval_csf, join_residues, parse_residues, EvalError, EvalSpec};
pub use crate::primes::{gen_primes, is_prime, PrimeStream};
use crate::tree::Tree;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DistinguishError {
    #[error("trees have different vertex counts ({0} and {1})")]
    SizeMismatch(usize, usize),
    #[error("accuracy must be at least 1")]
    ZeroAccuracy,
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    ProvedDistinct,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::ProvedDistinct => "proved-distinct",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Outcome of [`show_distinct`]. For a proof, `(q, c)` is the witnessing
/// evaluation; for an inconclusive run it records the last trial. A run that
/// made no trials has `q = 0` and an empty tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinctnessCertificate {
    pub n: usize,
    pub q: u64,
    pub seed: u64,
    pub trial_index: u64,
    pub c: Vec<u64>,
    pub r_s: u64,
    pub r_t: u64,
    pub verdict: Verdict,
}

impl DistinctnessCertificate {
    pub fn is_proved(&self) -> bool {
        self.verdict == Verdict::ProvedDistinct
    }

    pub fn trials_used(&self) -> u64 {
        if self.q == 0 {
            0
        } else {
            self.trial_index + 1
        }
    }
}

/// `n q seed trial_index C_1,...,C_n rS rT verdict`, single spaces.
/// An empty tuple is written as `-`.
impl fmt::Display for DistinctnessCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = if self.c.is_empty() { "-".to_string() } else { join_residues(&self.c) };
        write!(
            f,
            "{} {} {} {} {} {} {} {}",
            self.n,
            self.q,
            self.seed,
            self.trial_index,
            c,
            self.r_s,
            self.r_t,
            self.verdict.as_str()
        )
    }
}

impl FromStr for DistinctnessCertificate {
    type Err = DistinguishError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |msg: &str| DistinguishError::MalformedCertificate(msg.to_string());
        let line = s.strip_suffix('\n').unwrap_or(s);
        let fields: Vec<&str> = line.split(' ').collect();
        if fields.len() != 8 {
            return Err(bad("expected 8 space-separated fields"));
        }
        let num = |i: usize, name: &str| -> Result<u64, DistinguishError> {
            fields[i].parse().map_err(|_| bad(&format!("bad {name} {:?}", fields[i])))
        };
        let c =
            if fields[4] == "-" { Vec::new() } else { parse_residues(fields[4]).map_err(|e| bad(&e.to_string()))? };
        let verdict = match fields[7] {
            "proved-distinct" => Verdict::ProvedDistinct,
            "inconclusive" => Verdict::Inconclusive,
            other => return Err(bad(&format!("unknown verdict {other:?}"))),
        };
        Ok(DistinctnessCertificate {
            n: num(0, "n")? as usize,
            q: num(1, "q")?,
            seed: num(2, "seed")?,
            trial_index: num(3, "trial index")?,
            c,
            r_s: num(5, "rS")?,
            r_t: num(6, "rT")?,
            verdict,
        })
    }
}

/// Trials per prime, `max(1, floor(k / log2(max(n, 2))))`.
pub fn trials_per_prime(n: usize, k: u32) -> u64 {
    let bits = (n.max(2) as f64).log2();
    ((k as f64 / bits).floor() as u64).max(1)
}

/// The random generator behind every sampled tuple: ChaCha20 keyed by the
/// seed (via `SeedableRng::seed_from_u64`), so streams are identical on
/// every platform.
pub fn seeded_rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// `n` independent uniform residues in `[0, q)`.
pub fn sample_tuple<R: Rng + ?Sized>(n: usize, q: u64, rng: &mut R) -> Vec<u64> {
    (0..n).map(|_| rng.random_range(0..q)).collect()
}

/// Tries to prove `X_S != X_T`. Up to `n` primes starting from `n^2`, with
/// [`trials_per_prime`] random tuples each; stops at the first tuple whose
/// residues differ.
pub fn show_distinct(s: &Tree, t: &Tree, k: u32, seed: u64) -> Result<DistinctnessCertificate, DistinguishError> {
    let n = s.vertex_count();
    if t.vertex_count() != n {
        return Err(DistinguishError::SizeMismatch(n, t.vertex_count()));
    }
    if k == 0 {
        return Err(DistinguishError::ZeroAccuracy);
    }
    let mut cert = DistinctnessCertificate {
        n,
        q: 0,
        seed,
        trial_index: 0,
        c: Vec::new(),
        r_s: 0,
        r_t: 0,
        verdict: Verdict::Inconclusive,
    };
    // Both trees are the single vertex.
    if n == 1 {
        return Ok(cert);
    }

    let mut rng = seeded_rng(seed);
    let per_prime = trials_per_prime(n, k);
    let mut trial = 0u64;
    for q in gen_primes(n, n).into_vec() {
        for _ in 0..per_prime {
            let c = sample_tuple(n, q, &mut rng);
            let spec = EvalSpec::new(q, c, None)?;
            let r_s = eval_csf(s, &spec)?;
            let r_t = eval_csf(t, &spec)?;
            cert.q = q;
            cert.trial_index = trial;
            cert.r_s = r_s;
            cert.r_t = r_t;
            cert.c = spec.tuple().to_vec();
            if r_s != r_t {
                cert.verdict = Verdict::ProvedDistinct;
                return Ok(cert);
            }
            trial += 1;
        }
    }
    Ok(cert)
}

/// Re-evaluates both trees at the certificate's `(q, C)`. True iff the
/// residues differ and match the recorded ones.
pub fn verify_certificate(s: &Tree, t: &Tree, cert: &DistinctnessCertificate) -> Result<bool, DistinguishError> {
    let bad = |msg: String| DistinguishError::MalformedCertificate(msg);
    if !cert.is_proved() {
        return Err(bad("certificate does not claim a proof".into()));
    }
    if s.vertex_count() != t.vertex_count() {
        return Err(DistinguishError::SizeMismatch(s.vertex_count(), t.vertex_count()));
    }
    if cert.n != s.vertex_count() {
        return Err(bad(format!("certificate is for n={}, trees have n={}", cert.n, s.vertex_count())));
    }
    if cert.c.len() != cert.n {
        return Err(bad(format!("tuple has {} entries, expected {}", cert.c.len(), cert.n)));
    }
    if cert.c.iter().any(|&x| x >= cert.q) {
        return Err(bad("tuple entry not reduced mod q".into()));
    }
    let spec = EvalSpec::new(cert.q, cert.c.clone(), None)?;
    let r_s = eval_csf(s, &spec)?;
    let r_t = eval_csf(t, &spec)?;
    Ok(r_s != r_t && r_s == cert.r_s && r_t == cert.r_t)
}
