//! Exhaustive check that the truncated chromatic symmetric function
//! separates every free tree on `n` vertices.
//!
//! Round 1 fingerprints every tree under one random truncated evaluation
//! and buckets by residue. Each later round draws a new evaluation and
//! applies it only to trees whose class still has company, until every
//! class is a singleton or the round budget runs out. Trees are streamed
//! from the enumerator each round instead of being stored.

mod audit;
mod report;
mod table;

use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::distinguish::{gen_primes, sample_tuple};
use crate::enumerate::{checked_free_tree_count, enumerate_free_trees, LevelSequence};
use crate::eval::{eval_csf_truncated, EvalError, EvalSpec};
use crate::tree::Tree;

pub use audit::{collision_audit, collision_audit_with, AuditResult, CollisionKind, PairAudit, AUDIT_EXACT_LIMIT};
pub use report::{RefinementReport, RefinementStatus, RoundSummary};
pub use table::FingerprintTable;

/// Default ceiling on the number of trees a run will enumerate.
pub const DEFAULT_TREE_CAP: u128 = 10_000_000;

const BATCH: usize = 4096;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("{count} free trees on {n} vertices exceeds the cap of {cap}")]
    TooManyTrees { n: usize, count: u128, cap: u128 },
    #[error("unknown tree id {0}")]
    UnknownTree(usize),
    #[error("refinement needs a class of at least two trees")]
    SingletonClass,
    #[error("round {got} cannot be applied after {have} round(s)")]
    RoundOutOfOrder { got: usize, have: usize },
    #[error("table format version {0:?} is not supported")]
    Version(String),
    #[error("table checksum mismatch")]
    Checksum,
    #[error("table file is truncated: {0}")]
    Truncated(String),
    #[error("table line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("inconsistent table: {0}")]
    InvalidTable(String),
    #[error("saved table does not match this run: {0}")]
    ResumeMismatch(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One refinement round: its 1-based index and a truncated evaluation spec
/// whose tuple is `(x_1, ..., x_k, 0, ..., 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundSpec {
    pub index: usize,
    pub spec: EvalSpec,
}

/// Spec for round `index` of the run `(n, k, seed)`.
///
/// Primes cycle through the first `n` primes from `n^2`; tuples come from a
/// ChaCha20 stream keyed by `seed` and selected by the round index. A draw
/// that repeats an earlier round's `(q, C)` is discarded.
pub fn round_spec(n: usize, k: usize, seed: u64, index: usize) -> RoundSpec {
    round_schedule(n, k, seed, index).pop().expect("index >= 1")
}

/// Specs for rounds `1..=count`.
pub fn round_schedule(n: usize, k: usize, seed: u64, count: usize) -> Vec<RoundSpec> {
    assert!(k >= 1 && k <= n);
    let primes = gen_primes(n, n).into_vec();
    let mut out: Vec<RoundSpec> = Vec::with_capacity(count);
    for index in 1..=count {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(index as u64);
        let q = primes[(index - 1) % primes.len()];
        let spec = loop {
            let head = sample_tuple(k, q, &mut rng);
            let spec = EvalSpec::truncated(q, head, n).expect("q is prime");
            if out.iter().all(|r| r.spec != spec) {
                break spec;
            }
        };
        out.push(RoundSpec { index, spec });
    }
    out
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub max_rounds: usize,
    /// `None` disables the tree-count guard.
    pub tree_cap: Option<u128>,
    /// Worker threads for fingerprinting; 0 uses the global pool.
    pub threads: usize,
    /// Table file rewritten after every round.
    pub checkpoint: Option<PathBuf>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { max_rounds: 64, tree_cap: Some(DEFAULT_TREE_CAP), threads: 0, checkpoint: None }
    }
}

pub struct Verification {
    pub report: RefinementReport,
    pub table: FingerprintTable,
}

fn check_parameters(n: usize, k: usize, opts: &VerifyOptions) -> Result<usize, HarnessError> {
    if n == 0 {
        return Err(HarnessError::InvalidParameters("n must be at least 1".into()));
    }
    if k == 0 || k > n {
        return Err(HarnessError::InvalidParameters(format!("truncation k={k} must lie in 1..={n}")));
    }
    let count = checked_free_tree_count(n).unwrap_or(u128::MAX);
    if let Some(cap) = opts.tree_cap {
        if count > cap {
            return Err(HarnessError::TooManyTrees { n, count, cap });
        }
    }
    usize::try_from(count).map_err(|_| HarnessError::InvalidParameters(format!("{count} trees do not fit in memory")))
}

/// Runs the refinement pipeline from scratch.
pub fn run_verification(n: usize, k: usize, seed: u64, opts: &VerifyOptions) -> Result<Verification, HarnessError> {
    let count = check_parameters(n, k, opts)?;
    drive(FingerprintTable::new(n, k, seed, count), opts)
}

/// Continues a run from a saved table. The table must come from the same
/// `(n, k, seed)`; its round specs are regenerated and compared.
pub fn resume_verification(table: FingerprintTable, opts: &VerifyOptions) -> Result<Verification, HarnessError> {
    let count = check_parameters(table.n(), table.k(), opts)?;
    if table.tree_count() != count {
        return Err(HarnessError::ResumeMismatch(format!(
            "table lists {} trees, enumeration yields {count}",
            table.tree_count()
        )));
    }
    let schedule = round_schedule(table.n(), table.k(), table.seed(), table.rounds().len());
    for (round, expected) in table.rounds().iter().zip(&schedule) {
        if round != expected {
            return Err(HarnessError::ResumeMismatch(format!(
                "round {} differs from the seeded schedule",
                round.index
            )));
        }
    }
    drive(table, opts)
}

fn drive(mut table: FingerprintTable, opts: &VerifyOptions) -> Result<Verification, HarnessError> {
    let pool = if opts.threads > 0 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(opts.threads)
                .build()
                .map_err(|e| HarnessError::InvalidParameters(e.to_string()))?,
        )
    } else {
        None
    };

    while table.rounds().len() < opts.max_rounds {
        let active = table.unresolved_ids();
        if active.is_empty() {
            break;
        }
        let round = round_spec(table.n(), table.k(), table.seed(), table.rounds().len() + 1);
        let residues = match &pool {
            Some(pool) => pool.install(|| fingerprint(table.n(), &active, &round.spec)),
            None => fingerprint(table.n(), &active, &round.spec),
        }?;
        for (id, r) in residues {
            table.append(id, r);
        }
        table.push_round(round);
        if let Some(path) = &opts.checkpoint {
            table.save(path)?;
        }
    }
    if let Some(path) = &opts.checkpoint {
        table.save(path)?;
    }

    let report = RefinementReport::from_table(&table);
    Ok(Verification { report, table })
}

/// Residues of the trees in `ids` (ascending), re-streamed from the
/// enumerator and evaluated in parallel batches. Output is in id order.
fn fingerprint(n: usize, ids: &[usize], spec: &EvalSpec) -> Result<Vec<(usize, u64)>, HarnessError> {
    let mut wanted = ids.iter().copied().peekable();
    let mut out = Vec::with_capacity(ids.len());
    let mut batch: Vec<(usize, LevelSequence)> = Vec::with_capacity(BATCH);
    let flush = |batch: &mut Vec<(usize, LevelSequence)>, out: &mut Vec<(usize, u64)>| {
        let done: Result<Vec<(usize, u64)>, EvalError> =
            batch.par_iter().map(|(id, seq)| Ok((*id, eval_csf_truncated(&seq.to_tree(), spec)?))).collect();
        batch.clear();
        out.extend(done?);
        Ok::<(), HarnessError>(())
    };
    for (id, seq) in enumerate_free_trees(n).enumerate() {
        let Some(&next) = wanted.peek() else { break };
        if id != next {
            continue;
        }
        wanted.next();
        batch.push((id, seq));
        if batch.len() == BATCH {
            flush(&mut batch, &mut out)?;
        }
    }
    flush(&mut batch, &mut out)?;
    if let Some(id) = wanted.next() {
        return Err(HarnessError::UnknownTree(id));
    }
    Ok(out)
}

/// Splits one class by a new evaluation, appending each member's residue to
/// its chain. `trees[id]` is the tree with that id. Returns the sub-classes
/// ordered by smallest member.
pub fn refine_class(
    class: &[usize],
    trees: &[Tree],
    table: &mut FingerprintTable,
    round: &RoundSpec,
) -> Result<Vec<Vec<usize>>, HarnessError> {
    if class.len() < 2 {
        return Err(HarnessError::SingletonClass);
    }
    let have = table.rounds().len();
    if round.index != have && round.index != have + 1 {
        return Err(HarnessError::RoundOutOfOrder { got: round.index, have });
    }
    if round.index == have && table.rounds()[have - 1] != *round {
        return Err(HarnessError::RoundOutOfOrder { got: round.index, have });
    }
    if round.spec.truncation() != Some(table.k()) {
        return Err(HarnessError::InvalidParameters(format!("round spec must be truncated at k={}", table.k())));
    }
    let mut residues = Vec::with_capacity(class.len());
    for &id in class {
        let tree = trees.get(id).ok_or(HarnessError::UnknownTree(id))?;
        let chain = table.chain(id).ok_or(HarnessError::UnknownTree(id))?;
        if chain.len() != round.index - 1 {
            return Err(HarnessError::InvalidTable(format!(
                "tree {id} has {} residue(s), expected {}",
                chain.len(),
                round.index - 1
            )));
        }
        residues.push((id, eval_csf_truncated(tree, &round.spec)?));
    }

    if round.index == have + 1 {
        table.push_round(round.clone());
    }
    let mut groups: Vec<(u64, Vec<usize>)> = Vec::new();
    for (id, r) in residues {
        table.append(id, r);
        match groups.iter_mut().find(|(key, _)| *key == r) {
            Some((_, g)) => g.push(id),
            None => groups.push((r, vec![id])),
        }
    }
    let mut out: Vec<Vec<usize>> = groups
        .into_iter()
        .map(|(_, mut g)| {
            g.sort_unstable();
            g
        })
        .collect();
    out.sort_unstable_by_key(|g| g[0]);
    Ok(out)
}
