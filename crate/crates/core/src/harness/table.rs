//! Fingerprint table: per-tree residue chains plus the round specs that
//! produced them, with a versioned, checksummed text format.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::eval::{join_residues, parse_residues, EvalSpec};

use super::{HarnessError, RoundSpec};

const VERSION: &str = "csfv1";

/// Residue chains keyed by tree id (position in enumeration order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FingerprintTable {
    n: usize,
    k: usize,
    seed: u64,
    rounds: Vec<RoundSpec>,
    chains: Vec<Vec<u64>>,
}

impl FingerprintTable {
    pub fn new(n: usize, k: usize, seed: u64, tree_count: usize) -> Self {
        FingerprintTable { n, k, seed, rounds: Vec::new(), chains: vec![Vec::new(); tree_count] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rounds(&self) -> &[RoundSpec] {
        &self.rounds
    }

    pub fn tree_count(&self) -> usize {
        self.chains.len()
    }

    pub fn chain(&self, id: usize) -> Option<&[u64]> {
        self.chains.get(id).map(Vec::as_slice)
    }

    pub(crate) fn push_round(&mut self, round: RoundSpec) {
        debug_assert_eq!(round.index, self.rounds.len() + 1);
        self.rounds.push(round);
    }

    pub(crate) fn append(&mut self, id: usize, residue: u64) {
        self.chains[id].push(residue);
    }

    /// Equivalence classes after `round` rounds (trees grouped by the first
    /// `round` residues of their chains), each sorted, ordered by first id.
    pub fn classes_after(&self, round: usize) -> Vec<Vec<usize>> {
        let mut by_key: HashMap<&[u64], usize> = HashMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (id, chain) in self.chains.iter().enumerate() {
            let key = &chain[..chain.len().min(round)];
            let slot = *by_key.entry(key).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[slot].push(id);
        }
        classes
    }

    /// Classes under the full residue chains.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        self.classes_after(self.rounds.len())
    }

    /// Ids that belong to a class of size at least 2.
    pub fn unresolved_ids(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = self.classes().into_iter().filter(|c| c.len() > 1).flatten().collect();
        ids.sort_unstable();
        ids
    }

    /// Checks that each round was applied to exactly the trees whose class
    /// was still shared going into it.
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::InvalidTable(msg));
        if let Some(id) = self.chains.iter().position(|c| c.len() > self.rounds.len()) {
            return bad(format!("tree {id} has more residues than rounds"));
        }
        for (i, round) in self.rounds.iter().enumerate() {
            if round.index != i + 1 {
                return bad(format!("round {} listed in position {}", round.index, i + 1));
            }
            if round.spec.truncation() != Some(self.k) {
                return bad(format!("round {} is not truncated at k={}", round.index, self.k));
            }
            if round.spec.tuple().len() != self.n {
                return bad(format!("round {} tuple length differs from n", round.index));
            }
            for class in self.classes_after(i) {
                let shared = class.len() > 1;
                for id in class {
                    let refined = self.chains[id].len() > i;
                    if shared != refined {
                        return bad(format!(
                            "tree {id}: round {} {} but its class had {} member(s)",
                            i + 1,
                            if refined { "applied" } else { "skipped" },
                            if shared { "several" } else { "one" }
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn body(&self) -> String {
        let mut out = String::new();
        out.push_str(VERSION);
        out.push('\n');
        out.push_str(&format!("n={}\nk={}\nseed={}\n", self.n, self.k, self.seed));
        for round in &self.rounds {
            out.push_str(&format!(
                "round={} q={} C={}\n",
                round.index,
                round.spec.modulus(),
                join_residues(round.spec.tuple())
            ));
        }
        for (id, chain) in self.chains.iter().enumerate() {
            out.push_str(&id.to_string());
            for r in chain {
                out.push(' ');
                out.push_str(&r.to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let body = self.body();
        let crc = crc32fast::hash(body.as_bytes());
        format!("{body}crc={crc:08x}\n")
    }

    pub fn from_text(text: &str) -> Result<Self, HarnessError> {
        let trunc = |msg: &str| HarnessError::Truncated(msg.to_string());
        let malformed = |line: usize, msg: String| HarnessError::Malformed { line, msg };

        let first = text.lines().next().ok_or_else(|| trunc("empty file"))?;
        if first != VERSION {
            return Err(HarnessError::Version(first.to_string()));
        }
        if !text.ends_with('\n') {
            return Err(trunc("missing final newline"));
        }
        let body_end = text
            .rfind("crc=")
            .filter(|&i| i == 0 || text.as_bytes()[i - 1] == b'\n')
            .ok_or_else(|| trunc("missing checksum line"))?;
        let (body, crc_line) = text.split_at(body_end);
        let stored = crc_line
            .trim_end_matches('\n')
            .strip_prefix("crc=")
            .and_then(|h| u32::from_str_radix(h, 16).ok())
            .ok_or_else(|| trunc("unreadable checksum line"))?;
        if crc32fast::hash(body.as_bytes()) != stored {
            return Err(HarnessError::Checksum);
        }

        let mut lines = body.lines().enumerate().map(|(i, l)| (i + 1, l)).skip(1);
        let mut header = |key: &str| -> Result<u64, HarnessError> {
            let (line, raw) = lines.next().ok_or_else(|| trunc("header cut short"))?;
            raw.strip_prefix(key)
                .and_then(|v| v.strip_prefix('='))
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| malformed(line, format!("expected {key}=<value>, found {raw:?}")))
        };
        let n = header("n")? as usize;
        let k = header("k")? as usize;
        let seed = header("seed")?;
        if n == 0 || k == 0 || k > n {
            return Err(malformed(2, format!("invalid n={n} k={k}")));
        }

        let mut table = FingerprintTable::new(n, k, seed, 0);
        for (line, raw) in lines {
            if let Some(rest) = raw.strip_prefix("round=") {
                if !table.chains.is_empty() {
                    return Err(malformed(line, "round line after tree lines".into()));
                }
                let parsed = parse_round(rest, k).map_err(|msg| malformed(line, msg))?;
                table.rounds.push(parsed);
                continue;
            }
            let mut fields = raw.split(' ');
            let id: usize = fields
                .next()
                .and_then(|f| f.parse().ok())
                .ok_or_else(|| malformed(line, format!("bad tree line {raw:?}")))?;
            if id != table.chains.len() {
                return Err(malformed(line, format!("expected tree id {}, found {id}", table.chains.len())));
            }
            let chain = fields
                .map(|f| f.parse::<u64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| malformed(line, format!("bad residue in {raw:?}")))?;
            table.chains.push(chain);
        }
        table.validate()?;
        Ok(table)
    }

    /// Writes atomically via a temporary file in the same directory.
    pub fn save(&self, path: &Path) -> Result<(), HarnessError> {
        let tmp = path.with_extension("tmp");
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(self.to_text().as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        FingerprintTable::from_text(&fs::read_to_string(path)?)
    }
}

fn parse_round(rest: &str, k: usize) -> Result<RoundSpec, String> {
    let mut parts = rest.split(' ');
    let index: usize = parts.next().and_then(|v| v.parse().ok()).ok_or("bad round index")?;
    let q: u64 = parts.next().and_then(|v| v.strip_prefix("q=")).and_then(|v| v.parse().ok()).ok_or("bad modulus")?;
    let c = parts
        .next()
        .and_then(|v| v.strip_prefix("C="))
        .ok_or("missing tuple")
        .and_then(|v| parse_residues(v).map_err(|_| "bad tuple"))?;
    if parts.next().is_some() {
        return Err("trailing data on round line".into());
    }
    let spec = EvalSpec::new(q, c, Some(k)).map_err(|e| e.to_string())?;
    Ok(RoundSpec { index, spec })
}
