use std::collections::BTreeMap;
use std::fmt::Write;

use crate::eval::join_residues;

use super::table::FingerprintTable;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RefinementStatus {
    AllSingletons,
    /// Pairs of tree ids still sharing a class, ascending.
    Unresolved(Vec<(usize, usize)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundSummary {
    pub index: usize,
    pub q: u64,
    /// The nonzero head `C_1..C_k` of the round's tuple.
    pub head: Vec<u64>,
    /// Trees evaluated in this round.
    pub evaluated: usize,
    /// Class size -> number of classes of that size, after this round.
    pub histogram: BTreeMap<usize, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinementReport {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub tree_count: usize,
    pub classes_by_round: Vec<RoundSummary>,
    pub status: RefinementStatus,
}

impl RefinementReport {
    /// Everything in the report is recomputed from the table, so a resumed
    /// run and an uninterrupted one render identically.
    pub fn from_table(table: &FingerprintTable) -> Self {
        let mut classes_by_round = Vec::with_capacity(table.rounds().len());
        for (i, round) in table.rounds().iter().enumerate() {
            let evaluated = (0..table.tree_count()).filter(|&id| table.chain(id).is_some_and(|c| c.len() > i)).count();
            let mut histogram = BTreeMap::new();
            for class in table.classes_after(i + 1) {
                *histogram.entry(class.len()).or_insert(0) += 1;
            }
            classes_by_round.push(RoundSummary {
                index: round.index,
                q: round.spec.modulus(),
                head: round.spec.tuple()[..table.k()].to_vec(),
                evaluated,
                histogram,
            });
        }

        let mut pairs = Vec::new();
        for class in table.classes() {
            for (i, &a) in class.iter().enumerate() {
                for &b in &class[i + 1..] {
                    pairs.push((a, b));
                }
            }
        }
        pairs.sort_unstable();
        let status =
            if pairs.is_empty() { RefinementStatus::AllSingletons } else { RefinementStatus::Unresolved(pairs) };

        RefinementReport {
            n: table.n(),
            k: table.k(),
            seed: table.seed(),
            tree_count: table.tree_count(),
            classes_by_round,
            status,
        }
    }

    pub fn rounds_used(&self) -> usize {
        self.classes_by_round.len()
    }

    pub fn is_resolved(&self) -> bool {
        self.status == RefinementStatus::AllSingletons
    }

    /// Number of classes of size one after the last round (all trees when
    /// no round was needed).
    pub fn singletons(&self) -> usize {
        match self.classes_by_round.last() {
            Some(last) => last.histogram.get(&1).copied().unwrap_or(0),
            None if self.tree_count == 1 => 1,
            None => 0,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "verification of free trees on {} vertices", self.n);
        let _ = writeln!(out, "  truncation k = {}, seed = {}", self.k, self.seed);
        let _ = writeln!(out, "  trees: {}", self.tree_count);
        for r in &self.classes_by_round {
            let classes: usize = r.histogram.values().sum();
            let largest = r.histogram.keys().next_back().copied().unwrap_or(0);
            let _ = writeln!(
                out,
                "  round {}: q={} C=({}) evaluated={} classes={} largest={}",
                r.index,
                r.q,
                join_residues(&r.head),
                r.evaluated,
                classes,
                largest
            );
        }
        match &self.status {
            RefinementStatus::AllSingletons => {
                let _ = writeln!(
                    out,
                    "  result: all {} trees separated after {} round(s)",
                    self.tree_count,
                    self.rounds_used()
                );
            }
            RefinementStatus::Unresolved(pairs) => {
                let _ = writeln!(
                    out,
                    "  result: unresolved after {} round(s), {} colliding pair(s)",
                    self.rounds_used(),
                    pairs.len()
                );
            }
        }
        out
    }

    /// Machine-readable `key=value` lines.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n={}", self.n);
        let _ = writeln!(out, "k={}", self.k);
        let _ = writeln!(out, "seed={}", self.seed);
        let _ = writeln!(out, "trees={}", self.tree_count);
        let _ = writeln!(out, "rounds_used={}", self.rounds_used());
        for r in &self.classes_by_round {
            let hist: Vec<String> = r.histogram.iter().map(|(s, c)| format!("{s}:{c}")).collect();
            let _ = writeln!(out, "round.{}.q={}", r.index, r.q);
            let _ = writeln!(out, "round.{}.c={}", r.index, join_residues(&r.head));
            let _ = writeln!(out, "round.{}.evaluated={}", r.index, r.evaluated);
            let _ = writeln!(out, "round.{}.histogram={}", r.index, hist.join(","));
        }
        let _ = writeln!(out, "singletons={}", self.singletons());
        match &self.status {
            RefinementStatus::AllSingletons => {
                let _ = writeln!(out, "status=all-singletons");
            }
            RefinementStatus::Unresolved(pairs) => {
                let _ = writeln!(out, "status=unresolved");
                let list: Vec<String> = pairs.iter().map(|(a, b)| format!("{a}-{b}")).collect();
                let _ = writeln!(out, "unresolved_pairs={}", list.join(","));
            }
        }
        out
    }

    /// Human-readable summary followed by the `key=value` block.
    pub fn render(&self) -> String {
        format!("{}\n[report]\n{}", self.to_text(), self.to_kv())
    }
}
