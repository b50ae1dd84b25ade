use crate::enumerate::enumerate_free_trees;
use crate::exact::{compute_csf, truncate_csf};
use crate::tree::Tree;

use super::report::{RefinementReport, RefinementStatus};
use super::table::FingerprintTable;
use super::HarnessError;

/// Largest tree size for which colliding pairs are checked exactly.
pub const AUDIT_EXACT_LIMIT: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CollisionKind {
    /// The exact truncated functions agree.
    GenuineEquality,
    /// The exact truncated functions differ; another round will split them.
    FingerprintCoincidence,
    /// Too large for the exact path.
    Unverifiable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairAudit {
    pub a: usize,
    pub b: usize,
    pub kind: CollisionKind,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuditResult {
    pub pairs: Vec<PairAudit>,
}

impl AuditResult {
    pub fn genuine(&self) -> impl Iterator<Item = &PairAudit> {
        self.pairs.iter().filter(|p| p.kind == CollisionKind::GenuineEquality)
    }
}

/// Audits the unresolved pairs of a harness run, regenerating the trees by
/// enumeration.
pub fn collision_audit(report: &RefinementReport, table: &FingerprintTable) -> Result<AuditResult, HarnessError> {
    let RefinementStatus::Unresolved(pairs) = &report.status else {
        return Ok(AuditResult::default());
    };
    if table.n() > AUDIT_EXACT_LIMIT {
        return Ok(unverifiable(pairs));
    }
    let trees: Vec<Tree> = enumerate_free_trees(table.n()).map(|s| s.to_tree()).collect();
    collision_audit_with(report, table, &trees)
}

/// Audits unresolved pairs against an explicit tree list indexed by id.
pub fn collision_audit_with(
    report: &RefinementReport,
    table: &FingerprintTable,
    trees: &[Tree],
) -> Result<AuditResult, HarnessError> {
    let RefinementStatus::Unresolved(pairs) = &report.status else {
        return Ok(AuditResult::default());
    };
    if table.n() > AUDIT_EXACT_LIMIT {
        return Ok(unverifiable(pairs));
    }
    let k = table.k() as u32;
    let mut cache = std::collections::HashMap::new();
    let mut truncated = |id: usize| -> Result<_, HarnessError> {
        if let std::collections::hash_map::Entry::Vacant(slot) = cache.entry(id) {
            let tree = trees.get(id).ok_or(HarnessError::UnknownTree(id))?;
            slot.insert(truncate_csf(&compute_csf(tree), k));
        }
        Ok(cache[&id].clone())
    };
    let mut out = Vec::with_capacity(pairs.len());
    for &(a, b) in pairs {
        let kind = if truncated(a)? == truncated(b)? {
            CollisionKind::GenuineEquality
        } else {
            CollisionKind::FingerprintCoincidence
        };
        out.push(PairAudit { a, b, kind });
    }
    Ok(AuditResult { pairs: out })
}

fn unverifiable(pairs: &[(usize, usize)]) -> AuditResult {
    AuditResult { pairs: pairs.iter().map(|&(a, b)| PairAudit { a, b, kind: CollisionKind::Unverifiable }).collect() }
}
