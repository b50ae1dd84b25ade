//! Exact chromatic symmetric functions in the power-sum basis.
//!
//! For a tree rooted at `v`, the colorings that give `v` colour `c` sum to
//! `Z(c) = sum_i x_c^i F_i` with each `F_i` a symmetric function; the
//! sequence `(F_1, ..., F_n)` is computed bottom-up and `X_T = sum_i p_i F_i`.

use std::collections::HashMap;

use num_bigint::BigInt;
use thiserror::Error;

use crate::partition::Partition;
use crate::ppoly::PPoly;
use crate::tree::{root_at, RootedView, Tree};

/// Largest tree the `2^(n-1)` subset expansion accepts without forcing.
pub const ORACLE_LIMIT: usize = 24;

/// Hard ceiling: edge subsets are enumerated as `u64` masks.
const ORACLE_HARD_LIMIT: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("subset expansion over {edges} edges refused (tree has {n} vertices, limit {limit})")]
    TooLarge { n: usize, edges: usize, limit: usize },
}

/// Symmetric function sequence `(F_1, ..., F_n)`; `F_i` has degree `n - i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sfs(pub Vec<PPoly>);

impl Sfs {
    pub fn entries(&self) -> &[PPoly] {
        &self.0
    }

    /// `sum_i p_i F_i`.
    pub fn assemble(&self) -> PPoly {
        let mut out = PPoly::zero();
        for (i, f) in self.0.iter().enumerate() {
            out = &out + &f.scale_by_p(i as u32 + 1);
        }
        out
    }
}

/// Convolution `acc * g` of two sequences of polynomials.
fn convolve(acc: &[PPoly], g: &[PPoly]) -> Vec<PPoly> {
    let mut out = vec![PPoly::zero(); acc.len() + g.len() - 1];
    for (j, a) in acc.iter().enumerate() {
        for (p, b) in g.iter().enumerate() {
            out[j + p] = &out[j + p] + &(a * b);
        }
    }
    out
}

/// Symmetric function sequence of the rooted tree.
///
/// Each child subtree with sequence `(G_1, ..., G_m)` multiplies the running
/// sequence by `(G_0, -G_1, ..., -G_m)` where `G_0 = sum_j p_j G_j` is the
/// child's chromatic symmetric function.
pub fn compute_sfs(rv: &RootedView<'_>) -> Sfs {
    let n = rv.tree().vertex_count();
    let mut seqs: Vec<Vec<PPoly>> = vec![Vec::new(); n];
    for &v in rv.preorder().iter().rev() {
        let mut acc = vec![PPoly::one()];
        for &child in rv.children(v) {
            let child_seq = Sfs(std::mem::take(&mut seqs[child]));
            let mut g = Vec::with_capacity(child_seq.0.len() + 1);
            g.push(child_seq.assemble());
            g.extend(child_seq.0.iter().map(|f| -f));
            acc = convolve(&acc, &g);
        }
        seqs[v] = acc;
    }
    Sfs(std::mem::take(&mut seqs[rv.root()]))
}

/// `X_T` in the power-sum basis, rooted at vertex 0.
pub fn compute_csf(t: &Tree) -> PPoly {
    compute_sfs(&root_at(t, 0).expect("vertex 0 exists")).assemble()
}

/// Keeps only the terms whose parts are all at most `k`.
pub fn truncate_csf(x: &PPoly, k: u32) -> PPoly {
    x.truncate(k)
}

fn subset_expansion(t: &Tree, limit: usize, max_component: Option<usize>) -> Result<PPoly, OracleError> {
    let n = t.vertex_count();
    let edges = n - 1;
    let limit = limit.min(ORACLE_HARD_LIMIT);
    if n > limit {
        return Err(OracleError::TooLarge { n, edges, limit });
    }
    let mut acc: HashMap<Partition, i64> = HashMap::new();
    for mask in 0u64..(1u64 << edges) {
        let sizes = t.component_sizes(|i| mask >> i & 1 == 1);
        if max_component.is_some_and(|k| sizes.iter().any(|&s| s > k)) {
            continue;
        }
        let lambda =
            Partition::from_parts(sizes.into_iter().map(|s| s as u32).collect()).expect("component sizes are positive");
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        *acc.entry(lambda).or_insert(0) += sign;
    }
    let mut out = PPoly::zero();
    for (lambda, c) in acc {
        out.add_term(lambda, BigInt::from(c));
    }
    Ok(out)
}

/// `sum_{S subset E} (-1)^|S| p_{lambda(S)}`, where `lambda(S)` lists the
/// component sizes of the spanning forest with edge set `S`.
pub fn csf_oracle(t: &Tree) -> Result<PPoly, OracleError> {
    subset_expansion(t, ORACLE_LIMIT, None)
}

/// [`csf_oracle`] with a caller-chosen size limit.
pub fn csf_oracle_with_limit(t: &Tree, limit: usize) -> Result<PPoly, OracleError> {
    subset_expansion(t, limit, None)
}

/// Subset expansion restricted to edge sets whose components all have at
/// most `k` vertices.
pub fn truncated_csf_oracle(t: &Tree, k: usize) -> Result<PPoly, OracleError> {
    subset_expansion(t, ORACLE_LIMIT, Some(k))
}

pub fn truncated_csf_oracle_with_limit(t: &Tree, k: usize, limit: usize) -> Result<PPoly, OracleError> {
    subset_expansion(t, limit, Some(k))
}
