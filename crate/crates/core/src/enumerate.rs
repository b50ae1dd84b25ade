//! Level sequences and streaming generation of free trees.
//!
//! The generator walks rooted level sequences in reverse lexicographic order
//! (Beyer–Hedetniemi successor) and keeps only the ones that are canonical
//! for a center-rooted free tree, jumping over whole runs of non-canonical
//! sequences the way Wright, Richmond, Odlyzko and McKay describe.

use std::fmt;
use std::str::FromStr;

use crate::tree::{Tree, TreeError, Vertex};

/// Depths of the vertices of a rooted tree in preorder.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LevelSequence(Vec<usize>);

impl LevelSequence {
    pub fn new(seq: Vec<usize>) -> Result<Self, TreeError> {
        match seq.first() {
            None => return Err(TreeError::Structure("empty level sequence".into())),
            Some(&d) if d != 0 => return Err(TreeError::Structure("level sequence must start at depth 0".into())),
            _ => {}
        }
        for (i, w) in seq.windows(2).enumerate() {
            if w[1] < 1 || w[1] > w[0] + 1 {
                return Err(TreeError::Structure(format!(
                    "depth {} at position {} does not follow depth {}",
                    w[1],
                    i + 1,
                    w[0]
                )));
            }
        }
        Ok(LevelSequence(seq))
    }

    pub(crate) fn from_raw(seq: Vec<usize>) -> Self {
        debug_assert!(LevelSequence::new(seq.clone()).is_ok());
        LevelSequence(seq)
    }

    pub fn depths(&self) -> &[usize] {
        &self.0
    }

    pub fn vertex_count(&self) -> usize {
        self.0.len()
    }

    /// Vertex `i` is the `i`-th vertex of the preorder walk; its parent is the
    /// closest earlier vertex one level up.
    pub fn to_tree(&self) -> Tree {
        let mut parents: Vec<Option<Vertex>> = Vec::with_capacity(self.0.len());
        let mut last_at_depth: Vec<Vertex> = Vec::new();
        for (v, &d) in self.0.iter().enumerate() {
            parents.push(if d == 0 { None } else { Some(last_at_depth[d - 1]) });
            last_at_depth.truncate(d);
            last_at_depth.push(v);
        }
        Tree::from_parents(&parents).expect("level sequences describe trees")
    }
}

impl fmt::Debug for LevelSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LevelSequence({self})")
    }
}

impl fmt::Display for LevelSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for LevelSequence {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let seq = s
            .split(' ')
            .map(|field| {
                field
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| TreeError::Parse { line: 1, msg: format!("invalid depth {field:?}") })
            })
            .collect::<Result<Vec<_>, _>>()?;
        LevelSequence::new(seq)
    }
}

/// Stream of every free tree on `n` vertices, each isomorphism class once.
pub struct FreeTrees {
    n: usize,
    pending: Option<Vec<usize>>,
}

/// Enumerates the free trees on `n` vertices in a fixed order.
pub fn enumerate_free_trees(n: usize) -> FreeTrees {
    assert!(n >= 1, "trees need at least one vertex");
    let pending = if n == 1 {
        Some(vec![0])
    } else {
        // the path, rooted at its center
        let mut first: Vec<usize> = (0..=n / 2).collect();
        first.extend(1..n.div_ceil(2));
        Some(first)
    };
    FreeTrees { n, pending }
}

impl Iterator for FreeTrees {
    type Item = LevelSequence;

    fn next(&mut self) -> Option<LevelSequence> {
        let candidate = self.pending.take()?;
        if self.n == 1 {
            return Some(LevelSequence::from_raw(candidate));
        }
        let tree = next_free(candidate);
        self.pending = next_rooted(&tree, None);
        Some(LevelSequence::from_raw(tree))
    }
}

/// Next rooted level sequence in reverse lexicographic order, rewriting from
/// position `p` (by default the last entry deeper than 1).
fn next_rooted(seq: &[usize], p: Option<usize>) -> Option<Vec<usize>> {
    let p = match p {
        Some(p) => p,
        None => {
            let mut p = seq.len() - 1;
            while seq[p] == 1 {
                p -= 1;
            }
            p
        }
    };
    if p == 0 {
        return None;
    }
    let mut q = p - 1;
    while seq[q] != seq[p] - 1 {
        q -= 1;
    }
    let mut out = seq.to_vec();
    for i in p..out.len() {
        out[i] = out[i - p + q];
    }
    Some(out)
}

/// Splits off the leftmost subtree of the root. Returns that subtree (depths
/// shifted up by one) and the rest of the tree.
fn split_left(seq: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let m = seq.iter().enumerate().skip(2).find(|&(_, &d)| d == 1).map_or(seq.len(), |(i, _)| i);
    let left = seq[1..m].iter().map(|d| d - 1).collect();
    let mut rest = Vec::with_capacity(seq.len() - m + 1);
    rest.push(0);
    rest.extend_from_slice(&seq[m..]);
    (left, rest)
}

/// Returns `candidate` if it is the canonical center rooting of its free
/// tree, otherwise the next sequence that is.
fn next_free(candidate: Vec<usize>) -> Vec<usize> {
    let (left, rest) = split_left(&candidate);
    let left_height = left.iter().copied().max().unwrap_or(0);
    let rest_height = rest.iter().copied().max().unwrap_or(0);
    let valid = rest_height > left_height
        || (rest_height == left_height && (left.len() < rest.len() || (left.len() == rest.len() && left <= rest)));
    if valid {
        return candidate;
    }

    let p = left.len();
    let mut jumped = next_rooted(&candidate, Some(p)).expect("p is positive");
    if candidate[p] > 2 {
        let (new_left, _) = split_left(&jumped);
        let new_left_height = new_left.iter().copied().max().unwrap_or(0);
        let len = jumped.len();
        let suffix_len = new_left_height + 1;
        for (slot, depth) in jumped[len - suffix_len..].iter_mut().zip(1..) {
            *slot = depth;
        }
    }
    jumped
}

/// Number of unlabeled rooted trees on 1..=n vertices (index 0 unused).
fn rooted_tree_counts(n: usize) -> Option<Vec<u128>> {
    let mut r = vec![0u128; n + 1];
    if n >= 1 {
        r[1] = 1;
    }
    for m in 1..n {
        // r(m+1) = (1/m) * sum_{k=1..m} (sum_{d | k} d r(d)) r(m-k+1)
        let mut total = 0u128;
        for k in 1..=m {
            let mut s = 0u128;
            for d in (1..=k).filter(|d| k % d == 0) {
                s = s.checked_add((d as u128).checked_mul(r[d])?)?;
            }
            total = total.checked_add(s.checked_mul(r[m - k + 1])?)?;
        }
        r[m + 1] = total / m as u128;
    }
    Some(r)
}

/// Number of free trees on `n` vertices from Otter's dissimilarity formula,
/// or `None` if an intermediate value leaves the u128 range.
pub fn checked_free_tree_count(n: usize) -> Option<u128> {
    if n == 0 {
        return None;
    }
    let r = rooted_tree_counts(n)?;
    let mut pairs = 0u128;
    for i in 1..n {
        pairs = pairs.checked_add(r[i].checked_mul(r[n - i])?)?;
    }
    if n.is_multiple_of(2) {
        pairs -= r[n / 2];
    }
    Some(r[n] - pairs / 2)
}

/// Number of free trees on `n` vertices.
///
/// # Panics
/// If `n == 0` or the count overflows u128 (roughly `n > 70`).
pub fn free_tree_count(n: usize) -> u128 {
    checked_free_tree_count(n).expect("free tree count out of range")
}
