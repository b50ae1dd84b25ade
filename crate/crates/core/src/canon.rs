//! Canonical form of a free tree, used as the isomorphism oracle.

use crate::enumerate::LevelSequence;
use crate::tree::{root_at, Tree, Vertex};

/// One or two centroids of `t`.
pub fn centroids(t: &Tree) -> Vec<Vertex> {
    let n = t.vertex_count();
    let rv = root_at(t, 0).expect("vertex 0 exists");
    let mut out = Vec::with_capacity(2);
    for v in 0..n {
        let above = n - rv.subtree_size(v);
        let heaviest = rv.children(v).iter().map(|&c| rv.subtree_size(c)).max().unwrap_or(0).max(above);
        if 2 * heaviest <= n {
            out.push(v);
        }
    }
    out
}

/// Level sequence of `t` rooted at `root`, with each vertex's child subtrees
/// emitted in descending lexicographic order of their own encodings.
fn rooted_code(t: &Tree, root: Vertex) -> Vec<usize> {
    let rv = root_at(t, root).expect("root in range");
    let mut codes: Vec<Vec<usize>> = vec![Vec::new(); t.vertex_count()];
    for &v in rv.preorder().iter().rev() {
        let mut kids: Vec<Vec<usize>> = rv.children(v).iter().map(|&c| std::mem::take(&mut codes[c])).collect();
        kids.sort_unstable_by(|a, b| b.cmp(a));
        let mut code = Vec::with_capacity(rv.subtree_size(v));
        code.push(0);
        for kid in kids {
            code.extend(kid.into_iter().map(|d| d + 1));
        }
        codes[v] = code;
    }
    std::mem::take(&mut codes[root])
}

/// Isomorphism-invariant encoding of `t`: the centroid-rooted canonical
/// level sequence, taking the smaller rooting when there are two centroids.
pub fn canonical_form(t: &Tree) -> LevelSequence {
    let code = centroids(t).into_iter().map(|c| rooted_code(t, c)).min().expect("every tree has a centroid");
    LevelSequence::from_raw(code)
}
