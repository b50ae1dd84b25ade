//! Independent reference implementations shared by the integration tests.
//! Nothing here calls into the algorithms it is used to check.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use csf_core::{EvalSpec, PPoly, Tree};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Decodes a Prüfer sequence over `0..n` (length `n - 2`) into its edges.
pub fn prufer_edges(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    if n == 1 {
        return Vec::new();
    }
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut leaves: BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let leaf = *leaves.iter().next().unwrap();
        leaves.remove(&leaf);
        edges.push((leaf, x));
        degree[x] -= 1;
        if degree[x] == 1 {
            leaves.insert(x);
        }
    }
    let rest: Vec<usize> = leaves.into_iter().collect();
    edges.push((rest[0], rest[1]));
    edges
}

pub fn prufer_tree(seq: &[usize], n: usize) -> Tree {
    Tree::new(n, prufer_edges(seq, n)).unwrap()
}

/// Every labeled tree on `n` vertices, one per Prüfer sequence.
pub fn labeled_trees(n: usize) -> impl Iterator<Item = Tree> {
    let len = n.saturating_sub(2);
    let total = if n <= 2 { 1 } else { n.pow(len as u32) };
    (0..total).map(move |mut code| {
        let mut seq = vec![0; len];
        for slot in seq.iter_mut() {
            *slot = code % n;
            code /= n;
        }
        prufer_tree(&seq, n)
    })
}

pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Tree {
    let seq: Vec<usize> = (0..n.saturating_sub(2)).map(|_| rng.random_range(0..n)).collect();
    prufer_tree(&seq, n)
}

pub fn random_perm<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

fn adjacency(t: &Tree) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); t.vertex_count()];
    for &(u, v) in t.edges() {
        adj[u].push(v);
        adj[v].push(u);
    }
    adj
}

/// The one or two centers of a tree, found by repeatedly stripping leaves.
pub fn centers(t: &Tree) -> Vec<usize> {
    let n = t.vertex_count();
    let adj = adjacency(t);
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &leaf in &layer {
            for &u in &adj[leaf] {
                degree[u] -= 1;
                if degree[u] == 1 {
                    next.push(u);
                }
            }
        }
        layer = next;
    }
    layer.sort_unstable();
    layer
}

fn ahu(adj: &[Vec<usize>], v: usize, parent: Option<usize>) -> String {
    let mut codes: Vec<String> = adj[v].iter().filter(|&&u| Some(u) != parent).map(|&u| ahu(adj, u, Some(v))).collect();
    codes.sort();
    format!("({})", codes.concat())
}

/// Parenthesis-string isomorphism invariant, rooted at the center(s).
pub fn ahu_code(t: &Tree) -> String {
    let adj = adjacency(t);
    centers(t).into_iter().map(|c| ahu(&adj, c, None)).min().unwrap()
}

/// Stanley's edge-subset expansion with machine-integer coefficients, keyed
/// by component sizes in non-increasing order.
pub fn subset_expansion(t: &Tree) -> BTreeMap<Vec<u32>, i64> {
    let n = t.vertex_count();
    let edges = t.edges();
    let mut out: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
    for mask in 0u64..(1 << edges.len()) {
        let mut root: Vec<usize> = (0..n).collect();
        fn find(root: &mut [usize], mut v: usize) -> usize {
            while root[v] != v {
                root[v] = root[root[v]];
                v = root[v];
            }
            v
        }
        for (i, &(u, v)) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                let (a, b) = (find(&mut root, u), find(&mut root, v));
                root[a] = b;
            }
        }
        let mut sizes = vec![0u32; n];
        for v in 0..n {
            let r = find(&mut root, v);
            sizes[r] += 1;
        }
        let mut parts: Vec<u32> = sizes.into_iter().filter(|&s| s > 0).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        *out.entry(parts).or_insert(0) += sign;
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Flattens a polynomial into (parts, coefficient) pairs.
pub fn term_map(p: &PPoly) -> BTreeMap<Vec<u32>, BigInt> {
    p.terms().map(|(l, c)| (l.parts().to_vec(), c.clone())).collect()
}

/// `sum_lambda a_lambda prod_i C_{lambda_i} mod q`, by direct substitution.
pub fn substitute_mod(p: &PPoly, q: u64, c: &[u64]) -> u64 {
    let q_big = BigInt::from(q);
    let mut total = BigInt::zero();
    for (lambda, coeff) in p.terms() {
        let mut term = coeff.clone();
        for &part in lambda.parts() {
            term *= BigInt::from(c[part as usize - 1]);
        }
        total += term;
    }
    let r = ((total % &q_big) + &q_big) % &q_big;
    r.to_u64().unwrap()
}

pub fn substitute_spec(p: &PPoly, spec: &EvalSpec) -> u64 {
    substitute_mod(p, spec.modulus(), spec.tuple())
}

pub fn coefficient_sum_abs(p: &PPoly) -> BigInt {
    p.terms().map(|(_, c)| c.abs()).sum()
}

/// Primality by checking every candidate divisor below `q`.
pub fn naive_is_prime(q: u64) -> bool {
    q >= 2 && (2..q).all(|d| !q.is_multiple_of(d))
}

pub fn random_spec<R: Rng>(n: usize, q: u64, rng: &mut R) -> EvalSpec {
    let c: Vec<u64> = (0..n).map(|_| rng.random_range(0..q)).collect();
    EvalSpec::new(q, c, None).unwrap()
}

/// Spec with `C_j` random for `j <= k` and zero after.
pub fn random_truncated_spec<R: Rng>(n: usize, k: usize, q: u64, rng: &mut R) -> EvalSpec {
    let head: Vec<u64> = (0..k.min(n)).map(|_| rng.random_range(0..q)).collect();
    EvalSpec::truncated(q, head, n).unwrap()
}

/// Small primes used as moduli in sweeps.
pub const MODULI: [u64; 6] = [101, 103, 1009, 65_521, 1_000_003, 4_294_967_291];

/// Pearson statistic for `counts` against a uniform expectation.
pub fn chi_square_uniform(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    counts.iter().map(|&o| (o as f64 - expected).powi(2) / expected).sum()
}

/// Upper 0.001 critical value of chi-square with 16 degrees of freedom.
pub const CHI2_16_CRIT_0001: f64 = 39.252;

pub fn trees_up_to(n: usize) -> Vec<Tree> {
    (1..=n).flat_map(|m| csf_core::enumerate_free_trees(m).map(|s| s.to_tree())).collect()
}
