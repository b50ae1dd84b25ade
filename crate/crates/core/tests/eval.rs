mod common;

use csf_core::eval::{eval_sfs_truncated, EvalError};
use csf_core::{
    compute_csf, compute_sfs, count_ops, eval_csf, eval_csf_truncated, eval_sfs, root_at, truncate_csf, EvalSpec, Tree,
};
use rand::Rng;

use common::*;

#[test]
fn csf_residue_matches_direct_substitution() {
    let mut rng = rng(1);
    for tree in trees_up_to(10) {
        let n = tree.vertex_count();
        let exact = compute_csf(&tree);
        for i in 0..25 {
            let spec = random_spec(n, MODULI[i % MODULI.len()], &mut rng);
            let want = substitute_spec(&exact, &spec);
            assert_eq!(eval_csf(&tree, &spec).unwrap(), want);
            assert_eq!(exact.eval_mod(&spec).unwrap(), want);
        }
    }
}

#[test]
fn sequence_residues_match_exact_sequence() {
    let mut rng = rng(2);
    for tree in trees_up_to(9) {
        let n = tree.vertex_count();
        let root = rng.random_range(0..n);
        let rv = root_at(&tree, root).unwrap();
        let sfs = compute_sfs(&rv);
        for i in 0..25 {
            let spec = random_spec(n, MODULI[i % MODULI.len()], &mut rng);
            let seq = eval_sfs(&rv, &spec).unwrap();
            assert_eq!(seq.r.len(), n);
            let want: Vec<u64> = sfs.entries().iter().map(|f| substitute_spec(f, &spec)).collect();
            assert_eq!(seq.r, want);
            assert!(seq.r.iter().all(|&r| r < spec.modulus()));
        }
    }
}

#[test]
fn truncated_path_matches_full_evaluation() {
    let mut rng = rng(3);
    for tree in trees_up_to(12) {
        let n = tree.vertex_count();
        for k in 1..=3usize.min(n) {
            for i in 0..10 {
                let spec = random_truncated_spec(n, k, MODULI[i % MODULI.len()], &mut rng);
                assert_eq!(eval_csf_truncated(&tree, &spec).unwrap(), eval_csf(&tree, &spec).unwrap());
            }
        }
    }
}

#[test]
fn truncated_residue_matches_exact_truncation() {
    let mut rng = rng(4);
    for tree in trees_up_to(8) {
        let n = tree.vertex_count();
        let exact = compute_csf(&tree);
        for k in 1..=n {
            let truncated = truncate_csf(&exact, k as u32);
            let spec = random_truncated_spec(n, k, 1_000_003, &mut rng);
            assert_eq!(eval_csf_truncated(&tree, &spec).unwrap(), substitute_spec(&truncated, &spec));
        }
    }
}

#[test]
fn truncated_sequence_keeps_a_prefix() {
    let mut rng = rng(5);
    for n in [1, 2, 5, 17, 40] {
        let tree = random_tree(n, &mut rng);
        let rv = root_at(&tree, 0).unwrap();
        for k in 1..=n.min(4) {
            let spec = random_truncated_spec(n, k, 101, &mut rng);
            let short = eval_sfs_truncated(&rv, &spec).unwrap();
            let full = eval_sfs(&rv, &spec).unwrap();
            assert_eq!(short.r.len(), k.min(n));
            assert_eq!(short.r[..], full.r[..k.min(n)]);
        }
        let full_spec = random_truncated_spec(n, n, 101, &mut rng);
        assert_eq!(eval_sfs_truncated(&rv, &full_spec).unwrap().r, eval_sfs(&rv, &full_spec).unwrap().r);
    }
}

#[test]
fn hand_computed_examples() {
    let p2 = Tree::path(2);
    let spec = EvalSpec::new(5, vec![2, 3], None).unwrap();
    assert_eq!(eval_sfs(&root_at(&p2, 0).unwrap(), &spec).unwrap().r, vec![2, 4]);
    assert_eq!(eval_csf(&p2, &spec).unwrap(), 1);

    let single = Tree::single_vertex();
    let s7 = EvalSpec::new(7, vec![4], None).unwrap();
    assert_eq!(eval_sfs(&root_at(&single, 0).unwrap(), &s7).unwrap().r, vec![1]);
    assert_eq!(eval_csf(&single, &s7).unwrap(), 4);
    assert_eq!(count_ops(&root_at(&single, 0).unwrap(), &s7).unwrap(), 0);
}

#[test]
fn path_and_star_residues_follow_their_truncations() {
    let spec = EvalSpec::new(17, vec![1, 1, 1, 0], Some(3)).unwrap();
    let (p4, star) = (Tree::path(4), Tree::star(4));
    let want_p4 = substitute_spec(&truncate_csf(&compute_csf(&p4), 3), &spec);
    let want_star = substitute_spec(&truncate_csf(&compute_csf(&star), 3), &spec);
    let got_p4 = eval_csf_truncated(&p4, &spec).unwrap();
    let got_star = eval_csf_truncated(&star, &spec).unwrap();
    assert_eq!((got_p4, got_star), (want_p4, want_star));
    assert_eq!(got_p4 != got_star, want_p4 != want_star);
}

#[test]
fn spec_validation() {
    assert!(matches!(EvalSpec::new(4, vec![1], None), Err(EvalError::NotPrime(4))));
    assert!(matches!(EvalSpec::new(1, vec![1], None), Err(EvalError::NotPrime(1))));
    assert!(EvalSpec::new(7, vec![1, 1, 2], Some(2)).is_err());
    assert!(EvalSpec::new(7, vec![1, 1, 0], Some(0)).is_err());
    let reduced = EvalSpec::new(7, vec![9, 14], None).unwrap();
    assert_eq!(reduced.tuple(), &[2, 0]);

    let p3 = Tree::path(3);
    let short = EvalSpec::new(7, vec![1, 2], None).unwrap();
    assert!(eval_csf(&p3, &short).is_err());
    let unmarked = EvalSpec::new(7, vec![1, 0, 0], None).unwrap();
    assert!(matches!(eval_csf_truncated(&p3, &unmarked), Err(EvalError::TruncationUnset)));

    let text = "17;1,2,0";
    let spec: EvalSpec = text.parse().unwrap();
    assert_eq!(spec.to_string(), text);
}

fn sweep_trees(n: usize, rng: &mut impl Rng) -> Vec<Tree> {
    let mut trees = vec![Tree::path(n), Tree::star(n)];
    if n >= 3 {
        let spine = n.div_ceil(2);
        trees.push(Tree::caterpillar(spine, (n - spine) / spine));
        trees.push(Tree::caterpillar(2, (n - 2) / 2));
    }
    trees.extend((0..10).map(|_| random_tree(n, rng)));
    trees
}

#[test]
fn operation_count_stays_within_the_quadratic_bound() {
    let mut rng = rng(6);
    for n in (1..=200).step_by(7).chain([100, 200]) {
        for tree in sweep_trees(n, &mut rng) {
            let n = tree.vertex_count();
            let spec = random_spec(n, 1_000_003, &mut rng);
            let rv = root_at(&tree, 0).unwrap();
            let ops = count_ops(&rv, &spec).unwrap();
            assert!(ops <= 12 * (n * n) as u64, "n={n}: {ops} ops");
            assert_eq!(ops, eval_sfs(&rv, &spec).unwrap().opcount);
        }
    }
}

#[test]
fn truncated_operation_count_grows_linearly() {
    let mut rng = rng(8);
    for k in 1..=3usize {
        let mut worst_ratio = 0f64;
        for n in (k..=400).step_by(13) {
            let spec = random_truncated_spec(n, k, 1_000_003, &mut rng);
            for tree in [Tree::path(n), Tree::star(n), random_tree(n, &mut rng)] {
                let ops = eval_sfs_truncated(&root_at(&tree, 0).unwrap(), &spec).unwrap().opcount;
                worst_ratio = worst_ratio.max(ops as f64 / n as f64);
            }
        }
        // per-vertex cost is bounded by a constant times k^2
        assert!(worst_ratio <= (12 * k * k) as f64, "k={k}: {worst_ratio}");
    }
}

#[test]
fn large_moduli_do_not_overflow() {
    let mut rng = rng(9);
    let q = 281_474_976_710_597; // largest prime below 2^48
    for tree in trees_up_to(8) {
        let spec = random_spec(tree.vertex_count(), q, &mut rng);
        assert_eq!(eval_csf(&tree, &spec).unwrap(), substitute_spec(&compute_csf(&tree), &spec));
    }
}
