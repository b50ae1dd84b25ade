//! One PASS/FAIL line per acceptance criterion; exits non-zero if any fail.

mod common;

use std::collections::HashSet;
use std::time::Instant;

use csf_core::distinguish::{sample_tuple, seeded_rng};
use csf_core::{
    canonical_form, compute_csf, count_ops, csf_oracle, enumerate_free_trees, eval_csf, eval_csf_truncated,
    free_tree_count, root_at, show_distinct, verify_certificate, EvalSpec, LevelSequence, Tree, Verdict,
};
use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;

use common::*;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn oracle_equivalence() -> Check {
    let trees = trees_up_to(10);
    ensure(trees.len() == 201, || format!("expected 201 trees for n <= 10, got {}", trees.len()))?;
    let mismatched: Vec<String> = trees
        .par_iter()
        .filter(|t| compute_csf(t) != csf_oracle(t).unwrap())
        .map(|t| t.to_edge_list().replace('\n', " "))
        .collect();
    ensure(mismatched.is_empty(), || format!("mismatch on {mismatched:?}"))?;
    Ok(format!("{} trees", trees.len()))
}

fn mass_and_sign() -> Check {
    let trees = trees_up_to(10);
    for tree in &trees {
        let n = tree.vertex_count();
        let x = compute_csf(tree);
        let mass = coefficient_sum_abs(&x);
        ensure(mass == BigInt::from(1u64) << (n - 1), || format!("mass {mass} for {}", tree.to_edge_list()))?;
        for (lambda, c) in x.terms() {
            let want_negative = (n - lambda.len()) % 2 == 1;
            ensure(c.is_negative() == want_negative, || format!("sign of {lambda} in {}", tree.to_edge_list()))?;
        }
    }
    Ok(format!("{} trees", trees.len()))
}

fn homomorphism() -> Check {
    let trees = trees_up_to(10);
    let checked: usize = trees
        .par_iter()
        .enumerate()
        .map(|(i, tree)| {
            let mut rng = rng(1000 + i as u64);
            let exact = compute_csf(tree);
            let n = tree.vertex_count();
            for j in 0..25 {
                let spec = random_spec(n, MODULI[j % MODULI.len()], &mut rng);
                let fast = eval_csf(tree, &spec).map_err(|e| e.to_string())?;
                let slow = exact.eval_mod(&spec).map_err(|e| e.to_string())?;
                let direct = substitute_spec(&exact, &spec);
                ensure(fast == slow && slow == direct, || {
                    format!("{spec}: {fast} vs {slow} vs {direct} on {}", tree.to_edge_list())
                })?;
            }
            Ok(25)
        })
        .collect::<Result<Vec<usize>, String>>()?
        .into_iter()
        .sum();
    Ok(format!("{checked} evaluations"))
}

fn truncation_consistency() -> Check {
    let trees = trees_up_to(12);
    let checked: usize = trees
        .par_iter()
        .enumerate()
        .map(|(i, tree)| {
            let mut rng = rng(2000 + i as u64);
            let n = tree.vertex_count();
            let mut count = 0;
            for k in 1..=3usize.min(n) {
                for j in 0..10 {
                    let spec = random_truncated_spec(n, k, MODULI[j % MODULI.len()], &mut rng);
                    let fast = eval_csf_truncated(tree, &spec).map_err(|e| e.to_string())?;
                    let full = eval_csf(tree, &spec).map_err(|e| e.to_string())?;
                    ensure(fast == full, || format!("k={k} {spec} on {}", tree.to_edge_list()))?;
                    count += 1;
                }
            }
            Ok(count)
        })
        .collect::<Result<Vec<usize>, String>>()?
        .into_iter()
        .sum();
    Ok(format!("{} trees, {checked} evaluations", trees.len()))
}

fn operation_bound() -> Check {
    let worst = (1..=200usize)
        .into_par_iter()
        .map(|n| {
            let mut rng = rng(3000 + n as u64);
            let mut trees = vec![Tree::path(n), Tree::star(n)];
            if n >= 3 {
                for spine in [2, n.div_ceil(2), n - 1] {
                    let legs = (n - spine) / spine;
                    trees.push(Tree::caterpillar(spine, legs));
                }
            }
            trees.extend((0..50).map(|_| random_tree(n, &mut rng)));
            let mut worst = 0f64;
            for tree in &trees {
                let m = tree.vertex_count();
                let spec = random_spec(m, 1_000_003, &mut rng);
                let ops = count_ops(&root_at(tree, 0).unwrap(), &spec).map_err(|e| e.to_string())?;
                let bound = 12 * (m * m) as u64;
                ensure(ops <= bound, || format!("n={m}: {ops} > {bound}"))?;
                if m > 1 {
                    worst = f64::max(worst, ops as f64 / (m * m) as f64);
                }
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>, String>>()?
        .into_iter()
        .fold(0f64, f64::max);
    Ok(format!("max ops/n^2 = {worst:.2}"))
}

fn failure_rate() -> Check {
    let (p4, star) = (Tree::path(4), Tree::star(4));
    let (q, draws) = (17u64, 10_000);
    let mut rng = seeded_rng(17);
    let mut equal = 0;
    for _ in 0..draws {
        let spec = EvalSpec::new(q, sample_tuple(4, q, &mut rng), None).map_err(|e| e.to_string())?;
        if eval_csf(&p4, &spec).unwrap() == eval_csf(&star, &spec).unwrap() {
            equal += 1;
        }
    }
    let rate = equal as f64 / draws as f64;
    let bound = 4.0 / 17.0;
    let limit = bound + 3.0 * (bound * (1.0 - bound) / draws as f64).sqrt();
    ensure(rate <= limit, || format!("rate {rate:.4} > {limit:.4}"))?;
    Ok(format!("rate {rate:.4} <= {limit:.4}"))
}

fn distinguisher_success() -> Check {
    let (p4, star) = (Tree::path(4), Tree::star(4));
    for seed in 0..200 {
        let cert = show_distinct(&p4, &star, 10, seed).map_err(|e| e.to_string())?;
        ensure(cert.verdict == Verdict::ProvedDistinct, || format!("seed {seed} inconclusive"))?;
        let ok = verify_certificate(&p4, &star, &cert).map_err(|e| e.to_string())?;
        ensure(ok, || format!("seed {seed}: certificate does not verify"))?;
        let reparsed: csf_core::DistinctnessCertificate = cert.to_string().parse().map_err(|e| format!("{e}"))?;
        ensure(reparsed == cert, || format!("seed {seed}: certificate text does not round-trip"))?;
    }
    Ok("200/200 proved and verified".into())
}

/// Free-tree counts from all labeled trees, deduplicated two ways.
fn labeled_class_count(n: usize) -> Result<usize, String> {
    let trees: Vec<Tree> = labeled_trees(n).collect();
    let canon: HashSet<LevelSequence> = trees.par_iter().map(canonical_form).collect();
    let ahu: HashSet<String> = trees.par_iter().map(ahu_code).collect();
    ensure(canon.len() == ahu.len(), || format!("n={n}: invariants disagree"))?;
    Ok(canon.len())
}

const RECORDED_COUNTS: [usize; 15] = [1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551, 1301, 3159, 7741];

fn desk_scale_verification() -> Check {
    for n in 1..=15 {
        let enumerated = enumerate_free_trees(n).count();
        let want = if n <= 9 { labeled_class_count(n)? } else { RECORDED_COUNTS[n - 1] };
        ensure(enumerated == want, || format!("n={n}: enumerated {enumerated}, expected {want}"))?;
        ensure(enumerated == RECORDED_COUNTS[n - 1], || format!("n={n}: recorded total differs"))?;
        ensure(free_tree_count(n) == enumerated as u128, || format!("n={n}: counting formula differs"))?;
    }
    let (code, out) = cli(&["verify", "--n", "15", "--truncate", "3"]);
    ensure(code == 0, || format!("verify exited {code}"))?;
    ensure(out.contains("\nsingletons=7741\n") && out.contains("\nstatus=all-singletons\n"), || out.clone())?;
    let rounds = out.lines().find_map(|l| l.strip_prefix("rounds_used=")).unwrap_or("?").to_owned();
    Ok(format!("7741 singletons after {rounds} rounds; counts n=1..15 match"))
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = csf_core::cli::run(std::iter::once("csf").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned())
}

fn resume_determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let table = |name: &str| dir.path().join(name).to_str().unwrap().to_owned();
    let (clean_table, cut_table) = (table("clean.csfv"), table("cut.csfv"));
    let base = ["verify", "--n", "14", "--truncate", "3", "--seed", "77"];

    let (code, clean) = cli(&[&base[..], &["--table", &clean_table]].concat());
    ensure(code == 0, || format!("clean run exited {code}"))?;
    let (code, _) = cli(&[&base[..], &["--table", &cut_table, "--max-rounds", "1"]].concat());
    ensure(code == 1, || format!("interrupted run exited {code}"))?;
    let (code, resumed) = cli(&[&base[..], &["--table", &cut_table, "--resume"]].concat());
    ensure(code == 0, || format!("resumed run exited {code}"))?;
    ensure(resumed.as_bytes() == clean.as_bytes(), || "reports differ".into())?;
    let same_table = std::fs::read(&clean_table).ok() == std::fs::read(&cut_table).ok();
    ensure(same_table, || "tables differ".into())?;
    Ok(format!("{} report bytes identical", clean.len()))
}

fn soundness() -> Check {
    let mut rng = rng(4000);
    let mut pairs = 0;
    for n in 1..=7 {
        for seq in enumerate_free_trees(n) {
            let tree = seq.to_tree();
            let copies: Vec<Tree> = (0..4).map(|_| tree.relabel(&random_perm(n, &mut rng)).unwrap()).collect();
            for (i, a) in copies.iter().enumerate() {
                for (j, b) in copies.iter().enumerate() {
                    let cert = show_distinct(a, b, 10, (i * 4 + j) as u64).map_err(|e| e.to_string())?;
                    ensure(cert.verdict == Verdict::Inconclusive, || format!("{seq}: {cert}"))?;
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} relabeled pairs, none proved distinct"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("recursion equals subset expansion for all trees n <= 10", oracle_equivalence),
        ("coefficient mass 2^(n-1) and alternating signs, n <= 10", mass_and_sign),
        ("modular evaluation is a homomorphism, n <= 10 x 25 specs", homomorphism),
        ("truncated evaluation equals full evaluation, n <= 12, k <= 3", truncation_consistency),
        ("operation count <= 12 n^2 for n = 1..200", operation_bound),
        ("P4/star collision rate <= 4/17 + 3 sigma at q = 17", failure_rate),
        ("200 seeded P4/star runs proved distinct and verified", distinguisher_success),
        ("n = 15, k = 3 separates all 7741 trees; counts n = 1..15", desk_scale_verification),
        ("interrupted n = 14 run resumes to an identical report", resume_determinism),
        ("relabelings of trees n <= 7 never proved distinct", soundness),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({detail}; {secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
