//! Chromatic symmetric functions of trees.
//!
//! Exact computation in the power-sum basis, modular fingerprints that avoid
//! materialising the polynomial, a randomized test that certifies two trees
//! have different chromatic symmetric functions, and the exhaustive
//! equivalence-refinement pipeline over all free trees of a given size.

pub mod canon;
pub mod cli;
pub mod distinguish;
pub mod enumerate;
pub mod eval;
pub mod exact;
pub mod harness;
pub mod partition;
pub mod ppoly;
pub mod primes;
pub mod tree;

pub use canon::canonical_form;
pub use distinguish::{show_distinct, verify_certificate, DistinctnessCertificate, Verdict};
pub use enumerate::{checked_free_tree_count, enumerate_free_trees, free_tree_count, FreeTrees, LevelSequence};
pub use eval::{count_ops, eval_csf, eval_csf_truncated, eval_sfs, EvalError, EvalSpec, ResidueSeq};
pub use exact::{compute_csf, compute_sfs, csf_oracle, truncate_csf, truncated_csf_oracle, Sfs};
pub use harness::{
    collision_audit, refine_class, resume_verification, run_verification, FingerprintTable, RefinementReport,
    RefinementStatus, RoundSpec, VerifyOptions,
};
pub use partition::Partition;
pub use ppoly::PPoly;
pub use tree::{root_at, RootedView, Tree, TreeError, Vertex};
