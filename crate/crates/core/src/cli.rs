//! `csf` command-line front end.
//!
//! Exit codes: 0 success (proved, valid, all singletons), 1 inconclusive
//! (not proved, invalid certificate, unresolved classes), 2 usage error,
//! 3 I/O or validation error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::distinguish::{show_distinct, verify_certificate, DistinctnessCertificate, DistinguishError};
use crate::enumerate::enumerate_free_trees;
use crate::eval::{eval_csf, eval_csf_truncated, parse_residues, EvalError, EvalSpec};
use crate::exact::{
    compute_csf, csf_oracle_with_limit, truncate_csf, truncated_csf_oracle_with_limit, OracleError, ORACLE_LIMIT,
};
use crate::harness::{
    collision_audit, resume_verification, run_verification, FingerprintTable, HarnessError, VerifyOptions,
    DEFAULT_TREE_CAP,
};
use crate::tree::Tree;

/// Overrides the directory used for verification tables.
pub const CACHE_DIR_ENV: &str = "CSF_CACHE_DIR";
const DEFAULT_CACHE_DIR: &str = ".csf-cache";

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "csf", version, about = "Chromatic symmetric functions of trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum TreeFormat {
    Edges,
    Levelseq,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Stream every free tree on N vertices.
    Enumerate {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, value_enum, default_value = "edges")]
        format: TreeFormat,
        /// Print only the number of trees.
        #[arg(long)]
        count_only: bool,
    },
    /// Print the chromatic symmetric function in the power-sum basis.
    Csf {
        #[arg(long)]
        input: PathBuf,
        /// Keep only terms whose parts are all at most K.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        truncate: Option<u32>,
        /// Use the edge-subset expansion instead of the recursion.
        #[arg(long)]
        oracle: bool,
        /// Lift the size limit of the subset expansion.
        #[arg(long)]
        force: bool,
    },
    /// Try to prove that two trees have different chromatic symmetric functions.
    Distinguish {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        accuracy: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        cert_out: Option<PathBuf>,
    },
    /// Check that the truncated function separates all free trees on N vertices.
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        /// Truncation level (default 3, capped at N).
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        truncate: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        max_rounds: usize,
        /// Table file, rewritten after every round.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Continue from the table file if it exists.
        #[arg(long)]
        resume: bool,
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Lift the tree-count cap.
        #[arg(long)]
        force: bool,
    },
    /// Evaluate the chromatic symmetric function mod Q at p_i -> C_i.
    Eval {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        q: u64,
        /// Comma-separated C_1,...,C_n.
        #[arg(long)]
        c: String,
        /// Use the truncated fast path; C_j must be 0 for j > K.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        truncate: Option<u32>,
    },
    /// Re-check a distinctness certificate.
    VerifyCert {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
}

/// A failed command and its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    msg: String,
}

impl Failure {
    fn usage(msg: impl ToString) -> Self {
        Failure { code: EXIT_USAGE, msg: msg.to_string() }
    }

    fn invalid(msg: impl ToString) -> Self {
        Failure { code: EXIT_INVALID, msg: msg.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::invalid(e)
    }
}

/// Parses `args` (including the program name), runs the command writing to
/// `out`, and returns the exit code. Diagnostics go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Enumerate { n, format, count_only } => cmd_enumerate(n as usize, format, count_only, out),
        Command::Csf { input, truncate, oracle, force } => cmd_csf(&input, truncate, oracle, force, out),
        Command::Distinguish { a, b, accuracy, seed, cert_out } => {
            cmd_distinguish(&a, &b, accuracy, seed, cert_out.as_deref(), out)
        }
        Command::Verify { n, truncate, seed, max_rounds, table, resume, threads, force } => {
            let n = n as usize;
            let k = match truncate {
                Some(k) if k as usize > n => return Err(Failure::usage(format!("--truncate {k} exceeds --n {n}"))),
                Some(k) => k as usize,
                None => 3.min(n),
            };
            let opts = VerifyOptions {
                max_rounds,
                tree_cap: if force { None } else { Some(DEFAULT_TREE_CAP) },
                threads,
                checkpoint: table_path(table, resume, n, k, seed)?,
            };
            cmd_verify(n, k, seed, resume, &opts, out)
        }
        Command::Eval { input, q, c, truncate } => cmd_eval(&input, q, &c, truncate, out),
        Command::VerifyCert { a, b, cert } => cmd_verify_cert(&a, &b, &cert, out),
    }
}

fn read_tree(path: &Path) -> Result<Tree, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    Tree::parse(&text).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn cmd_enumerate(n: usize, format: TreeFormat, count_only: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    if count_only {
        writeln!(out, "{}", enumerate_free_trees(n).count())?;
        return Ok(EXIT_OK);
    }
    let mut out = BufWriter::new(out);
    for (i, seq) in enumerate_free_trees(n).enumerate() {
        match format {
            TreeFormat::Levelseq => writeln!(out, "{seq}")?,
            TreeFormat::Edges => {
                if i > 0 {
                    writeln!(out)?;
                }
                write!(out, "{}", seq.to_tree().to_edge_list())?;
            }
        }
    }
    out.flush()?;
    Ok(EXIT_OK)
}

fn cmd_csf(path: &Path, truncate: Option<u32>, oracle: bool, force: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let tree = read_tree(path)?;
    let limit = if force { usize::MAX } else { ORACLE_LIMIT };
    let oracle_failure = |e: OracleError| Failure::invalid(format!("{e}; pass --force to override"));
    let poly = match (oracle, truncate) {
        (false, None) => compute_csf(&tree),
        (false, Some(k)) => truncate_csf(&compute_csf(&tree), k),
        (true, None) => csf_oracle_with_limit(&tree, limit).map_err(oracle_failure)?,
        (true, Some(k)) => truncated_csf_oracle_with_limit(&tree, k as usize, limit).map_err(oracle_failure)?,
    };
    writeln!(out, "{}", poly.to_text())?;
    Ok(EXIT_OK)
}

fn cmd_distinguish(
    a: &Path,
    b: &Path,
    accuracy: u32,
    seed: u64,
    cert_out: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let (s, t) = (read_tree(a)?, read_tree(b)?);
    let cert = match show_distinct(&s, &t, accuracy, seed) {
        Ok(cert) => cert,
        Err(e @ DistinguishError::SizeMismatch(..)) => return Err(Failure::usage(e)),
        Err(e) => return Err(Failure::invalid(e)),
    };
    if cert.is_proved() {
        writeln!(out, "Proved that the chromatic symmetric functions differ.")?;
        if let Some(path) = cert_out {
            fs::write(path, format!("{cert}\n"))?;
        }
    } else {
        writeln!(out, "Could not prove that the chromatic symmetric functions differ.")?;
    }
    writeln!(out, "{cert}")?;
    Ok(if cert.is_proved() { EXIT_OK } else { EXIT_NEGATIVE })
}

fn table_path(
    explicit: Option<PathBuf>,
    resume: bool,
    n: usize,
    k: usize,
    seed: u64,
) -> Result<Option<PathBuf>, Failure> {
    if explicit.is_some() {
        return Ok(explicit);
    }
    let dir = match std::env::var_os(CACHE_DIR_ENV) {
        Some(dir) => PathBuf::from(dir),
        None if resume => PathBuf::from(DEFAULT_CACHE_DIR),
        None => return Ok(None),
    };
    fs::create_dir_all(&dir)?;
    Ok(Some(dir.join(format!("verify-n{n}-k{k}-seed{seed}.csfv"))))
}

fn cmd_verify(
    n: usize,
    k: usize,
    seed: u64,
    resume: bool,
    opts: &VerifyOptions,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let harness_failure = |e: HarnessError| match e {
        HarnessError::TooManyTrees { .. } => Failure::usage(format!("{e}; pass --force to override")),
        HarnessError::InvalidParameters(_) => Failure::usage(e),
        _ => Failure::invalid(e),
    };
    let saved = match (&opts.checkpoint, resume) {
        (Some(path), true) if path.exists() => Some(FingerprintTable::load(path).map_err(harness_failure)?),
        _ => None,
    };
    let run = match saved {
        Some(table) => {
            if (table.n(), table.k(), table.seed()) != (n, k, seed) {
                return Err(Failure::invalid(format!(
                    "saved table is for n={} k={} seed={}",
                    table.n(),
                    table.k(),
                    table.seed()
                )));
            }
            resume_verification(table, opts)
        }
        None => run_verification(n, k, seed, opts),
    }
    .map_err(harness_failure)?;

    write!(out, "{}", run.report.render())?;
    if run.report.is_resolved() {
        return Ok(EXIT_OK);
    }
    let audit = collision_audit(&run.report, &run.table).map_err(harness_failure)?;
    writeln!(out, "[audit]")?;
    for pair in &audit.pairs {
        writeln!(out, "pair={}-{} kind={:?}", pair.a, pair.b, pair.kind)?;
    }
    Ok(EXIT_NEGATIVE)
}

fn cmd_eval(path: &Path, q: u64, c: &str, truncate: Option<u32>, out: &mut dyn Write) -> Result<i32, Failure> {
    let tree = read_tree(path)?;
    let tuple = parse_residues(c).map_err(Failure::usage)?;
    if tuple.len() != tree.vertex_count() {
        return Err(Failure::usage(format!(
            "--c has {} entries, the tree has {} vertices",
            tuple.len(),
            tree.vertex_count()
        )));
    }
    let spec = EvalSpec::new(q, tuple, truncate.map(|k| k as usize)).map_err(Failure::usage)?;
    let residue = match truncate {
        Some(_) => eval_csf_truncated(&tree, &spec),
        None => eval_csf(&tree, &spec),
    }
    .map_err(|e: EvalError| Failure::usage(e))?;
    writeln!(out, "{residue}")?;
    Ok(EXIT_OK)
}

fn cmd_verify_cert(a: &Path, b: &Path, cert: &Path, out: &mut dyn Write) -> Result<i32, Failure> {
    let (s, t) = (read_tree(a)?, read_tree(b)?);
    let text = fs::read_to_string(cert)?;
    let cert: DistinctnessCertificate = text.parse().map_err(Failure::invalid)?;
    let valid = match verify_certificate(&s, &t, &cert) {
        Ok(valid) => valid,
        Err(e @ DistinguishError::SizeMismatch(..)) => return Err(Failure::usage(e)),
        Err(e) => return Err(Failure::invalid(e)),
    };
    writeln!(out, "{}", if valid { "valid" } else { "invalid" })?;
    Ok(if valid { EXIT_OK } else { EXIT_NEGATIVE })
}
