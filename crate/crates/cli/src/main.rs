//! `jtrace`: JSON front end for traces and their secondary obstructions.

mod encode;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use jtrace::deriv::LatticeBudget;
use jtrace::trbar::{self, ReduceMode};
use jtrace::trees::{diagrammatic_trace, TreeSum, TreeTerm};
use jtrace::{counts, counts_brute, golden, parse_aut, Error};

#[derive(Parser)]
#[command(name = "jtrace", version, about = "Satoh trace and Tr-bar obstructions, exactly")]
struct Cli {
    /// Wrap the output in a report with the command, an input digest and checks.
    #[arg(long, global = true)]
    report: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Satoh trace of a tree combination.
    Trace {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        input: PathBuf,
    },
    /// Tr-bar of a trace-free tree combination.
    Trbar {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        input: PathBuf,
        /// none, cbar or mir; picked from the lattice budget when omitted.
        #[arg(long)]
        reduce: Option<ReduceMode>,
    },
    /// Tr-bar of an automorphism in A_k, through its boundary word.
    TrbarDirect {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        degree: usize,
        /// File holding the automorphism in product-of-generators form.
        #[arg(long)]
        aut: PathBuf,
        #[arg(long)]
        reduce: Option<ReduceMode>,
        #[arg(long, default_value_t = 8)]
        max_degree: usize,
    },
    /// Necklace, bracelet and B_k rank counts.
    Counts {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        brute_check: bool,
    },
    /// The nonvanishing witness for Tr-bar in degree 2k.
    Witness {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        g: usize,
    },
    /// Run every worked example with a known answer.
    VerifyPaper,
}

/// A failure carrying its exit code.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let (code, kind) = match &e {
            Error::Parse(_) => (3, "parse"),
            Error::NotTraceFree => (2, "not_trace_free"),
            Error::NotSymplectic => (2, "not_symplectic"),
            Error::GenusTooSmall { .. } => (2, "genus_too_small"),
            Error::NotInFiltration(_) => (2, "not_in_filtration"),
            Error::DegreeCap { .. } => (2, "degree_cap"),
            Error::Budget { .. } => (2, "budget"),
            Error::NotSymmetric => (3, "not_symmetric"),
            Error::InvalidAutomorphism(_) => (3, "invalid_automorphism"),
            _ => (2, "precondition"),
        };
        Failure { code, kind, message: e.to_string() }
    }
}

fn parse_failure(message: String) -> Failure {
    Failure { code: 3, kind: "parse", message }
}

struct Outcome {
    output: Value,
    checks: Vec<Value>,
    success: bool,
}

impl Outcome {
    fn ok(output: Value) -> Outcome {
        Outcome { output, checks: Vec::new(), success: true }
    }
}

fn read(path: &Path, digest: &mut Sha256) -> Result<String, Failure> {
    let text = fs::read_to_string(path).map_err(|e| parse_failure(format!("{}: {e}", path.display())))?;
    digest.update(text.as_bytes());
    Ok(text)
}

/// A tree file holds one term object or an array of them.
fn read_trees(g: usize, path: &Path, digest: &mut Sha256) -> Result<TreeSum, Failure> {
    let text = read(path, digest)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| parse_failure(format!("{}: {e}", path.display())))?;
    let items = match &v {
        Value::Array(a) => a.clone(),
        other => vec![other.clone()],
    };
    let terms = items.iter().map(TreeTerm::from_json).collect::<Result<Vec<_>, _>>()?;
    Ok(TreeSum::from_terms(g, terms)?)
}

fn pick_mode(reduce: Option<ReduceMode>, degree: usize, g: usize, budget: &LatticeBudget) -> ReduceMode {
    reduce.unwrap_or_else(|| ReduceMode::default_for(degree, g, budget))
}

fn run(command: &Command, digest: &mut Sha256) -> Result<Outcome, Failure> {
    let budget = LatticeBudget::default();
    match command {
        Command::Trace { g, input } => {
            let d = read_trees(*g, input, digest)?;
            let c = diagrammatic_trace(&d);
            Ok(Outcome::ok(json!({"degree": c.degree(), "trace": encode::cyclic(&c), "zero": c.is_zero()})))
        }
        Command::Trbar { g, input, reduce } => {
            let d = read_trees(*g, input, digest)?;
            let k = d.degree().ok_or_else(|| parse_failure("empty tree combination".into()))?;
            let v = trbar::trbar_formula(&d, pick_mode(*reduce, k + 1, *g, &budget), &budget)?;
            let checks = vec![
                json!({"name": "symplectic", "passed": true}),
                json!({"name": "trace_free", "passed": true}),
                json!({"name": "integral", "passed": v.representative.is_integral()}),
            ];
            Ok(Outcome { output: encode::obstruction(&v), checks, success: true })
        }
        Command::TrbarDirect { g, degree, aut, reduce, max_degree } => {
            let text = read(aut, digest)?;
            let f = parse_aut(*g, text.trim())?;
            let mode = pick_mode(*reduce, degree + 1, *g, &budget);
            let v = trbar::trbar_direct(&f, *degree, mode, &budget, *max_degree)?;
            let checks = vec![json!({"name": format!("in A_{degree}"), "passed": true})];
            Ok(Outcome { output: encode::obstruction(&v), checks, success: true })
        }
        Command::Counts { k, n, brute_check } => {
            let c = counts(*k, *n);
            let mut out = json!({
                "necklaces": c.necklaces, "bracelets": c.bracelets, "chiral": c.chiral,
                "b_free_rank": c.b_free_rank, "b_torsion_rank": c.b_torsion_rank,
            });
            let mut success = true;
            if *brute_check {
                let agrees = counts_brute(*k, *n) == c;
                out["brute_agrees"] = json!(agrees);
                success = agrees;
            }
            Ok(Outcome { output: out, checks: Vec::new(), success })
        }
        Command::Witness { k, g } => {
            let r = trbar::witness_check(*k, *g)?;
            let success = r.passed();
            let output = serde_json::to_value(&r).expect("plain data");
            Ok(Outcome { output, checks: Vec::new(), success })
        }
        Command::VerifyPaper => {
            let checks = golden::verify_all();
            let failed = checks.iter().filter(|c| !c.passed).count();
            let output = json!({
                "passed": checks.len() - failed,
                "failed": failed,
                "checks": serde_json::to_value(&checks).expect("plain data"),
            });
            Ok(Outcome { output, checks: Vec::new(), success: failed == 0 })
        }
    }
}

/// Prints one JSON line; a closed pipe is not an error worth reporting.
fn emit(v: &Value) {
    let _ = writeln!(std::io::stdout().lock(), "{v}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = json!({"error": {"kind": "usage", "message": e.to_string().trim_end()}});
            emit(&err);
            return ExitCode::from(3);
        }
    };
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let mut digest = Sha256::new();
    match run(&cli.command, &mut digest) {
        Ok(out) => {
            let value = if cli.report {
                json!({
                    "command": echo,
                    "inputs_sha256": format!("{:x}", digest.finalize()),
                    "output": out.output,
                    "certifications": out.checks,
                })
            } else {
                out.output
            };
            emit(&value);
            if out.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            emit(&json!({"error": {"kind": f.kind, "message": f.message}}));
            ExitCode::from(f.code)
        }
    }
}
