//! `glc`: command-line front end for the GL cyclic sequent calculus.
//!
//! Results go to standard output as JSON, diagnostics to standard error.
//! Exit codes: 0 affirmative, 1 negative, 2 usage or input error,
//! 3 resource abort, 4 internal error (a self-check failed).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use glc_core::corpus::{generate_corpus, CorpusSpec};
use glc_core::formula::{parse, parse_sequent};
use glc_core::interpolation::{self, FixpointError, InterpolationError};
use glc_core::oracle::find_countermodel;
use glc_core::proofs::{self, Certificate};
use glc_core::prover::{Prover, ProverError, BUDGET_ENV, DEFAULT_BUDGET};
use glc_core::suites::{self, DEFAULT_INSTANCES};
use glc_core::{Formula, Sequent};

/// Largest world bound accepted by `glc oracle`; frame enumeration beyond it
/// is out of reach.
const ORACLE_WORLD_LIMIT: usize = 7;

#[derive(Parser)]
#[command(
    name = "glc",
    version,
    about = "Proof search, certificate checking and interpolation for provability logic GL"
)]
struct Cli {
    /// Print timing lines to standard error.
    #[arg(long, global = true)]
    stats: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CalculusArg {
    /// Circular proofs (K4 box rule plus back-links).
    Circ,
    /// Finite proofs with the GL box rule.
    Seq,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a sequent, given as comma-separated formulas.
    Prove {
        sequent: Option<String>,
        /// Read the sequent from a file instead.
        #[arg(long, conflicts_with = "sequent")]
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = CalculusArg::Circ)]
        calculus: CalculusArg,
        /// Write the proof certificate here when one is found.
        #[arg(long)]
        emit_proof: Option<PathBuf>,
        #[arg(long, env = BUDGET_ENV, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Check a certificate file against the calculus it declares.
    Check { path: PathBuf },
    /// Compute a Lyndon interpolant for A -> B.
    Interpolate {
        a: Option<String>,
        b: Option<String>,
        /// Read A and B from the first two non-empty lines of a file.
        #[arg(long, conflicts_with_all = ["a", "b"])]
        file: Option<PathBuf>,
        /// Also write the full report here.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, env = BUDGET_ENV, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Compute the fixed point of a formula in one of its atoms.
    Fixpoint {
        atom: String,
        formula: Option<String>,
        #[arg(long, conflicts_with = "formula")]
        file: Option<PathBuf>,
        #[arg(long, env = BUDGET_ENV, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Search for a finite countermodel.
    Oracle {
        formula: Option<String>,
        #[arg(long, conflicts_with = "formula")]
        file: Option<PathBuf>,
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..=ORACLE_WORLD_LIMIT as i64))]
        max_worlds: u16,
    },
    /// Print a deterministic pseudo-random formula corpus as JSON lines.
    Corpus {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u16).range(1..))]
        max_atoms: u16,
        #[arg(long, default_value_t = 3)]
        max_depth: usize,
        #[arg(long, default_value_t = 2)]
        max_modal_depth: usize,
        /// Decide every formula and include the verdict.
        #[arg(long)]
        verdicts: bool,
        #[arg(long, env = BUDGET_ENV, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Run the structural-property suites over a generated corpus.
    Selftest {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: usize,
        /// Instances per property.
        #[arg(long, default_value_t = DEFAULT_INSTANCES)]
        instances: usize,
        #[arg(long, env = BUDGET_ENV, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

enum Failure {
    Input(anyhow::Error),
    Abort(anyhow::Error),
    Internal(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Abort(_) => 3,
            Failure::Internal(_) => 4,
        }
    }

    fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Input(e) | Failure::Abort(e) | Failure::Internal(e) => e,
        }
    }
}

impl From<ProverError> for Failure {
    fn from(e: ProverError) -> Self {
        match e {
            ProverError::Aborted { .. } => Failure::Abort(e.into()),
            ProverError::UnsoundCertificate(_) => Failure::Internal(e.into()),
        }
    }
}

fn input(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Input(e.into())
}

/// `true` for an affirmative answer.
type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let outcome = run(cli.command);
    if cli.stats {
        eprintln!("glc: elapsed {:.3} s", started.elapsed().as_secs_f64());
    }
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("glc: {:#}", f.error());
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Prove {
            sequent,
            file,
            calculus,
            emit_proof,
            budget,
        } => prove(sequent, file, calculus, emit_proof, prover(budget)?),
        Command::Check { path } => check(&path),
        Command::Interpolate {
            a,
            b,
            file,
            report,
            budget,
        } => interpolate(a, b, file, report, prover(budget)?),
        Command::Fixpoint {
            atom,
            formula,
            file,
            budget,
        } => fixpoint(&atom, formula, file, prover(budget)?),
        Command::Oracle {
            formula,
            file,
            max_worlds,
        } => oracle(formula, file, max_worlds as usize),
        Command::Corpus {
            seed,
            count,
            max_atoms,
            max_depth,
            max_modal_depth,
            verdicts,
            budget,
        } => {
            let spec = CorpusSpec {
                seed,
                count,
                max_atoms: max_atoms as usize,
                max_depth,
                max_modal_depth,
                ..CorpusSpec::default()
            };
            corpus(&spec, verdicts.then_some(prover(budget)?))
        }
        Command::Selftest {
            seed,
            count,
            instances,
            budget,
        } => selftest(seed, count, instances, prover(budget)?),
    }
}

fn prover(budget: u64) -> Result<Prover, Failure> {
    if budget == 0 {
        return Err(input(anyhow!("budget must be positive")));
    }
    Ok(Prover::with_budget(budget))
}

fn emit(value: &Value) {
    println!("{value}");
}

/// The text of a positional argument or of `--file`, exactly one of which is given.
fn text_input(arg: Option<String>, file: Option<PathBuf>, what: &str) -> Result<String, Failure> {
    match (arg, file) {
        (Some(t), None) => Ok(t),
        (None, Some(path)) => read(&path),
        _ => Err(input(anyhow!("expected a {what} argument or --file"))),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(Failure::Input)
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .with_context(|| format!("cannot write {}", path.display()))
        .map_err(Failure::Input)
}

fn formula_arg(text: &str) -> Result<Formula, Failure> {
    parse(text.trim()).map_err(input)
}

/// Certificates are re-checked before they leave the process.
fn revalidate(cert: &Certificate) -> Result<(), Failure> {
    match proofs::check(cert) {
        proofs::Verdict::Accept => Ok(()),
        proofs::Verdict::Reject(r) => Err(Failure::Internal(anyhow!(
            "emitted certificate rejected: {r}"
        ))),
    }
}

fn prove(
    sequent: Option<String>,
    file: Option<PathBuf>,
    calculus: CalculusArg,
    emit_proof: Option<PathBuf>,
    prover: Prover,
) -> Outcome {
    let text = text_input(sequent, file, "sequent")?;
    let goal = Sequent::new(parse_sequent(&text).map_err(input)?);
    let result = match calculus {
        CalculusArg::Circ => prover.prove_circ(&goal)?,
        CalculusArg::Seq => prover.prove_glseq(&goal)?,
    };
    if let Some(cert) = &result.certificate {
        revalidate(cert)?;
        if let Some(path) = &emit_proof {
            write(path, &cert.to_json())?;
        }
    } else if let Some(path) = &emit_proof {
        eprintln!(
            "glc: not provable, no certificate written to {}",
            path.display()
        );
    }
    emit(&json!({
        "sequent": goal.to_string(),
        "calculus": match calculus {
            CalculusArg::Circ => "glcirc",
            CalculusArg::Seq => "glseq",
        },
        "verdict": result.verdict,
        "stats": result.stats,
    }));
    Ok(result.is_provable())
}

fn check(path: &Path) -> Outcome {
    let text = read(path)?;
    let cert = Certificate::from_json(&text)
        .with_context(|| format!("{} is not a certificate", path.display()))
        .map_err(Failure::Input)?;
    let verdict = proofs::check(&cert);
    emit(&verdict.to_json());
    Ok(verdict.is_accept())
}

fn interpolate(
    a: Option<String>,
    b: Option<String>,
    file: Option<PathBuf>,
    report: Option<PathBuf>,
    prover: Prover,
) -> Outcome {
    let (a, b) = match (a, b, file) {
        (Some(a), Some(b), None) => (a, b),
        (None, None, Some(path)) => {
            let text = read(&path)?;
            let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
            match (lines.next(), lines.next()) {
                (Some(a), Some(b)) => (a.to_string(), b.to_string()),
                _ => return Err(input(anyhow!("{} must hold two formulas", path.display()))),
            }
        }
        _ => return Err(input(anyhow!("expected formulas A and B, or --file"))),
    };
    let (a, b) = (formula_arg(&a)?, formula_arg(&b)?);
    match interpolation::interpolate_with(&prover, &a, &b) {
        Ok(r) => {
            revalidate(&r.left_proof)?;
            revalidate(&r.right_proof)?;
            let value = r.to_json();
            if let Some(path) = &report {
                let pretty = serde_json::to_string_pretty(&value).expect("reports serialize");
                write(path, &pretty)?;
            }
            emit(&value);
            Ok(true)
        }
        Err(InterpolationError::NotProvable(_)) => {
            emit(&json!({ "verdict": "not-provable" }));
            Ok(false)
        }
        Err(InterpolationError::Prover(e)) => Err(e.into()),
        Err(e @ InterpolationError::Aborted { .. }) => Err(Failure::Abort(e.into())),
        Err(InterpolationError::Fixpoint(FixpointError::Prover(e))) => Err(e.into()),
        Err(e) => Err(Failure::Internal(e.into())),
    }
}

fn fixpoint(atom: &str, formula: Option<String>, file: Option<PathBuf>, prover: Prover) -> Outcome {
    match parse(atom) {
        Ok(Formula::Atom(_)) => {}
        _ => return Err(input(anyhow!("`{atom}` is not an atom"))),
    }
    let a = formula_arg(&text_input(formula, file, "formula")?)?;
    match interpolation::fixpoint_with(&prover, atom, &a) {
        Ok(h) => {
            emit(&json!({
                "atom": atom,
                "formula": a,
                "fixpoint": h,
                "vocab": h.w(),
                "bound": interpolation::fixpoint_vocab_bound(atom, &a),
                "verdict": "certified",
            }));
            Ok(true)
        }
        Err(e @ FixpointError::NotModalized { .. }) => Err(input(e)),
        Err(FixpointError::Prover(e)) => Err(e.into()),
        Err(e) => Err(Failure::Internal(e.into())),
    }
}

fn oracle(formula: Option<String>, file: Option<PathBuf>, max_worlds: usize) -> Outcome {
    let f = formula_arg(&text_input(formula, file, "formula")?)?;
    match find_countermodel(&f, max_worlds) {
        None => {
            emit(&json!({ "verdict": "valid-to-bound", "max_worlds": max_worlds }));
            Ok(true)
        }
        Some(cm) => {
            emit(&json!({ "verdict": "countermodel", "countermodel": cm }));
            Ok(false)
        }
    }
}

fn corpus(spec: &CorpusSpec, prover: Option<Prover>) -> Outcome {
    let formulas = generate_corpus(spec);
    let verdicts: Option<Vec<bool>> = match prover {
        None => None,
        Some(p) => Some(
            formulas
                .par_iter()
                .map(|f| p.provable_formula(f))
                .collect::<Result<_, _>>()?,
        ),
    };
    for (i, f) in formulas.iter().enumerate() {
        let mut line = json!({ "index": i, "formula": f });
        if let Some(v) = &verdicts {
            line["verdict"] = json!(if v[i] { "provable" } else { "not-provable" });
        }
        emit(&line);
    }
    Ok(true)
}

fn selftest(seed: u64, count: usize, instances: usize, prover: Prover) -> Outcome {
    if count == 0 {
        return Err(input(anyhow!("count must be positive")));
    }
    let spec = CorpusSpec {
        seed,
        count,
        ..CorpusSpec::default()
    };
    let formulas = generate_corpus(&spec);
    let reports = suites::run_all(&prover, &formulas, instances, seed)?;
    let passed = reports.iter().all(|r| r.passed());
    for r in &reports {
        eprintln!(
            "glc: {:<17} {} instances, {} non-vacuous, {} violations",
            r.property.name(),
            r.instances,
            r.non_vacuous,
            r.violations
        );
    }
    emit(&json!({
        "seed": seed,
        "count": count,
        "instances": instances,
        "suites": reports,
        "verdict": if passed { "pass" } else { "fail" },
    }));
    Ok(passed)
}
