//! Batch command-line surface for the ignorance logic toolkit.
//!
//! One command per process: evaluate a formula, announce one, search for
//! a model, check a derivation script, run a validation suite, print a
//! graph, or replay the bundled claim gallery. Outputs are deterministic
//! given the inputs, the seed and the search bounds.
//!
//! Exit codes: 0 success (including decisive negative verdicts such as
//! INCONSISTENT or UNSAT), 1 a property or claim failed, 2 usage error,
//! 3 the bounded oracle could not decide and `--on-unknown=error`.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use lei::figures;
use lei::formula::{parse, render, Formula};
use lei::model::{load_model, save_model, to_dot, KripkeModel, TruthValue};
use lei::oracle::{self, SearchBounds, SearchVerdict};
use lei::proofkit;
use lei::semantics::{eval3, sat, sat_neg};
use lei::suites;
use lei::update::{announce, defining_set, eval_dynamic, verify_new_world};
use lei::update::{UnknownPolicy, UpdateError, UpdateOutcome};

#[derive(Parser)]
#[command(
    name = "lei",
    version,
    about = "Model checking, announcements and derivations for a logic of ignorance"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula at a world and print its ternary value.
    Eval(EvalArgs),
    /// Announce a formula at a world and emit the updated model.
    Announce(AnnounceArgs),
    /// Search for a small model making every given formula true.
    Solve(SolveArgs),
    /// Check a derivation script line by line.
    CheckProof(CheckProofArgs),
    /// Run a seeded validation suite and print its report.
    Validate(ValidateArgs),
    /// Print a model in Graphviz dot form.
    Dot(DotArgs),
    /// Replay every bundled model and derivation claim.
    Figures(FiguresArgs),
}

/// What to do when the bounded oracle cannot decide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OnUnknown {
    /// Print UNKNOWN and exit 3.
    Error,
    /// Print UNKNOWN and exit 0.
    Report,
    /// Treat unsettled admissibility as consistent and keep going.
    AssumeConsistent,
    /// Treat unsettled admissibility as inconsistent.
    AssumeInconsistent,
}

impl OnUnknown {
    fn policy(self) -> UnknownPolicy {
        match self {
            OnUnknown::Error | OnUnknown::Report => UnknownPolicy::Error,
            OnUnknown::AssumeConsistent => UnknownPolicy::AssumeConsistent,
            OnUnknown::AssumeInconsistent => UnknownPolicy::AssumeInconsistent,
        }
    }

    /// Exit code for an UNKNOWN the policy let through.
    fn unknown_exit(self) -> u8 {
        match self {
            OnUnknown::Error => 3,
            _ => 0,
        }
    }
}

/// Search bounds shared by every oracle-backed subcommand.
#[derive(Args)]
struct BoundsArgs {
    /// Largest world count the bounded search may consider.
    #[arg(long = "max-worlds", default_value_t = SearchBounds::default().max_worlds)]
    max_worlds: usize,
    /// Candidate budget before the bounded search gives up with UNKNOWN.
    #[arg(long = "max-candidates", default_value_t = SearchBounds::default().max_candidates)]
    max_candidates: u64,
    /// Worker threads for the bounded search (verdicts do not depend on this).
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Behaviour when the bounded search cannot decide.
    #[arg(long = "on-unknown", value_enum, default_value_t = OnUnknown::Error)]
    on_unknown: OnUnknown,
}

impl BoundsArgs {
    fn bounds(&self) -> SearchBounds {
        SearchBounds {
            max_worlds: self.max_worlds,
            max_candidates: self.max_candidates,
            workers: self.workers.max(1),
            ..SearchBounds::default()
        }
    }
}

#[derive(Args)]
struct EvalArgs {
    /// Model file to evaluate in.
    #[arg(short = 'm', long = "model")]
    model: PathBuf,
    /// World to evaluate at.
    #[arg(short = 'w', long = "world")]
    world: String,
    /// Formula to evaluate (announcements allowed).
    #[arg(short = 'f', long = "formula")]
    formula: String,
    #[command(flatten)]
    bounds: BoundsArgs,
}

#[derive(Args)]
struct AnnounceArgs {
    /// Model file to update.
    #[arg(short = 'm', long = "model")]
    model: PathBuf,
    /// World the announcement is made at.
    #[arg(short = 'w', long = "world")]
    world: String,
    /// Announced formula (must be announcement-free).
    #[arg(short = 'f', long = "formula")]
    formula: String,
    /// Write the updated model here instead of stdout.
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
    /// Depth cap for the post-update drift check at the new world.
    #[arg(long, default_value_t = 2)]
    depth: usize,
    #[command(flatten)]
    bounds: BoundsArgs,
}

#[derive(Args)]
struct SolveArgs {
    /// Formula that must come out true (repeatable).
    #[arg(short = 'f', long = "formula", required = true)]
    formulas: Vec<String>,
    /// Write the witness model here instead of stdout.
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
    #[command(flatten)]
    bounds: BoundsArgs,
}

#[derive(Args)]
struct CheckProofArgs {
    /// Derivation script to check.
    file: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteName {
    Soundness,
    Equivalence,
    Update,
    Extmodel,
}

impl SuiteName {
    fn as_str(self) -> &'static str {
        match self {
            SuiteName::Soundness => "soundness",
            SuiteName::Equivalence => "equivalence",
            SuiteName::Update => "update",
            SuiteName::Extmodel => "extmodel",
        }
    }
}

#[derive(Args)]
struct ValidateArgs {
    /// Which suite to run.
    #[arg(long, value_enum)]
    suite: SuiteName,
    /// Trials to run (defaults to the suite's standard count).
    #[arg(long)]
    trials: Option<usize>,
    /// Random seed; the LEI_SEED environment variable overrides this.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for the bounded search (reports do not depend on this).
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct DotArgs {
    /// Model file to print.
    #[arg(short = 'm', long = "model")]
    model: PathBuf,
    /// World to double-ring as the point.
    #[arg(short = 'w', long = "world")]
    world: Option<String>,
}

#[derive(Args)]
struct FiguresArgs {
    #[command(flatten)]
    bounds: BoundsArgs,
}

/// Restores the default SIGPIPE disposition so that piping into `head`
/// ends the process quietly instead of panicking mid-print.
#[cfg(unix)]
fn reset_sigpipe() {
    extern "C" {
        fn signal(signum: i32, handler: usize) -> usize;
    }
    const SIGPIPE: i32 = 13;
    const SIG_DFL: usize = 0;
    unsafe {
        signal(SIGPIPE, SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() -> ExitCode {
    reset_sigpipe();
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: &Command) -> Result<u8> {
    match command {
        Command::Eval(args) => cmd_eval(args),
        Command::Announce(args) => cmd_announce(args),
        Command::Solve(args) => cmd_solve(args),
        Command::CheckProof(args) => cmd_check_proof(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Dot(args) => cmd_dot(args),
        Command::Figures(args) => cmd_figures(args),
    }
}

fn read_model(path: &PathBuf) -> Result<KripkeModel> {
    let src = fs::read_to_string(path)
        .with_context(|| format!("cannot read model file {}", path.display()))?;
    load_model(&src).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

fn read_formula(src: &str) -> Result<Formula> {
    parse(src).map_err(|e| anyhow::anyhow!("formula {src:?}: {e}"))
}

fn long(v: TruthValue) -> &'static str {
    match v {
        TruthValue::True => "True",
        TruthValue::False => "False",
        TruthValue::Gap => "Gap",
    }
}

fn cmd_eval(args: &EvalArgs) -> Result<u8> {
    let model = read_model(&args.model)?;
    let f = read_formula(&args.formula)?;
    if f.is_static() {
        let v = eval3(&model, &args.world, &f)?;
        println!("{}", long(v));
        println!(
            "sat: {}  sat_neg: {}",
            sat(&model, &args.world, &f)?,
            sat_neg(&model, &args.world, &f)?
        );
        return Ok(0);
    }
    let bounds = args.bounds.bounds();
    match eval_dynamic(
        &model,
        &args.world,
        &f,
        &bounds,
        args.bounds.on_unknown.policy(),
    ) {
        Ok(v) => {
            println!("{}", long(v));
            println!(
                "sat: {}  sat_neg: {}",
                v == TruthValue::True,
                v == TruthValue::False
            );
            Ok(0)
        }
        Err(UpdateError::Undecided(g)) => {
            println!("UNKNOWN");
            eprintln!("the bounded search could not decide {}", render(&g));
            Ok(args.bounds.on_unknown.unknown_exit())
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_announce(args: &AnnounceArgs) -> Result<u8> {
    let model = read_model(&args.model)?;
    let f = read_formula(&args.formula)?;
    let bounds = args.bounds.bounds();
    match announce(
        &model,
        &args.world,
        &f,
        &bounds,
        args.bounds.on_unknown.policy(),
    )? {
        UpdateOutcome::Updated {
            model: updated,
            new_world,
        } => {
            let defining = defining_set(&model, &args.world, &f)?;
            let report = verify_new_world(&updated, &new_world, &defining, args.depth)?;
            let drift = format!(
                "drift check at {new_world}: {} formulas, {} drifted",
                report.checked,
                report.drifted.len()
            );
            let text = save_model(&updated);
            match &args.out {
                Some(path) => {
                    fs::write(path, &text)
                        .with_context(|| format!("cannot write {}", path.display()))?;
                    println!(
                        "updated model written to {} (new world {new_world})",
                        path.display()
                    );
                    println!("{drift}");
                }
                None => {
                    // Keep stdout parseable as a model file.
                    print!("{text}");
                    eprintln!("new world {new_world}; {drift}");
                }
            }
            Ok(0)
        }
        UpdateOutcome::Inconsistent => {
            println!("INCONSISTENT");
            Ok(0)
        }
        UpdateOutcome::Unknown => {
            println!("UNKNOWN");
            Ok(args.bounds.on_unknown.unknown_exit())
        }
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<u8> {
    let formulas: Vec<Formula> = args
        .formulas
        .iter()
        .map(|s| read_formula(s))
        .collect::<Result<_>>()?;
    let bounds = args.bounds.bounds();
    match oracle::satisfiable(&formulas, &[], &bounds)? {
        SearchVerdict::Sat(witness) => {
            println!("SAT (point {})", witness.point);
            let text = save_model(&witness.model);
            match &args.out {
                Some(path) => {
                    fs::write(path, &text)
                        .with_context(|| format!("cannot write {}", path.display()))?;
                    println!("witness written to {}", path.display());
                }
                None => print!("{text}"),
            }
            Ok(0)
        }
        SearchVerdict::UnsatWithin => {
            println!("UNSAT<={}", bounds.max_worlds);
            Ok(0)
        }
        SearchVerdict::Unknown => {
            println!("UNKNOWN");
            Ok(args.bounds.on_unknown.unknown_exit())
        }
    }
}

fn cmd_check_proof(args: &CheckProofArgs) -> Result<u8> {
    let src = fs::read_to_string(&args.file)
        .with_context(|| format!("cannot read script {}", args.file.display()))?;
    let derivation = proofkit::parse_script(&src)
        .map_err(|e| anyhow::anyhow!("{}: {e}", args.file.display()))?;
    match proofkit::check_derivation(&derivation) {
        Ok(()) => {
            for (i, line) in derivation.lines.iter().enumerate() {
                println!("line {}: ok  {}", i + 1, render(&line.formula));
            }
            println!("derivation checks ({} lines)", derivation.lines.len());
            Ok(0)
        }
        Err(err) => {
            for (i, line) in derivation.lines.iter().enumerate() {
                if i + 1 == err.line {
                    break;
                }
                println!("line {}: ok  {}", i + 1, render(&line.formula));
            }
            println!("line {}: error: {}", err.line, err.reason);
            Ok(1)
        }
    }
}

fn cmd_validate(args: &ValidateArgs) -> Result<u8> {
    let seed = match std::env::var("LEI_SEED") {
        Ok(raw) => raw
            .parse::<u64>()
            .with_context(|| format!("LEI_SEED must be an unsigned integer, got {raw:?}"))?,
        Err(_) => args.seed,
    };
    let report = suites::run_suite(args.suite.as_str(), seed, args.trials, args.workers.max(1))
        .expect("suite names are closed");
    print!("{report}");
    Ok(if report.passed { 0 } else { 1 })
}

fn cmd_dot(args: &DotArgs) -> Result<u8> {
    let model = read_model(&args.model)?;
    if let Some(w) = &args.world {
        if !model.has_world(w) {
            anyhow::bail!("model has no world {w}");
        }
    }
    print!("{}", to_dot(&model, args.world.as_deref()));
    Ok(0)
}

fn cmd_figures(args: &FiguresArgs) -> Result<u8> {
    let claims = figures::run_gallery(&args.bounds.bounds());
    let mut failures = 0usize;
    for c in &claims {
        if c.pass {
            println!("ok    {}", c.name);
        } else {
            failures += 1;
            if c.note.is_empty() {
                println!("FAIL  {}", c.name);
            } else {
                println!("FAIL  {} ({})", c.name, c.note);
            }
        }
    }
    println!("{} claims, {failures} failures", claims.len());
    Ok(if failures == 0 { 0 } else { 1 })
}
