//! Command-line front end.
//!
//! Three subcommands: `check` decides a formula against a model with
//! either the certificate checker or the bounded reference evaluator,
//! `contract` shrinks a trace to its sampling fixpoint, and `gen-tiling`
//! writes the Kripke structure induced by a tiling instance.
//!
//! Exit codes: 0 for a satisfied check, 1 for an unsatisfied one, 2 for
//! usage or input errors, 3 for internal invariant violations.

use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bisim::{contract, sampling_word};
use crate::checker::{model_check, CheckStats};
use crate::hsformula::{parse_formula, Formula};
use crate::kripke::{parse_model, KripkeStructure, Trace};
use crate::oracle::oracle_check;
use crate::relang::{parse_regex, RegExpr};
use crate::summary::{SpecSet, SummaryCtx};
use crate::tiling::{gen_kripke, parse_instance};

#[derive(Parser)]
#[command(name = "hs-mc", version, about = "Interval temporal logic model checker")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every initial trace of a model against a formula.
    Check(CheckArgs),
    /// Contract a trace to its depth-h sampling fixpoint.
    Contract(ContractArgs),
    /// Generate the Kripke structure of a tiling instance.
    GenTiling(GenTilingArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Model file.
    #[arg(long, value_name = "FILE")]
    model: PathBuf,
    /// Formula file.
    #[arg(long, value_name = "FILE")]
    formula: PathBuf,
    /// Decision procedure to run.
    #[arg(long, value_enum, default_value_t = Mode::Checker)]
    mode: Mode,
    /// Bound on explored trace length; mandatory in oracle mode.
    #[arg(long, value_name = "N")]
    max_trace: Option<usize>,
    /// Print a work-counter line.
    #[arg(long)]
    stats: bool,
    /// Print the falsifying initial trace on UNSAT (on by default).
    #[arg(long)]
    witness: bool,
    /// Emit one JSON object instead of text lines.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Certificate-based checker; exact without a bound.
    Checker,
    /// Bounded exhaustive reference evaluator.
    Oracle,
}

#[derive(Args)]
struct ContractArgs {
    /// Model file.
    #[arg(long, value_name = "FILE")]
    model: PathBuf,
    /// Expression file, one regular expression per line.
    #[arg(long, value_name = "FILE")]
    spec: PathBuf,
    /// Trace as space-separated state names.
    #[arg(long, value_name = "STATES")]
    trace: String,
    /// Sampling depth.
    #[arg(long, value_name = "N")]
    h: usize,
}

#[derive(Args)]
struct GenTilingArgs {
    /// Tiling instance file.
    #[arg(long, value_name = "FILE")]
    instance: PathBuf,
    /// Output model file.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

/// Parses arguments from the environment, runs one command, and returns
/// the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            return code;
        }
    };
    match std::panic::catch_unwind(|| dispatch(cli)) {
        Ok(code) => code,
        Err(_) => {
            eprintln!("error: internal invariant violation");
            3
        }
    }
}

fn dispatch(cli: Cli) -> i32 {
    match cli.command {
        Command::Check(args) => cmd_check(&args),
        Command::Contract(args) => cmd_contract(&args),
        Command::GenTiling(args) => cmd_gen_tiling(&args),
    }
}

fn fail(msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    2
}

fn read_file(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|err| format!("cannot read {}: {err}", path.display()))
}

fn load_model(path: &Path) -> Result<KripkeStructure, String> {
    let text = read_file(path)?;
    parse_model(&text).map_err(|err| format!("{}: {err}", path.display()))
}

fn load_formula(path: &Path) -> Result<Formula, String> {
    let text = read_file(path)?;
    parse_formula(text.trim()).map_err(|err| format!("{}: {err}", path.display()))
}

fn cmd_check(args: &CheckArgs) -> i32 {
    let k = match load_model(&args.model) {
        Ok(k) => k,
        Err(msg) => return fail(msg),
    };
    let formula = match load_formula(&args.formula) {
        Ok(f) => f,
        Err(msg) => return fail(msg),
    };
    let (satisfied, complete, counterexample, stats) = match args.mode {
        Mode::Checker => match model_check(&k, &formula, args.max_trace) {
            Ok(verdict) => (
                verdict.satisfied,
                verdict.complete,
                verdict.counterexample,
                verdict.stats,
            ),
            Err(err) => return fail(err),
        },
        Mode::Oracle => {
            let Some(bound) = args.max_trace else {
                return fail("oracle mode requires --max-trace");
            };
            if bound == 0 {
                return fail("the trace length bound must be at least 1");
            }
            match oracle_check(&k, &formula, bound) {
                Ok(outcome) => (
                    outcome.satisfied,
                    false,
                    outcome.counterexample,
                    CheckStats::default(),
                ),
                Err(err) => return fail(err),
            }
        }
    };
    let witness_text = counterexample.map(|trace| trace.display(&k));
    if args.json {
        let report = serde_json::json!({
            "result": if satisfied { "SAT" } else { "UNSAT" },
            "complete": complete,
            "witness": witness_text,
            "stats": {
                "certificates_explored": stats.certificates_explored,
                "contractions": stats.contractions,
                "mode_switches": stats.mode_switches,
            },
        });
        println!("{report}");
    } else {
        println!("RESULT: {}", if satisfied { "SAT" } else { "UNSAT" });
        println!("COMPLETE: {}", if complete { "yes" } else { "no" });
        if !satisfied || args.witness {
            if let Some(trace) = witness_text {
                println!("COUNTEREXAMPLE: {trace}");
            }
        }
        if args.stats {
            println!(
                "STATS: certificates-explored={} contractions={} mode-switches={} formula-size={}",
                stats.certificates_explored,
                stats.contractions,
                stats.mode_switches,
                formula.size()
            );
        }
    }
    i32::from(!satisfied)
}

fn cmd_contract(args: &ContractArgs) -> i32 {
    let k = match load_model(&args.model) {
        Ok(k) => k,
        Err(msg) => return fail(msg),
    };
    let exprs = match load_spec(&args.spec) {
        Ok(exprs) => exprs,
        Err(msg) => return fail(msg),
    };
    let spec = match SpecSet::new(k.props(), exprs) {
        Ok(spec) => spec,
        Err(err) => return fail(format!("{}: {err}", args.spec.display())),
    };
    let trace = match Trace::parse(&k, &args.trace) {
        Ok(trace) => trace,
        Err(err) => return fail(err),
    };
    let ctx = SummaryCtx::new(&k, spec);
    let contracted = contract(&ctx, &trace, args.h);
    let words_equal =
        sampling_word(&ctx, &contracted, args.h) == sampling_word(&ctx, &trace, args.h);
    println!("CONTRACTED: {}", contracted.display(&k));
    println!("LENGTH: {} -> {}", trace.len(), contracted.len());
    println!("SAMPLING-WORD-EQUAL: {}", if words_equal { "yes" } else { "no" });
    0
}

fn load_spec(path: &Path) -> Result<Vec<RegExpr>, String> {
    let text = read_file(path)?;
    let mut exprs = Vec::new();
    for (number, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let expr = parse_regex(line)
            .map_err(|err| format!("{} line {}: {err}", path.display(), number + 1))?;
        exprs.push(expr);
    }
    Ok(exprs)
}

fn cmd_gen_tiling(args: &GenTilingArgs) -> i32 {
    let text = match read_file(&args.instance) {
        Ok(text) => text,
        Err(msg) => return fail(msg),
    };
    let instance = match parse_instance(&text) {
        Ok(instance) => instance,
        Err(err) => return fail(format!("{}: {err}", args.instance.display())),
    };
    let k = gen_kripke(&instance);
    let mut model_text = k.to_model_text();
    if !model_text.ends_with('\n') {
        model_text.push('\n');
    }
    if let Err(err) = std::fs::write(&args.out, &model_text) {
        return fail(format!("cannot write {}: {err}", args.out.display()));
    }
    println!(
        "WROTE: {} ({} states, {} edges)",
        args.out.display(),
        k.state_count(),
        k.edges().len()
    );
    0
}
