use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use qcalc_cli::builtin;
use qcalc_cli::error::{CliError, Result};
use qcalc_cli::format::{emit_batch, Format};
use qcalc_cli::scenario::{load_scenarios, parse_tolerance_override, run_batch, Kind, RunOptions, Scenario};

#[derive(Parser)]
#[command(
    name = "qcalc",
    version,
    about = "Run quantity-calculus scenarios and report residuals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenarios in one or more JSON files.
    Run {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Markdown)]
        format: Format,
        /// Overrides the scenario seed and QCALC_SEED.
        #[arg(long)]
        seed: Option<u64>,
        /// Tolerance override, e.g. value_tol=1e-8. Repeatable.
        #[arg(long = "tol", value_name = "KEY=VAL")]
        tol: Vec<String>,
    },
    /// Run a bundled demo scenario.
    Demo {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(Kind::NAMES))]
        kind: String,
        #[arg(long, value_enum, default_value_t = Format::Markdown)]
        format: Format,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Randomized check of the algebra axioms.
    CheckAxioms {
        #[arg(long, value_parser = ["classical", "matrix"])]
        realization: String,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Format::Markdown)]
        format: Format,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn env_seed() -> Result<Option<u64>> {
    match std::env::var("QCALC_SEED") {
        Ok(text) => text
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Param(format!("QCALC_SEED must be an unsigned integer, got {text:?}"))),
        Err(_) => Ok(None),
    }
}

fn execute(command: Command) -> Result<bool> {
    let env_seed = env_seed()?;
    let (scenarios, format, opts) = match command {
        Command::Run {
            files,
            format,
            seed,
            tol,
        } => {
            let mut scenarios = Vec::new();
            for path in &files {
                scenarios.extend(load_scenarios(path)?);
            }
            let tolerances = tol.iter().map(|t| parse_tolerance_override(t)).collect::<Result<_>>()?;
            (
                scenarios,
                format,
                RunOptions {
                    seed,
                    env_seed,
                    tolerances,
                },
            )
        }
        Command::Demo { kind, format, seed } => {
            let scenario = builtin::demo(Kind::parse(&kind)?)?;
            (
                vec![scenario],
                format,
                RunOptions {
                    seed,
                    env_seed,
                    ..RunOptions::default()
                },
            )
        }
        Command::CheckAxioms {
            realization,
            dim,
            samples,
            format,
            seed,
        } => {
            let params = json!({ "realization": realization, "dim": dim, "samples": samples, "faults": false });
            let scenario = Scenario {
                name: format!("check-axioms-{realization}"),
                kind: Kind::AxiomCheck,
                params: params.as_object().cloned().unwrap_or_default(),
                seed: None,
                tolerances: Default::default(),
            };
            (
                vec![scenario],
                format,
                RunOptions {
                    seed,
                    env_seed,
                    ..RunOptions::default()
                },
            )
        }
    };
    let start = Instant::now();
    let timed = run_batch(&scenarios, &opts)?;
    for t in &timed {
        eprintln!("{}: {:.3} ms", t.report.scenario.name, t.elapsed.as_secs_f64() * 1e3);
    }
    eprintln!("wall time: {:.3} ms", start.elapsed().as_secs_f64() * 1e3);
    let reports: Vec<_> = timed.into_iter().map(|t| t.report).collect();
    print!("{}", emit_batch(&reports, format));
    Ok(reports.iter().all(|r| r.all_passed()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
