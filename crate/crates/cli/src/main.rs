use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gpsofic_cli::{run, validate_path, CliError, Kind, RunArgs, THREADS_ENV};

/// Experiments with random permutation models of graph products.
#[derive(Debug, Parser)]
#[command(name = "gpsofic", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// TOML config file, or the name of a shipped preset (`two-free-M2`).
    #[arg(long)]
    config: String,
    /// Overrides the seed in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; a manifest is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a string assignment for a colour graph.
    AssignStrings(Common),
    /// Exact expected trace of a test digraph, term by term.
    TrafficExpect(Common),
    /// Monte Carlo estimate of the expected trace.
    TrafficMc(Common),
    /// Raw per-trial centered word norms in the permutation model.
    Simulate(Common),
    /// Median decay of centered word norms over the N schedule.
    IndependenceTest(Common),
    /// Pseudo-determinants and their Galois-orbit lower bounds.
    Detplus(Common),
    /// Crossed-product microstates of M_n and their diagonal data.
    Microstates(Common),
    /// Rank defect of the relation matrix at microstates.
    DfExperiment(Common),
    /// Check a fixture, assignment, matrix or config file.
    Validate {
        path: PathBuf,
        /// Write the report as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::schema(THREADS_ENV, format!("`{raw}` is not a thread count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Failed(e.to_string()))
}

fn main_inner(cli: Cli) -> Result<bool, CliError> {
    configure_threads()?;
    let (kind, common) = match cli.command {
        Command::Validate { path, out } => {
            let report = validate_path(&path)?;
            println!("{}: {}", path.display(), report.kind);
            for c in &report.checks {
                println!(
                    "  {} {}: {}",
                    if c.passed { "pass" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            if let Some(out) = out {
                gpsofic_cli::output::write_atomic(&out, &report.table().to_csv()?)?;
            }
            return Ok(report.passed());
        }
        Command::AssignStrings(c) => (Kind::AssignStrings, c),
        Command::TrafficExpect(c) => (Kind::TrafficExpect, c),
        Command::TrafficMc(c) => (Kind::TrafficMc, c),
        Command::Simulate(c) => (Kind::Simulate, c),
        Command::IndependenceTest(c) => (Kind::IndependenceTest, c),
        Command::Detplus(c) => (Kind::Detplus, c),
        Command::Microstates(c) => (Kind::Microstates, c),
        Command::DfExperiment(c) => (Kind::DfExperiment, c),
    };
    let (manifest, summary) = run(
        kind,
        &RunArgs {
            config: common.config,
            seed: common.seed,
            out: common.out,
        },
    )?;
    for line in summary {
        eprintln!("{line}");
    }
    print!("{}", manifest.to_json());
    Ok(true)
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
