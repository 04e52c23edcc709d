//! Command-line surface.

use crate::instance::{load_instance, paper_table1, InstanceError};
use crate::report::{reproduction_table, sweep_table, to_csv, to_json, Format};
use crate::sweep::{reproduce, solve_command, Solver, SweepConfig};
use clap::{Args, Parser, Subcommand};
use fuzzport_core::{ConfidenceLevels, IcaConfig, PenaltyConfig, PortfolioInstance};
use std::path::PathBuf;
use std::process::ExitCode;

pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;
pub const EXIT_THRESHOLD: u8 = 4;

/// Portfolio selection with fuzzy random returns.
///
/// Without a subcommand, solves the instance at each requested level.
#[derive(Debug, Parser)]
#[command(name = "fuzzport", version, args_conflicts_with_subcommands = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,

    #[command(flatten)]
    pub solve: SolveArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact and search results side by side at levels 0.1, 0.4, 0.7, 0.9 on
    /// the bundled five-asset fixture, with deviations from published values.
    ReproducePaper(ReproduceArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Seeds, as `A..B` (inclusive), `A..=B`, `A,B,C` or a single value.
    #[arg(long, default_value = "1..20", value_parser = parse_seeds)]
    pub seeds: Seeds,
    /// Maximum iterations.
    #[arg(long, default_value_t = 25)]
    pub iters: usize,
    #[arg(long, default_value_t = 100)]
    pub countries: usize,
    #[arg(long, default_value_t = 10)]
    pub imperialists: usize,
    /// Revolution probability per colony and iteration.
    #[arg(long, default_value_t = 0.2)]
    pub revolution: f64,
    /// Colony weight in empire power, in (0, 0.1).
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    /// Penalty factor on the budget equality.
    #[arg(long, default_value_t = 1e3)]
    pub eq_factor: f64,
    /// Penalize the return floor too, and exit with 4 if it is not met.
    #[arg(long)]
    pub enforce_threshold: bool,
}

impl SearchArgs {
    fn ica(&self) -> IcaConfig {
        IcaConfig {
            n_countries: self.countries,
            n_imperialists: self.imperialists,
            revolution_rate: self.revolution,
            max_iterations: self.iters,
            epsilon: self.epsilon,
            ..IcaConfig::default()
        }
    }

    fn penalty(&self) -> PenaltyConfig {
        PenaltyConfig {
            eq_factor: self.eq_factor,
            enforce_threshold: self.enforce_threshold,
            ..PenaltyConfig::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    /// Instance file (JSON). Defaults to the bundled five-asset fixture.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    /// Coupled levels lambda = eta; comma separated or repeated.
    #[arg(long, value_delimiter = ',')]
    pub levels: Vec<f64>,
    /// Probability level, overriding the coupled value.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Necessity level, overriding the coupled value.
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long, value_enum, default_value_t = SolverArg::Exact)]
    pub solver: SolverArg,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ReproduceArgs {
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SolverArg {
    Exact,
    Ica,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seeds(pub Vec<u64>);

pub fn parse_seeds(s: &str) -> Result<Seeds, String> {
    let s = s.trim();
    let num = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|e| format!("bad seed `{t}`: {e}"))
    };
    let seeds = if let Some((a, b)) = s.split_once("..") {
        let (lo, hi) = (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?);
        if lo > hi {
            return Err(format!("empty seed range {s}"));
        }
        (lo..=hi).collect()
    } else {
        s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    Ok(Seeds(seeds))
}

/// The `(lambda, eta)` pairs requested on the command line.
pub fn resolve_levels(
    levels: &[f64],
    lambda: Option<f64>,
    eta: Option<f64>,
) -> fuzzport_core::Result<Vec<ConfidenceLevels>> {
    let base: Vec<f64> = if !levels.is_empty() {
        levels.to_vec()
    } else if let Some(v) = lambda.or(eta) {
        vec![v]
    } else {
        crate::sweep::PUBLISHED_LEVELS.to_vec()
    };
    base.iter()
        .map(|&l| ConfidenceLevels::new(lambda.unwrap_or(l), eta.unwrap_or(l)))
        .collect()
}

enum Failure {
    Validation(String),
    Budget(String),
    Other(anyhow::Error),
}

impl From<InstanceError> for Failure {
    fn from(e: InstanceError) -> Self {
        match e {
            InstanceError::BudgetInfeasible { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<fuzzport_core::Error> for Failure {
    fn from(e: fuzzport_core::Error) -> Self {
        match e {
            fuzzport_core::Error::BudgetInfeasible { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Other(anyhow::anyhow!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Option<PathBuf>) -> Result<PortfolioInstance, Failure> {
    Ok(match path {
        Some(p) => load_instance(p)?,
        None => paper_table1(),
    })
}

fn solve(args: &SolveArgs) -> Result<bool, Failure> {
    let instance = load(&args.instance)?;
    let cfg = SweepConfig {
        levels: resolve_levels(&args.levels, args.lambda, args.eta)?,
        solver: match args.solver {
            SolverArg::Exact => Solver::Exact,
            SolverArg::Ica => Solver::Ica,
        },
        seeds: args.search.seeds.0.clone(),
        ica: args.search.ica(),
        penalty: args.search.penalty(),
    };
    let report = solve_command(&instance, &cfg)?;
    let text = match args.output.format {
        Format::Csv => to_csv(&report.rows)?,
        Format::Json => to_json(&report)?,
        Format::Table => sweep_table(&report),
    };
    emit(&text, &args.output.out)?;
    Ok(report.all_thresholds_met())
}

fn reproduce_cmd(args: &ReproduceArgs) -> Result<bool, Failure> {
    let report = reproduce(
        &paper_table1(),
        args.search.seeds.0.clone(),
        args.search.ica(),
        args.search.penalty(),
    )?;
    let text = match args.output.format {
        Format::Csv => to_csv(&report.sweep.rows)?,
        Format::Json => to_json(&report)?,
        Format::Table => reproduction_table(&report),
    };
    emit(&text, &args.output.out)?;
    Ok(report.sweep.all_thresholds_met())
}

/// Runs the parsed command line and maps the outcome to an exit code.
pub fn execute(cli: Cli) -> ExitCode {
    let (result, enforce) = match &cli.command {
        Some(Command::ReproducePaper(a)) => (reproduce_cmd(a), a.search.enforce_threshold),
        None => (solve(&cli.solve), cli.solve.search.enforce_threshold),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) if enforce => {
            eprintln!("error: return floor not met at one or more levels");
            ExitCode::from(EXIT_THRESHOLD)
        }
        Ok(false) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_VALIDATION)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_BUDGET)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
