mod commands;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mebval::aggregate::DEFAULT_MAX_SUBSETS;
use mebval::Rule;

use report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] mebval::Error),
    #[error("io error: {0}")]
    Io(#[from] io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Usage(String),
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "mebval", version, about = "Robust aggregation with enclosing-ball validity certificates")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Slack allowed before a factor counts as exceeding its bound.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Cap on enumerated size-(n-t) subsets.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_SUBSETS)]
    pub max_subsets: u128,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run aggregation rules on a point file and certify the outputs.
    Aggregate(commands::AggregateArgs),
    /// Certify a given output vector against a point file.
    Certify(commands::CertifyArgs),
    /// Generate a named construction, optionally emit and verify it.
    Scenario(commands::ScenarioArgs),
    /// Sweep seeds over an (n, t, d) grid and compare empirical factors to bounds.
    Bench(commands::BenchArgs),
}

#[derive(Debug, Clone)]
pub struct Rules(pub Vec<Rule>);

pub fn parse_rules(s: &str) -> Result<Rules, String> {
    if s == "all" {
        return Ok(Rules(Rule::ALL.to_vec()));
    }
    s.split(',')
        .map(|r| r.trim().parse::<Rule>().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()
        .map(Rules)
}

fn emit(report: &Report, global: &Global) -> CliResult<()> {
    let mut out: Box<dyn Write> = match &global.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    match global.format {
        Format::Json => report.write_json(&mut out)?,
        Format::Csv => report.write_csv(&mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> CliResult<bool> {
    let g = &cli.global;
    let report = match cli.command {
        Command::Aggregate(a) => commands::aggregate(&a, g)?,
        Command::Certify(a) => commands::certify(&a, g)?,
        Command::Scenario(a) => commands::scenario(&a, g)?,
        Command::Bench(a) => commands::bench(&a, g)?,
    };
    emit(&report, g)?;
    Ok(report.pass)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
