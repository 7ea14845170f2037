//! Command-line front end. [`run`] takes the argument list and two sinks so
//! that the binary and the tests drive exactly the same code.
//!
//! Exit codes: 0 success, 1 data or validation error, 2 usage error.
//! Reports go to `out`; diagnostics to `err`.

use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::analysis::{evaluate_scenario, lottery_scenario, paradox_scenario, simulate_scenario, AnalysisError};
use crate::report::{Report, ReportFormat};
use crate::scenario::{builtin, builtin_scenarios, parse_scenario, ScenarioFile};
use crate::simulation::{InnerCoupling, SimulationConfig, DEFAULT_INNER_SAMPLES, DEFAULT_REPLICATIONS};
use crate::utility::Parameterization;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "cfu", version, about = "Evaluate treatment switches under an asymmetric counterfactual utility")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact expected relative utility under each parameterization
    Evaluate(EvaluateArgs),
    /// Monte Carlo estimate of one evaluator
    Simulate(SimulateArgs),
    /// Compare the asymmetric recommendation with survival dominance
    Paradox(CommonArgs),
    /// Classical and penalized values of a lottery pair
    Lottery(CommonArgs),
    /// List the built-in scenarios
    ListScenarios(FormatArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => ReportFormat::Text,
            Format::Structured => ReportFormat::Structured,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvaluatorChoice {
    Deterministic,
    Stochastic,
    Population,
    All,
}

impl EvaluatorChoice {
    fn single(self) -> Option<Parameterization> {
        match self {
            Self::Deterministic => Some(Parameterization::Deterministic),
            Self::Stochastic => Some(Parameterization::Stochastic),
            Self::Population => Some(Parameterization::Population),
            Self::All => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Coupling {
    Common,
    Independent,
}

#[derive(Debug, Args)]
pub struct FormatArgs {
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Built-in scenario name or path to a scenario file
    #[arg(long)]
    pub scenario: String,
    #[command(flatten)]
    pub format: FormatArgs,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value = "all")]
    pub evaluator: EvaluatorChoice,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value = "population")]
    pub evaluator: EvaluatorChoice,
    #[arg(long, default_value_t = DEFAULT_REPLICATIONS, value_parser = clap::value_parser!(u64).range(1..))]
    pub replications: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=1024))]
    pub parallelism: u64,
    #[arg(long, default_value_t = DEFAULT_INNER_SAMPLES, value_parser = clap::value_parser!(u64).range(1..))]
    pub inner_samples: u64,
    /// How inner draws of the two arms are paired within a replication
    #[arg(long, value_enum, default_value = "common")]
    pub coupling: Coupling,
}

enum Failure {
    Data(String),
    Usage(String),
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Incompatible { .. } => Failure::Usage(e.to_string()),
            other => Failure::Data(other.to_string()),
        }
    }
}

/// Built-in name first, then a file path.
pub fn load_scenario(source: &str) -> Result<ScenarioFile, String> {
    if let Some(s) = builtin(source) {
        return Ok(s);
    }
    let path = Path::new(source);
    let text = std::fs::read_to_string(path).map_err(|e| {
        format!("cannot read scenario {source:?}: {e} (not a built-in name either; try `list-scenarios`)")
    })?;
    parse_scenario(&text).map_err(|e| format!("invalid scenario {source:?}: {e}"))
}

fn list_scenarios(format: Format) -> String {
    let all = builtin_scenarios();
    match format {
        Format::Text => all
            .iter()
            .map(|s| {
                let locus = s.variation_locus.map_or("-", |v| v.name());
                format!("{}\t{}\t{}\t{}\n", s.name, s.kind(), locus, s.description.as_deref().unwrap_or(""))
            })
            .collect(),
        Format::Structured => {
            let items: Vec<_> = all
                .iter()
                .map(|s| {
                    json!({
                        "name": s.name,
                        "kind": s.kind().name(),
                        "variation_locus": s.variation_locus.map(|v| v.name()),
                        "description": s.description,
                    })
                })
                .collect();
            let mut doc = serde_json::to_string_pretty(&items).expect("json values serialize");
            doc.push('\n');
            doc
        }
    }
}

fn execute(command: Command) -> Result<String, Failure> {
    let render = |r: Report, f: Format| r.render(f.into());
    match command {
        Command::ListScenarios(a) => Ok(list_scenarios(a.format)),
        Command::Evaluate(a) => {
            let s = load_scenario(&a.common.scenario).map_err(Failure::Data)?;
            Ok(render(evaluate_scenario(&s, a.evaluator.single())?, a.common.format.format))
        }
        Command::Paradox(a) => {
            let s = load_scenario(&a.scenario).map_err(Failure::Data)?;
            Ok(render(paradox_scenario(&s)?, a.format.format))
        }
        Command::Lottery(a) => {
            let s = load_scenario(&a.scenario).map_err(Failure::Data)?;
            Ok(render(lottery_scenario(&s)?, a.format.format))
        }
        Command::Simulate(a) => {
            let which = a.evaluator.single().ok_or_else(|| {
                Failure::Usage("simulate runs one evaluator at a time; pick deterministic, stochastic or population".into())
            })?;
            let s = load_scenario(&a.common.scenario).map_err(Failure::Data)?;
            let cfg = SimulationConfig::new(a.replications, a.seed)
                .with_parallelism(a.parallelism as usize)
                .with_inner_samples(a.inner_samples)
                .with_coupling(match a.coupling {
                    Coupling::Common => InnerCoupling::Common,
                    Coupling::Independent => InnerCoupling::Independent,
                });
            Ok(render(simulate_scenario(&s, which, &cfg)?, a.common.format.format))
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli.command) {
        Ok(doc) => {
            let _ = out.write_all(doc.as_bytes());
            EXIT_OK
        }
        Err(Failure::Data(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_DATA
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "usage error: {msg}");
            EXIT_USAGE
        }
    }
}
