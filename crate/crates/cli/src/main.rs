//! `relidep`: reliability curves, independence errors, stochastic orders and
//! Monte Carlo checks for dependent series and parallel systems.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use relidep::{Baseline, EvalGrid, Family, OrderRelation, Structure};

#[derive(Parser, Debug)]
#[command(
    name = "relidep",
    version,
    about = "Reliability of series and parallel systems with dependent lifetimes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Dependent,
    Independent,
}

#[derive(Args, Debug)]
pub struct ModelArgs {
    /// Model document (JSON).
    #[arg(long)]
    pub model: PathBuf,

    #[arg(long, default_value = "series")]
    pub structure: Structure,

    /// Independent baseline: paper-literal or true-marginal.
    #[arg(long, default_value = "paper-literal")]
    pub baseline: Baseline,

    /// START:STOP:COUNT:SPACING with spacing linear or log.
    #[arg(long, default_value = "0.01:10:200:log")]
    pub grid: EvalGrid<f64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// System SF, FR, RFR, MRL and AI on a grid.
    Eval {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = Side::Dependent)]
        assumption: Side,
        /// Also run the numeric engine where a closed form exists and report the gap.
        #[arg(long)]
        verify: bool,
    },
    /// Relative errors of assuming independence, with sign assessment.
    Error {
        #[command(flatten)]
        model: ModelArgs,
        /// Also write the sign assessment (JSON) here in CSV mode.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Stochastic orders between two systems built from the model.
    Order {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = Side::Dependent)]
        a: Side,
        #[arg(long, value_enum, default_value_t = Side::Independent)]
        b: Side,
        /// Comma-separated subset of st,fr,rfr,mrl,lr,af,ai.
        #[arg(long, value_delimiter = ',', default_value = "st,fr,rfr,mrl,lr,af,ai")]
        relations: Vec<OrderRelation>,
    },
    /// Orthant dependence label of the model.
    Depend {
        #[command(flatten)]
        model: ModelArgs,
        /// Latin-hypercube sample points.
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Empirical system SF from exact samples, checked against the analytic SF.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Confidence level of the pointwise bands.
        #[arg(long, default_value_t = 0.99)]
        level: f64,
        /// Also write the coverage report (JSON) here in CSV mode.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Supported families and their parameters.
    Families {
        /// Print an example model document for this family instead.
        #[arg(long)]
        example: Option<Family>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            commands::report_failure("usage", &e.render().to_string());
            return ExitCode::from(commands::EXIT_VALIDATION);
        }
    };
    ExitCode::from(commands::run(&cli))
}
