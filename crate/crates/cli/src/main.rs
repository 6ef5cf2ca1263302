use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use discord_core::discord::{OptimizerConfig, Route};
use discord_core::generate::Family;

mod commands;
mod files;
mod report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] discord_core::Error),
    #[error("i/o: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Thm1,
    Thm2,
    Thm3,
    Tripartite,
    Saturation,
    All,
}

/// Which side of the cross-term condition generated instances fall on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConditionFamily {
    Satisfying,
    Violating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Direct,
    Neumark,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Self {
        match r {
            RouteArg::Direct => Route::Direct,
            RouteArg::Neumark => Route::Neumark,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "discord", version, about = "Quantum discord and decomposition checks for bipartite states")]
pub struct Cli {
    /// Seed for generators and optimizer starts.
    #[arg(long, global = true, default_value_t = OptimizerConfig::default().seed)]
    pub seed: u64,
    /// Random starts per optimization.
    #[arg(long, global = true, default_value_t = OptimizerConfig::default().starts)]
    pub starts: usize,
    /// Nelder-Mead function tolerance.
    #[arg(long, global = true, default_value_t = OptimizerConfig::default().function_tolerance)]
    pub tol: f64,
    /// Generated instances per theorem suite.
    #[arg(long, global = true, default_value_t = 10)]
    pub instances: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mutual information, classical correlations and both discords of a state file.
    Discord {
        state: PathBuf,
        /// How the POVM minimum is searched for.
        #[arg(long, value_enum, default_value_t = RouteArg::Direct)]
        route: RouteArg,
    },
    /// Runs theorem checks over seeded generated states.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Instances for the zero-minimum check (other suites always satisfy the condition).
        #[arg(long, value_enum, default_value_t = ConditionFamily::Satisfying)]
        family: ConditionFamily,
    },
    /// Writes a generated state file.
    Gen {
        /// Generator spec as JSON; the flags below are ignored when given.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, value_parser = parse_family, default_value = "random_density")]
        family: Family,
        /// `dA,dB`.
        #[arg(long, value_delimiter = ',', default_values_t = [2, 2])]
        dims: Vec<usize>,
        /// A-block sizes for the block families.
        #[arg(long, value_delimiter = ',')]
        blocks: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        weights: Vec<f64>,
        #[arg(long)]
        rank: Option<usize>,
        /// Draw a rank-two state that violates the cross-term condition instead.
        #[arg(long)]
        violating: bool,
    },
    /// Builds a Neumark dilation of a POVM file and reports its residuals.
    Neumark {
        povm: PathBuf,
        /// Where to write the dilation; embedded in the report when omitted.
        #[arg(long)]
        dilation: Option<PathBuf>,
    },
}

fn parse_family(s: &str) -> Result<Family, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|_| {
        "expected one of random_density, random_pure, condition_pure_family, \
         orthogonal_mixed_family, classical_quantum, product"
            .to_string()
    })
}

impl Cli {
    pub fn optimizer(&self) -> Result<OptimizerConfig, CliError> {
        let cfg = OptimizerConfig {
            starts: self.starts,
            function_tolerance: self.tol,
            seed: self.seed,
            ..OptimizerConfig::default()
        };
        cfg.validate().map_err(|e| CliError::Input(e.to_string()))?;
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
