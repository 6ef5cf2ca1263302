//! Command reports and how they are written.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use discord_core::discord::OptimizerConfig;
use discord_core::theorems::{Quantity, TheoremVerdict};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::{CliError, Format};

#[derive(Debug, Clone, Serialize)]
pub struct ReportConfig {
    #[serde(flatten)]
    pub optimizer: OptimizerConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instances: Option<usize>,
}

/// One theorem check on one generated instance.
#[derive(Debug, Clone, Serialize)]
pub struct InstanceVerdict {
    pub suite: String,
    pub instance: usize,
    /// Seed of both the generator and the optimizer for this instance.
    pub seed: u64,
    pub family: String,
    pub dims: [usize; 2],
    #[serde(flatten)]
    pub verdict: TheoremVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub inputs_digest: String,
    pub config: ReportConfig,
    pub quantities: Vec<Quantity>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<InstanceVerdict>,
    /// Command-specific structured output (measurements, flags).
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub details: serde_json::Value,
    pub wall_time_seconds: f64,
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Shortest decimal that parses back to the same `f64`.
fn number(x: f64) -> String {
    serde_json::to_string(&x).unwrap_or_else(|_| x.to_string())
}

pub fn quantity(name: &str, value: f64) -> Quantity {
    Quantity { name: name.to_string(), value }
}

impl Report {
    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).map_err(|e| CliError::Io(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => self.render_csv(),
        }
    }

    /// Long format: one row per number. Verdict rows carry their instance.
    fn render_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(["suite", "instance", "seed", "outcome", "name", "value"]).map_err(io)?;
        let seed = self.config.optimizer.seed.to_string();
        for q in &self.quantities {
            w.write_record(["", "", &seed, "", &q.name, &number(q.value)]).map_err(io)?;
        }
        for v in &self.verdicts {
            let outcome = serde_json::to_value(v.verdict.outcome)
                .ok()
                .and_then(|o| o.as_str().map(str::to_owned))
                .unwrap_or_default();
            let (instance, seed) = (v.instance.to_string(), v.seed.to_string());
            let rows = v
                .verdict
                .quantities
                .iter()
                .map(|q| (q.name.as_str(), q.value))
                .chain([
                    ("max_discrepancy", v.verdict.max_discrepancy),
                    ("tolerance_used", v.verdict.tolerance_used),
                ]);
            for (name, value) in rows {
                w.write_record([&v.suite, &instance, &seed, &outcome, name, &number(value)])
                    .map_err(io)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }
}

/// Writes `text` to `path` through a sibling temporary file and a rename, or
/// to stdout when no path is given.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    let Some(path) = path else {
        std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string()))?;
        return Ok(());
    };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let fail = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    fs::write(&tmp, text).map_err(fail)?;
    fs::rename(&tmp, path).map_err(fail)
}
