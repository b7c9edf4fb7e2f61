use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 1;
/// Monte Carlo samples for gauge-based regions when `--samples` is not given.
pub const DEFAULT_SAMPLES: u64 = 1_000_000;
/// Monte Carlo samples for LP-based hull regions.
pub const DEFAULT_LP_SAMPLES: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Resolved settings of one run, echoed at the top of every output.
///
/// The thread count is deliberately not echoed: results do not depend on
/// it, and leaving it out keeps outputs byte-identical across thread counts.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub seed: u64,
    pub samples: u64,
    pub format: Format,
    #[serde(skip)]
    pub threads: usize,
    /// Command-specific settings such as `n`, `spec` or `dist`.
    pub params: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn new(command: &str, seed: u64, samples: u64, format: Format, threads: usize) -> Self {
        RunConfig {
            command: command.to_string(),
            seed,
            samples,
            format,
            threads,
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// `# key=value` lines for CSV output.
    pub fn header_lines(&self) -> Vec<String> {
        let mut lines = vec![
            format!("# command={}", self.command),
            format!("# seed={}", self.seed),
            format!("# samples={}", self.samples),
        ];
        lines.extend(self.params.iter().map(|(k, v)| format!("# {k}={v}")));
        lines
    }
}
