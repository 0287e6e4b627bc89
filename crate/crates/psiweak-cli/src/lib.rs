//! Library surface of the command-line front end: the configuration
//! schema, atomic output writing, and the error-to-exit-code taxonomy.

pub mod config;
pub mod output;

use std::fmt;

use psiweak::harness::HarnessError;
use psiweak::process::ProcessError;
use psiweak::risk::RiskError;

#[derive(Debug)]
pub enum CliError {
    /// Exit 2: the configuration cannot be read, parsed or validated.
    Config(String),
    /// Exit 3: the configured pieces do not combine.
    Unsupported(String),
    /// Exit 4: a numeric failure at run time.
    Numeric(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Unsupported(m) => write!(f, "unsupported combination: {m}"),
            CliError::Numeric(m) => write!(f, "numeric failure: {m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Unsupported(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Process(ProcessError::Unsupported(m)) => CliError::Unsupported(m),
            HarnessError::Risk(RiskError::NonRealSupport(m)) => CliError::Unsupported(m),
            HarnessError::InvalidExperiment(m) => CliError::Unsupported(m),
            other => CliError::Numeric(other.to_string()),
        }
    }
}
