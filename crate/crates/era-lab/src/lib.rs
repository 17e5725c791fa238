//! Experiment harness over the simulator core: deterministic Monte-Carlo
//! sweeps with CSV/JSON output and a small CLI.

pub mod cli;
pub mod config;
pub mod experiments;
pub mod results;
pub mod selftest;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    /// Invalid configuration or command line; maps to exit code 2.
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            _ => 1,
        }
    }
}

impl From<era_core::channel::ChannelError> for HarnessError {
    fn from(e: era_core::channel::ChannelError) -> Self {
        HarnessError::Runtime(e.to_string())
    }
}

impl From<era_core::ofdm::OfdmError> for HarnessError {
    fn from(e: era_core::ofdm::OfdmError) -> Self {
        HarnessError::Runtime(e.to_string())
    }
}

impl From<era_core::attacker::AttackError> for HarnessError {
    fn from(e: era_core::attacker::AttackError) -> Self {
        HarnessError::Runtime(e.to_string())
    }
}

impl From<era_core::analysis::AnalysisError> for HarnessError {
    fn from(e: era_core::analysis::AnalysisError) -> Self {
        HarnessError::Runtime(e.to_string())
    }
}
