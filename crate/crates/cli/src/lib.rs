//! Command-line pipeline around [`cvbs`]: build an instance, characterize it
//! with simulated dual-homodyne data, verify the estimate, sample photon
//! counts and cross-check probabilities against the truncated-Fock oracle.
//!
//! Exit codes: 0 success, 1 verification failed, 2 invalid input,
//! 3 numeric guard refusal.

pub mod config;
pub mod error;
pub mod pipeline;

pub use config::{ExperimentConfig, Settings};
pub use error::{CliError, ExitStatus, Result};
