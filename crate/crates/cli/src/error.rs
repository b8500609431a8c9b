use std::path::PathBuf;

use thiserror::Error;

/// Process exit status for a finished run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    VerificationFailed = 1,
    Invalid = 2,
    NumericGuard = 3,
}

impl ExitStatus {
    pub fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{field}: {message}")]
    Config { field: &'static str, message: String },
    #[error("invalid config file {path}: {source}")]
    ConfigSyntax {
        path: PathBuf,
        #[source]
        source: Box<toml::de::Error>,
    },
    #[error("characterization missing: {0} not found (run `characterize` first)")]
    MissingArtifact(PathBuf),
    #[error("{path}: config hash {found} does not match the current config ({expected})")]
    HashMismatch {
        path: PathBuf,
        found: String,
        expected: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Artifact {
        path: PathBuf,
        #[source]
        source: cvbs::Error,
    },
    #[error(transparent)]
    Core(#[from] cvbs::Error),
}

impl CliError {
    pub(crate) fn config(field: &'static str, message: impl Into<String>) -> Self {
        Self::Config {
            field,
            message: message.into(),
        }
    }

    pub fn exit_status(&self) -> ExitStatus {
        match self {
            Self::Core(e) | Self::Artifact { source: e, .. } if is_numeric_guard(e) => ExitStatus::NumericGuard,
            _ => ExitStatus::Invalid,
        }
    }
}

fn is_numeric_guard(e: &cvbs::Error) -> bool {
    use cvbs::Error::*;
    matches!(
        e,
        InsufficientMass { .. } | TruncationDeficit { .. } | OracleScale { .. } | Unphysical { .. } | NotPure { .. }
    )
}

pub type Result<T> = std::result::Result<T, CliError>;
