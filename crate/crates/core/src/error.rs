use thiserror::Error;

/// Errors raised by state construction, estimation, sampling and verification.
#[derive(Debug, Error)]
pub enum Error {
    #[error("mode count must be at least 1")]
    ZeroModes,

    #[error("mode {mode} out of range for {modes} modes")]
    ModeOutOfRange { mode: usize, modes: usize },

    #[error("two-mode operation needs distinct modes (got {0} twice)")]
    SameMode(usize),

    #[error("matrix is not unitary (max |U^dag U - I| = {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("matrix is not symplectic (max |S W S^T - W| = {residual:.3e})")]
    NotSymplectic { residual: f64 },

    #[error("matrix is not symmetric (max asymmetry {0:.3e})")]
    NotSymmetric(f64),

    #[error("expected a {expected}x{expected} matrix, got {rows}x{cols}")]
    Shape {
        expected: usize,
        rows: usize,
        cols: usize,
    },

    #[error("dimension mismatch: {0} vs {1} modes")]
    DimensionMismatch(usize, usize),

    #[error("state is unphysical (min eigenvalue of cov + i*omega = {min_eigenvalue:.3e})")]
    Unphysical { min_eigenvalue: f64 },

    #[error("target state is not pure (det = {det})")]
    NotPure { det: f64 },

    #[error("transmissivity must lie in [0, 1], got {0}")]
    InvalidTransmissivity(f64),

    #[error("chi must lie in (0, 1), got {0}")]
    InvalidChi(f64),

    #[error("deviation parameter eta must lie in (0, 1/2), got {0}")]
    InvalidEta(f64),

    #[error("squeezing floor b must be positive, got {0}")]
    NonPositiveFloor(f64),

    #[error("K must be >= 1")]
    NoSamples,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("hafnian needs an even-dimensional matrix, got {0}x{0}")]
    OddDimension(usize),

    #[error("{photons} photons requested but scattershot has only {sources} sources")]
    TooManyPhotons { photons: u32, sources: u32 },

    #[error("captured mass {mass:.6} below {required} at cutoff {cutoff}; try cutoff {suggested}")]
    InsufficientMass {
        mass: f64,
        required: f64,
        cutoff: u32,
        suggested: u32,
    },

    #[error("oracle truncation deficit {deficit:.3e} exceeds 1e-6; raise the Fock dimension")]
    TruncationDeficit { deficit: f64 },

    #[error("oracle limited to {max_modes} modes and cutoff {max_cutoff} (got {modes} modes, cutoff {cutoff})")]
    OracleScale {
        modes: usize,
        cutoff: u32,
        max_modes: usize,
        max_cutoff: u32,
    },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
