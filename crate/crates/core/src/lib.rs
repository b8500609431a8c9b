//! Simulation and verification toolkit for Gaussian-input, time-bin encoded
//! Boson Sampling.
//!
//! - [`gaussian`]: zero-mean Gaussian states, symplectic transforms and loss.
//! - [`compiler`]: loop programs, Haar-random interferometers, scattershot layout.
//! - [`homodyne`]: dual-homodyne sampling, covariance reconstruction and the
//!   operator Chernoff guarantees.
//! - [`fock`]: hafnians, Fock-basis outcome probabilities, a truncated-Fock
//!   oracle, exhaustive sampling and scattershot photon statistics.
//! - [`verify`]: fidelity-based certification and total variation distance.
//! - [`formats`]: the text and CSV formats used for persistence.

pub mod compiler;
pub mod error;
pub mod fock;
pub mod formats;
pub mod gaussian;
pub mod homodyne;
pub mod seeds;
pub mod verify;

pub use error::{Error, Result};
pub use gaussian::{CovarianceMatrix, GaussianState, SqueezingFloor, SymplecticTransform};
