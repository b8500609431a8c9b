//! Experiment configuration: a TOML file overlaid with command-line flags.
//!
//! Sub-seeds are derived from the master seed with [`cvbs::seeds::derive_seed`]
//! using one fixed counter per stage, so any stage can be rerun on its own
//! and reproduce the same output.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use cvbs::compiler::{haar_random_unitary, CompiledInterferometer, LoopProgram, ScattershotArrangement};
use cvbs::fock::OracleCircuit;
use cvbs::gaussian::ComplexMatrix;
use cvbs::homodyne::required_sample_count;
use cvbs::seeds::derive_seed;
use cvbs::GaussianState;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

pub const HAAR_STREAM: u64 = 0;
pub const HOMODYNE_STREAM: u64 = 1;
pub const FOCK_STREAM: u64 = 2;

pub const DEFAULT_CHERNOFF_ETA: f64 = 0.2;
pub const DEFAULT_DELTA: f64 = 0.01;
pub const DEFAULT_EPSILON: f64 = 0.05;
pub const DEFAULT_FOCK_SAMPLES: usize = 10_000;
pub const DEFAULT_ORACLE_CUTOFF: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    /// One single-mode squeezer per mode.
    Squeezers,
    /// Two-mode squeezed herald/signal pairs.
    Scattershot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum InterferometerKind {
    Identity,
    Haar,
    Program,
}

/// Every setting, all optional. Used both for the config file and for the
/// flags that override it.
#[derive(Debug, Clone, Default, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// Input state family.
    #[arg(long, value_enum)]
    pub source: Option<SourceKind>,
    /// Number of modes for `squeezers`.
    #[arg(long)]
    pub modes: Option<usize>,
    /// Squeezing parameters r, one per mode or a single shared value.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub squeezing: Option<Vec<f64>>,
    /// Number of two-mode squeezed sources for `scattershot`.
    #[arg(long)]
    pub sources: Option<usize>,
    /// Two-mode squeezing strength chi = tanh r.
    #[arg(long)]
    pub chi: Option<f64>,
    #[arg(long, value_enum)]
    pub interferometer: Option<InterferometerKind>,
    /// Seed for the Haar-random interferometer; derived from --seed if absent.
    #[arg(long)]
    pub haar_seed: Option<u64>,
    /// Loop program file for `--interferometer program`.
    #[arg(long)]
    pub program: Option<PathBuf>,
    /// Uniform transmissivity applied after the interferometer.
    #[arg(long)]
    pub loss: Option<f64>,
    /// Homodyne sample count K; defaults to the Chernoff requirement.
    #[arg(long)]
    pub homodyne_samples: Option<u64>,
    /// Relative precision eta of the covariance estimate.
    #[arg(long)]
    pub chernoff_eta: Option<f64>,
    /// Allowed failure probability of the Chernoff bound.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Fidelity threshold: verification passes when 1 - F < epsilon.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Constant c in the c*m^4 verification budget.
    #[arg(long)]
    pub budget_constant: Option<f64>,
    /// Fock cutoff; chosen to capture 0.999 of the mass if absent.
    #[arg(long)]
    pub cutoff: Option<u32>,
    /// Number of photon-count samples to draw.
    #[arg(long)]
    pub fock_samples: Option<usize>,
}

impl Settings {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut settings: Settings = toml::from_str(&text).map_err(|source| CliError::ConfigSyntax {
            path: path.to_path_buf(),
            source: Box::new(source),
        })?;
        if let (Some(program), Some(dir)) = (&settings.program, path.parent()) {
            if program.is_relative() {
                settings.program = Some(dir.join(program));
            }
        }
        Ok(settings)
    }

    /// `self` with every field set in `flags` replaced.
    pub fn overlay(self, flags: Settings) -> Self {
        Self {
            source: flags.source.or(self.source),
            modes: flags.modes.or(self.modes),
            squeezing: flags.squeezing.or(self.squeezing),
            sources: flags.sources.or(self.sources),
            chi: flags.chi.or(self.chi),
            interferometer: flags.interferometer.or(self.interferometer),
            haar_seed: flags.haar_seed.or(self.haar_seed),
            program: flags.program.or(self.program),
            loss: flags.loss.or(self.loss),
            homodyne_samples: flags.homodyne_samples.or(self.homodyne_samples),
            chernoff_eta: flags.chernoff_eta.or(self.chernoff_eta),
            delta: flags.delta.or(self.delta),
            epsilon: flags.epsilon.or(self.epsilon),
            budget_constant: flags.budget_constant.or(self.budget_constant),
            cutoff: flags.cutoff.or(self.cutoff),
            fock_samples: flags.fock_samples.or(self.fock_samples),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Source {
    Squeezers { squeezing: Vec<f64> },
    Scattershot { sources: usize, chi: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Interferometer {
    Identity,
    Haar { seed: u64 },
    Program { text: String },
}

/// A validated configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub source: Source,
    pub interferometer: Interferometer,
    pub loss: f64,
    pub homodyne_samples: u64,
    pub chernoff_eta: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub budget_constant: f64,
    pub cutoff: Option<u32>,
    pub fock_samples: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
}

/// The fields that define the state and its characterization; artifacts
/// produced under equal hashes may be combined.
#[derive(Serialize)]
struct HashInput<'a> {
    source: &'a Source,
    interferometer: &'a Interferometer,
    loss: f64,
    homodyne_samples: u64,
    chernoff_eta: f64,
    seed: u64,
}

impl ExperimentConfig {
    pub fn resolve(settings: Settings, seed: u64, out_dir: PathBuf) -> Result<Self> {
        let source = match settings.source.unwrap_or(SourceKind::Squeezers) {
            SourceKind::Squeezers => {
                let squeezing = settings
                    .squeezing
                    .ok_or_else(|| CliError::config("squeezing", "required for source = squeezers"))?;
                let squeezing = match (settings.modes, squeezing.len()) {
                    (_, 0) => return Err(CliError::config("squeezing", "must list at least one value")),
                    (Some(0), _) => return Err(CliError::config("modes", "must be ≥ 1")),
                    (Some(m), 1) => vec![squeezing[0]; m],
                    (Some(m), n) if m != n => {
                        return Err(CliError::config("squeezing", format!("{n} values for {m} modes")))
                    }
                    _ => squeezing,
                };
                if let Some(r) = squeezing.iter().find(|r| !r.is_finite()) {
                    return Err(CliError::config("squeezing", format!("{r} is not finite")));
                }
                Source::Squeezers { squeezing }
            }
            SourceKind::Scattershot => {
                let sources = settings
                    .sources
                    .ok_or_else(|| CliError::config("sources", "required for source = scattershot"))?;
                if sources == 0 {
                    return Err(CliError::config("sources", "must be ≥ 1"));
                }
                let chi = settings
                    .chi
                    .ok_or_else(|| CliError::config("chi", "required for source = scattershot"))?;
                if !(chi > 0.0 && chi < 1.0) {
                    return Err(CliError::config("chi", format!("must lie in (0, 1), got {chi}")));
                }
                Source::Scattershot { sources, chi }
            }
        };
        let interferometer = match settings.interferometer.unwrap_or(InterferometerKind::Identity) {
            InterferometerKind::Identity => Interferometer::Identity,
            InterferometerKind::Haar => Interferometer::Haar {
                seed: settings.haar_seed.unwrap_or_else(|| derive_seed(seed, HAAR_STREAM)),
            },
            InterferometerKind::Program => {
                let path = settings
                    .program
                    .ok_or_else(|| CliError::config("program", "required for interferometer = program"))?;
                let text = fs::read_to_string(&path).map_err(|source| CliError::Io { path, source })?;
                Interferometer::Program { text }
            }
        };
        let loss = settings.loss.unwrap_or(1.0);
        if !(0.0..=1.0).contains(&loss) {
            return Err(CliError::config("loss", format!("transmissivity must lie in [0, 1], got {loss}")));
        }
        let chernoff_eta = settings.chernoff_eta.unwrap_or(DEFAULT_CHERNOFF_ETA);
        if !(chernoff_eta > 0.0 && chernoff_eta < 0.5) {
            return Err(CliError::config("chernoff_eta", format!("must lie in (0, 1/2), got {chernoff_eta}")));
        }
        let delta = settings.delta.unwrap_or(DEFAULT_DELTA);
        if !(delta > 0.0 && delta < 1.0) {
            return Err(CliError::config("delta", format!("must lie in (0, 1), got {delta}")));
        }
        let epsilon = settings.epsilon.unwrap_or(DEFAULT_EPSILON);
        if !(epsilon >= 0.0) {
            return Err(CliError::config("epsilon", format!("must be ≥ 0, got {epsilon}")));
        }
        let budget_constant = settings.budget_constant.unwrap_or(1.0);
        if !(budget_constant > 0.0 && budget_constant.is_finite()) {
            return Err(CliError::config("budget_constant", format!("must be positive, got {budget_constant}")));
        }
        let fock_samples = settings.fock_samples.unwrap_or(DEFAULT_FOCK_SAMPLES);
        if fock_samples == 0 {
            return Err(CliError::config("fock_samples", "N must be ≥ 1"));
        }
        let modes = match &source {
            Source::Squeezers { squeezing } => squeezing.len(),
            Source::Scattershot { sources, .. } => 2 * sources,
        };
        let homodyne_samples = match settings.homodyne_samples {
            Some(0) => return Err(CliError::config("homodyne_samples", "K must be ≥ 1")),
            Some(k) => k,
            None => required_sample_count(modes, chernoff_eta, delta)?.max(1),
        };
        Ok(Self {
            source,
            interferometer,
            loss,
            homodyne_samples,
            chernoff_eta,
            delta,
            epsilon,
            budget_constant,
            cutoff: settings.cutoff,
            fock_samples,
            seed,
            out_dir,
        })
    }

    /// Number of simulated optical modes.
    pub fn modes(&self) -> usize {
        match &self.source {
            Source::Squeezers { squeezing } => squeezing.len(),
            Source::Scattershot { sources, .. } => 2 * sources,
        }
    }

    /// Size of the passive interferometer.
    pub fn interferometer_modes(&self) -> usize {
        match &self.source {
            Source::Squeezers { squeezing } => squeezing.len(),
            Source::Scattershot { sources, .. } => *sources,
        }
    }

    pub fn homodyne_seed(&self) -> u64 {
        derive_seed(self.seed, HOMODYNE_STREAM)
    }

    pub fn fock_seed(&self) -> u64 {
        derive_seed(self.seed, FOCK_STREAM)
    }

    /// Hex SHA-256 of the state-defining fields.
    pub fn hash(&self) -> String {
        let input = HashInput {
            source: &self.source,
            interferometer: &self.interferometer,
            loss: self.loss,
            homodyne_samples: self.homodyne_samples,
            chernoff_eta: self.chernoff_eta,
            seed: self.seed,
        };
        let bytes = serde_json::to_vec(&input).expect("hash input serializes");
        format!("{:x}", Sha256::digest(bytes))
    }

    pub fn build_interferometer(&self) -> Result<CompiledInterferometer> {
        let m = self.interferometer_modes();
        Ok(match &self.interferometer {
            Interferometer::Identity => CompiledInterferometer::identity(m)?,
            Interferometer::Haar { seed } => haar_random_unitary(m, *seed)?,
            Interferometer::Program { text } => LoopProgram::parse(m, text)?.compile()?,
        })
    }

    /// The pure state before loss.
    pub fn ideal_state(&self) -> Result<GaussianState> {
        let u = self.build_interferometer()?;
        Ok(match &self.source {
            Source::Squeezers { squeezing } => {
                let mut state = GaussianState::vacuum(squeezing.len())?;
                for (k, &r) in squeezing.iter().enumerate() {
                    state = state.squeeze_single(k, r)?;
                }
                state.apply_unitary(u.unitary())?
            }
            Source::Scattershot { sources, chi } => ScattershotArrangement::build(*sources, *chi, &u)?.state().clone(),
        })
    }

    /// The state after uniform loss.
    pub fn state(&self) -> Result<GaussianState> {
        let ideal = self.ideal_state()?;
        if self.loss == 1.0 {
            Ok(ideal)
        } else {
            Ok(ideal.apply_uniform_loss(self.loss)?)
        }
    }

    /// The same lossless state as squeezers plus one interferometer, for the
    /// truncated-Fock oracle. A two-mode squeezer on `(k, s + k)` is squeezers
    /// `(r, -r)` followed by a balanced beamsplitter on that pair.
    pub fn oracle_circuit(&self) -> Result<OracleCircuit> {
        let u = self.build_interferometer()?;
        Ok(match &self.source {
            Source::Squeezers { squeezing } => OracleCircuit::new(squeezing.clone(), u.into_unitary())?,
            Source::Scattershot { sources, chi } => {
                let s = *sources;
                let r = chi.atanh();
                let mut squeezing = vec![r; 2 * s];
                squeezing[s..].iter_mut().for_each(|x| *x = -r);
                let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                let mut pairs = ComplexMatrix::zeros(2 * s, 2 * s);
                for k in 0..s {
                    pairs[(k, k)] = h;
                    pairs[(k, s + k)] = h;
                    pairs[(s + k, k)] = -h;
                    pairs[(s + k, s + k)] = h;
                }
                let mut signal = ComplexMatrix::identity(2 * s, 2 * s);
                signal.view_mut((s, s), (s, s)).copy_from(u.unitary());
                OracleCircuit::new(squeezing, signal * pairs)?
            }
        })
    }
}
