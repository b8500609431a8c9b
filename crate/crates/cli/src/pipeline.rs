//! The characterize, verify, sample and oracle-check stages.
//!
//! Each stage writes its artifacts into the output directory and stamps them
//! with the config hash. Stages that read earlier artifacts refuse files whose
//! hash differs from the current config.

use std::fs;
use std::path::{Path, PathBuf};

use cvbs::fock::oracle::{MAX_ORACLE_CUTOFF, MAX_ORACLE_MODES};
use cvbs::fock::{
    enumerate_distribution, outcome_probability, outcomes_up_to, sample_from_distribution, suggest_cutoff,
    OracleState, OutcomeDistribution, REQUIRED_MASS,
};
use cvbs::formats::{self, Metadata};
use cvbs::homodyne::{
    draw_dual_homodyne_samples, multiplicative_band_check, reconstruct_covariance, ChernoffReport,
    SampleMatrixAccumulator,
};
use cvbs::verify::{certify_with_budget, total_variation, VerificationReport};
use cvbs::CovarianceMatrix;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, DEFAULT_ORACLE_CUTOFF};
use crate::error::{CliError, ExitStatus, Result};

pub const UNITARY_FILE: &str = "unitary.csv";
pub const HOMODYNE_FILE: &str = "homodyne_samples.csv";
pub const ESTIMATE_FILE: &str = "covariance_estimate.txt";
pub const CHERNOFF_FILE: &str = "chernoff_report.json";
pub const VERIFICATION_FILE: &str = "verification_report.json";
pub const DISTRIBUTION_FILE: &str = "distribution.csv";
pub const FOCK_SAMPLES_FILE: &str = "fock_samples.csv";
pub const SAMPLE_REPORT_FILE: &str = "sample_report.json";
pub const ORACLE_FILE: &str = "oracle_check.json";

/// Largest allowed `|outcome_probability - oracle_probability|`.
pub const ORACLE_TOLERANCE: f64 = 1e-8;

/// A JSON report with the config hash added as one more top-level key.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stamped<T> {
    pub config_hash: String,
    #[serde(flatten)]
    pub report: T,
}

impl<T: Serialize> Stamped<T> {
    fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub modes: usize,
    pub cutoff: u32,
    pub mass: f64,
    pub samples: usize,
    pub seed: u64,
    /// Distance between the empirical and enumerated distributions.
    pub tvd: f64,
    /// Worst-case contribution of the mass above the cutoff.
    pub tvd_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub modes: usize,
    pub cutoff: u32,
    pub outcomes: usize,
    pub max_abs_error: f64,
    pub truncation_deficit: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn metadata(config: &ExperimentConfig, seed: Option<u64>) -> Metadata {
    let mut meta = Metadata::from([("config_hash".to_string(), config.hash())]);
    if let Some(seed) = seed {
        meta.insert("seed".to_string(), seed.to_string());
    }
    meta
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

fn check_hash(path: &Path, meta: &Metadata, config: &ExperimentConfig) -> Result<()> {
    let expected = config.hash();
    let found = meta.get("config_hash").cloned().unwrap_or_else(|| "<none>".to_string());
    if found != expected {
        return Err(CliError::HashMismatch {
            path: path.to_path_buf(),
            found,
            expected,
        });
    }
    Ok(())
}

/// Simulates dual-homodyne data, reconstructs the covariance matrix and
/// checks it against the multiplicative Chernoff band.
pub fn run_characterize(config: &ExperimentConfig) -> Result<Stamped<ChernoffReport>> {
    let dir = &config.out_dir;
    let u = config.build_interferometer()?;
    write(dir, UNITARY_FILE, &formats::write_unitary(u.unitary(), &metadata(config, None)))?;

    let state = config.state()?;
    let seed = config.homodyne_seed();
    let samples = draw_dual_homodyne_samples(&state, config.homodyne_samples as usize, seed)?;
    let meta = metadata(config, Some(seed));
    write(dir, HOMODYNE_FILE, &formats::write_homodyne_samples(state.modes(), &samples, &meta)?)?;

    let mut acc = SampleMatrixAccumulator::new(state.modes());
    acc.extend(&samples)?;
    let estimate = reconstruct_covariance(&acc.average()?)?;
    let mut est_meta = meta;
    est_meta.insert("K".to_string(), config.homodyne_samples.to_string());
    est_meta.insert("physicality_margin".to_string(), format!("{:.6e}", estimate.physicality_margin));
    write(dir, ESTIMATE_FILE, &formats::write_covariance(&estimate.covariance, &est_meta))?;

    let report = multiplicative_band_check(
        state.covariance(),
        &estimate.covariance,
        config.chernoff_eta,
        state.min_quadrature_variance()?,
        config.homodyne_samples,
    )?;
    let stamped = Stamped {
        config_hash: config.hash(),
        report,
    };
    write(dir, CHERNOFF_FILE, &stamped.to_json())?;
    Ok(stamped)
}

/// Loads the characterization output and certifies it against the lossless
/// target state.
pub fn run_verify(config: &ExperimentConfig) -> Result<Stamped<VerificationReport>> {
    let path = config.out_dir.join(ESTIMATE_FILE);
    if !path.exists() {
        return Err(CliError::MissingArtifact(path));
    }
    let text = fs::read_to_string(&path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    let (estimate, meta): (CovarianceMatrix, Metadata) =
        formats::parse_covariance(&text).map_err(|source| CliError::Artifact {
            path: path.clone(),
            source,
        })?;
    check_hash(&path, &meta, config)?;
    let target = config.ideal_state()?;
    let report = certify_with_budget(target.covariance(), &estimate, config.epsilon, config.budget_constant)?;
    let stamped = Stamped {
        config_hash: config.hash(),
        report,
    };
    write(&config.out_dir, VERIFICATION_FILE, &stamped.to_json())?;
    Ok(stamped)
}

/// Enumerates the photon-count distribution, draws samples and reports
/// their distance to the enumeration.
pub fn run_sample(config: &ExperimentConfig) -> Result<Stamped<SampleReport>> {
    let state = config.state()?;
    let cutoff = match config.cutoff {
        Some(c) => c,
        None => suggest_cutoff(&state, REQUIRED_MASS)?,
    };
    let dist = enumerate_distribution(&state, cutoff)?;
    if dist.mass() < REQUIRED_MASS {
        let suggested = suggest_cutoff(&state, REQUIRED_MASS).unwrap_or(cutoff + 1);
        return Err(cvbs::Error::InsufficientMass {
            mass: dist.mass(),
            required: REQUIRED_MASS,
            cutoff,
            suggested,
        }
        .into());
    }
    let seed = config.fock_seed();
    let samples = sample_from_distribution(&dist, config.fock_samples, seed)?;
    let meta = metadata(config, None);
    write(&config.out_dir, DISTRIBUTION_FILE, &formats::write_distribution(&dist, seed, &meta))?;
    write(
        &config.out_dir,
        FOCK_SAMPLES_FILE,
        &formats::write_fock_samples(state.modes(), &samples, cutoff, dist.mass(), seed, &meta)?,
    )?;
    let empirical = OutcomeDistribution::from_samples(state.modes(), &samples)?;
    let tv = total_variation(&empirical, &dist)?;
    let stamped = Stamped {
        config_hash: config.hash(),
        report: SampleReport {
            modes: state.modes(),
            cutoff,
            mass: dist.mass(),
            samples: samples.len(),
            seed,
            tvd: tv.distance,
            tvd_residual: tv.residual,
        },
    };
    write(&config.out_dir, SAMPLE_REPORT_FILE, &stamped.to_json())?;
    Ok(stamped)
}

/// Compares hafnian-based probabilities with the truncated-Fock oracle for
/// every outcome up to the cutoff.
pub fn run_oracle_check(config: &ExperimentConfig) -> Result<Stamped<OracleReport>> {
    if config.loss != 1.0 {
        return Err(CliError::config("loss", "the oracle simulates lossless circuits only"));
    }
    let modes = config.modes();
    let cutoff = config.cutoff.unwrap_or(DEFAULT_ORACLE_CUTOFF);
    if modes > MAX_ORACLE_MODES || cutoff > MAX_ORACLE_CUTOFF {
        return Err(cvbs::Error::OracleScale {
            modes,
            cutoff,
            max_modes: MAX_ORACLE_MODES,
            max_cutoff: MAX_ORACLE_CUTOFF,
        }
        .into());
    }
    let state = config.ideal_state()?;
    let oracle = OracleState::prepare(&config.oracle_circuit()?, cutoff)?;
    let outcomes = outcomes_up_to(modes, cutoff);
    let mut max_abs_error = 0.0_f64;
    for o in &outcomes {
        let p = outcome_probability(&state, o)?;
        max_abs_error = max_abs_error.max((p - oracle.amplitude(o).norm_sqr()).abs());
    }
    let stamped = Stamped {
        config_hash: config.hash(),
        report: OracleReport {
            modes,
            cutoff,
            outcomes: outcomes.len(),
            max_abs_error,
            truncation_deficit: oracle.truncation_deficit(),
            tolerance: ORACLE_TOLERANCE,
            pass: max_abs_error < ORACLE_TOLERANCE,
        },
    };
    write(&config.out_dir, ORACLE_FILE, &stamped.to_json())?;
    Ok(stamped)
}

/// Summary of `all`: the worst status and one line per stage.
#[derive(Debug, Clone)]
pub struct PipelineSummary {
    pub status: ExitStatus,
    pub lines: Vec<String>,
}

/// Runs every stage. Errors stop the run; a failed verification or oracle
/// comparison is recorded and the remaining stages still run.
pub fn run_all(config: &ExperimentConfig) -> Result<PipelineSummary> {
    let mut lines = Vec::new();
    let mut status = ExitStatus::Success;
    let chernoff = run_characterize(config)?;
    lines.push(describe_chernoff(&chernoff.report));
    let verification = run_verify(config)?;
    lines.push(describe_verification(&verification.report));
    if !verification.report.pass {
        status = ExitStatus::VerificationFailed;
    }
    let sample = run_sample(config)?;
    lines.push(describe_sample(&sample.report));
    if config.loss == 1.0 && config.modes() <= MAX_ORACLE_MODES {
        let oracle = run_oracle_check(config)?;
        lines.push(describe_oracle(&oracle.report));
        if !oracle.report.pass {
            status = ExitStatus::VerificationFailed;
        }
    } else {
        lines.push("oracle-check: skipped (lossy or beyond oracle scale)".to_string());
    }
    Ok(PipelineSummary { status, lines })
}

pub fn describe_chernoff(r: &ChernoffReport) -> String {
    format!(
        "characterize: m={} K={} eta={} b={:.6} failure_bound={:.4e} band_ok={}",
        r.m, r.samples, r.eta, r.b, r.failure_bound, r.band_ok
    )
}

pub fn describe_verification(r: &VerificationReport) -> String {
    format!(
        "verify: F={:.10} 1-F={:.4e} sqrt(1-F)={:.4e} epsilon={} pass={} budget={}",
        r.fidelity, r.one_minus_f, r.fvdg_bound, r.epsilon, r.pass, r.sample_budget
    )
}

pub fn describe_sample(r: &SampleReport) -> String {
    format!(
        "sample: N={} cutoff={} mass={:.6} tvd={:.4e} residual={:.1e}",
        r.samples, r.cutoff, r.mass, r.tvd, r.tvd_residual
    )
}

pub fn describe_oracle(r: &OracleReport) -> String {
    format!(
        "oracle-check: {} outcomes up to {} photons, max error {:.3e} (tolerance {:.0e}) pass={}",
        r.outcomes, r.cutoff, r.max_abs_error, r.tolerance, r.pass
    )
}
