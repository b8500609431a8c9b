//! Dual-homodyne characterization of a Gaussian state.
//!
//! Each mode is split on a balanced beamsplitter against vacuum and one arm is
//! measured in `x`, the other in `p`. The recorded vector
//! `s = (x1, p1, ..., xm, pm)` is Gaussian with covariance `(cov + I) / 2`.
//! Outer products `s s^T` averaged over `K` runs estimate that matrix, and
//! `2 * avg - I` estimates `cov`. The operator Chernoff bound controls how
//! often that estimate leaves a multiplicative band around the truth.

use nalgebra::{DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{symmetrize, CovarianceMatrix, GaussianState, RealMatrix, SqueezingFloor};

/// Eigenvalues of the sampling covariance below this are treated as zero.
const CLIP_TOL: f64 = 1e-12;
/// Tolerance on the eigenvalue tests of the multiplicative band.
pub const BAND_TOL: f64 = 1e-10;

/// One dual-homodyne record `(x1, p1, ..., xm, pm)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualHomodyneSample(Vec<f64>);

impl DualHomodyneSample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.len() % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "dual-homodyne sample needs 2m entries, got {}",
                values.len()
            )));
        }
        Ok(Self(values))
    }

    pub fn modes(&self) -> usize {
        self.0.len() / 2
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn outer_product(&self) -> RealMatrix {
        outer_product_sample(&self.0)
    }
}

/// `xi = s s^T`.
pub fn outer_product_sample(s: &[f64]) -> RealMatrix {
    let v = DVector::from_column_slice(s);
    &v * v.transpose()
}

/// `(cov + I) / 2`, the covariance seen by the dual-homodyne detectors.
pub fn sampling_covariance(state: &GaussianState) -> RealMatrix {
    let cov = state.covariance().matrix();
    let n = cov.nrows();
    (cov + RealMatrix::identity(n, n)) * 0.5
}

/// Covariance of the recorded quadratures obtained by explicitly mixing every
/// mode with a vacuum ancilla on a 50:50 beamsplitter, then keeping `x` of the
/// first output arm and `p` of the second.
pub fn explicit_split_covariance(state: &GaussianState) -> Result<RealMatrix> {
    let m = state.modes();
    let cov = state.covariance();
    let mut full = RealMatrix::identity(4 * m, 4 * m);
    full.view_mut((0, 0), (2 * m, 2 * m)).copy_from(cov.matrix());
    let mut split = GaussianState::from_covariance(CovarianceMatrix::new(full)?);
    for k in 0..m {
        split = split.beamsplitter(k, m + k, std::f64::consts::FRAC_PI_4, 0.0)?;
    }
    // a -> (a - v)/sqrt2 on the signal arm, v -> (a + v)/sqrt2 on the ancilla arm:
    // both kept quadratures carry +1/sqrt2 of the signal.
    let idx: Vec<usize> = (0..m).flat_map(|k| [2 * k, 2 * (m + k) + 1]).collect();
    let big = split.covariance().matrix();
    let out = RealMatrix::from_fn(2 * m, 2 * m, |i, j| big[(idx[i], idx[j])]);
    Ok(out)
}

fn gaussian_factor(covariance: &RealMatrix) -> Result<RealMatrix> {
    let eig = SymmetricEigen::new(covariance.clone());
    let min = eig.eigenvalues.min();
    if min < -CLIP_TOL {
        return Err(Error::Unphysical { min_eigenvalue: min });
    }
    let roots = eig.eigenvalues.map(|l| if l > CLIP_TOL { l.sqrt() } else { 0.0 });
    Ok(&eig.eigenvectors * RealMatrix::from_diagonal(&roots))
}

fn draw_from(covariance: &RealMatrix, count: usize, seed: u64) -> Result<Vec<DualHomodyneSample>> {
    if count == 0 {
        return Err(Error::NoSamples);
    }
    let factor = gaussian_factor(covariance)?;
    let dim = covariance.nrows();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut z = DVector::<f64>::zeros(dim);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        for v in z.iter_mut() {
            *v = StandardNormal.sample(&mut rng);
        }
        out.push(DualHomodyneSample((&factor * &z).as_slice().to_vec()));
    }
    Ok(out)
}

/// `count` i.i.d. dual-homodyne records, deterministic per seed.
pub fn draw_dual_homodyne_samples(
    state: &GaussianState,
    count: usize,
    seed: u64,
) -> Result<Vec<DualHomodyneSample>> {
    let margin = state.covariance().physicality_margin();
    if margin < -crate::gaussian::PHYSICALITY_TOL {
        return Err(Error::Unphysical { min_eigenvalue: margin });
    }
    draw_from(&sampling_covariance(state), count, seed)
}

/// Same as [`draw_dual_homodyne_samples`] but drawn through the explicit
/// beamsplitter-and-ancilla model.
pub fn draw_explicit_split_samples(
    state: &GaussianState,
    count: usize,
    seed: u64,
) -> Result<Vec<DualHomodyneSample>> {
    let margin = state.covariance().physicality_margin();
    if margin < -crate::gaussian::PHYSICALITY_TOL {
        return Err(Error::Unphysical { min_eigenvalue: margin });
    }
    draw_from(&explicit_split_covariance(state)?, count, seed)
}

/// Running sum of outer-product sample matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrixAccumulator {
    sum: RealMatrix,
    count: u64,
}

impl SampleMatrixAccumulator {
    pub fn new(modes: usize) -> Self {
        Self {
            sum: RealMatrix::zeros(2 * modes, 2 * modes),
            count: 0,
        }
    }

    pub fn modes(&self) -> usize {
        self.sum.nrows() / 2
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn sum(&self) -> &RealMatrix {
        &self.sum
    }

    pub fn push(&mut self, sample: &DualHomodyneSample) -> Result<()> {
        if sample.modes() != self.modes() {
            return Err(Error::DimensionMismatch(sample.modes(), self.modes()));
        }
        let s = sample.values();
        let n = s.len();
        for j in 0..n {
            for i in 0..n {
                self.sum[(i, j)] += s[i] * s[j];
            }
        }
        self.count += 1;
        Ok(())
    }

    pub fn extend<'a, I>(&mut self, samples: I) -> Result<()>
    where
        I: IntoIterator<Item = &'a DualHomodyneSample>,
    {
        for s in samples {
            self.push(s)?;
        }
        Ok(())
    }

    pub fn merge(&mut self, other: &SampleMatrixAccumulator) -> Result<()> {
        if other.modes() != self.modes() {
            return Err(Error::DimensionMismatch(other.modes(), self.modes()));
        }
        self.sum += &other.sum;
        self.count += other.count;
        Ok(())
    }

    /// `avg = sum / K`.
    pub fn average(&self) -> Result<RealMatrix> {
        if self.count == 0 {
            return Err(Error::NoSamples);
        }
        Ok(&self.sum / self.count as f64)
    }
}

/// A reconstructed covariance with its physicality margin.
#[derive(Debug, Clone)]
pub struct CovarianceEstimate {
    pub covariance: CovarianceMatrix,
    /// Minimum eigenvalue of `cov + i*omega`; slightly negative values are
    /// expected at finite `K`.
    pub physicality_margin: f64,
}

impl CovarianceEstimate {
    pub fn is_physical(&self) -> bool {
        self.physicality_margin >= -crate::gaussian::PHYSICALITY_TOL
    }
}

/// `cov_hat = 2 avg - I`, symmetrized.
pub fn reconstruct_covariance(average: &RealMatrix) -> Result<CovarianceEstimate> {
    let n = average.nrows();
    let est = symmetrize(&(average * 2.0 - RealMatrix::identity(n, n)));
    let covariance = CovarianceMatrix::new(est)?;
    let physicality_margin = covariance.physicality_margin();
    Ok(CovarianceEstimate {
        covariance,
        physicality_margin,
    })
}

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta < 0.5 {
        Ok(())
    } else {
        Err(Error::InvalidEta(eta))
    }
}

/// Failure probability `8 m exp(-K eta^2 / (8 ln 2))` of the operator Chernoff bound.
pub fn chernoff_failure_bound(modes: usize, samples: u64, eta: f64) -> Result<f64> {
    check_eta(eta)?;
    let rate = eta * eta / (8.0 * std::f64::consts::LN_2);
    Ok(8.0 * modes as f64 * (-(samples as f64) * rate).exp())
}

/// Smallest `K` with `chernoff_failure_bound(modes, K, eta) <= delta`.
pub fn required_sample_count(modes: usize, eta: f64, delta: f64) -> Result<u64> {
    check_eta(eta)?;
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")));
    }
    let ceiling = 8.0 * modes as f64;
    if delta >= ceiling {
        return Ok(0);
    }
    let scale = 8.0 * std::f64::consts::LN_2 / (eta * eta);
    let mut k = (scale * (ceiling / delta).ln()).ceil().max(0.0) as u64;
    // the closed form can land one off after rounding
    while chernoff_failure_bound(modes, k, eta)? > delta {
        k += 1;
    }
    while k > 0 && chernoff_failure_bound(modes, k - 1, eta)? <= delta {
        k -= 1;
    }
    Ok(k)
}

/// Outcome of the multiplicative band test
/// `(1 - c) cov <= cov_hat <= (1 + c) cov` with `c = eta (1 + 1/b)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChernoffReport {
    pub m: usize,
    #[serde(rename = "K")]
    pub samples: u64,
    pub eta: f64,
    pub b: f64,
    pub failure_bound: f64,
    pub band_ok: bool,
    /// Minimum eigenvalue of `cov_hat - (1 - c) cov`.
    #[serde(skip)]
    pub lower_margin: f64,
    /// Minimum eigenvalue of `(1 + c) cov - cov_hat`.
    #[serde(skip)]
    pub upper_margin: f64,
}

impl ChernoffReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

pub fn multiplicative_band_check(
    truth: &CovarianceMatrix,
    estimate: &CovarianceMatrix,
    eta: f64,
    floor: SqueezingFloor,
    samples: u64,
) -> Result<ChernoffReport> {
    check_eta(eta)?;
    if truth.modes() != estimate.modes() {
        return Err(Error::DimensionMismatch(truth.modes(), estimate.modes()));
    }
    let b = floor.value();
    let c = eta * (1.0 + 1.0 / b);
    let sigma = truth.matrix();
    let hat = estimate.matrix();
    let lower = symmetrize(&(hat - sigma * (1.0 - c)));
    let upper = symmetrize(&(sigma * (1.0 + c) - hat));
    let lower_margin = SymmetricEigen::new(lower).eigenvalues.min();
    let upper_margin = SymmetricEigen::new(upper).eigenvalues.min();
    Ok(ChernoffReport {
        m: truth.modes(),
        samples,
        eta,
        b,
        failure_bound: chernoff_failure_bound(truth.modes(), samples, eta)?,
        band_ok: lower_margin >= -BAND_TOL && upper_margin >= -BAND_TOL,
        lower_margin,
        upper_margin,
    })
}
