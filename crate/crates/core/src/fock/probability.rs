//! Photon-number statistics of zero-mean Gaussian states.
//!
//! With `xi = (a_1..a_m, a_1^dag..a_m^dag)` the complex covariance is
//! `Q = T cov T^dag + I/2` and the kernel is `A = X (I - Q^{-1})`, where
//! `X` swaps the two halves. Then
//!
//! `Pr(n) = haf(A_n) / (prod n_i! * sqrt(det Q))`
//!
//! where `A_n` repeats row/column `i` and `i + m` `n_i` times. For pure states
//! `A = B (+) conj(B)` and the hafnian factorizes into `|haf(B_n)|^2`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::distribution::{outcomes_up_to, outcomes_with_total, FockOutcome, OutcomeDistribution};
use super::hafnian::hafnian_repeated;
use crate::error::{Error, Result};
use crate::gaussian::{ComplexMatrix, GaussianState, PHYSICALITY_TOL};

/// Captured mass required before sampling or accepting a default cutoff.
pub const REQUIRED_MASS: f64 = 0.999;
/// Largest cutoff the automatic search will try.
pub const MAX_AUTO_CUTOFF: u32 = 40;

const PURE_BLOCK_TOL: f64 = 1e-12;

/// Precomputed kernel for repeated probability evaluations on one state.
#[derive(Debug, Clone)]
pub struct GaussianPhotonStatistics {
    modes: usize,
    kernel: Kernel,
    /// `1 / sqrt(det Q)`, the vacuum probability.
    vacuum: f64,
}

#[derive(Debug, Clone)]
enum Kernel {
    Pure(ComplexMatrix),
    Mixed(ComplexMatrix),
}

impl GaussianPhotonStatistics {
    pub fn new(state: &GaussianState) -> Result<Self> {
        let cov = state.covariance();
        let margin = cov.physicality_margin();
        if margin < -PHYSICALITY_TOL {
            return Err(Error::Unphysical { min_eigenvalue: margin });
        }
        let m = cov.modes();
        let half = Complex64::new(0.5, 0.0);
        let i_half = Complex64::new(0.0, 0.5);
        let mut t = ComplexMatrix::zeros(2 * m, 2 * m);
        for k in 0..m {
            t[(k, 2 * k)] = half;
            t[(k, 2 * k + 1)] = i_half;
            t[(m + k, 2 * k)] = half;
            t[(m + k, 2 * k + 1)] = -i_half;
        }
        let sigma = cov.matrix().map(|v| Complex64::new(v, 0.0));
        let q = &t * sigma * t.adjoint() + ComplexMatrix::identity(2 * m, 2 * m) * half;
        let det_q = q.clone().determinant().re;
        let q_inv = q
            .try_inverse()
            .ok_or_else(|| Error::InvalidArgument("singular Husimi covariance".into()))?;
        let inner = ComplexMatrix::identity(2 * m, 2 * m) - q_inv;
        // A = X inner: rows of the two halves swapped.
        let mut a = ComplexMatrix::zeros(2 * m, 2 * m);
        a.view_mut((0, 0), (m, 2 * m)).copy_from(&inner.view((m, 0), (m, 2 * m)));
        a.view_mut((m, 0), (m, 2 * m)).copy_from(&inner.view((0, 0), (m, 2 * m)));
        let a = (&a + a.transpose()) * half;

        let off = a.view((0, m), (m, m)).iter().fold(0.0_f64, |acc, z| acc.max(z.norm()));
        let kernel = if off < PURE_BLOCK_TOL {
            Kernel::Pure(a.view((0, 0), (m, m)).clone_owned())
        } else {
            Kernel::Mixed(a)
        };
        Ok(Self {
            modes: m,
            kernel,
            vacuum: 1.0 / det_q.sqrt(),
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.kernel, Kernel::Pure(_))
    }

    pub fn probability(&self, outcome: &FockOutcome) -> Result<f64> {
        if outcome.modes() != self.modes {
            return Err(Error::DimensionMismatch(outcome.modes(), self.modes));
        }
        let n = outcome.occupations();
        let factorial: f64 = n
            .iter()
            .map(|&k| (1..=k).fold(1.0, |f, i| f * i as f64))
            .product();
        let weight = match &self.kernel {
            Kernel::Pure(b) => hafnian_repeated(b, n)?.norm_sqr(),
            Kernel::Mixed(a) => {
                let reps: Vec<u32> = n.iter().chain(n.iter()).copied().collect();
                hafnian_repeated(a, &reps)?.re
            }
        };
        Ok((weight * self.vacuum / factorial).clamp(0.0, 1.0))
    }
}

/// Probability of `outcome` for a zero-mean Gaussian state.
pub fn outcome_probability(state: &GaussianState, outcome: &FockOutcome) -> Result<f64> {
    GaussianPhotonStatistics::new(state)?.probability(outcome)
}

/// Probabilities of every outcome with at most `cutoff` photons.
pub fn enumerate_distribution(state: &GaussianState, cutoff: u32) -> Result<OutcomeDistribution> {
    let stats = GaussianPhotonStatistics::new(state)?;
    let mut entries = BTreeMap::new();
    for o in outcomes_up_to(state.modes(), cutoff) {
        let p = stats.probability(&o)?;
        entries.insert(o, p);
    }
    OutcomeDistribution::new(state.modes(), cutoff, entries)
}

/// Smallest cutoff whose captured mass reaches `required`, computed exactly
/// sector by sector.
pub fn suggest_cutoff(state: &GaussianState, required: f64) -> Result<u32> {
    let stats = GaussianPhotonStatistics::new(state)?;
    let mut mass = 0.0;
    for c in 0..=MAX_AUTO_CUTOFF {
        for o in outcomes_with_total(state.modes(), c) {
            mass += stats.probability(&o)?;
        }
        if mass >= required {
            return Ok(c);
        }
    }
    Err(Error::InsufficientMass {
        mass,
        required,
        cutoff: MAX_AUTO_CUTOFF,
        suggested: MAX_AUTO_CUTOFF + 1,
    })
}

/// Draws by inverse CDF over the renormalized enumerated distribution.
pub fn sample_from_distribution(
    dist: &OutcomeDistribution,
    count: usize,
    seed: u64,
) -> Result<Vec<FockOutcome>> {
    if dist.is_empty() || dist.mass() <= 0.0 {
        return Err(Error::InvalidArgument("empty distribution".into()));
    }
    let mut cumulative = Vec::with_capacity(dist.len());
    let mut outcomes = Vec::with_capacity(dist.len());
    let mut acc = 0.0;
    for (o, p) in dist.iter() {
        acc += p;
        cumulative.push(acc);
        outcomes.push(o.clone());
    }
    let total = acc;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let draws = (0..count)
        .map(|_| {
            let u: f64 = rng.random::<f64>() * total;
            let idx = cumulative.partition_point(|&c| c <= u).min(outcomes.len() - 1);
            outcomes[idx].clone()
        })
        .collect();
    Ok(draws)
}

/// `count` photon-count samples, refusing when the cutoff captures less than
/// `1 - 1e-3` of the probability.
pub fn sample_fock(state: &GaussianState, count: usize, cutoff: u32, seed: u64) -> Result<Vec<FockOutcome>> {
    let dist = enumerate_distribution(state, cutoff)?;
    if dist.mass() < REQUIRED_MASS {
        let suggested = suggest_cutoff(state, REQUIRED_MASS).unwrap_or(MAX_AUTO_CUTOFF + 1);
        return Err(Error::InsufficientMass {
            mass: dist.mass(),
            required: REQUIRED_MASS,
            cutoff,
            suggested,
        });
    }
    sample_from_distribution(&dist, count, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn outcome(v: &[u32]) -> FockOutcome {
        FockOutcome::new(v.to_vec())
    }

    #[test]
    fn vacuum_has_no_photons() {
        let v = GaussianState::vacuum(3).unwrap();
        assert_abs_diff_eq!(outcome_probability(&v, &FockOutcome::vacuum(3)).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(outcome_probability(&v, &outcome(&[0, 1, 0])).unwrap(), 0.0);
        let d = enumerate_distribution(&v, 3).unwrap();
        assert_abs_diff_eq!(d.mass(), 1.0, epsilon = 1e-15);
        assert_eq!(sample_fock(&v, 20, 2, 1).unwrap(), vec![FockOutcome::vacuum(3); 20]);
    }

    #[test]
    fn squeezed_vacuum_expansion() {
        let r: f64 = 0.5;
        let s = GaussianState::vacuum(1).unwrap().squeeze_single(0, r).unwrap();
        assert_abs_diff_eq!(outcome_probability(&s, &outcome(&[0])).unwrap(), 1.0 / r.cosh(), epsilon = 1e-14);
        assert_abs_diff_eq!(outcome_probability(&s, &outcome(&[0])).unwrap(), 0.88681, epsilon = 1e-5);
        assert_eq!(outcome_probability(&s, &outcome(&[1])).unwrap(), 0.0);
        // P(2k) = (2k)! / (2^k k!)^2 tanh^{2k} r / cosh r
        let t = r.tanh();
        for k in 1..5u32 {
            let fact = |n: u32| (1..=n).fold(1.0, |f, i| f * i as f64);
            let expected = fact(2 * k) / (2f64.powi(k as i32) * fact(k)).powi(2) * t.powi(2 * k as i32) / r.cosh();
            assert_abs_diff_eq!(outcome_probability(&s, &outcome(&[2 * k])).unwrap(), expected, epsilon = 1e-14);
        }
        let d = enumerate_distribution(&s, 6).unwrap();
        assert!(d.mass() >= 0.999, "mass {}", d.mass());
    }

    #[test]
    fn tmsv_pair_statistics() {
        let r: f64 = 0.5;
        let t = GaussianState::vacuum(2).unwrap().two_mode_squeeze(0, 1, r).unwrap();
        let chi = r.tanh();
        for n in 0..5u32 {
            let expected = (1.0 - chi * chi) * chi.powi(2 * n as i32);
            assert_abs_diff_eq!(outcome_probability(&t, &outcome(&[n, n])).unwrap(), expected, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(outcome_probability(&t, &outcome(&[1, 1])).unwrap(), 0.16794, epsilon = 1e-5);
        assert_eq!(outcome_probability(&t, &outcome(&[2, 1])).unwrap(), 0.0);
    }

    #[test]
    fn lossy_state_uses_mixed_kernel() {
        let s = GaussianState::vacuum(1).unwrap().squeeze_single(0, 0.6).unwrap();
        let lossy = s.apply_uniform_loss(0.7).unwrap();
        let stats = GaussianPhotonStatistics::new(&lossy).unwrap();
        assert!(!stats.is_pure());
        assert!(GaussianPhotonStatistics::new(&s).unwrap().is_pure());
        // loss populates odd photon numbers
        assert!(stats.probability(&outcome(&[1])).unwrap() > 1e-3);
        let d = enumerate_distribution(&lossy, 30).unwrap();
        assert_abs_diff_eq!(d.mass(), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn mass_grows_with_cutoff() {
        let s = GaussianState::vacuum(2)
            .unwrap()
            .two_mode_squeeze(0, 1, 0.7)
            .unwrap()
            .beamsplitter(0, 1, 0.4, 0.3)
            .unwrap();
        let masses: Vec<f64> = (0..8).map(|c| enumerate_distribution(&s, c).unwrap().mass()).collect();
        for w in masses.windows(2) {
            assert!(w[1] >= w[0]);
        }
    }

    #[test]
    fn sampler_guards_and_determinism() {
        let t = GaussianState::vacuum(2).unwrap().two_mode_squeeze(0, 1, 0.5).unwrap();
        match sample_fock(&t, 10, 2, 0) {
            Err(Error::InsufficientMass { suggested, .. }) => {
                let c = suggest_cutoff(&t, REQUIRED_MASS).unwrap();
                assert_eq!(suggested, c);
                assert!(enumerate_distribution(&t, c).unwrap().mass() >= REQUIRED_MASS);
                assert!(enumerate_distribution(&t, c - 1).unwrap().mass() < REQUIRED_MASS);
            }
            other => panic!("expected refusal, got {other:?}"),
        }
        let a = sample_fock(&t, 500, 12, 4).unwrap();
        assert_eq!(a, sample_fock(&t, 500, 12, 4).unwrap());
        assert!(a.iter().all(|o| o.occupations()[0] == o.occupations()[1]));
    }

    #[test]
    fn unphysical_state_rejected() {
        use crate::gaussian::{CovarianceMatrix, RealMatrix};
        let st = GaussianState::from_covariance(CovarianceMatrix::new(RealMatrix::from_diagonal_element(2, 2, 0.3)).unwrap());
        assert!(matches!(outcome_probability(&st, &outcome(&[0])), Err(Error::Unphysical { .. })));
    }
}
