//! Brute-force truncated-Fock reference for small circuits.
//!
//! The circuit is a layer of single-mode squeezers on vacuum followed by a
//! passive interferometer `U`. Each squeezed mode is obtained by
//! exponentiating the truncated generator `(r/2)(a^2 - a^dag^2)` in a local
//! Fock space of dimension [`LOCAL_DIM`]. The interferometer is applied
//! photon-number sector by sector by expanding `prod_i (sum_j U_ji a_j^dag)^{n_i}`
//! on the vacuum, which is exact inside each sector.
//!
//! Nothing here touches covariance matrices or hafnians.

use std::collections::{BTreeMap, HashMap};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::distribution::{outcomes_up_to, FockOutcome, OutcomeDistribution};
use crate::error::{Error, Result};
use crate::gaussian::{unitarity_residual, ComplexMatrix, UNITARY_TOL};

pub const MAX_ORACLE_MODES: usize = 4;
pub const MAX_ORACLE_CUTOFF: u32 = 8;
/// Local Fock dimension used for each squeezed mode.
pub const LOCAL_DIM: usize = 96;
/// Largest mass allowed in the upper half of a truncated local space.
pub const DEFICIT_TOL: f64 = 1e-6;

/// Single-mode squeezers followed by a passive interferometer.
#[derive(Debug, Clone)]
pub struct OracleCircuit {
    squeezing: Vec<f64>,
    unitary: ComplexMatrix,
}

impl OracleCircuit {
    pub fn new(squeezing: Vec<f64>, unitary: ComplexMatrix) -> Result<Self> {
        let m = squeezing.len();
        if m == 0 {
            return Err(Error::ZeroModes);
        }
        if unitary.shape() != (m, m) {
            return Err(Error::Shape {
                expected: m,
                rows: unitary.nrows(),
                cols: unitary.ncols(),
            });
        }
        let residual = unitarity_residual(&unitary);
        if residual > UNITARY_TOL {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self { squeezing, unitary })
    }

    pub fn vacuum(modes: usize) -> Result<Self> {
        Self::new(vec![0.0; modes], ComplexMatrix::identity(modes, modes))
    }

    /// Two-mode squeezed vacuum `exp(r(a^dag b^dag - a b))|0,0>`, written as
    /// squeezers `(r, -r)` followed by a balanced beamsplitter.
    pub fn two_mode_squeezed(r: f64) -> Result<Self> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let u = ComplexMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(h, 0.0),
                Complex64::new(h, 0.0),
                Complex64::new(-h, 0.0),
                Complex64::new(h, 0.0),
            ],
        );
        Self::new(vec![r, -r], u)
    }

    pub fn modes(&self) -> usize {
        self.squeezing.len()
    }

    pub fn squeezing(&self) -> &[f64] {
        &self.squeezing
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    /// The same circuit followed by `v`.
    pub fn then(&self, v: &ComplexMatrix) -> Result<Self> {
        Self::new(self.squeezing.clone(), v * &self.unitary)
    }
}

/// Amplitudes `<n|S(r)|0>` for `n < dim`, from the matrix exponential of the
/// truncated generator.
pub fn squeezed_vacuum_amplitudes(r: f64, dim: usize) -> Vec<f64> {
    let mut g = DMatrix::<f64>::zeros(dim, dim);
    for n in 2..dim {
        let v = 0.5 * r * ((n * (n - 1)) as f64).sqrt();
        // a^2 lowers n -> n-2, a^dag^2 raises n-2 -> n
        g[(n - 2, n)] = v;
        g[(n, n - 2)] = -v;
    }
    g.exp().column(0).iter().copied().collect()
}

/// Probability mass in the upper half of a truncated amplitude vector.
fn upper_half_mass(amps: &[f64]) -> f64 {
    amps[amps.len() / 2..].iter().map(|a| a * a).sum()
}

/// `<x^2>` with `x = a + a^dag`, for a real single-mode state vector.
pub fn x_variance(amps: &[f64]) -> f64 {
    quadrature_moment(amps, 1.0)
}

/// `<p^2>` with `p = -i(a - a^dag)`, for a real single-mode state vector.
pub fn p_variance(amps: &[f64]) -> f64 {
    quadrature_moment(amps, -1.0)
}

fn quadrature_moment(amps: &[f64], sign: f64) -> f64 {
    // (a + s a^dag)^2 = a^2 + s a^dag^2 + s (2n + 1) for s = +-1; p^2 takes the
    // overall minus from (-i)^2.
    let mut diag = 0.0;
    let mut off = 0.0;
    for (n, &c) in amps.iter().enumerate() {
        diag += c * c * (2 * n + 1) as f64;
        if n + 2 < amps.len() {
            off += 2.0 * c * amps[n + 2] * (((n + 1) * (n + 2)) as f64).sqrt();
        }
    }
    if sign > 0.0 {
        diag + off
    } else {
        diag - off
    }
}

pub fn mean_photon_number(amps: &[f64]) -> f64 {
    amps.iter().enumerate().map(|(n, a)| n as f64 * a * a).sum()
}

/// Diagonal of the density matrix after a pure-loss channel with
/// transmissivity `eta`: `P'(k) = sum_n P(n) C(n, k) eta^k (1 - eta)^{n - k}`.
pub fn lossy_photon_distribution(amps: &[f64], eta: f64) -> Vec<f64> {
    let dim = amps.len();
    let mut out = vec![0.0; dim];
    for (n, &a) in amps.iter().enumerate() {
        let p = a * a;
        let mut binom = 1.0;
        for (k, slot) in out.iter_mut().enumerate().take(n + 1) {
            if k > 0 {
                binom *= (n - k + 1) as f64 / k as f64;
            }
            *slot += p * binom * eta.powi(k as i32) * (1.0 - eta).powi((n - k) as i32);
        }
    }
    out
}

/// Single-mode density matrix after pure loss, built from Kraus operators
/// `E_k = sum_n sqrt(C(n, k) eta^{n-k} (1-eta)^k) |n-k><n|`.
pub fn lossy_density_matrix(amps: &[f64], eta: f64) -> DMatrix<f64> {
    let dim = amps.len();
    let rho = DMatrix::from_fn(dim, dim, |i, j| amps[i] * amps[j]);
    let mut out = DMatrix::zeros(dim, dim);
    let binom = |n: usize, k: usize| -> f64 { (0..k).fold(1.0, |b, i| b * (n - i) as f64 / (i + 1) as f64) };
    for k in 0..dim {
        let mut e = DMatrix::<f64>::zeros(dim, dim);
        for n in k..dim {
            e[(n - k, n)] = (binom(n, k) * eta.powi((n - k) as i32) * (1.0 - eta).powi(k as i32)).sqrt();
        }
        out += &e * &rho * e.transpose();
    }
    out
}

/// Truncated output state: amplitudes of every occupation with at most
/// `cutoff` photons.
#[derive(Debug, Clone)]
pub struct OracleState {
    modes: usize,
    cutoff: u32,
    amplitudes: BTreeMap<FockOutcome, Complex64>,
    truncation_deficit: f64,
}

impl OracleState {
    pub fn prepare(circuit: &OracleCircuit, cutoff: u32) -> Result<Self> {
        let m = circuit.modes();
        if m > MAX_ORACLE_MODES || cutoff > MAX_ORACLE_CUTOFF {
            return Err(Error::OracleScale {
                modes: m,
                cutoff,
                max_modes: MAX_ORACLE_MODES,
                max_cutoff: MAX_ORACLE_CUTOFF,
            });
        }
        let local: Vec<Vec<f64>> = circuit
            .squeezing
            .iter()
            .map(|&r| squeezed_vacuum_amplitudes(r, LOCAL_DIM))
            .collect();
        let truncation_deficit = local.iter().map(|a| upper_half_mass(a)).fold(0.0, f64::max);
        if truncation_deficit > DEFICIT_TOL {
            return Err(Error::TruncationDeficit {
                deficit: truncation_deficit,
            });
        }

        let mut amplitudes: BTreeMap<FockOutcome, Complex64> = outcomes_up_to(m, cutoff)
            .into_iter()
            .map(|o| (o, Complex64::new(0.0, 0.0)))
            .collect();
        for input in outcomes_up_to(m, cutoff) {
            let c: f64 = input
                .occupations()
                .iter()
                .zip(&local)
                .map(|(&n, amps)| amps[n as usize])
                .product();
            if c == 0.0 {
                continue;
            }
            for (out, amp) in propagate(&circuit.unitary, input.occupations()) {
                *amplitudes.get_mut(&out).expect("photon number is conserved") += amp * c;
            }
        }
        Ok(Self {
            modes: m,
            cutoff,
            amplitudes,
            truncation_deficit,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// Largest upper-half mass among the truncated local squeezed states.
    pub fn truncation_deficit(&self) -> f64 {
        self.truncation_deficit
    }

    pub fn amplitude(&self, outcome: &FockOutcome) -> Complex64 {
        self.amplitudes.get(outcome).copied().unwrap_or_default()
    }

    /// `<self|other>` over the common truncated space.
    pub fn overlap(&self, other: &OracleState) -> Complex64 {
        self.amplitudes
            .iter()
            .map(|(o, a)| a.conj() * other.amplitude(o))
            .sum()
    }

    /// Squared norm of the state within the cutoff.
    pub fn captured_mass(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn distribution(&self) -> Result<OutcomeDistribution> {
        let entries = self
            .amplitudes
            .iter()
            .map(|(o, a)| (o.clone(), a.norm_sqr()))
            .collect();
        OutcomeDistribution::new(self.modes, self.cutoff, entries)
    }
}

/// Fock-space image of the basis state `|n>` under the interferometer:
/// `prod_i (sum_j U_ji a_j^dag)^{n_i} / sqrt(n_i!) |0>`.
fn propagate(u: &ComplexMatrix, input: &[u32]) -> Vec<(FockOutcome, Complex64)> {
    let m = input.len();
    let mut state: HashMap<Vec<u32>, Complex64> = HashMap::new();
    state.insert(vec![0; m], Complex64::new(1.0, 0.0));
    for (i, &n_i) in input.iter().enumerate() {
        for _ in 0..n_i {
            let mut next: HashMap<Vec<u32>, Complex64> = HashMap::with_capacity(state.len() * m);
            for (occ, amp) in &state {
                for j in 0..m {
                    let coeff = u[(j, i)];
                    if coeff == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let mut raised = occ.clone();
                    raised[j] += 1;
                    let bosonic = (raised[j] as f64).sqrt();
                    *next.entry(raised).or_default() += amp * coeff * bosonic;
                }
            }
            state = next;
        }
        let norm = (1..=n_i).fold(1.0, |f, k| f * k as f64).sqrt();
        for amp in state.values_mut() {
            *amp /= norm;
        }
    }
    state.into_iter().map(|(o, a)| (FockOutcome::new(o), a)).collect()
}

/// Probability of `outcome` from the truncated simulation.
pub fn oracle_probability(circuit: &OracleCircuit, outcome: &FockOutcome, cutoff: u32) -> Result<f64> {
    if outcome.modes() != circuit.modes() {
        return Err(Error::DimensionMismatch(outcome.modes(), circuit.modes()));
    }
    if outcome.total() > cutoff {
        return Err(Error::InvalidArgument(format!(
            "outcome {outcome} has more than {cutoff} photons"
        )));
    }
    Ok(OracleState::prepare(circuit, cutoff)?.amplitude(outcome).norm_sqr())
}

/// All outcome probabilities up to `cutoff` from the truncated simulation.
pub fn oracle_distribution(circuit: &OracleCircuit, cutoff: u32) -> Result<OutcomeDistribution> {
    OracleState::prepare(circuit, cutoff)?.distribution()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn outcome(v: &[u32]) -> FockOutcome {
        FockOutcome::new(v.to_vec())
    }

    #[test]
    fn squeezed_amplitudes_match_closed_form() {
        let r: f64 = 0.7;
        let amps = squeezed_vacuum_amplitudes(r, LOCAL_DIM);
        let (t, c) = (r.tanh(), r.cosh());
        let fact = |n: usize| (1..=n).fold(1.0, |f, i| f * i as f64);
        for k in 0..8usize {
            let expected = (-t).powi(k as i32) * fact(2 * k).sqrt() / (2f64.powi(k as i32) * fact(k)) / c.sqrt();
            assert_abs_diff_eq!(amps[2 * k], expected, epsilon = 1e-13);
            assert_abs_diff_eq!(amps[2 * k + 1], 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn quadrature_moments_of_squeezed_vacuum() {
        let r: f64 = 0.5;
        let amps = squeezed_vacuum_amplitudes(r, LOCAL_DIM);
        assert_abs_diff_eq!(x_variance(&amps), (-2.0 * r).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(p_variance(&amps), (2.0 * r).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(mean_photon_number(&amps), r.sinh().powi(2), epsilon = 1e-12);
        let vac = squeezed_vacuum_amplitudes(0.0, 8);
        assert_abs_diff_eq!(x_variance(&vac), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn vacuum_circuit() {
        let c = OracleCircuit::vacuum(3).unwrap();
        assert_abs_diff_eq!(oracle_probability(&c, &FockOutcome::vacuum(3), 4).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn tmsv_pair_law() {
        let r: f64 = 0.5;
        let c = OracleCircuit::two_mode_squeezed(r).unwrap();
        let chi = r.tanh();
        let p11 = oracle_probability(&c, &outcome(&[1, 1]), 6).unwrap();
        assert_abs_diff_eq!(p11, (1.0 - chi * chi) * chi * chi, epsilon = 1e-12);
        assert_abs_diff_eq!(p11, 0.16794, epsilon = 1e-5);
        assert_abs_diff_eq!(oracle_probability(&c, &outcome(&[2, 0]), 6).unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn balanced_beamsplitter_on_tmsv_bunches() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bs = ComplexMatrix::from_row_slice(
            2,
            2,
            &[Complex64::new(h, 0.0), Complex64::new(-h, 0.0), Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
        );
        let c = OracleCircuit::two_mode_squeezed(0.5).unwrap().then(&bs).unwrap();
        let d = oracle_distribution(&c, 6).unwrap();
        assert_abs_diff_eq!(d.probability(&outcome(&[1, 1])), 0.0, epsilon = 1e-14);
        let (p20, p02) = (d.probability(&outcome(&[2, 0])), d.probability(&outcome(&[0, 2])));
        assert!(p20 > 0.01);
        assert_abs_diff_eq!(p20, p02, epsilon = 1e-14);
    }

    #[test]
    fn loss_helpers_agree() {
        let amps = squeezed_vacuum_amplitudes(0.6, 48);
        let eta = 0.7;
        let rho = lossy_density_matrix(&amps, eta);
        let diag = lossy_photon_distribution(&amps, eta);
        for k in 0..10 {
            assert_abs_diff_eq!(rho[(k, k)], diag[k], epsilon = 1e-14);
        }
        assert_abs_diff_eq!(rho.trace(), 1.0, epsilon = 1e-12);
        let nbar: f64 = diag.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
        assert_abs_diff_eq!(nbar, eta * mean_photon_number(&amps), epsilon = 1e-12);
    }

    #[test]
    fn guards() {
        assert!(matches!(
            OracleState::prepare(&OracleCircuit::vacuum(5).unwrap(), 2),
            Err(Error::OracleScale { .. })
        ));
        assert!(matches!(
            OracleState::prepare(&OracleCircuit::vacuum(2).unwrap(), 9),
            Err(Error::OracleScale { .. })
        ));
        let strong = OracleCircuit::new(vec![3.0], ComplexMatrix::identity(1, 1)).unwrap();
        assert!(matches!(OracleState::prepare(&strong, 4), Err(Error::TruncationDeficit { .. })));
        let c = OracleCircuit::vacuum(2).unwrap();
        assert!(oracle_probability(&c, &outcome(&[3, 3]), 4).is_err());
    }
}
