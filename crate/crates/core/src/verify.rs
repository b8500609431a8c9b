//! Certification of an estimated state against a pure Gaussian target.
//!
//! The acceptance test is `1 - F < epsilon` with the exact Gaussian fidelity
//! `F = 2^m / sqrt(det(cov_target + cov_est))`, valid for a pure zero-mean
//! target and any zero-mean Gaussian estimate. Reports also carry the
//! Fuchs-van de Graaf trace-distance bound `sqrt(1 - F)`.

use std::collections::BTreeSet;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::OutcomeDistribution;
use crate::gaussian::{symmetrize, symplectic_form, ComplexMatrix, CovarianceMatrix, RealMatrix};

/// Tolerance on `det cov_target = 1`.
pub const PURITY_TOL: f64 = 1e-6;

/// Fidelity `<psi|rho|psi>` between a pure Gaussian target and an estimate.
pub fn gaussian_fidelity_pure_target(target: &CovarianceMatrix, estimate: &CovarianceMatrix) -> Result<f64> {
    if target.modes() != estimate.modes() {
        return Err(Error::DimensionMismatch(target.modes(), estimate.modes()));
    }
    let det = target.determinant();
    if (det - 1.0).abs() > PURITY_TOL {
        return Err(Error::NotPure { det });
    }
    let sum = target.matrix() + estimate.matrix();
    let d = sum.determinant();
    if !(d > 0.0) {
        return Err(Error::Unphysical { min_eigenvalue: estimate.physicality_margin() });
    }
    Ok(2f64.powi(target.modes() as i32) / d.sqrt())
}

/// `1 - F` (the acceptance quantity) and `sqrt(1 - F)` (Fuchs-van de Graaf).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceDistanceBound {
    pub one_minus_f: f64,
    pub fvdg: f64,
}

pub fn trace_distance_bound(fidelity: f64) -> TraceDistanceBound {
    let one_minus_f = (1.0 - fidelity).max(0.0);
    TraceDistanceBound {
        one_minus_f,
        fvdg: one_minus_f.sqrt(),
    }
}

/// Total variation distance within the cutoff plus the worst-case
/// contribution of mass lying above it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TotalVariation {
    /// `1/2 sum |p - q|` over the union of enumerated outcomes.
    pub distance: f64,
    /// `1/2 |mass_p - mass_q|`.
    pub residual: f64,
}

pub fn total_variation(p: &OutcomeDistribution, q: &OutcomeDistribution) -> Result<TotalVariation> {
    if p.modes() != q.modes() {
        return Err(Error::DimensionMismatch(p.modes(), q.modes()));
    }
    let support: BTreeSet<_> = p.iter().map(|(o, _)| o).chain(q.iter().map(|(o, _)| o)).collect();
    let distance = 0.5 * support.into_iter().map(|o| (p.probability(o) - q.probability(o)).abs()).sum::<f64>();
    Ok(TotalVariation {
        distance,
        residual: 0.5 * (p.mass() - q.mass()).abs(),
    })
}

/// `ceil(c m^4)` verification runs.
pub fn verification_sample_budget(modes: usize, constant: f64) -> u64 {
    (constant * (modes as f64).powi(4)).ceil().max(0.0) as u64
}

/// `n m^n`, the discrete-variable comparator for `n` photons in `m` modes.
pub fn discrete_verification_budget(photons: u32, modes: u64) -> u64 {
    photons as u64 * modes.pow(photons)
}

/// Nearest physical covariance by alternating projection between the PSD
/// cone (eigenvalue flooring of `cov + i*omega`) and the affine set with
/// imaginary part `omega`. Returns the projected matrix and the Frobenius
/// size of the change.
pub fn project_physical(cov: &CovarianceMatrix) -> Result<(CovarianceMatrix, f64)> {
    if cov.physicality_margin() >= 0.0 {
        return Ok((cov.clone(), 0.0));
    }
    let n = cov.dim();
    let omega = symplectic_form(cov.modes());
    let mut s = cov.matrix().clone();
    for _ in 0..500 {
        let h = ComplexMatrix::from_fn(n, n, |i, j| Complex64::new(s[(i, j)], omega[(i, j)]));
        let eig = SymmetricEigen::new(h);
        if eig.eigenvalues.min() >= 0.0 {
            break;
        }
        let floored = eig.eigenvalues.map(|l| Complex64::new(l.max(0.0), 0.0));
        let h = &eig.eigenvectors * ComplexMatrix::from_diagonal(&floored) * eig.eigenvectors.adjoint();
        s = symmetrize(&h.map(|z| z.re));
    }
    let mut projected = CovarianceMatrix::new(s)?;
    let margin = projected.physicality_margin();
    if margin < 0.0 {
        let shifted = projected.matrix() + RealMatrix::identity(n, n) * (-margin);
        projected = CovarianceMatrix::new(shifted)?;
    }
    let perturbation = (projected.matrix() - cov.matrix()).norm();
    Ok((projected, perturbation))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub fidelity: f64,
    #[serde(rename = "one_minus_F")]
    pub one_minus_f: f64,
    pub fvdg_bound: f64,
    pub epsilon: f64,
    pub pass: bool,
    pub sample_budget: u64,
    pub projection_perturbation: f64,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// [`certify_with_budget`] with budget constant 1.
pub fn certify(target: &CovarianceMatrix, estimate: &CovarianceMatrix, epsilon: f64) -> Result<VerificationReport> {
    certify_with_budget(target, estimate, epsilon, 1.0)
}

/// Fidelity, bounds and the verdict `1 - F < epsilon`. Unphysical estimates
/// are projected first and the size of the projection is reported.
pub fn certify_with_budget(
    target: &CovarianceMatrix,
    estimate: &CovarianceMatrix,
    epsilon: f64,
    budget_constant: f64,
) -> Result<VerificationReport> {
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be non-negative, got {epsilon}")));
    }
    let (physical, projection_perturbation) = project_physical(estimate)?;
    let fidelity = gaussian_fidelity_pure_target(target, &physical)?;
    let bounds = trace_distance_bound(fidelity);
    Ok(VerificationReport {
        fidelity,
        one_minus_f: 1.0 - fidelity,
        fvdg_bound: bounds.fvdg,
        epsilon,
        pass: 1.0 - fidelity < epsilon,
        sample_budget: verification_sample_budget(target.modes(), budget_constant),
        projection_perturbation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockOutcome;
    use crate::gaussian::GaussianState;
    use approx::assert_abs_diff_eq;
    use std::collections::BTreeMap;

    fn squeezed(r: f64) -> CovarianceMatrix {
        GaussianState::vacuum(1).unwrap().squeeze_single(0, r).unwrap().into_covariance()
    }

    fn dist(entries: &[(&[u32], f64)]) -> OutcomeDistribution {
        let map: BTreeMap<FockOutcome, f64> = entries.iter().map(|(o, p)| (FockOutcome::new(o.to_vec()), *p)).collect();
        OutcomeDistribution::new(entries[0].0.len(), 4, map).unwrap()
    }

    #[test]
    fn fidelity_cases() {
        let s = squeezed(0.5);
        assert_abs_diff_eq!(gaussian_fidelity_pure_target(&s, &s).unwrap(), 1.0, epsilon = 1e-12);
        let vac = CovarianceMatrix::identity(1).unwrap();
        let f = gaussian_fidelity_pure_target(&vac, &s).unwrap();
        assert_abs_diff_eq!(f, 1.0 / 0.5f64.cosh(), epsilon = 1e-12);
        assert_abs_diff_eq!(f, 0.88681, epsilon = 1e-5);
        let lossy = GaussianState::vacuum(1).unwrap().squeeze_single(0, 0.5).unwrap().apply_uniform_loss(0.5).unwrap();
        assert!(matches!(
            gaussian_fidelity_pure_target(lossy.covariance(), &s),
            Err(Error::NotPure { .. })
        ));
        assert!(gaussian_fidelity_pure_target(&vac, &CovarianceMatrix::identity(2).unwrap()).is_err());
    }

    #[test]
    fn trace_distance_cases() {
        assert_eq!(trace_distance_bound(1.0), TraceDistanceBound { one_minus_f: 0.0, fvdg: 0.0 });
        let b = trace_distance_bound(0.99);
        assert_abs_diff_eq!(b.one_minus_f, 0.01, epsilon = 1e-12);
        assert_abs_diff_eq!(b.fvdg, 0.1, epsilon = 1e-10);
        let lo = trace_distance_bound(0.8);
        let hi = trace_distance_bound(0.9);
        assert!(lo.one_minus_f > hi.one_minus_f && lo.fvdg > hi.fvdg);
    }

    #[test]
    fn tvd_cases() {
        let p = dist(&[(&[0, 0], 0.5), (&[1, 1], 0.5)]);
        let tv = total_variation(&p, &p).unwrap();
        assert_eq!(tv.distance, 0.0);
        let q = dist(&[(&[2, 0], 0.25), (&[0, 2], 0.75)]);
        assert_abs_diff_eq!(total_variation(&p, &q).unwrap().distance, 1.0, epsilon = 1e-15);
        let short = dist(&[(&[0, 0], 0.5), (&[1, 1], 0.3)]);
        let tv = total_variation(&p, &short).unwrap();
        assert_abs_diff_eq!(tv.distance, 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(tv.residual, 0.1, epsilon = 1e-15);
    }

    #[test]
    fn budgets() {
        assert_eq!(verification_sample_budget(1, 1.0), 1);
        assert_eq!(verification_sample_budget(10, 1.0), 10_000);
        assert_eq!(verification_sample_budget(3, 0.5), 41);
        assert_eq!(discrete_verification_budget(3, 9), 2187);
        assert_eq!(verification_sample_budget(9, 1.0), 6561);
    }

    #[test]
    fn certify_verdicts() {
        let s = squeezed(0.5);
        let vac = CovarianceMatrix::identity(1).unwrap();
        let ok = certify(&s, &s, 0.01).unwrap();
        assert!(ok.pass);
        assert_eq!(ok.projection_perturbation, 0.0);
        let bad = certify(&vac, &s, 0.05).unwrap();
        assert!(!bad.pass);
        assert_abs_diff_eq!(bad.one_minus_f, 0.113, epsilon = 1e-3);
        assert!(certify(&vac, &s, 1.0).unwrap().pass);
        assert!(!certify(&s, &s, 0.0).unwrap().pass);
        assert!(certify(&s, &s, -0.1).is_err());
    }

    #[test]
    fn projection_restores_physicality() {
        let raw = RealMatrix::from_row_slice(2, 2, &[0.9, 0.05, 0.05, 0.95]);
        let cov = CovarianceMatrix::new(raw).unwrap();
        assert!(!cov.is_physical());
        let (p, delta) = project_physical(&cov).unwrap();
        assert!(p.physicality_margin() >= -1e-12);
        assert!(delta > 0.0 && delta < 0.3, "delta {delta}");
        let report = certify(&CovarianceMatrix::identity(1).unwrap(), &cov, 0.1).unwrap();
        assert!(report.projection_perturbation > 0.0);
        assert!(report.fidelity <= 1.0 + 1e-9);
    }

    #[test]
    fn report_json_keys() {
        let s = squeezed(0.2);
        let r = certify(&s, &s, 0.05).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        keys.sort_unstable();
        assert_eq!(
            keys,
            ["epsilon", "fidelity", "fvdg_bound", "one_minus_F", "pass", "projection_perturbation", "sample_budget"]
        );
        assert_eq!(VerificationReport::from_json(&r.to_json()).unwrap(), r);
    }
}
