//! Interactive views for the browser page in `www/`.
//!
//! Each view is a plain function returning a serializable struct, wrapped by
//! a `#[wasm_bindgen]` export that hands JSON to the page.

use cvbs::fock::{
    chi_to_db, enumerate_distribution, optimal_chi, scattershot_success_probability, ScattershotParams,
};
use cvbs::homodyne::{
    chernoff_failure_bound, draw_dual_homodyne_samples, multiplicative_band_check, reconstruct_covariance,
    required_sample_count, SampleMatrixAccumulator,
};
use cvbs::verify::{gaussian_fidelity_pure_target, project_physical, total_variation};
use cvbs::{Error, GaussianState, Result};
use serde::Serialize;
use wasm_bindgen::prelude::*;

pub const MAX_CUTOFF: u32 = 16;
pub const MAX_HOMODYNE_SAMPLES: usize = 200_000;

#[derive(Debug, Clone, Serialize)]
pub struct ScattershotCurve {
    pub chi: Vec<f64>,
    pub probability: Vec<f64>,
    pub optimal_chi: f64,
    pub optimal_db: f64,
    pub peak_probability: f64,
}

/// `P(n)` over `chi` in `(0, 1)` and the stationary point.
pub fn scattershot_curve(photons: u32, sources: u32, points: usize) -> Result<ScattershotCurve> {
    if points < 2 {
        return Err(Error::InvalidArgument("need at least two points".into()));
    }
    let best = optimal_chi(photons, sources)?;
    let mut chi = Vec::with_capacity(points);
    let mut probability = Vec::with_capacity(points);
    for k in 1..=points {
        let c = k as f64 / (points + 1) as f64;
        chi.push(c);
        probability.push(scattershot_success_probability(&ScattershotParams::new(photons, sources, c)?));
    }
    Ok(ScattershotCurve {
        chi,
        probability,
        optimal_chi: best,
        optimal_db: chi_to_db(best)?,
        peak_probability: scattershot_success_probability(&ScattershotParams::new(photons, sources, best)?),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LossComparison {
    pub cutoff: u32,
    /// Total photon number per bar.
    pub sectors: Vec<u32>,
    pub ideal: Vec<f64>,
    pub lossy: Vec<f64>,
    pub tvd: f64,
    pub residual: f64,
    pub ideal_mass: f64,
    pub lossy_mass: f64,
}

/// Photon statistics of a two-mode squeezed vacuum with and without uniform loss.
pub fn loss_comparison(r: f64, eta: f64, cutoff: u32) -> Result<LossComparison> {
    if cutoff > MAX_CUTOFF {
        return Err(Error::InvalidArgument(format!("cutoff limited to {MAX_CUTOFF}")));
    }
    let ideal_state = GaussianState::vacuum(2)?.two_mode_squeeze(0, 1, r)?;
    let lossy_state = ideal_state.apply_uniform_loss(eta)?;
    let ideal = enumerate_distribution(&ideal_state, cutoff)?;
    let lossy = enumerate_distribution(&lossy_state, cutoff)?;
    let tv = total_variation(&ideal, &lossy)?;
    Ok(LossComparison {
        cutoff,
        sectors: (0..=cutoff).collect(),
        ideal: ideal.sector_masses(),
        lossy: lossy.sector_masses(),
        tvd: tv.distance,
        residual: tv.residual,
        ideal_mass: ideal.mass(),
        lossy_mass: lossy.mass(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HomodyneEstimate {
    pub samples: usize,
    pub truth: Vec<Vec<f64>>,
    pub estimate: Vec<Vec<f64>>,
    pub max_abs_error: f64,
    pub band_ok: bool,
    pub lower_margin: f64,
    pub upper_margin: f64,
    pub failure_bound: f64,
    pub required_samples: u64,
    pub fidelity: f64,
    pub physical: bool,
}

fn rows(m: &cvbs::gaussian::RealMatrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// Reconstructs a two-mode squeezed vacuum from `samples` dual-homodyne draws.
pub fn homodyne_estimate(r: f64, samples: usize, eta: f64, delta: f64, seed: u64) -> Result<HomodyneEstimate> {
    if samples == 0 || samples > MAX_HOMODYNE_SAMPLES {
        return Err(Error::InvalidArgument(format!("samples must lie in 1..={MAX_HOMODYNE_SAMPLES}")));
    }
    let state = GaussianState::vacuum(2)?.two_mode_squeeze(0, 1, r)?;
    let draws = draw_dual_homodyne_samples(&state, samples, seed)?;
    let mut acc = SampleMatrixAccumulator::new(2);
    acc.extend(&draws)?;
    let est = reconstruct_covariance(&acc.average()?)?;
    let report = multiplicative_band_check(
        state.covariance(),
        &est.covariance,
        eta,
        state.min_quadrature_variance()?,
        samples as u64,
    )?;
    let (physical, _) = project_physical(&est.covariance)?;
    Ok(HomodyneEstimate {
        samples,
        truth: rows(state.covariance().matrix()),
        estimate: rows(est.covariance.matrix()),
        max_abs_error: est.covariance.max_abs_diff(state.covariance())?,
        band_ok: report.band_ok,
        lower_margin: report.lower_margin,
        upper_margin: report.upper_margin,
        failure_bound: chernoff_failure_bound(2, samples as u64, eta)?,
        required_samples: required_sample_count(2, eta, delta)?,
        fidelity: gaussian_fidelity_pure_target(state.covariance(), &physical)?,
        physical: est.is_physical(),
    })
}

fn to_js<T: Serialize>(value: Result<T>) -> std::result::Result<String, JsError> {
    let value = value.map_err(|e| JsError::new(&e.to_string()))?;
    serde_json::to_string(&value).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = scattershotCurve)]
pub fn scattershot_curve_js(photons: u32, sources: u32, points: usize) -> std::result::Result<String, JsError> {
    to_js(scattershot_curve(photons, sources, points))
}

#[wasm_bindgen(js_name = lossComparison)]
pub fn loss_comparison_js(r: f64, eta: f64, cutoff: u32) -> std::result::Result<String, JsError> {
    to_js(loss_comparison(r, eta, cutoff))
}

#[wasm_bindgen(js_name = homodyneEstimate)]
pub fn homodyne_estimate_js(
    r: f64,
    samples: usize,
    eta: f64,
    delta: f64,
    seed: u32,
) -> std::result::Result<String, JsError> {
    to_js(homodyne_estimate(r, samples, eta, delta, seed as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_peaks_at_the_stationary_point() {
        let c = scattershot_curve(8, 64, 199).unwrap();
        assert!((c.optimal_chi - 1.0 / 3.0).abs() < 1e-15);
        assert!((c.optimal_db - 3.0103).abs() < 1e-3);
        assert!(c.probability.iter().all(|&p| p <= c.peak_probability + 1e-15));
        assert!(scattershot_curve(8, 64, 1).is_err());
        assert!(scattershot_curve(9, 4, 10).is_err());
    }

    #[test]
    fn loss_spreads_the_distribution() {
        let none = loss_comparison(0.5, 1.0, 8).unwrap();
        assert!(none.tvd < 1e-12);
        // pairs only: odd sectors are empty without loss
        assert!(none.ideal.iter().skip(1).step_by(2).all(|&p| p < 1e-12));
        let some = loss_comparison(0.5, 0.7, 8).unwrap();
        assert!(some.tvd > 0.05);
        assert!(some.lossy[1] > 0.01);
        assert_eq!(some.sectors.len(), 9);
        assert!(loss_comparison(0.5, 0.7, MAX_CUTOFF + 1).is_err());
    }

    #[test]
    fn homodyne_estimate_converges() {
        let e = homodyne_estimate(0.5, 100_000, 0.2, 0.01, 1).unwrap();
        assert!(e.max_abs_error < 0.05);
        assert!(e.band_ok);
        assert!(e.fidelity > 0.99);
        assert_eq!(e.truth.len(), 4);
        assert_eq!(e.required_samples, required_sample_count(2, 0.2, 0.01).unwrap());
        assert!(homodyne_estimate(0.5, 0, 0.2, 0.01, 1).is_err());
    }

    #[test]
    fn json_shape() {
        let text = serde_json::to_string(&loss_comparison(0.3, 0.9, 4).unwrap()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        for key in ["cutoff", "sectors", "ideal", "lossy", "tvd", "residual"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
