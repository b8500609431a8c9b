//! Photon statistics of `m` identical two-mode squeezers and the squeezing
//! that maximizes the chance of `n` heralded photons.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScattershotParams {
    pub photons: u32,
    pub sources: u32,
    pub chi: f64,
}

impl ScattershotParams {
    pub fn new(photons: u32, sources: u32, chi: f64) -> Result<Self> {
        if !(chi > 0.0 && chi < 1.0) {
            return Err(Error::InvalidChi(chi));
        }
        if photons > sources {
            return Err(Error::TooManyPhotons { photons, sources });
        }
        Ok(Self { photons, sources, chi })
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `P(n) = C(m, n) chi^{2n} (1 - chi^2)^m`.
pub fn scattershot_success_probability(params: &ScattershotParams) -> f64 {
    let ScattershotParams { photons: n, sources: m, chi } = *params;
    let c2 = chi * chi;
    binomial(m, n) * c2.powi(n as i32) * (1.0 - c2).powi(m as i32)
}

/// `chi = sqrt(n / (m + n))`, the stationary point of `P(n)` in `chi`.
pub fn optimal_chi(photons: u32, sources: u32) -> Result<f64> {
    if photons == 0 {
        return Err(Error::InvalidArgument("optimal chi needs at least one photon".into()));
    }
    if photons > sources {
        return Err(Error::TooManyPhotons { photons, sources });
    }
    Ok((photons as f64 / (sources + photons) as f64).sqrt())
}

/// Squeezing in dB for two-mode squeezer strength `chi = tanh r`: `10 log10(e^{2r})`.
pub fn chi_to_db(chi: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&chi) {
        return Err(Error::InvalidChi(chi));
    }
    Ok(20.0 * chi.atanh() / std::f64::consts::LN_10)
}

/// Inverse of [`chi_to_db`].
pub fn db_to_chi(db: f64) -> Result<f64> {
    if !(db >= 0.0 && db.is_finite()) {
        return Err(Error::InvalidArgument(format!("squeezing must be a finite non-negative dB value, got {db}")));
    }
    Ok((db * std::f64::consts::LN_10 / 20.0).tanh())
}
