//! Monte Carlo checks with tolerances derived from the sampling spread.

use cvbs::compiler::{haar_random_unitary, CompiledInterferometer, ScattershotArrangement};
use cvbs::fock::{enumerate_distribution, sample_fock, suggest_cutoff, OutcomeDistribution, REQUIRED_MASS};
use cvbs::homodyne::{draw_dual_homodyne_samples, reconstruct_covariance, SampleMatrixAccumulator};
use cvbs::verify::total_variation;
use cvbs::GaussianState;

#[test]
fn haar_first_column_moments() {
    let m = 8;
    let draws = 10_000;
    let mut sums = vec![0.0; m];
    for seed in 0..draws {
        let u = haar_random_unitary(m, seed).unwrap();
        for (k, s) in sums.iter_mut().enumerate() {
            *s += u.unitary()[(k, 0)].norm_sqr();
        }
    }
    // |U_k0|^2 ~ Beta(1, m - 1)
    let var = (m as f64 - 1.0) / ((m * m) as f64 * (m as f64 + 1.0));
    let sigma = (var / draws as f64).sqrt();
    for s in sums {
        let mean = s / draws as f64;
        assert!((mean - 1.0 / m as f64).abs() < 3.0 * sigma, "mean {mean}");
    }
}

#[test]
fn reconstruction_is_unbiased() {
    let state = GaussianState::vacuum(2).unwrap().two_mode_squeeze(0, 1, 0.5).unwrap();
    let replicates = 200;
    let k = 10_000;
    let dim = 4;
    let mut mean = vec![0.0; dim * dim];
    let mut sq = vec![0.0; dim * dim];
    for rep in 0..replicates {
        let samples = draw_dual_homodyne_samples(&state, k, rep).unwrap();
        let mut acc = SampleMatrixAccumulator::new(2);
        acc.extend(&samples).unwrap();
        let est = reconstruct_covariance(&acc.average().unwrap()).unwrap();
        for (i, &x) in est.covariance.matrix().iter().enumerate() {
            mean[i] += x;
            sq[i] += x * x;
        }
    }
    let n = replicates as f64;
    for (i, &truth) in state.covariance().matrix().iter().enumerate() {
        let mu = mean[i] / n;
        let sd = ((sq[i] / n - mu * mu) * n / (n - 1.0)).sqrt();
        let se = sd / n.sqrt();
        assert!((mu - truth).abs() <= 3.0 * se, "entry {i}: {mu} vs {truth} (se {se})");
    }
}

#[test]
fn sampler_converges_to_enumeration() {
    let u = haar_random_unitary(2, 1001).unwrap().into_unitary();
    let state = GaussianState::vacuum(2)
        .unwrap()
        .squeeze_single(0, 0.45)
        .unwrap()
        .squeeze_single(1, 0.7)
        .unwrap()
        .apply_unitary(&u)
        .unwrap();
    let cutoff = suggest_cutoff(&state, REQUIRED_MASS).unwrap();
    let exact = enumerate_distribution(&state, cutoff).unwrap();
    let samples = sample_fock(&state, 100_000, cutoff, 5).unwrap();
    let empirical = OutcomeDistribution::from_samples(2, &samples).unwrap();
    let tv = total_variation(&empirical, &exact).unwrap();
    assert!(tv.distance < 0.02, "tvd {}", tv.distance);
    assert!(tv.residual < 1e-3);
}

#[test]
fn heralds_do_not_see_the_interferometer() {
    let chi = 0.4;
    let a = ScattershotArrangement::build(3, chi, &haar_random_unitary(3, 1).unwrap()).unwrap();
    let b = ScattershotArrangement::build(3, chi, &haar_random_unitary(3, 2).unwrap()).unwrap();
    let c = ScattershotArrangement::build(3, chi, &CompiledInterferometer::identity(3).unwrap()).unwrap();
    let ha = a.state().covariance().reduced(&a.herald_modes()).unwrap();
    for other in [&b, &c] {
        let h = other.state().covariance().reduced(&other.herald_modes()).unwrap();
        assert!(ha.max_abs_diff(&h).unwrap() < 1e-12);
    }
    assert!(a.state().covariance().max_abs_diff(b.state().covariance()).unwrap() > 1e-3);
}

#[test]
fn loss_distance_grows_with_squeezing() {
    let mut previous = 0.0;
    for r in [0.2, 0.4, 0.6] {
        let tmsv = GaussianState::vacuum(2).unwrap().two_mode_squeeze(0, 1, r).unwrap();
        let ideal = enumerate_distribution(&tmsv, 6).unwrap();
        let lossy = enumerate_distribution(&tmsv.apply_uniform_loss(0.9).unwrap(), 6).unwrap();
        let tv = total_variation(&ideal, &lossy).unwrap().distance;
        assert!(tv > previous, "r={r}: {tv} <= {previous}");
        previous = tv;
    }
}
