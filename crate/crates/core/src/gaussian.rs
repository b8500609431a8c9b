//! Zero-mean Gaussian states and their evolution.
//!
//! Covariance matrices use interleaved quadrature ordering `(x1, p1, x2, p2, ...)`
//! with quadratures `x = a + a^dag`, `p = -i(a - a^dag)`, so the vacuum has unit
//! variance in every quadrature. The symplectic form is block diagonal with
//! `[[0, 1], [-1, 0]]` blocks.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type RealMatrix = DMatrix<f64>;
pub type ComplexMatrix = DMatrix<Complex64>;

/// Maximum entrywise asymmetry accepted for a covariance matrix.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// A covariance is physical when `min eig(cov + i*omega) >= -PHYSICALITY_TOL`.
pub const PHYSICALITY_TOL: f64 = 1e-9;
/// Tolerance on `S W S^T = W`, scaled by the largest entry of `S` squared.
pub const SYMPLECTIC_TOL: f64 = 1e-12;
/// Tolerance on `U^dag U = I`.
pub const UNITARY_TOL: f64 = 1e-10;

/// The interleaved symplectic form for `modes` modes.
pub fn symplectic_form(modes: usize) -> RealMatrix {
    let mut omega = RealMatrix::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

pub(crate) fn max_abs(m: &RealMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

pub(crate) fn symmetrize(m: &RealMatrix) -> RealMatrix {
    (m + m.transpose()) * 0.5
}

/// Largest deviation of `U^dag U` from the identity.
pub fn unitarity_residual(u: &ComplexMatrix) -> f64 {
    let n = u.nrows();
    let prod = u.adjoint() * u;
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

fn check_mode(mode: usize, modes: usize) -> Result<()> {
    if mode >= modes {
        Err(Error::ModeOutOfRange { mode, modes })
    } else {
        Ok(())
    }
}

fn check_pair(i: usize, j: usize, modes: usize) -> Result<()> {
    check_mode(i, modes)?;
    check_mode(j, modes)?;
    if i == j {
        return Err(Error::SameMode(i));
    }
    Ok(())
}

/// Real symmetric `2m x 2m` quadrature covariance matrix.
///
/// Symmetry is enforced on construction. Physicality is *not*: estimated
/// covariances can be mildly unphysical at finite sample size, so it is
/// reported by [`CovarianceMatrix::physicality_margin`] instead.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    modes: usize,
    entries: RealMatrix,
}

impl CovarianceMatrix {
    pub fn new(entries: RealMatrix) -> Result<Self> {
        let (rows, cols) = entries.shape();
        if rows != cols || rows % 2 != 0 {
            return Err(Error::Shape {
                expected: rows + rows % 2,
                rows,
                cols,
            });
        }
        if rows == 0 {
            return Err(Error::ZeroModes);
        }
        let asym = max_abs(&(&entries - entries.transpose()));
        if asym > SYMMETRY_TOL {
            return Err(Error::NotSymmetric(asym));
        }
        Ok(Self {
            modes: rows / 2,
            entries,
        })
    }

    /// Symmetrizes `(M + M^T) / 2` before construction.
    pub fn from_symmetrized(entries: RealMatrix) -> Result<Self> {
        Self::new(symmetrize(&entries))
    }

    pub fn identity(modes: usize) -> Result<Self> {
        if modes == 0 {
            return Err(Error::ZeroModes);
        }
        Ok(Self {
            modes,
            entries: RealMatrix::identity(2 * modes, 2 * modes),
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn dim(&self) -> usize {
        2 * self.modes
    }

    /// Number of stored real entries, `4 m^2`.
    pub fn entry_count(&self) -> usize {
        self.entries.len()
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> RealMatrix {
        self.entries
    }

    pub fn determinant(&self) -> f64 {
        self.entries.clone().determinant()
    }

    pub fn eigenvalues(&self) -> DVector<f64> {
        SymmetricEigen::new(self.entries.clone()).eigenvalues
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().min()
    }

    /// Smallest eigenvalue of the Hermitian matrix `cov + i*omega`.
    pub fn physicality_margin(&self) -> f64 {
        let omega = symplectic_form(self.modes);
        let herm = ComplexMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            Complex64::new(self.entries[(i, j)], omega[(i, j)])
        });
        SymmetricEigen::new(herm).eigenvalues.min()
    }

    pub fn is_physical(&self) -> bool {
        self.physicality_margin() >= -PHYSICALITY_TOL
    }

    /// Total mean photon number `tr(cov - I) / 4`.
    pub fn mean_photon_number(&self) -> f64 {
        (self.entries.trace() - self.dim() as f64) / 4.0
    }

    /// Mean photon number of a single mode.
    pub fn mode_photon_number(&self, mode: usize) -> f64 {
        let (x, p) = (2 * mode, 2 * mode + 1);
        (self.entries[(x, x)] + self.entries[(p, p)] - 2.0) / 4.0
    }

    /// Reduced covariance of the listed modes, in the listed order.
    pub fn reduced(&self, modes: &[usize]) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::ZeroModes);
        }
        for &m in modes {
            check_mode(m, self.modes)?;
        }
        let idx: Vec<usize> = modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let sub = RealMatrix::from_fn(idx.len(), idx.len(), |i, j| self.entries[(idx[i], idx[j])]);
        Ok(Self {
            modes: modes.len(),
            entries: sub,
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.modes != other.modes {
            return Err(Error::DimensionMismatch(self.modes, other.modes));
        }
        Ok(max_abs(&(&self.entries - &other.entries)))
    }
}

/// Real `2m x 2m` matrix preserving the symplectic form.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform {
    entries: RealMatrix,
}

impl SymplecticTransform {
    pub fn new(entries: RealMatrix) -> Result<Self> {
        let (rows, cols) = entries.shape();
        if rows != cols || rows % 2 != 0 || rows == 0 {
            return Err(Error::Shape {
                expected: rows + rows % 2,
                rows,
                cols,
            });
        }
        let s = Self { entries };
        let residual = s.symplectic_residual();
        let scale = max_abs(&s.entries).max(1.0).powi(2);
        if residual > SYMPLECTIC_TOL * scale {
            return Err(Error::NotSymplectic { residual });
        }
        Ok(s)
    }

    pub fn identity(modes: usize) -> Self {
        Self {
            entries: RealMatrix::identity(2 * modes, 2 * modes),
        }
    }

    pub fn modes(&self) -> usize {
        self.entries.nrows() / 2
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.entries
    }

    /// `max |S W S^T - W|`.
    pub fn symplectic_residual(&self) -> f64 {
        let omega = symplectic_form(self.modes());
        max_abs(&(&self.entries * &omega * self.entries.transpose() - omega))
    }

    /// `max |S^T S - I|`; zero for passive transforms.
    pub fn orthogonality_residual(&self) -> f64 {
        let n = self.entries.nrows();
        max_abs(&(self.entries.transpose() * &self.entries - RealMatrix::identity(n, n)))
    }

    /// `self` applied after `first`.
    pub fn after(&self, first: &SymplecticTransform) -> Result<Self> {
        if self.modes() != first.modes() {
            return Err(Error::DimensionMismatch(self.modes(), first.modes()));
        }
        Ok(Self {
            entries: &self.entries * &first.entries,
        })
    }

    /// Orthogonal symplectic matrix whose action on annihilation operators is
    /// `a -> U a`. Each 2x2 block is `[[Re u, -Im u], [Im u, Re u]]`.
    pub fn from_unitary(u: &ComplexMatrix) -> Result<Self> {
        let m = u.nrows();
        if m == 0 {
            return Err(Error::ZeroModes);
        }
        if u.ncols() != m {
            return Err(Error::Shape {
                expected: m,
                rows: m,
                cols: u.ncols(),
            });
        }
        let residual = unitarity_residual(u);
        if residual > UNITARY_TOL {
            return Err(Error::NotUnitary { residual });
        }
        let mut s = RealMatrix::zeros(2 * m, 2 * m);
        for j in 0..m {
            for k in 0..m {
                let z = u[(j, k)];
                s[(2 * j, 2 * k)] = z.re;
                s[(2 * j, 2 * k + 1)] = -z.im;
                s[(2 * j + 1, 2 * k)] = z.im;
                s[(2 * j + 1, 2 * k + 1)] = z.re;
            }
        }
        Ok(Self { entries: s })
    }

    /// `x -> e^{-r} x`, `p -> e^{r} p` on one mode.
    pub fn single_mode_squeeze(modes: usize, mode: usize, r: f64) -> Result<Self> {
        check_mode(mode, modes)?;
        let mut s = Self::identity(modes);
        s.entries[(2 * mode, 2 * mode)] = (-r).exp();
        s.entries[(2 * mode + 1, 2 * mode + 1)] = r.exp();
        Ok(s)
    }

    /// Two-mode squeezer generated by `a^dag b^dag - a b`: `x_i -> c x_i + s x_j`,
    /// `p_i -> c p_i - s p_j` and symmetrically for `j`.
    pub fn two_mode_squeeze(modes: usize, i: usize, j: usize, r: f64) -> Result<Self> {
        check_pair(i, j, modes)?;
        let (c, s) = (r.cosh(), r.sinh());
        let mut t = Self::identity(modes);
        let e = &mut t.entries;
        for (a, b) in [(i, j), (j, i)] {
            e[(2 * a, 2 * a)] = c;
            e[(2 * a, 2 * b)] = s;
            e[(2 * a + 1, 2 * a + 1)] = c;
            e[(2 * a + 1, 2 * b + 1)] = -s;
        }
        Ok(t)
    }

    /// Rotation of one mode's quadratures, `a -> e^{i phi} a`.
    pub fn phase_shift(modes: usize, mode: usize, phi: f64) -> Result<Self> {
        check_mode(mode, modes)?;
        let mut u = ComplexMatrix::identity(modes, modes);
        u[(mode, mode)] = Complex64::from_polar(1.0, phi);
        Self::from_unitary(&u)
    }

    /// Passive beamsplitter `[[cos t, -e^{-i phi} sin t], [e^{i phi} sin t, cos t]]`
    /// on modes `(i, j)`. `theta = 0` is the identity, `pi/4` is 50:50.
    pub fn beamsplitter(modes: usize, i: usize, j: usize, theta: f64, phi: f64) -> Result<Self> {
        check_pair(i, j, modes)?;
        let mut u = ComplexMatrix::identity(modes, modes);
        let (c, s) = (theta.cos(), theta.sin());
        u[(i, i)] = Complex64::new(c, 0.0);
        u[(i, j)] = -Complex64::from_polar(s, -phi);
        u[(j, i)] = Complex64::from_polar(s, phi);
        u[(j, j)] = Complex64::new(c, 0.0);
        Self::from_unitary(&u)
    }
}

/// Minimum quadrature variance `b`, with `cov >= b I`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SqueezingFloor(f64);

impl SqueezingFloor {
    pub fn new(b: f64) -> Result<Self> {
        if b > 0.0 && b.is_finite() {
            Ok(Self(b))
        } else {
            Err(Error::NonPositiveFloor(b))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Zero-mean Gaussian state. The mean vector is carried but always zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    cov: CovarianceMatrix,
    mean: DVector<f64>,
}

impl GaussianState {
    pub fn vacuum(modes: usize) -> Result<Self> {
        Ok(Self::from_covariance(CovarianceMatrix::identity(modes)?))
    }

    pub fn from_covariance(cov: CovarianceMatrix) -> Self {
        let mean = DVector::zeros(cov.dim());
        Self { cov, mean }
    }

    pub fn modes(&self) -> usize {
        self.cov.modes()
    }

    pub fn covariance(&self) -> &CovarianceMatrix {
        &self.cov
    }

    pub fn into_covariance(self) -> CovarianceMatrix {
        self.cov
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn is_physical(&self) -> bool {
        self.cov.is_physical()
    }

    /// Pure Gaussian states have `det cov = 1`.
    pub fn is_pure(&self, tol: f64) -> bool {
        (self.cov.determinant() - 1.0).abs() <= tol
    }

    /// `cov -> S cov S^T`.
    pub fn apply_symplectic(&self, s: &SymplecticTransform) -> Result<Self> {
        if s.modes() != self.modes() {
            return Err(Error::DimensionMismatch(s.modes(), self.modes()));
        }
        let m = s.matrix();
        let next = m * self.cov.matrix() * m.transpose();
        Ok(Self::from_covariance(CovarianceMatrix {
            modes: self.modes(),
            entries: symmetrize(&next),
        }))
    }

    /// Applies the passive interferometer `a -> U a`.
    pub fn apply_unitary(&self, u: &ComplexMatrix) -> Result<Self> {
        self.apply_symplectic(&SymplecticTransform::from_unitary(u)?)
    }

    pub fn squeeze_single(&self, mode: usize, r: f64) -> Result<Self> {
        self.apply_symplectic(&SymplecticTransform::single_mode_squeeze(self.modes(), mode, r)?)
    }

    pub fn two_mode_squeeze(&self, i: usize, j: usize, r: f64) -> Result<Self> {
        self.apply_symplectic(&SymplecticTransform::two_mode_squeeze(self.modes(), i, j, r)?)
    }

    pub fn beamsplitter(&self, i: usize, j: usize, theta: f64, phi: f64) -> Result<Self> {
        self.apply_symplectic(&SymplecticTransform::beamsplitter(self.modes(), i, j, theta, phi)?)
    }

    pub fn phase_shift(&self, mode: usize, phi: f64) -> Result<Self> {
        self.apply_symplectic(&SymplecticTransform::phase_shift(self.modes(), mode, phi)?)
    }

    /// Uniform pure-loss channel: `cov -> eta cov + (1 - eta) I`.
    pub fn apply_uniform_loss(&self, eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::InvalidTransmissivity(eta));
        }
        let n = self.cov.dim();
        let next = self.cov.matrix() * eta + RealMatrix::identity(n, n) * (1.0 - eta);
        Ok(Self::from_covariance(CovarianceMatrix {
            modes: self.modes(),
            entries: next,
        }))
    }

    /// Smallest eigenvalue of the covariance matrix.
    pub fn min_quadrature_variance(&self) -> Result<SqueezingFloor> {
        SqueezingFloor::new(self.cov.min_eigenvalue())
    }

    /// Reduced state of a subset of modes.
    pub fn reduced(&self, modes: &[usize]) -> Result<Self> {
        Ok(Self::from_covariance(self.cov.reduced(modes)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn diag2(a: f64, b: f64) -> RealMatrix {
        RealMatrix::from_row_slice(2, 2, &[a, 0.0, 0.0, b])
    }

    #[test]
    fn vacuum_is_identity() {
        let v = GaussianState::vacuum(1).unwrap();
        assert_eq!(v.covariance().matrix(), &RealMatrix::identity(2, 2));
        let v3 = GaussianState::vacuum(3).unwrap();
        assert_eq!(v3.covariance().matrix(), &RealMatrix::identity(6, 6));
        assert_eq!(v3.mean().len(), 6);
        let b = GaussianState::vacuum(2).unwrap().min_quadrature_variance().unwrap();
        assert_abs_diff_eq!(b.value(), 1.0, epsilon = 1e-14);
        assert!(matches!(GaussianState::vacuum(0), Err(Error::ZeroModes)));
    }

    #[test]
    fn single_mode_squeezing() {
        let v = GaussianState::vacuum(1).unwrap();
        assert_eq!(v.squeeze_single(0, 0.0).unwrap(), v);
        let s = v.squeeze_single(0, 0.5).unwrap();
        assert_abs_diff_eq!(s.covariance().matrix(), &diag2((-1.0f64).exp(), 1.0f64.exp()), epsilon = 1e-14);
        assert_abs_diff_eq!(s.covariance().matrix()[(0, 0)], 0.36788, epsilon = 1e-5);
        assert_abs_diff_eq!(s.covariance().matrix()[(1, 1)], 2.71828, epsilon = 1e-5);
        let back = s.squeeze_single(0, -0.5).unwrap();
        assert_abs_diff_eq!(back.covariance().matrix(), v.covariance().matrix(), epsilon = 1e-14);
        assert!(matches!(v.squeeze_single(1, 0.1), Err(Error::ModeOutOfRange { mode: 1, modes: 1 })));
    }

    #[test]
    fn squeezing_leaves_other_modes() {
        let v = GaussianState::vacuum(3).unwrap();
        let s = v.squeeze_single(1, 0.7).unwrap();
        let rest = s.reduced(&[0, 2]).unwrap();
        assert_eq!(rest.covariance().matrix(), &RealMatrix::identity(4, 4));
    }

    #[test]
    fn two_mode_squeezed_vacuum_blocks() {
        let v = GaussianState::vacuum(2).unwrap();
        assert_eq!(v.two_mode_squeeze(0, 1, 0.0).unwrap(), v);
        let t = v.two_mode_squeeze(0, 1, 0.5).unwrap();
        let c = t.covariance().matrix();
        for k in 0..4 {
            assert_abs_diff_eq!(c[(k, k)], 1.54308, epsilon = 1e-5);
        }
        assert_abs_diff_eq!(c[(0, 2)], 1.17520, epsilon = 1e-5);
        assert_abs_diff_eq!(c[(1, 3)], -1.17520, epsilon = 1e-5);
        assert_abs_diff_eq!(c[(0, 3)], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c[(0, 1)], 0.0, epsilon = 1e-15);
        let strong = v.two_mode_squeeze(0, 1, 2.0).unwrap();
        assert!(strong.is_physical());
        assert!(strong.is_pure(1e-9));
        assert!(matches!(v.two_mode_squeeze(1, 1, 0.5), Err(Error::SameMode(1))));
    }

    #[test]
    fn beamsplitter_cases() {
        let v = GaussianState::vacuum(2).unwrap();
        let sq = v.squeeze_single(0, 0.3).unwrap().squeeze_single(1, -0.8).unwrap();
        assert_abs_diff_eq!(
            sq.beamsplitter(0, 1, 0.0, 1.3).unwrap().covariance().matrix(),
            sq.covariance().matrix(),
            epsilon = 1e-15
        );
        for (theta, phi) in [(0.3, 0.1), (FRAC_PI_4, 0.0), (1.2, -2.0)] {
            let out = v.beamsplitter(0, 1, theta, phi).unwrap();
            assert_abs_diff_eq!(out.covariance().matrix(), v.covariance().matrix(), epsilon = 1e-15);
        }
        assert!(matches!(v.beamsplitter(0, 0, 0.1, 0.0), Err(Error::SameMode(0))));
    }

    #[test]
    fn tmsv_through_balanced_beamsplitter_splits_into_squeezers() {
        let r = 0.5;
        let t = GaussianState::vacuum(2).unwrap().two_mode_squeeze(0, 1, r).unwrap();
        let out = t.beamsplitter(0, 1, FRAC_PI_4, 0.0).unwrap();
        let expected = GaussianState::vacuum(2)
            .unwrap()
            .squeeze_single(0, r)
            .unwrap()
            .squeeze_single(1, -r)
            .unwrap();
        assert_abs_diff_eq!(out.covariance().matrix(), expected.covariance().matrix(), epsilon = 1e-12);
    }

    #[test]
    fn phase_shift_cases() {
        let r = 0.4;
        let s = GaussianState::vacuum(1).unwrap().squeeze_single(0, r).unwrap();
        assert_abs_diff_eq!(s.phase_shift(0, 0.0).unwrap().covariance().matrix(), s.covariance().matrix(), epsilon = 1e-15);
        let q = s.phase_shift(0, FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(q.covariance().matrix(), &diag2((2.0 * r).exp(), (-2.0 * r).exp()), epsilon = 1e-12);
        let full = s.phase_shift(0, 2.0 * PI).unwrap();
        assert_abs_diff_eq!(full.covariance().matrix(), s.covariance().matrix(), epsilon = 1e-12);
        assert!(s.phase_shift(2, 0.1).is_err());
    }

    #[test]
    fn unitary_to_symplectic_cases() {
        let id = ComplexMatrix::identity(3, 3);
        assert_eq!(SymplecticTransform::from_unitary(&id).unwrap(), SymplecticTransform::identity(3));

        let phis = [0.3, -1.1];
        let u = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                Complex64::from_polar(1.0, phis[i])
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let s = SymplecticTransform::from_unitary(&u).unwrap();
        for (k, &phi) in phis.iter().enumerate() {
            let rot = SymplecticTransform::phase_shift(2, k, phi).unwrap();
            let block = s.matrix().view((2 * k, 2 * k), (2, 2));
            assert_abs_diff_eq!(block.clone_owned(), rot.matrix().view((2 * k, 2 * k), (2, 2)).clone_owned(), epsilon = 1e-15);
            assert_abs_diff_eq!(block[(0, 1)], -phi.sin(), epsilon = 1e-15);
        }

        let mut bad = ComplexMatrix::identity(2, 2);
        bad[(0, 1)] = Complex64::new(0.5, 0.0);
        match SymplecticTransform::from_unitary(&bad) {
            Err(Error::NotUnitary { residual }) => assert!(residual > 0.4),
            other => panic!("expected NotUnitary, got {other:?}"),
        }
    }

    #[test]
    fn symplectic_constructor_rejects_non_symplectic() {
        let m = RealMatrix::from_diagonal_element(2, 2, 2.0);
        assert!(matches!(SymplecticTransform::new(m), Err(Error::NotSymplectic { .. })));
        let sq = SymplecticTransform::single_mode_squeeze(1, 0, 1.5).unwrap();
        assert!(SymplecticTransform::new(sq.matrix().clone()).is_ok());
    }

    #[test]
    fn loss_cases() {
        let s = GaussianState::vacuum(1).unwrap().squeeze_single(0, 0.5).unwrap();
        assert_eq!(s.apply_uniform_loss(1.0).unwrap(), s);
        assert_abs_diff_eq!(s.apply_uniform_loss(0.0).unwrap().covariance().matrix(), &RealMatrix::identity(2, 2), epsilon = 1e-15);
        let half = s.apply_uniform_loss(0.5).unwrap();
        assert_abs_diff_eq!(half.covariance().matrix()[(0, 0)], 0.68394, epsilon = 1e-5);
        assert_abs_diff_eq!(half.covariance().matrix()[(1, 1)], 1.85914, epsilon = 1e-5);
        assert!(matches!(s.apply_uniform_loss(1.1), Err(Error::InvalidTransmissivity(_))));
        assert!(matches!(s.apply_uniform_loss(-0.1), Err(Error::InvalidTransmissivity(_))));
        assert!(half.covariance().determinant() > s.covariance().determinant() + 1e-3);
    }

    #[test]
    fn squeezing_floor() {
        let s = GaussianState::vacuum(2).unwrap().squeeze_single(0, 0.5).unwrap();
        let b = s.min_quadrature_variance().unwrap();
        assert_abs_diff_eq!(b.value(), (-1.0f64).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(b.value(), 0.36788, epsilon = 1e-5);
        let u = ComplexMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.6, 0.0),
                Complex64::new(0.0, 0.8),
                Complex64::new(0.0, 0.8),
                Complex64::new(0.6, 0.0),
            ],
        );
        let mixed = s.apply_unitary(&u).unwrap();
        assert_abs_diff_eq!(mixed.min_quadrature_variance().unwrap().value(), b.value(), epsilon = 1e-12);
        assert!(SqueezingFloor::new(0.0).is_err());
    }

    #[test]
    fn covariance_validation() {
        let mut m = RealMatrix::identity(2, 2);
        m[(0, 1)] = 1e-6;
        assert!(matches!(CovarianceMatrix::new(m.clone()), Err(Error::NotSymmetric(_))));
        assert!(CovarianceMatrix::from_symmetrized(m).is_ok());
        assert!(matches!(CovarianceMatrix::new(RealMatrix::identity(3, 3)), Err(Error::Shape { .. })));
        let unphysical = CovarianceMatrix::new(diag2(0.5, 0.5)).unwrap();
        assert!(!unphysical.is_physical());
        assert_abs_diff_eq!(unphysical.physicality_margin(), -0.5, epsilon = 1e-12);
        assert_eq!(CovarianceMatrix::identity(3).unwrap().entry_count(), 36);
    }
}
