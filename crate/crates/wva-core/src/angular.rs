//! Angular modes on the circle and their OAM spectra.
//!
//! The pointer degree of freedom is a complex amplitude `f(phi)` on the
//! periodic domain `[-pi, pi)`, sampled on a uniform power-of-two grid. Its
//! conjugate representation is the set of orbital-angular-momentum (OAM)
//! coefficients of the Fourier-series expansion
//! `f(phi) = (1/sqrt(2 pi)) sum_ell a_ell e^{i ell phi}`.
//!
//! Conventions:
//!
//! - normalization `integral |f|^2 dphi = 1`, evaluated by the midpoint rule
//!   `delta * sum_k |f_k|^2`, which makes Parseval coefficient-free:
//!   `sum_ell |a_ell|^2 = 1`;
//! - `a_ell = (1/sqrt(2 pi)) integral f(phi) e^{-i ell phi} dphi`;
//! - rotations act in the OAM basis, `a_ell -> a_ell e^{-i ell delta}`,
//!   which translates the mode to `f(phi - delta)` exactly for band-limited
//!   data (no resampling artifacts).
//!
//! Centroids on a circle are ambiguous up to the choice of branch cut. The
//! statistics here re-center the cut opposite the circular mean of the
//! intensity, then take plain linear moments; a narrow mode anywhere on the
//! circle gets the centroid a lab centroid measurement would report. Modes
//! with appreciable intensity at the (re-centered) cut are rejected with
//! [`CoreError::BoundaryLeakage`].

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::fft;
use crate::math::{self, PI, TWO_PI};

/// Relative intensity allowed at a branch cut before circle statistics are
/// considered ill-defined.
const LEAKAGE_BOUND: f64 = 1e-6;

/// Uniform grid over `[-pi, pi)` with a power-of-two number of samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AngularGrid {
    n_samples: usize,
}

impl AngularGrid {
    /// Default resolution; resolves widths down to a few hundredths of a
    /// radian with dozens of samples per width.
    pub const DEFAULT_SAMPLES: usize = 4096;

    /// Builds a grid with `n_samples` points, `phi_k = -pi + k * delta`.
    ///
    /// `n_samples` must be a power of two and at least 64 so transforms stay
    /// exact and the narrowest supported modes stay resolved.
    pub fn new(n_samples: usize) -> Result<Self> {
        if n_samples < 64 || !n_samples.is_power_of_two() {
            return Err(CoreError::InvalidGridSize { n_samples });
        }
        Ok(AngularGrid { n_samples })
    }

    /// Number of samples.
    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    /// Sample spacing `delta = 2 pi / n_samples`.
    pub fn spacing(&self) -> f64 {
        TWO_PI / self.n_samples as f64
    }

    /// Angle of sample `k`.
    pub fn phi(&self, k: usize) -> f64 {
        -PI + k as f64 * self.spacing()
    }

    /// All sample angles in grid order.
    pub fn phis(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_samples).map(move |k| self.phi(k))
    }

    /// Smallest OAM index resolved by this grid (`-n/2`).
    pub fn ell_min(&self) -> i32 {
        -((self.n_samples / 2) as i32)
    }

    /// Largest OAM index resolved by this grid (`n/2 - 1`).
    pub fn ell_max(&self) -> i32 {
        (self.n_samples / 2) as i32 - 1
    }
}

impl Default for AngularGrid {
    fn default() -> Self {
        AngularGrid {
            n_samples: Self::DEFAULT_SAMPLES,
        }
    }
}

/// Width and placement of a Gaussian-apodized angular slit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeParams {
    /// Amplitude width `eta_phi` in radians: `f ~ exp(-phi^2 / 2 eta^2)`.
    pub eta_phi: f64,
    /// Center of the slit in radians.
    pub center: f64,
}

impl ModeParams {
    /// Slit of width `eta_phi` centered at `phi = 0`.
    pub fn centered(eta_phi: f64) -> Self {
        ModeParams {
            eta_phi,
            center: 0.0,
        }
    }
}

/// Complex amplitude sampled on an [`AngularGrid`].
///
/// Library constructors produce unit-norm states
/// (`integral |f|^2 dphi = 1`); intermediate projected states may carry any
/// total intensity and report it via [`total_intensity`].
///
/// [`total_intensity`]: AngularWavefunction::total_intensity
#[derive(Debug, Clone, PartialEq)]
pub struct AngularWavefunction {
    grid: AngularGrid,
    amplitudes: Vec<Complex64>,
}

impl AngularWavefunction {
    /// Wraps raw samples; fails with [`CoreError::GridMismatch`] if the
    /// sample count does not match the grid.
    pub fn from_samples(grid: AngularGrid, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.n_samples() {
            return Err(CoreError::GridMismatch {
                left: grid.n_samples(),
                right: amplitudes.len(),
            });
        }
        Ok(AngularWavefunction { grid, amplitudes })
    }

    /// Builds the normalized Gaussian angular slit
    /// `f(phi) ~ exp(-wrap(phi - center)^2 / (2 eta_phi^2))`.
    ///
    /// Rejects widths outside `(0, pi/4]` (the narrow-slit regime the
    /// Gaussian algebra assumes) and modes whose tails put more than 1e-6
    /// of the norm at the `phi = +-pi` seam.
    pub fn gaussian(params: &ModeParams, grid: AngularGrid) -> Result<Self> {
        let eta = params.eta_phi;
        if !(eta > 0.0 && eta <= PI / 4.0) || !eta.is_finite() {
            return Err(CoreError::WidthOutOfRange { eta_phi: eta });
        }

        let mut amplitudes = Vec::with_capacity(grid.n_samples());
        let mut intensity_sum = 0.0;
        for phi in grid.phis() {
            let d = math::wrap_pm_pi(phi - params.center);
            let a = math::exp(-d * d / (2.0 * eta * eta));
            intensity_sum += a * a;
            amplitudes.push(Complex64::new(a, 0.0));
        }
        let norm = grid.spacing() * intensity_sum;
        let scale = 1.0 / math::sqrt(norm);
        for a in &mut amplitudes {
            *a *= scale;
        }

        // Evaluate the tail at the exact seam point, not the nearest sample.
        let d_seam = math::wrap_pm_pi(PI - params.center);
        let seam_amp = scale * math::exp(-d_seam * d_seam / (2.0 * eta * eta));
        let relative = seam_amp * seam_amp * TWO_PI;
        if relative > LEAKAGE_BOUND {
            return Err(CoreError::BoundaryLeakage { relative });
        }

        Ok(AngularWavefunction { grid, amplitudes })
    }

    /// Grid this wavefunction lives on.
    pub fn grid(&self) -> AngularGrid {
        self.grid
    }

    /// Raw complex samples in grid order.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Mutable samples, for operators acting pointwise in `phi`.
    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    /// Total intensity `integral |f|^2 dphi`; 1 for normalized states.
    pub fn total_intensity(&self) -> f64 {
        self.grid.spacing() * self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>()
    }

    /// Rescales to unit total intensity, returning the intensity the state
    /// carried before. The caller is responsible for rejecting
    /// near-zero-intensity states first.
    pub fn renormalize(&mut self) -> f64 {
        let intensity = self.total_intensity();
        let scale = 1.0 / math::sqrt(intensity);
        for a in &mut self.amplitudes {
            *a *= scale;
        }
        intensity
    }

    /// Expands into OAM coefficients
    /// `a_ell = (1/sqrt(2 pi)) integral f e^{-i ell phi} dphi` for
    /// `ell = -n/2 .. n/2 - 1`.
    pub fn oam_transform(&self) -> OAMSpectrum {
        let n = self.grid.n_samples();
        let half = n / 2;
        let mut bins = self.amplitudes.clone();
        fft::forward(&mut bins);

        // phi_k = -pi + k * delta turns the continuous kernel e^{-i ell phi}
        // into (-1)^ell times the plain DFT bin at ell mod n.
        let factor = self.grid.spacing() / math::sqrt(TWO_PI);
        let coefficients = (0..n)
            .map(|i| {
                let ell = i as i64 - half as i64;
                let bin = (i + half) % n;
                let sign = if ell & 1 == 0 { 1.0 } else { -1.0 };
                bins[bin] * (factor * sign)
            })
            .collect();
        OAMSpectrum { coefficients }
    }

    /// Rotates the mode by `delta`: `f(phi) -> f(phi - delta)`, moving the
    /// centroid by `+delta`. Exact in the OAM basis; norm-preserving.
    pub fn rotate(&self, delta: f64) -> Self {
        self.oam_transform()
            .rotated(delta)
            .inverse_transform(self.grid)
            .expect("spectrum came from this grid")
    }

    /// Intensity-weighted mean angle.
    ///
    /// The branch cut is first re-centered opposite the circular mean of
    /// `|f|^2`, so a narrow mode anywhere on the circle gets the linear
    /// centroid a lab measurement of its image would report. Fails with
    /// [`CoreError::BoundaryLeakage`] when intensity at the re-centered cut
    /// exceeds 1e-6 of the total (the centroid is then ill-defined on the
    /// circle).
    pub fn centroid_phi(&self) -> Result<f64> {
        let (mean, _) = self.recentered_moments()?;
        Ok(mean)
    }

    /// Intensity standard deviation about [`centroid_phi`], in radians.
    ///
    /// [`centroid_phi`]: AngularWavefunction::centroid_phi
    pub fn width_phi(&self) -> Result<f64> {
        let (_, width) = self.recentered_moments()?;
        Ok(width)
    }

    /// Linear intensity moments in the frame whose branch cut sits opposite
    /// the circular mean. Returns (centroid, standard deviation).
    fn recentered_moments(&self) -> Result<(f64, f64)> {
        let intensity: Vec<f64> = self.amplitudes.iter().map(|a| a.norm_sqr()).collect();
        circular_intensity_moments(self.grid, &intensity)
    }
}

/// Centroid and standard deviation of an intensity profile on the circle.
///
/// The branch cut is re-centered opposite the circular mean of the profile
/// before taking linear moments, so narrow profiles anywhere on the circle
/// are handled. Fails with [`CoreError::BoundaryLeakage`] when the profile
/// carries more than 1e-6 of its mass at the re-centered cut (no meaningful
/// centroid exists then).
pub fn circular_intensity_moments(grid: AngularGrid, intensity: &[f64]) -> Result<(f64, f64)> {
    if intensity.len() != grid.n_samples() {
        return Err(CoreError::GridMismatch {
            left: grid.n_samples(),
            right: intensity.len(),
        });
    }
    let total: f64 = intensity.iter().sum::<f64>() * grid.spacing();
    if total <= 0.0 {
        return Err(CoreError::BoundaryLeakage { relative: 1.0 });
    }

    let mut sx = 0.0;
    let mut sy = 0.0;
    for (k, p) in intensity.iter().enumerate() {
        let (s, c) = math::sincos(grid.phi(k));
        sx += p * c;
        sy += p * s;
    }
    let mean_dir = math::atan2(sy, sx);

    // Intensity at the sample nearest the re-centered cut, relative to the
    // total, in the same units as the construction-time seam check.
    let cut = math::wrap_pm_pi(mean_dir + PI);
    let n = grid.n_samples();
    let k_cut = (libm::round((cut + PI) / grid.spacing()) as usize) % n;
    let relative = intensity[k_cut] * TWO_PI / total;
    if relative > LEAKAGE_BOUND {
        return Err(CoreError::BoundaryLeakage { relative });
    }

    let delta = grid.spacing();
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for (k, p) in intensity.iter().enumerate() {
        let q = p * delta / total;
        let d = math::wrap_pm_pi(grid.phi(k) - mean_dir);
        m1 += q * d;
        m2 += q * d * d;
    }
    let var = (m2 - m1 * m1).max(0.0);
    Ok((math::wrap_pm_pi(mean_dir + m1), math::sqrt(var)))
}

/// Inner product `integral conj(a) b dphi` of two wavefunctions on the same
/// grid.
pub fn inner_product(
    a: &AngularWavefunction,
    b: &AngularWavefunction,
) -> Result<Complex64> {
    if a.grid() != b.grid() {
        return Err(CoreError::GridMismatch {
            left: a.grid().n_samples(),
            right: b.grid().n_samples(),
        });
    }
    let sum: Complex64 = a
        .amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(sum * a.grid().spacing())
}

/// OAM coefficients `a_ell` for `ell = -n/2 .. n/2 - 1`, stored in
/// ascending `ell` order.
#[derive(Debug, Clone, PartialEq)]
pub struct OAMSpectrum {
    coefficients: Vec<Complex64>,
}

impl OAMSpectrum {
    /// Smallest represented OAM index.
    pub fn ell_min(&self) -> i32 {
        -((self.coefficients.len() / 2) as i32)
    }

    /// Largest represented OAM index.
    pub fn ell_max(&self) -> i32 {
        (self.coefficients.len() / 2) as i32 - 1
    }

    /// All represented OAM indices in ascending order.
    pub fn ells(&self) -> impl Iterator<Item = i32> + '_ {
        self.ell_min()..=self.ell_max()
    }

    /// Coefficients in ascending `ell` order.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// Coefficient `a_ell`, or [`CoreError::EllOutOfRange`].
    pub fn coefficient(&self, ell: i32) -> Result<Complex64> {
        if ell < self.ell_min() || ell > self.ell_max() {
            return Err(CoreError::EllOutOfRange {
                ell,
                max_abs: -self.ell_min(),
            });
        }
        Ok(self.coefficients[(ell - self.ell_min()) as usize])
    }

    /// Sum of `|a_ell|^2`; 1 for the spectrum of a normalized mode.
    pub fn total_power(&self) -> f64 {
        self.coefficients.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies a rotation by `delta` in place of the mode:
    /// `a_ell -> a_ell e^{-i ell delta}`.
    pub fn rotated(&self, delta: f64) -> Self {
        let coefficients = self
            .ells()
            .zip(&self.coefficients)
            .map(|(ell, a)| {
                let (s, c) = math::sincos(-(ell as f64) * delta);
                a * Complex64::new(c, s)
            })
            .collect();
        OAMSpectrum { coefficients }
    }

    /// Reconstructs the angular wavefunction on `grid`; fails with
    /// [`CoreError::GridMismatch`] if the grid does not match the spectrum
    /// length.
    pub fn inverse_transform(&self, grid: AngularGrid) -> Result<AngularWavefunction> {
        let n = self.coefficients.len();
        if grid.n_samples() != n {
            return Err(CoreError::GridMismatch {
                left: grid.n_samples(),
                right: n,
            });
        }
        let half = n / 2;
        let mut bins = vec![Complex64::new(0.0, 0.0); n];
        for (i, a) in self.coefficients.iter().enumerate() {
            let ell = i as i64 - half as i64;
            let bin = (i + half) % n;
            let sign = if ell & 1 == 0 { 1.0 } else { -1.0 };
            bins[bin] = a * sign;
        }
        fft::inverse(&mut bins);
        let factor = n as f64 / math::sqrt(TWO_PI);
        for b in &mut bins {
            *b *= factor;
        }
        AngularWavefunction::from_samples(grid, bins)
    }

    /// Power-weighted mean OAM index `sum ell |a_ell|^2 / sum |a_ell|^2`.
    pub fn centroid_ell(&self) -> f64 {
        let total = self.total_power();
        self.ells()
            .zip(&self.coefficients)
            .map(|(ell, a)| ell as f64 * a.norm_sqr())
            .sum::<f64>()
            / total
    }

    /// Power standard deviation about [`centroid_ell`].
    ///
    /// [`centroid_ell`]: OAMSpectrum::centroid_ell
    pub fn width_ell(&self) -> f64 {
        let total = self.total_power();
        let mean = self.centroid_ell();
        let var = self
            .ells()
            .zip(&self.coefficients)
            .map(|(ell, a)| {
                let d = ell as f64 - mean;
                d * d * a.norm_sqr()
            })
            .sum::<f64>()
            / total;
        math::sqrt(var)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn grid64() -> AngularGrid {
        AngularGrid::new(64).unwrap()
    }

    fn default_grid() -> AngularGrid {
        AngularGrid::default()
    }

    /// Pure helical mode e^{i ell phi} / sqrt(2 pi), normalized on the grid.
    fn helical(ell: i32, grid: AngularGrid) -> AngularWavefunction {
        let samples = grid
            .phis()
            .map(|phi| {
                let (s, c) = math::sincos(ell as f64 * phi);
                Complex64::new(c, s) / math::sqrt(TWO_PI)
            })
            .collect();
        AngularWavefunction::from_samples(grid, samples).unwrap()
    }

    #[test]
    fn grid_rejects_bad_sizes() {
        assert!(matches!(
            AngularGrid::new(32),
            Err(CoreError::InvalidGridSize { n_samples: 32 })
        ));
        assert!(matches!(
            AngularGrid::new(100),
            Err(CoreError::InvalidGridSize { .. })
        ));
        assert_eq!(AngularGrid::default().n_samples(), 4096);
    }

    #[test]
    fn grid_points_span_minus_pi_inclusive_to_pi_exclusive() {
        let g = grid64();
        assert_abs_diff_eq!(g.phi(0), -PI, epsilon = 0.0);
        assert_abs_diff_eq!(g.phi(32), 0.0, epsilon = 1e-15);
        assert!(g.phi(63) < PI);
        assert_eq!(g.ell_min(), -32);
        assert_eq!(g.ell_max(), 31);
    }

    #[test]
    fn gaussian_is_normalized_and_peaks_at_center() {
        let psi =
            AngularWavefunction::gaussian(&ModeParams::centered(0.23911), default_grid())
                .unwrap();
        assert_abs_diff_eq!(psi.total_intensity(), 1.0, epsilon = 1e-12);
        let peak = psi
            .amplitudes()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .unwrap()
            .0;
        assert_abs_diff_eq!(psi.grid().phi(peak), 0.0, epsilon = 1e-3);
    }

    #[test]
    fn gaussian_profile_matches_definition() {
        let grid = default_grid();
        let eta = 0.2;
        let psi = AngularWavefunction::gaussian(&ModeParams::centered(eta), grid).unwrap();
        // f(0.2)/f(0) = e^{-1/2} for amplitude width 0.2, evaluated at the
        // grid point closest to phi = 0.2.
        let k = libm::round((eta + PI) / grid.spacing()) as usize;
        let phi_k = grid.phi(k);
        let k0 = grid.n_samples() / 2;
        let ratio = psi.amplitudes()[k].re / psi.amplitudes()[k0].re;
        assert_abs_diff_eq!(
            ratio,
            math::exp(-phi_k * phi_k / (2.0 * eta * eta)),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(ratio, math::exp(-0.5), epsilon = 2e-3);
    }

    #[test]
    fn gaussian_rejects_bad_widths_and_seam_modes() {
        let grid = default_grid();
        assert!(matches!(
            AngularWavefunction::gaussian(&ModeParams::centered(0.0), grid),
            Err(CoreError::WidthOutOfRange { .. })
        ));
        assert!(matches!(
            AngularWavefunction::gaussian(&ModeParams::centered(1.0), grid),
            Err(CoreError::WidthOutOfRange { .. })
        ));
        let at_seam = ModeParams {
            eta_phi: 0.2,
            center: PI,
        };
        assert!(matches!(
            AngularWavefunction::gaussian(&at_seam, grid),
            Err(CoreError::BoundaryLeakage { .. })
        ));
        // Widest allowed slit still clears the leakage bound at center 0.
        assert!(AngularWavefunction::gaussian(&ModeParams::centered(PI / 4.0), grid).is_ok());
    }

    #[test]
    fn helical_mode_transforms_to_single_coefficient() {
        let spec = helical(3, grid64()).oam_transform();
        for ell in spec.ells() {
            let a = spec.coefficient(ell).unwrap();
            if ell == 3 {
                assert_abs_diff_eq!(a.re, 1.0, epsilon = 1e-10);
                assert_abs_diff_eq!(a.im, 0.0, epsilon = 1e-10);
            } else {
                assert!(a.norm() < 1e-10, "ell={ell} leaked {}", a.norm());
            }
        }
        assert_abs_diff_eq!(spec.centroid_ell(), 3.0, epsilon = 1e-9);
    }

    #[test]
    fn gaussian_spectrum_has_gaussian_intensity_envelope() {
        let eta = math::deg_to_rad(13.7);
        let psi =
            AngularWavefunction::gaussian(&ModeParams::centered(eta), default_grid()).unwrap();
        let spec = psi.oam_transform();
        // |a_ell|^2 ~ exp(-ell^2 eta^2): the ell=3 to ell=0 intensity ratio.
        let ratio = spec.coefficient(3).unwrap().norm_sqr()
            / spec.coefficient(0).unwrap().norm_sqr();
        assert_abs_diff_eq!(ratio, 0.5977615, epsilon = 1e-4);
        assert_abs_diff_eq!(spec.width_ell(), 2.9572, epsilon = 1e-3);
    }

    #[test]
    fn parseval_holds_for_gaussian() {
        let psi =
            AngularWavefunction::gaussian(&ModeParams::centered(0.23911), default_grid())
                .unwrap();
        assert_abs_diff_eq!(psi.oam_transform().total_power(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn constant_spectrum_inverts_to_uniform_mode() {
        let grid = grid64();
        let delta_spectrum = helical(0, grid).oam_transform();
        let psi = delta_spectrum.inverse_transform(grid).unwrap();
        for a in psi.amplitudes() {
            assert_abs_diff_eq!(a.re, 1.0 / math::sqrt(TWO_PI), epsilon = 1e-10);
            assert_abs_diff_eq!(a.im, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn transform_round_trip_is_identity() {
        let psi =
            AngularWavefunction::gaussian(&ModeParams::centered(0.23911), default_grid())
                .unwrap();
        let back = psi.oam_transform().inverse_transform(psi.grid()).unwrap();
        let worst = psi
            .amplitudes()
            .iter()
            .zip(back.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(worst < 1e-10, "round-trip deviation {worst}");
    }

    #[test]
    fn inverse_transform_rejects_foreign_grid() {
        let spec = helical(0, grid64()).oam_transform();
        let other = AngularGrid::new(128).unwrap();
        assert!(matches!(
            spec.inverse_transform(other),
            Err(CoreError::GridMismatch { .. })
        ));
    }

    #[test]
    fn rotation_moves_centroid_by_delta() {
        let psi =
            AngularWavefunction::gaussian(&ModeParams::centered(0.23911), default_grid())
                .unwrap();
        let delta = 0.010472;
        let rotated = psi.rotate(delta);
        assert_abs_diff_eq!(rotated.centroid_phi().unwrap(), delta, epsilon = 1e-6);
        assert_abs_diff_eq!(rotated.total_intensity(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn rotation_is_invertible() {
        let psi =
            AngularWavefunction::gaussian(&ModeParams::centered(0.1), default_grid()).unwrap();
        let back = psi.rotate(0.37).rotate(-0.37);
        let worst = psi
            .amplitudes()
            .iter()
            .zip(back.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(worst < 1e-12, "rotate round-trip deviation {worst}");
    }

    #[test]
    fn centroid_of_symmetric_mode_is_its_center() {
        let psi =
            AngularWavefunction::gaussian(&ModeParams::centered(0.23911), default_grid())
                .unwrap();
        assert_abs_diff_eq!(psi.centroid_phi().unwrap(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn centroid_handles_modes_across_the_seam() {
        // Rotating a valid mode onto the seam must not break the centroid:
        // the branch cut is re-centered away from the mass first.
        let psi =
            AngularWavefunction::gaussian(&ModeParams::centered(0.1), default_grid()).unwrap();
        let moved = psi.rotate(3.1);
        let expected = math::wrap_pm_pi(3.1);
        assert_abs_diff_eq!(moved.centroid_phi().unwrap(), expected, epsilon = 1e-6);
    }

    #[test]
    fn centroid_rejects_delocalized_modes() {
        let uniform = helical(0, default_grid());
        assert!(matches!(
            uniform.centroid_phi(),
            Err(CoreError::BoundaryLeakage { .. })
        ));
    }

    #[test]
    fn phase_gradient_shifts_ell_centroid() {
        let grid = default_grid();
        let mut psi =
            AngularWavefunction::gaussian(&ModeParams::centered(0.23911), grid).unwrap();
        for (k, a) in psi.amplitudes_mut().iter_mut().enumerate() {
            let (s, c) = math::sincos(1.4 * grid.phi(k));
            *a *= Complex64::new(c, s);
        }
        assert_abs_diff_eq!(psi.oam_transform().centroid_ell(), 1.4, epsilon = 0.01);
    }

    #[test]
    fn real_symmetric_mode_has_zero_ell_centroid() {
        let psi =
            AngularWavefunction::gaussian(&ModeParams::centered(0.23911), default_grid())
                .unwrap();
        assert_abs_diff_eq!(psi.oam_transform().centroid_ell(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn widths_match_gaussian_formulas() {
        let eta = math::deg_to_rad(13.7);
        let psi =
            AngularWavefunction::gaussian(&ModeParams::centered(eta), default_grid()).unwrap();
        let w_phi = psi.width_phi().unwrap();
        let w_ell = psi.oam_transform().width_ell();
        assert_abs_diff_eq!(w_phi, eta / math::sqrt(2.0), epsilon = 2e-6);
        assert_abs_diff_eq!(w_ell, 1.0 / (eta * math::sqrt(2.0)), epsilon = 1e-3);
        // The minimum 1/2 is attained up to rounding, so the lower bound
        // carries a machine-precision allowance.
        let product = w_phi * w_ell;
        assert!(
            (0.5 - 1e-12..=0.51).contains(&product),
            "uncertainty product {product} outside [0.5, 0.51]"
        );
    }

    #[test]
    fn coefficient_lookup_checks_range() {
        let spec = helical(0, grid64()).oam_transform();
        assert!(spec.coefficient(31).is_ok());
        assert!(spec.coefficient(-32).is_ok());
        assert!(matches!(
            spec.coefficient(32),
            Err(CoreError::EllOutOfRange { .. })
        ));
        assert!(matches!(
            spec.coefficient(-33),
            Err(CoreError::EllOutOfRange { .. })
        ));
    }

    #[test]
    fn inner_product_detects_grid_mismatch() {
        let a = helical(0, grid64());
        let b = helical(0, AngularGrid::new(128).unwrap());
        assert!(matches!(
            inner_product(&a, &b),
            Err(CoreError::GridMismatch { .. })
        ));
        let c = helical(1, grid64());
        let overlap = inner_product(&a, &c).unwrap();
        assert!(overlap.norm() < 1e-12);
    }
}
