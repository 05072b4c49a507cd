//! Simulated detection of the post-selected pointer.
//!
//! Two measurement paths mirror the two halves of the experiment:
//!
//! - **Angular imaging**: the intensity profile `|f(phi)|^2` (plus any
//!   polarizer-leakage floor) whose centroid gives the amplified rotation.
//! - **Projective OAM spectroscopy**: the mode-`ell` coupling efficiency is
//!   `|a_ell|^2`; photon counts in repeated finite windows are Poisson
//!   distributed around `mean_flux * window_seconds * |a_ell|^2`, and a
//!   weighted least-squares Gaussian fit of the count histogram recovers
//!   the OAM centroid shift with a confidence interval.
//!
//! Counts are reproducible: each (seed, ell, window) triple gets its own
//! counter-based RNG substream, so results are bit-identical regardless of
//! scan order or parallel scheduling.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::angular::{circular_intensity_moments, AngularGrid, AngularWavefunction};
use crate::error::{CoreError, Result};
use crate::math;
use crate::sagnac::PostSelection;

/// Parameters of a projective OAM scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OAMScanConfig {
    /// First OAM index scanned (inclusive).
    pub ell_min: i32,
    /// Last OAM index scanned (inclusive).
    pub ell_max: i32,
    /// Number of repeated counting windows per `ell` (>= 2 so an ensemble
    /// standard deviation exists).
    pub windows: usize,
    /// Duration of one counting window, seconds.
    pub window_seconds: f64,
    /// Expected detected photons per second at unit coupling efficiency.
    pub mean_flux: f64,
    /// Base seed; every (seed, ell, window) triple derives an independent
    /// substream.
    pub rng_seed: u64,
}

impl Default for OAMScanConfig {
    fn default() -> Self {
        OAMScanConfig {
            ell_min: -15,
            ell_max: 15,
            windows: 30,
            window_seconds: 0.2,
            mean_flux: 2000.0,
            rng_seed: 0,
        }
    }
}

/// Count statistics for one scanned OAM index.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    /// OAM index this row was measured at.
    pub ell: i32,
    /// Mean counts over the windows.
    pub mean: f64,
    /// Ensemble standard deviation over the windows (n-1 normalization);
    /// zero for noise-free rows.
    pub std: f64,
    /// Raw per-window counts; empty for noise-free rows.
    pub counts: Vec<u64>,
}

/// Full result of an OAM scan.
#[derive(Debug, Clone, PartialEq)]
pub struct OAMScanResult {
    /// One row per scanned `ell`, in ascending order.
    pub rows: Vec<ScanRow>,
    /// Fraction of the mode's spectral power inside the scanned range;
    /// below 0.99 the fitted centroid may be biased by the missing tail.
    pub spectral_coverage: f64,
}

impl OAMScanResult {
    /// Whether the scanned range captured at least 99% of the spectral
    /// power.
    pub fn covers_spectrum(&self) -> bool {
        self.spectral_coverage >= 0.99
    }
}

/// Weighted least-squares Gaussian fit of a count histogram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianFit {
    /// Peak counts of the fitted Gaussian.
    pub amplitude: f64,
    /// Fitted center in OAM units; the estimate of the spectrum centroid.
    pub center: f64,
    /// Fitted Gaussian standard deviation in OAM units (positive).
    pub width: f64,
    /// Half-width of the 3-sigma confidence interval on [`center`]
    /// (local quadratic model of the weighted objective).
    ///
    /// [`center`]: GaussianFit::center
    pub center_confidence_3sigma: f64,
    /// Weighted residual norm `sqrt(sum w r^2)` at the optimum.
    pub residual_norm: f64,
    /// Iterations the damped Gauss-Newton loop used.
    pub iterations: usize,
    /// Always true for fits returned by the fitting functions; fits that
    /// fail to converge are reported as errors instead.
    pub converged: bool,
}

/// Which spread estimate weights the fit.
///
/// The ensemble standard deviation of the windows is the spread the
/// experiment quotes as its error bars; the standard deviation of the mean
/// (`std / sqrt(windows)`) is the statistically tight choice when fitting
/// window-averaged counts. Both lead to the same best-fit parameters when
/// every row has the same window count; confidence intervals differ by
/// `sqrt(windows)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FitWeighting {
    /// Weight rows by the ensemble standard deviation (default).
    #[default]
    EnsembleStd,
    /// Weight rows by the standard deviation of the mean.
    StdOfMean,
}

/// Coupling efficiency of the projective measurement at mode `ell`:
/// `|a_ell|^2` in the small-fiber-mode limit.
pub fn projective_efficiency(psi: &AngularWavefunction, ell: i32) -> Result<f64> {
    Ok(psi.oam_transform().coefficient(ell)?.norm_sqr())
}

/// Derives the substream seed for one (seed, ell, window) cell.
///
/// Two chained splitmix64 steps decorrelate neighboring cells; the result
/// keys a dedicated ChaCha8 stream, making every cell independent of scan
/// order.
fn substream_seed(seed: u64, ell: i32, window: usize) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    let a = mix(seed ^ (ell as i64 as u64));
    mix(a ^ (window as u64))
}

/// Draws one Poisson count with the given expectation.
fn poisson_count(mean: f64, rng: &mut ChaCha8Rng) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let sample: f64 = Poisson::new(mean)
        .expect("positive finite mean")
        .sample(rng);
    sample as u64
}

/// Validates a scan configuration against a spectrum's resolved range.
fn validate_scan(cfg: &OAMScanConfig, ell_lo: i32, ell_hi: i32) -> Result<()> {
    if cfg.windows < 2 {
        return Err(CoreError::InsufficientData {
            needed: 2,
            got: cfg.windows,
        });
    }
    if cfg.ell_min < ell_lo || cfg.ell_min > cfg.ell_max {
        return Err(CoreError::EllOutOfRange {
            ell: cfg.ell_min,
            max_abs: -ell_lo,
        });
    }
    if cfg.ell_max > ell_hi {
        return Err(CoreError::EllOutOfRange {
            ell: cfg.ell_max,
            max_abs: -ell_lo,
        });
    }
    Ok(())
}

/// Simulates a projective OAM scan with photon-counting shot noise.
///
/// For each `ell` in the configured range, `cfg.windows` independent
/// Poisson counts are drawn with expectation
/// `mean_flux * window_seconds * |a_ell|^2`. Fixed seeds reproduce counts
/// bit-for-bit.
pub fn scan_oam(psi: &AngularWavefunction, cfg: &OAMScanConfig) -> Result<OAMScanResult> {
    let spectrum = psi.oam_transform();
    validate_scan(cfg, spectrum.ell_min(), spectrum.ell_max())?;

    let exposure = cfg.mean_flux * cfg.window_seconds;
    let mut rows = Vec::with_capacity((cfg.ell_max - cfg.ell_min + 1) as usize);
    let mut covered = 0.0;
    for ell in cfg.ell_min..=cfg.ell_max {
        let efficiency = spectrum.coefficient(ell)?.norm_sqr();
        covered += efficiency;
        let expected = exposure * efficiency;

        let counts: Vec<u64> = (0..cfg.windows)
            .map(|w| {
                let mut rng = ChaCha8Rng::seed_from_u64(substream_seed(cfg.rng_seed, ell, w));
                poisson_count(expected, &mut rng)
            })
            .collect();

        let n = counts.len() as f64;
        let mean = counts.iter().map(|&c| c as f64).sum::<f64>() / n;
        let var = counts
            .iter()
            .map(|&c| {
                let d = c as f64 - mean;
                d * d
            })
            .sum::<f64>()
            / (n - 1.0);
        rows.push(ScanRow {
            ell,
            mean,
            std: math::sqrt(var),
            counts,
        });
    }

    Ok(OAMScanResult {
        rows,
        spectral_coverage: covered / spectrum.total_power(),
    })
}

/// Noise-free twin of [`scan_oam`]: rows carry the expected counts exactly,
/// with zero spread and no raw windows. Defines the "true" scan the noisy
/// ensembles estimate.
pub fn scan_oam_expected(psi: &AngularWavefunction, cfg: &OAMScanConfig) -> Result<OAMScanResult> {
    let spectrum = psi.oam_transform();
    validate_scan(cfg, spectrum.ell_min(), spectrum.ell_max())?;

    let exposure = cfg.mean_flux * cfg.window_seconds;
    let mut rows = Vec::with_capacity((cfg.ell_max - cfg.ell_min + 1) as usize);
    let mut covered = 0.0;
    for ell in cfg.ell_min..=cfg.ell_max {
        let efficiency = spectrum.coefficient(ell)?.norm_sqr();
        covered += efficiency;
        rows.push(ScanRow {
            ell,
            mean: exposure * efficiency,
            std: 0.0,
            counts: Vec::new(),
        });
    }

    Ok(OAMScanResult {
        rows,
        spectral_coverage: covered / spectrum.total_power(),
    })
}

/// Fits `A exp(-(ell - mu)^2 / (2 s^2))` to the scan means by weighted
/// least squares with the default [`FitWeighting::EnsembleStd`] weights.
pub fn fit_gaussian_wls(result: &OAMScanResult) -> Result<GaussianFit> {
    fit_gaussian_wls_weighted(result, FitWeighting::EnsembleStd)
}

/// [`fit_gaussian_wls`] with an explicit weighting choice.
///
/// Weights are `1 / max(spread^2, floor^2)` with a count floor
/// `floor = max(1, 0.01 * peak mean)` on the ensemble scale, shrunk by
/// `sqrt(windows)` alongside the spread for [`FitWeighting::StdOfMean`],
/// so empty tail bins cannot acquire infinite weight and the two
/// weightings stay proportional. Initialization comes from the moment estimates of the
/// count histogram; a damped Gauss-Newton loop then iterates until the
/// objective gradient norm drops below 1e-9 relative to the objective
/// scale (at most 200 iterations, otherwise [`CoreError::FitDiverged`]).
/// Needs at least 5 rows with nonzero mean, otherwise
/// [`CoreError::InsufficientData`].
pub fn fit_gaussian_wls_weighted(
    result: &OAMScanResult,
    weighting: FitWeighting,
) -> Result<GaussianFit> {
    let rows = &result.rows;
    let usable = rows.iter().filter(|r| r.mean > 0.0).count();
    if usable < 5 {
        return Err(CoreError::InsufficientData {
            needed: 5,
            got: usable,
        });
    }

    let peak = rows.iter().map(|r| r.mean).fold(0.0, f64::max);
    let floor_std = (0.01 * peak).max(1.0);
    let variance_floor = floor_std * floor_std;
    let weights: Vec<f64> = rows
        .iter()
        .map(|r| {
            let scale = match weighting {
                FitWeighting::EnsembleStd => 1.0,
                FitWeighting::StdOfMean => r.counts.len().max(1) as f64,
            };
            scale / (r.std * r.std).max(variance_floor)
        })
        .collect();

    // Moment initialization: centroid and spread of the mean-count
    // histogram are inside the convergence basin for every regime scanned.
    let total: f64 = rows.iter().map(|r| r.mean).sum();
    let mu0 = rows.iter().map(|r| r.ell as f64 * r.mean).sum::<f64>() / total;
    let var0 = rows
        .iter()
        .map(|r| {
            let d = r.ell as f64 - mu0;
            d * d * r.mean
        })
        .sum::<f64>()
        / total;
    let mut params = [peak, mu0, math::sqrt(var0).max(0.5)];

    let objective = |p: &[f64; 3]| -> f64 {
        rows.iter()
            .zip(&weights)
            .map(|(r, w)| {
                let d = (r.ell as f64 - p[1]) / p[2];
                let model = p[0] * math::exp(-0.5 * d * d);
                let res = r.mean - model;
                w * res * res
            })
            .sum()
    };

    // Damped Gauss-Newton with an adaptive Levenberg-style diagonal boost.
    let mut lambda = 1e-3;
    let mut chi2 = objective(&params);
    let mut converged = false;
    let mut iterations = 0;
    let mut gradient_norm = f64::INFINITY;
    while iterations < 200 {
        iterations += 1;

        // Gradient g = J^T W r and normal matrix H = J^T W J for the
        // current parameters.
        let mut g = [0.0_f64; 3];
        let mut h = [[0.0_f64; 3]; 3];
        for (r, w) in rows.iter().zip(&weights) {
            let x = r.ell as f64;
            let d = (x - params[1]) / params[2];
            let e = math::exp(-0.5 * d * d);
            let model = params[0] * e;
            let res = r.mean - model;
            let j = [e, model * d / params[2], model * d * d / params[2]];
            for a in 0..3 {
                g[a] += w * j[a] * res;
                for b in 0..3 {
                    h[a][b] += w * j[a] * j[b];
                }
            }
        }
        gradient_norm = math::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
        if gradient_norm < 1e-9 * (1.0 + chi2) {
            converged = true;
            break;
        }

        // Try damped steps until one reduces the objective.
        let mut improved = false;
        for _ in 0..25 {
            let mut damped = h;
            for (a, row) in damped.iter_mut().enumerate() {
                row[a] += lambda * h[a][a].max(1e-12);
            }
            let Some(step) = solve3(&damped, &g) else {
                lambda *= 10.0;
                continue;
            };
            let trial = [
                params[0] + step[0],
                params[1] + step[1],
                params[2] + step[2],
            ];
            if trial[2].abs() < 1e-9 {
                lambda *= 10.0;
                continue;
            }
            let trial_chi2 = objective(&trial);
            if trial_chi2.is_finite() && trial_chi2 <= chi2 {
                let progress = chi2 - trial_chi2;
                params = trial;
                chi2 = trial_chi2;
                lambda = (lambda / 3.0).max(1e-12);
                improved = true;
                // Steps that no longer move the objective measurably mean
                // the optimum is resolved to machine precision.
                if progress < 1e-13 * (1.0 + chi2) {
                    converged = true;
                }
                break;
            }
            lambda *= 10.0;
        }
        if converged {
            break;
        }
        if !improved {
            // Objective is flat to machine precision around the optimum.
            converged = gradient_norm < 1e-6 * (1.0 + chi2);
            break;
        }
    }

    if !converged {
        return Err(CoreError::FitDiverged {
            iterations,
            gradient_norm,
        });
    }

    // 3-sigma confidence on the center from the local quadratic model:
    // covariance = H^-1 at the optimum, center entry [1][1].
    let mut h = [[0.0_f64; 3]; 3];
    for (r, w) in rows.iter().zip(&weights) {
        let x = r.ell as f64;
        let d = (x - params[1]) / params[2];
        let e = math::exp(-0.5 * d * d);
        let model = params[0] * e;
        let j = [e, model * d / params[2], model * d * d / params[2]];
        for a in 0..3 {
            for b in 0..3 {
                h[a][b] += w * j[a] * j[b];
            }
        }
    }
    let center_var = invert3_entry11(&h).ok_or(CoreError::FitDiverged {
        iterations,
        gradient_norm,
    })?;

    Ok(GaussianFit {
        amplitude: params[0],
        center: params[1],
        width: params[2].abs(),
        center_confidence_3sigma: 3.0 * math::sqrt(center_var.max(0.0)),
        residual_norm: math::sqrt(chi2),
        iterations,
        converged: true,
    })
}

/// Solves the 3x3 system `m x = b` by Gaussian elimination with partial
/// pivoting; `None` when the matrix is numerically singular.
fn solve3(m: &[[f64; 3]; 3], b: &[f64; 3]) -> Option<[f64; 3]> {
    let mut a = [[0.0_f64; 4]; 3];
    for r in 0..3 {
        a[r][..3].copy_from_slice(&m[r]);
        a[r][3] = b[r];
    }
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        for row in (col + 1)..3 {
            let factor = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= factor * a[col][k];
            }
        }
    }
    let mut x = [0.0_f64; 3];
    for row in (0..3).rev() {
        let mut acc = a[row][3];
        for k in (row + 1)..3 {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Entry [1][1] of the inverse of a symmetric 3x3 matrix, or `None` when
/// singular. This is the variance of the fitted center.
fn invert3_entry11(h: &[[f64; 3]; 3]) -> Option<f64> {
    let det = h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1])
        - h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0])
        + h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0]);
    if det.abs() < 1e-300 {
        return None;
    }
    // Cofactor C11 / det.
    let c11 = h[0][0] * h[2][2] - h[0][2] * h[2][0];
    Some(c11 / det)
}

/// Angular intensity profile as an imaging camera would record it:
/// `|f(phi)|^2` plus any incoherent polarizer-leakage floor.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityProfile {
    grid: AngularGrid,
    values: Vec<f64>,
}

impl IntensityProfile {
    /// Grid the profile is sampled on.
    pub fn grid(&self) -> AngularGrid {
        self.grid
    }

    /// Intensity per radian at each grid sample.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Integrated intensity `integral I(phi) dphi`.
    pub fn total(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.spacing()
    }

    /// Intensity centroid with branch-cut re-centering; the camera-side
    /// counterpart of `AngularWavefunction::centroid_phi`.
    pub fn centroid(&self) -> Result<f64> {
        circular_intensity_moments(self.grid, &self.values).map(|(mean, _)| mean)
    }
}

/// Intensity profile of a bare pointer state, `|f(phi)|^2` per radian.
pub fn angular_intensity(pointer: &AngularWavefunction) -> IntensityProfile {
    IntensityProfile {
        grid: pointer.grid(),
        values: pointer.amplitudes().iter().map(|a| a.norm_sqr()).collect(),
    }
}

/// Intensity profile a camera records behind the polarizer: the selected
/// pointer scaled back to its pre-normalization intensity (probability
/// times `|pointer|^2`) plus any polarizer leakage, which carries the
/// orthogonal polarization and therefore adds without interference.
///
/// Keeping both terms on the raw intensity scale is what lets a weak
/// leakage overwhelm a strongly post-selected signal, the mechanism that
/// caps the attainable amplification.
pub fn recorded_intensity(selection: &PostSelection) -> Result<IntensityProfile> {
    let mut values: Vec<f64> = selection
        .pointer
        .amplitudes()
        .iter()
        .map(|a| selection.probability * a.norm_sqr())
        .collect();
    if let Some(leak) = &selection.leakage_intensity {
        if leak.len() != values.len() {
            return Err(CoreError::GridMismatch {
                left: values.len(),
                right: leak.len(),
            });
        }
        for (v, l) in values.iter_mut().zip(leak) {
            *v += l;
        }
    }
    Ok(IntensityProfile {
        grid: selection.pointer.grid(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular::ModeParams;
    use crate::math::TWO_PI;
    use alloc::vec;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn gaussian_13_7() -> AngularWavefunction {
        AngularWavefunction::gaussian(
            &ModeParams::centered(math::deg_to_rad(13.7)),
            AngularGrid::default(),
        )
        .unwrap()
    }

    fn helical(ell: i32) -> AngularWavefunction {
        let grid = AngularGrid::default();
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
    fn efficiency_of_pure_modes_is_kronecker() {
        let psi = helical(3);
        assert_abs_diff_eq!(projective_efficiency(&psi, 3).unwrap(), 1.0, epsilon = 1e-10);
        assert!(projective_efficiency(&psi, 2).unwrap() < 1e-12);
    }

    #[test]
    fn efficiency_ratio_follows_the_gaussian_envelope() {
        let eta = math::deg_to_rad(13.7);
        let psi = gaussian_13_7();
        let ratio = projective_efficiency(&psi, 3).unwrap()
            / projective_efficiency(&psi, 0).unwrap();
        assert_abs_diff_eq!(ratio, math::exp(-9.0 * eta * eta), epsilon = 1e-10);
        assert_abs_diff_eq!(ratio, 0.5977615, epsilon = 1e-4);
    }

    #[test]
    fn efficiency_checks_the_resolved_range() {
        assert!(matches!(
            projective_efficiency(&gaussian_13_7(), 4096),
            Err(CoreError::EllOutOfRange { .. })
        ));
    }

    #[test]
    fn zero_flux_scan_is_silent() {
        let cfg = OAMScanConfig {
            mean_flux: 0.0,
            ..OAMScanConfig::default()
        };
        let result = scan_oam(&gaussian_13_7(), &cfg).unwrap();
        for row in &result.rows {
            assert_eq!(row.mean, 0.0);
            assert_eq!(row.std, 0.0);
            assert!(row.counts.iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn scans_are_bit_reproducible() {
        let cfg = OAMScanConfig {
            rng_seed: 1234,
            ..OAMScanConfig::default()
        };
        let a = scan_oam(&gaussian_13_7(), &cfg).unwrap();
        let b = scan_oam(&gaussian_13_7(), &cfg).unwrap();
        assert_eq!(a, b);
        let c = scan_oam(
            &gaussian_13_7(),
            &OAMScanConfig {
                rng_seed: 1235,
                ..cfg
            },
        )
        .unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn high_flux_scan_concentrates_on_the_expectation() {
        // Peak efficiency ~0.135, so this flux puts >= 1e6 expected counts
        // in the peak bin.
        let cfg = OAMScanConfig {
            mean_flux: 4e7,
            rng_seed: 7,
            ..OAMScanConfig::default()
        };
        let psi = gaussian_13_7();
        let result = scan_oam(&psi, &cfg).unwrap();
        let expected_peak =
            cfg.mean_flux * cfg.window_seconds * projective_efficiency(&psi, 0).unwrap();
        let row = result.rows.iter().find(|r| r.ell == 0).unwrap();
        let ratio = row.mean / expected_peak;
        assert!(
            (0.99..=1.01).contains(&ratio),
            "peak mean/expected ratio {ratio}"
        );
    }

    #[test]
    fn poisson_sampler_matches_moments() {
        // Sample mean within 5 sigma of m, sample variance within 5 sigma
        // of m (Poisson variance of the variance estimate ~ (m + 2m^2)/n).
        let n = 100_000_usize;
        for &m in &[0.1, 1.0, 10.0, 1000.0] {
            let mut rng = ChaCha8Rng::seed_from_u64(42);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for _ in 0..n {
                let x = poisson_count(m, &mut rng) as f64;
                sum += x;
                sum_sq += x * x;
            }
            let mean = sum / n as f64;
            let var = (sum_sq - sum * sum / n as f64) / (n as f64 - 1.0);
            let mean_tol = 5.0 * math::sqrt(m / n as f64);
            let var_tol = 5.0 * math::sqrt((m + 2.0 * m * m) / n as f64);
            assert!(
                math::abs(mean - m) < mean_tol,
                "mean {mean} vs {m} (tol {mean_tol})"
            );
            assert!(
                math::abs(var - m) < var_tol,
                "variance {var} vs {m} (tol {var_tol})"
            );
        }
    }

    #[test]
    fn scan_requires_two_windows_and_resolved_range() {
        let psi = gaussian_13_7();
        let cfg = OAMScanConfig {
            windows: 1,
            ..OAMScanConfig::default()
        };
        assert!(matches!(
            scan_oam(&psi, &cfg),
            Err(CoreError::InsufficientData { needed: 2, got: 1 })
        ));
        let cfg = OAMScanConfig {
            ell_max: 4096,
            ..OAMScanConfig::default()
        };
        assert!(matches!(
            scan_oam(&psi, &cfg),
            Err(CoreError::EllOutOfRange { .. })
        ));
    }

    #[test]
    fn coverage_flags_clipped_scans() {
        let psi = gaussian_13_7();
        let wide = scan_oam(&psi, &OAMScanConfig::default()).unwrap();
        assert!(wide.covers_spectrum());
        let clipped = scan_oam(
            &psi,
            &OAMScanConfig {
                ell_min: -1,
                ell_max: 1,
                ..OAMScanConfig::default()
            },
        )
        .unwrap();
        assert!(!clipped.covers_spectrum());
        assert!(clipped.spectral_coverage < 0.9);
    }

    /// Synthetic noise-free rows of an exact Gaussian histogram.
    fn synthetic_rows(amplitude: f64, mu: f64, sigma: f64) -> OAMScanResult {
        let rows = (-15..=15)
            .map(|ell| {
                let d = (ell as f64 - mu) / sigma;
                ScanRow {
                    ell,
                    mean: amplitude * math::exp(-0.5 * d * d),
                    std: 0.0,
                    counts: Vec::new(),
                }
            })
            .collect();
        OAMScanResult {
            rows,
            spectral_coverage: 1.0,
        }
    }

    #[test]
    fn fit_recovers_exact_gaussian_data() {
        let truth = (400.0, 1.25, 2.9);
        let fit = fit_gaussian_wls(&synthetic_rows(truth.0, truth.1, truth.2)).unwrap();
        assert_abs_diff_eq!(fit.center, truth.1, epsilon = 1e-6);
        assert_abs_diff_eq!(fit.width, truth.2, epsilon = 1e-6);
        assert_abs_diff_eq!(fit.amplitude, truth.0, epsilon = 1e-4);
        assert!(fit.converged);
    }

    #[test]
    fn fit_center_matches_moment_centroid_on_noiseless_spectrum() {
        // A Gaussian mode times a phase gradient has an exactly Gaussian
        // spectrum centered at the (non-integer) gradient.
        let grid = AngularGrid::default();
        let mut psi = gaussian_13_7();
        for (k, a) in psi.amplitudes_mut().iter_mut().enumerate() {
            let (s, c) = math::sincos(1.4 * grid.phi(k));
            *a *= Complex64::new(c, s);
        }
        let cfg = OAMScanConfig::default();
        let noiseless = scan_oam_expected(&psi, &cfg).unwrap();
        let fit = fit_gaussian_wls(&noiseless).unwrap();
        let centroid = psi.oam_transform().centroid_ell();
        assert_abs_diff_eq!(fit.center, centroid, epsilon = 1e-6);
    }

    #[test]
    fn fit_rejects_empty_histograms() {
        let result = OAMScanResult {
            rows: (-5..=5)
                .map(|ell| ScanRow {
                    ell,
                    mean: 0.0,
                    std: 0.0,
                    counts: vec![0; 30],
                })
                .collect(),
            spectral_coverage: 1.0,
        };
        assert!(matches!(
            fit_gaussian_wls(&result),
            Err(CoreError::InsufficientData { .. })
        ));
    }

    #[test]
    fn fit_on_noisy_scan_stays_within_its_confidence_band() {
        let psi = gaussian_13_7();
        let cfg = OAMScanConfig {
            rng_seed: 99,
            ..OAMScanConfig::default()
        };
        let fit = fit_gaussian_wls(&scan_oam(&psi, &cfg).unwrap()).unwrap();
        // True centroid is 0 for the symmetric mode.
        assert!(
            math::abs(fit.center) < fit.center_confidence_3sigma,
            "center {} outside 3 sigma {}",
            fit.center,
            fit.center_confidence_3sigma
        );
        assert!(fit.width > 0.0);
        assert!(fit.center_confidence_3sigma > 0.0);
    }

    #[test]
    fn weighting_choice_rescales_confidence_not_center() {
        let psi = gaussian_13_7();
        let cfg = OAMScanConfig {
            rng_seed: 5,
            ..OAMScanConfig::default()
        };
        let scan = scan_oam(&psi, &cfg).unwrap();
        let wide = fit_gaussian_wls_weighted(&scan, FitWeighting::EnsembleStd).unwrap();
        let tight = fit_gaussian_wls_weighted(&scan, FitWeighting::StdOfMean).unwrap();
        assert_abs_diff_eq!(wide.center, tight.center, epsilon = 1e-6);
        assert!(tight.center_confidence_3sigma < wide.center_confidence_3sigma);
    }

    #[test]
    fn intensity_profile_integrates_to_total_intensity() {
        let psi = gaussian_13_7();
        let profile = angular_intensity(&psi);
        assert_abs_diff_eq!(profile.total(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            profile.centroid().unwrap(),
            psi.centroid_phi().unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn recorded_intensity_restores_the_raw_scale_and_adds_leakage() {
        let psi = gaussian_13_7().rotate(-0.2);
        // An asymmetric leakage bump biases the camera centroid. It stays
        // away from the branch cut so the centroid remains well defined.
        let grid = psi.grid();
        let leak: Vec<f64> = grid
            .phis()
            .map(|phi| if (0.2..1.0).contains(&phi) { 1e-5 } else { 0.0 })
            .collect();
        let leak_total = leak.iter().sum::<f64>() * grid.spacing();
        let clean = recorded_intensity(&PostSelection {
            pointer: psi.clone(),
            probability: 0.004,
            leakage_intensity: None,
        })
        .unwrap();
        let dirty = recorded_intensity(&PostSelection {
            pointer: psi,
            probability: 0.004,
            leakage_intensity: Some(leak),
        })
        .unwrap();
        assert_abs_diff_eq!(clean.total(), 0.004, epsilon = 1e-14);
        assert_abs_diff_eq!(dirty.total(), 0.004 + leak_total, epsilon = 1e-14);
        assert!(dirty.centroid().unwrap() > clean.centroid().unwrap());
    }
}
