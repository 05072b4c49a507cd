//! Shared single-point evaluation: prepare, evolve, post-select, measure,
//! predict. Every scenario is a loop over [`run_point`] plus formatting.

use wva_core::angular::{AngularGrid, ModeParams};
use wva_core::math;
use wva_core::measurement::{recorded_intensity, IntensityProfile};
use wva_core::sagnac::{evolve, post_select, prepare_initial, DoveCoupling, PostSelection};
use wva_core::weak_value::{self, ShiftPrediction, WeakRegime, WeakValue};

use crate::config::ExperimentConfig;
use crate::error::Result;

/// One operating point of the interferometer, radians throughout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointParams {
    pub grid: usize,
    pub eta_phi: f64,
    pub delta_phi: f64,
    pub gamma_half: f64,
    pub theta_half: f64,
    pub extinction_ratio: f64,
}

impl PointParams {
    /// The one place the configuration's degrees become radians.
    pub fn from_config(cfg: &ExperimentConfig) -> Self {
        PointParams {
            grid: cfg.grid,
            eta_phi: math::deg_to_rad(cfg.eta_phi_deg),
            delta_phi: math::deg_to_rad(cfg.delta_phi_deg),
            gamma_half: math::deg_to_rad(cfg.gamma_half_deg),
            theta_half: math::deg_to_rad(cfg.theta_half_deg),
            extinction_ratio: cfg.extinction_ratio,
        }
    }

    pub fn gamma(&self) -> f64 {
        2.0 * self.gamma_half
    }

    pub fn theta(&self) -> f64 {
        2.0 * self.theta_half
    }
}

/// Everything a scenario reports about one operating point.
#[derive(Debug, Clone)]
pub struct PointOutcome {
    /// Post-selection output (unit-norm pointer plus leakage, reusable for
    /// scans and profiles).
    pub selection: PostSelection,
    /// Camera intensity: post-selected signal at its survival probability
    /// plus any polarizer leakage.
    pub recorded: IntensityProfile,
    /// Survival probability from the evolved state.
    pub probability_sim: f64,
    /// Closed-form survival probability
    /// `(1 - cos(gamma) cos(theta) exp(-(delta_phi/2)^2/eta^2)) / 2`.
    pub probability_exact: f64,
    /// Angular centroid of the recorded intensity.
    pub centroid_phi_sim: f64,
    /// OAM centroid of the post-selected pointer spectrum.
    pub centroid_ell_sim: f64,
    /// `centroid_phi_sim / delta_phi`, the realized amplification.
    pub amp_sim: f64,
    /// Exact weak value at this point.
    pub wv_exact: WeakValue,
    /// First-order shifts from the exact weak value.
    pub shifts_exact: ShiftPrediction,
    /// First-order shifts from the approximate weak value.
    pub shifts_approx: ShiftPrediction,
    /// Normalized distance from the first-order validity boundary.
    pub regime_excess: f64,
    /// Bucketed form of [`regime_excess`](Self::regime_excess).
    pub regime: WeakRegime,
}

/// Closed-form survival probability for a Gaussian pointer of amplitude
/// width `eta_phi`.
pub fn closed_form_probability(gamma: f64, theta: f64, delta_phi: f64, eta_phi: f64) -> f64 {
    let overlap = math::exp(-(delta_phi / 2.0) * (delta_phi / 2.0) / (eta_phi * eta_phi));
    0.5 * (1.0 - math::cos(gamma) * math::cos(theta) * overlap)
}

/// Runs the full pipeline at one operating point.
pub fn run_point(params: &PointParams) -> Result<PointOutcome> {
    let grid = AngularGrid::new(params.grid)?;
    let pointer_params = ModeParams::centered(params.eta_phi);
    let initial = prepare_initial(&pointer_params, grid)?;
    let coupling = DoveCoupling::new(params.delta_phi, params.theta())?;
    let evolved = evolve(&initial, &coupling);
    let selection = post_select(&evolved, params.gamma(), params.extinction_ratio)?;

    let recorded = recorded_intensity(&selection)?;
    let centroid_phi_sim = recorded.centroid()?;
    let centroid_ell_sim = selection.pointer.oam_transform().centroid_ell();

    let wv_exact = weak_value::exact(params.gamma(), params.theta())?;
    let wv_approx = weak_value::approximate(params.gamma(), params.theta())?;
    let shifts_exact = weak_value::predict_shifts(&wv_exact, params.delta_phi, params.eta_phi);
    let shifts_approx = weak_value::predict_shifts(&wv_approx, params.delta_phi, params.eta_phi);
    let excess =
        weak_value::regime_excess(params.delta_phi, params.eta_phi, wv_exact.value.norm());

    Ok(PointOutcome {
        probability_sim: selection.probability,
        probability_exact: closed_form_probability(
            params.gamma(),
            params.theta(),
            params.delta_phi,
            params.eta_phi,
        ),
        centroid_phi_sim,
        centroid_ell_sim,
        amp_sim: centroid_phi_sim / params.delta_phi,
        recorded,
        selection,
        wv_exact,
        shifts_exact,
        shifts_approx,
        regime_excess: excess,
        regime: WeakRegime::classify(excess),
    })
}

/// Lowercase regime name for CSV cells.
pub fn regime_name(regime: WeakRegime) -> &'static str {
    match regime {
        WeakRegime::Weak => "weak",
        WeakRegime::NearBoundary => "near-boundary",
        WeakRegime::Outside => "outside",
    }
}
