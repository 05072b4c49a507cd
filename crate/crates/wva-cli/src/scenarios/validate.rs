//! Validation scenario: measures the numerical invariant catalog at the
//! configured operating point and reports each check with its bound.
//!
//! Exit codes separate the two ways this can go wrong. A violated numeric
//! invariant is a bug in the simulator and exits 4. Clean numerics at an
//! operating point outside the weak-coupling regime is a misconfigured
//! experiment, not a bug, and exits 3.

use std::path::Path;

use wva_core::angular::{AngularGrid, AngularWavefunction, ModeParams};
use wva_core::math;
use wva_core::measurement::{fit_gaussian_wls, scan_oam, scan_oam_expected, OAMScanConfig};
use wva_core::sagnac::{evolve, prepare_initial, DoveCoupling};
use wva_core::weak_value::WeakRegime;
use wva_core::Complex64;

use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use crate::output::{Csv, CsvField};
use crate::pipeline::{regime_name, run_point, PointParams};
use crate::report::{RunReport, SourceLabel};

const COVERAGE_REPS: u64 = 100;

enum Status {
    Ok,
    Fail,
    Skipped,
}

struct Check {
    name: &'static str,
    measured: f64,
    bound: String,
    status: Status,
}

impl Check {
    /// Measured value must stay at or below the bound.
    fn upper(name: &'static str, measured: f64, bound: f64) -> Self {
        Check {
            name,
            measured,
            bound: format!("<={bound:e}"),
            status: if measured <= bound { Status::Ok } else { Status::Fail },
        }
    }

    /// Measured value must stay at or above the bound.
    fn lower(name: &'static str, measured: f64, bound: f64) -> Self {
        Check {
            name,
            measured,
            bound: format!(">={bound:e}"),
            status: if measured >= bound { Status::Ok } else { Status::Fail },
        }
    }

    fn band(name: &'static str, measured: f64, low: f64, high: f64) -> Self {
        Check {
            name,
            measured,
            bound: format!("[{low}..{high}]"),
            status: if (low..=high).contains(&measured) {
                Status::Ok
            } else {
                Status::Fail
            },
        }
    }

    fn skipped(name: &'static str, measured: f64, reason: &str) -> Self {
        Check {
            name,
            measured,
            bound: reason.to_string(),
            status: Status::Skipped,
        }
    }

    fn status_str(&self) -> &'static str {
        match self.status {
            Status::Ok => "ok",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

pub fn run(cfg: &ExperimentConfig, out_dir: &Path) -> Result<()> {
    let params = PointParams::from_config(cfg);
    let outcome = run_point(&params)?;
    let psi = &outcome.selection.pointer;
    let mut checks = Vec::new();

    // Spectral power equals angular power.
    let spectrum = psi.oam_transform();
    checks.push(Check::upper(
        "parseval",
        (spectrum.total_power() - psi.total_intensity()).abs(),
        1e-10,
    ));

    // Forward then inverse transform reproduces the samples.
    let back = spectrum.inverse_transform(psi.grid())?;
    checks.push(Check::upper(
        "transform_round_trip",
        max_amplitude_diff(psi, &back),
        1e-12,
    ));

    // The fast transform agrees with direct quadrature on a small grid.
    let coarse = run_point(&PointParams { grid: 64, ..params })?;
    checks.push(Check::upper(
        "transform_vs_quadrature_n64",
        quadrature_gap(&coarse.selection.pointer),
        1e-9,
    ));

    // Rotating forward and back is the identity.
    let returned = psi.rotate(0.3).rotate(-0.3);
    checks.push(Check::upper(
        "rotation_round_trip",
        max_amplitude_diff(psi, &returned),
        1e-12,
    ));

    // A Gaussian pointer sits at the angle-OAM uncertainty minimum. The
    // tight band is certified for widths up to 0.3 rad, where circular
    // corrections are exponentially small. The 1/2 floor itself is a
    // localized-mode result: once the wrapped tails overlap (widths near
    // 0.6 rad) the product legitimately dips below it, so wider pointers
    // report the value without asserting a bound.
    let grid = AngularGrid::new(cfg.grid)?;
    let gauss = AngularWavefunction::gaussian(&ModeParams::centered(params.eta_phi), grid)?;
    let product = gauss.width_phi()? * gauss.oam_transform().width_ell();
    checks.push(if params.eta_phi <= 0.3 {
        Check::band("uncertainty_product", product, 0.5 - 1e-12, 0.51)
    } else {
        Check::skipped("uncertainty_product", product, "pointer wider than certified range")
    });

    // The interferometer is unitary: evolution preserves the total norm.
    let initial = prepare_initial(&ModeParams::centered(params.eta_phi), grid)?;
    let evolved = evolve(&initial, &DoveCoupling::new(params.delta_phi, params.theta())?);
    checks.push(Check::upper(
        "evolution_unitarity",
        (evolved.total_norm() - 1.0).abs(),
        1e-10,
    ));

    // Post-selection probability matches the Gaussian-overlap closed form.
    checks.push(Check::upper(
        "probability_closed_form",
        (outcome.probability_sim - outcome.probability_exact).abs(),
        1e-10,
    ));

    // The centroid is grid-converged: 64 samples already agree with 4096.
    let fine = if cfg.grid == 4096 {
        outcome.centroid_phi_sim
    } else {
        run_point(&PointParams { grid: 4096, ..params })?.centroid_phi_sim
    };
    checks.push(Check::upper(
        "grid_convergence_64_vs_4096",
        (coarse.centroid_phi_sim - fine).abs(),
        1e-4,
    ));

    // Inside the weak regime the measured centroid follows the first-order
    // prediction; outside it the formula is not certified, so the check is
    // recorded as skipped rather than asserted.
    let predicted = outcome.shifts_exact.d_phi_mean;
    let agreement = (outcome.centroid_phi_sim - predicted).abs() / predicted.abs();
    checks.push(if outcome.regime == WeakRegime::Weak {
        Check::upper("first_order_agreement", agreement, 0.02)
    } else {
        Check::skipped("first_order_agreement", agreement, "outside weak regime")
    });

    // Repeated noisy scans: the 3-sigma interval of the fitted centroid
    // covers the noiseless-fit truth in (nominally) 99.7% of repetitions.
    let base_seed = cfg.scan.seed.unwrap_or(0);
    let scan_base = OAMScanConfig {
        windows: cfg.scan.windows,
        window_seconds: cfg.scan.window_seconds,
        mean_flux: cfg.scan.mean_flux,
        rng_seed: base_seed,
        ..OAMScanConfig::default()
    };
    let truth = fit_gaussian_wls(&scan_oam_expected(psi, &scan_base)?)?.center;
    let mut covered = 0u64;
    for rep in 0..COVERAGE_REPS {
        let scan_cfg = OAMScanConfig {
            rng_seed: base_seed + rep,
            ..scan_base
        };
        let fit = fit_gaussian_wls(&scan_oam(psi, &scan_cfg)?)?;
        if (fit.center - truth).abs() <= fit.center_confidence_3sigma {
            covered += 1;
        }
    }
    checks.push(Check::lower(
        "coverage_3sigma",
        covered as f64 / COVERAGE_REPS as f64,
        0.96,
    ));

    // Report everything before deciding the exit code, so a failing run
    // still leaves its evidence on disk.
    let mut table = Csv::new(&["check", "measured", "bound", "status"]);
    let mut report = RunReport::new(cfg.echo());
    let mut failures = Vec::new();
    for check in &checks {
        table.row(&[
            CsvField::Str(check.name),
            CsvField::Float(check.measured),
            CsvField::Str(&check.bound),
            CsvField::Str(check.status_str()),
        ]);
        let source = if check.name == "coverage_3sigma" {
            SourceLabel::Fitted
        } else {
            SourceLabel::Simulated
        };
        report.push(check.name, source, check.measured);
        println!(
            "validate: {}: {} (measured {:e}, bound {})",
            check.name,
            check.status_str(),
            check.measured,
            check.bound
        );
        if matches!(check.status, Status::Fail) {
            failures.push(check.name);
        }
    }
    report.push("regime_excess", SourceLabel::AnalyticExact, outcome.regime_excess);
    table.write(&out_dir.join("validate_report.csv"))?;
    report.write(out_dir)?;
    println!(
        "validate: operating point regime: {} (excess {:.3})",
        regime_name(outcome.regime),
        outcome.regime_excess
    );

    if !failures.is_empty() {
        return Err(CliError::invariant(format!(
            "{} check(s) failed: {}",
            failures.len(),
            failures.join(", ")
        )));
    }
    if outcome.regime != WeakRegime::Weak {
        return Err(CliError::regime(format!(
            "numerics are clean, but the operating point sits {} the \
             first-order validity boundary (excess {:.3}); shrink delta_phi \
             or widen the pointer",
            if outcome.regime == WeakRegime::Outside {
                "outside"
            } else {
                "near"
            },
            outcome.regime_excess
        )));
    }
    Ok(())
}

fn max_amplitude_diff(a: &AngularWavefunction, b: &AngularWavefunction) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Worst deviation between the fast transform and the plain quadrature sum
/// over the full spectral range of `psi`.
fn quadrature_gap(psi: &AngularWavefunction) -> f64 {
    let grid = psi.grid();
    let spectrum = psi.oam_transform();
    let norm = grid.spacing() / math::sqrt(2.0 * math::PI);
    let mut worst: f64 = 0.0;
    for ell in spectrum.ell_min()..=spectrum.ell_max() {
        let mut direct = Complex64::new(0.0, 0.0);
        for (k, a) in psi.amplitudes().iter().enumerate() {
            let (s, c) = math::sincos(-(ell as f64) * grid.phi(k));
            direct += a * Complex64::new(c, s);
        }
        direct *= norm;
        worst = worst.max((spectrum.coefficient(ell).unwrap() - direct).norm());
    }
    worst
}
