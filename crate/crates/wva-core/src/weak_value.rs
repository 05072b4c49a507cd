//! Closed-form weak values and the first-order pointer-shift predictions
//! the simulator is validated against.
//!
//! The polarization weak value for diagonal input, arm phase `theta`, and
//! post-selection angle `gamma` is
//!
//! ```text
//! sigma_w = (sin(a) e^{-i theta} - cos(a)) / (sin(a) e^{-i theta} + cos(a)),
//! a = gamma/2 - pi/4,
//! ```
//!
//! whose small-angle limit is `sigma_w ~ (-2 gamma + 2 i theta)/(gamma^2 +
//! theta^2)`. Both flavors are first-class and tagged, because the
//! interesting operating points sit where they differ at the few-percent
//! level; every report states which flavor produced a number.
//!
//! To first order the post-selected pointer centroid moves by
//! `Re(sigma_w) * delta_phi / 2` in angle and by
//! `Im(sigma_w) * delta_phi / (2 eta_phi^2)` in OAM; the amplification
//! factor is `Re(sigma_w)/2`. The [`WeakRegime`] classification tracks how
//! far a configuration strays from the domain where those formulas hold.

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::math::{self, PI};
use crate::polarization::JonesVector;

/// Which formula produced a weak value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeakValueFlavor {
    /// Full expression, valid at any angle.
    Exact,
    /// First-order small-angle approximation.
    Approximate,
}

/// A complex weak value together with the parameters that generated it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakValue {
    /// The dimensionless complex weak value `sigma_w`.
    pub value: Complex64,
    /// Post-selection angle `gamma` in radians.
    pub gamma: f64,
    /// Relative arm phase `theta` in radians.
    pub theta: f64,
    /// Formula that produced [`value`](Self::value).
    pub flavor: WeakValueFlavor,
}

/// First-order predictions for the post-selected pointer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftPrediction {
    /// Predicted centroid rotation in radians: `Re(sigma_w) delta_phi / 2`.
    pub d_phi_mean: f64,
    /// Predicted OAM centroid shift:
    /// `Im(sigma_w) delta_phi / (2 eta_phi^2)`.
    pub d_ell_mean: f64,
    /// `Re(sigma_w) / 2`, the measured-to-true rotation ratio.
    pub amplification: f64,
}

/// Exact weak value of the polarization Pauli operator.
///
/// Fails with [`CoreError::WeakValueSingular`] when pre- and post-selection
/// are numerically orthogonal (`gamma = theta = 0`). The post-selection
/// pole at `gamma/2 = -pi/4` (selecting `|H>`) is regular here: the
/// sine/cosine form evaluates to exactly `+1` without a special case.
pub fn exact(gamma: f64, theta: f64) -> Result<WeakValue> {
    let (sin_a, cos_a) = math::sincos(gamma / 2.0 - PI / 4.0);
    let (s_t, c_t) = math::sincos(-theta);
    let phase = Complex64::new(c_t, s_t);
    let denominator = sin_a * phase + cos_a;
    if denominator.norm() <= 1e-12 {
        return Err(CoreError::WeakValueSingular);
    }
    let numerator = sin_a * phase - cos_a;
    Ok(WeakValue {
        value: numerator / denominator,
        gamma,
        theta,
        flavor: WeakValueFlavor::Exact,
    })
}

/// Small-angle (first-order) weak value
/// `-2 gamma / (gamma^2 + theta^2) + 2 i theta / (gamma^2 + theta^2)`.
pub fn approximate(gamma: f64, theta: f64) -> Result<WeakValue> {
    let r2 = gamma * gamma + theta * theta;
    if r2 <= 0.0 {
        return Err(CoreError::WeakValueSingular);
    }
    Ok(WeakValue {
        value: Complex64::new(-2.0 * gamma / r2, 2.0 * theta / r2),
        gamma,
        theta,
        flavor: WeakValueFlavor::Approximate,
    })
}

/// Weak value `<post|sigma_z|pre> / <post|pre>` of the Pauli operator
/// `|H><H| - |V><V|` for arbitrary pre- and post-selection states.
///
/// Fed the evolved diagonal probe and the polarizer state, this reproduces
/// [`exact`] to machine precision; it exists so that claim is testable
/// rather than assumed.
pub fn from_states(pre: &JonesVector, post: &JonesVector) -> Result<Complex64> {
    let overlap = post.inner(pre);
    if overlap.norm() <= 1e-12 {
        return Err(CoreError::WeakValueSingular);
    }
    let sigma_pre = JonesVector::new(pre.h, -pre.v);
    Ok(post.inner(&sigma_pre) / overlap)
}

/// First-order pointer shifts for a rotation `delta_phi` and a pointer of
/// amplitude width `eta_phi` (> 0).
pub fn predict_shifts(wv: &WeakValue, delta_phi: f64, eta_phi: f64) -> ShiftPrediction {
    debug_assert!(eta_phi > 0.0);
    ShiftPrediction {
        d_phi_mean: wv.value.re * delta_phi / 2.0,
        d_ell_mean: wv.value.im * delta_phi / (2.0 * eta_phi * eta_phi),
        amplification: wv.value.re / 2.0,
    }
}

/// How far a configuration sits from the first-order validity domain.
///
/// The first-order shift formulas assume `delta_phi / eta_phi <= 0.1` and
/// `|sigma_w| delta_phi / 2 <= 0.2 eta_phi`. [`regime_excess`] normalizes
/// both ratios so 1.0 marks the boundary; the classification buckets the
/// worse of the two.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeakRegime {
    /// Comfortably inside the first-order domain (excess <= 0.5).
    Weak,
    /// Within a factor of two of the boundary (0.5 < excess <= 1).
    NearBoundary,
    /// First-order predictions are unreliable (excess > 1).
    Outside,
}

impl WeakRegime {
    /// Buckets a [`regime_excess`] value.
    pub fn classify(excess: f64) -> Self {
        if excess <= 0.5 {
            WeakRegime::Weak
        } else if excess <= 1.0 {
            WeakRegime::NearBoundary
        } else {
            WeakRegime::Outside
        }
    }
}

/// Worst normalized distance from the first-order validity boundary;
/// 1.0 sits exactly on it. `wv_magnitude` is `|sigma_w|` at the operating
/// point.
pub fn regime_excess(delta_phi: f64, eta_phi: f64, wv_magnitude: f64) -> f64 {
    let rotation_ratio = math::abs(delta_phi) / eta_phi / 0.1;
    let shift_ratio = wv_magnitude * math::abs(delta_phi) / 2.0 / (0.2 * eta_phi);
    rotation_ratio.max(shift_ratio)
}
