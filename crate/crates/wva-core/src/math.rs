//! Scalar math helpers for `no_std` builds.
//!
//! Float methods like `f64::sin` live in `std`, so everything here routes
//! through `libm`. Call sites use these thin wrappers instead of sprinkling
//! `libm::` paths around.

pub use core::f64::consts::PI;

pub const TWO_PI: f64 = 2.0 * PI;

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn sincos(x: f64) -> (f64, f64) {
    libm::sincos(x)
}

#[inline]
pub fn tan(x: f64) -> f64 {
    libm::tan(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

#[inline]
pub fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

/// Wrap an angle to the canonical domain `[-pi, pi)`.
///
/// Uses IEEE `remainder`, which is exact for arguments within a few periods,
/// then folds the single boundary case `+pi` down to `-pi`.
pub fn wrap_pm_pi(x: f64) -> f64 {
    let y = libm::remainder(x, TWO_PI);
    if y >= PI {
        y - TWO_PI
    } else if y < -PI {
        y + TWO_PI
    } else {
        y
    }
}

/// Convert degrees to radians.
#[inline]
pub fn deg_to_rad(deg: f64) -> f64 {
    deg * PI / 180.0
}

/// Convert radians to degrees.
#[inline]
pub fn rad_to_deg(rad: f64) -> f64 {
    rad * 180.0 / PI
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn wrap_keeps_canonical_domain_fixed() {
        for &x in &[-PI, -1.0, 0.0, 1.0, 3.0] {
            assert_abs_diff_eq!(wrap_pm_pi(x), x, epsilon = 0.0);
        }
    }

    #[test]
    fn wrap_folds_multiples_of_two_pi() {
        assert_abs_diff_eq!(wrap_pm_pi(PI), -PI, epsilon = 0.0);
        assert_abs_diff_eq!(wrap_pm_pi(3.0 * PI), -PI, epsilon = 1e-15);
        assert_abs_diff_eq!(wrap_pm_pi(-3.0 * PI), -PI, epsilon = 1e-15);
        assert_abs_diff_eq!(wrap_pm_pi(2.5 * TWO_PI), -PI, epsilon = 1e-15);
        assert_abs_diff_eq!(wrap_pm_pi(0.1 + 4.0 * TWO_PI), 0.1, epsilon = 1e-12);
    }

    #[test]
    fn degree_radian_round_trip() {
        assert_abs_diff_eq!(deg_to_rad(180.0), PI, epsilon = 0.0);
        assert_abs_diff_eq!(rad_to_deg(deg_to_rad(13.7)), 13.7, epsilon = 1e-12);
    }
}
