//! Error type shared by all simulation layers.

use core::fmt;

/// Convenience alias for fallible core operations.
pub type Result<T> = core::result::Result<T, CoreError>;

/// Everything that can go wrong while building states, evolving them, or
/// extracting observables.
#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// Grid size must be a power of two and at least 64 samples.
    InvalidGridSize { n_samples: usize },
    /// Requested angular width is outside the supported range
    /// `0 < eta_phi <= pi/4`.
    WidthOutOfRange { eta_phi: f64 },
    /// The mode carries non-negligible amplitude at the branch cut
    /// `phi = +-pi`, so periodic observables would be distorted.
    /// `relative` is the boundary intensity relative to the norm.
    BoundaryLeakage { relative: f64 },
    /// Requested arm rotation exceeds the supported range
    /// `|delta_phi| < pi/8`.
    RotationOutOfRange { delta_phi: f64 },
    /// Two states or spectra live on grids of different sizes.
    GridMismatch { left: usize, right: usize },
    /// OAM index outside the range resolved by the grid.
    EllOutOfRange { ell: i32, max_abs: i32 },
    /// Post-selection probability fell below the numerical floor; the
    /// renormalized pointer would be meaningless.
    PostSelectionSingular { probability: f64 },
    /// Pre- and post-selection states are (numerically) orthogonal, so the
    /// weak value diverges.
    WeakValueSingular,
    /// The weighted least-squares fit did not converge.
    FitDiverged { iterations: usize, gradient_norm: f64 },
    /// Not enough usable data points to attempt a fit.
    InsufficientData { needed: usize, got: usize },
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::InvalidGridSize { n_samples } => {
                write!(f, "grid size {n_samples} is not a power of two >= 64")
            }
            CoreError::WidthOutOfRange { eta_phi } => {
                write!(f, "angular width {eta_phi} rad outside (0, pi/4]")
            }
            CoreError::BoundaryLeakage { relative } => write!(
                f,
                "mode leaks {relative:.3e} of its norm at the phi = +-pi branch cut"
            ),
            CoreError::RotationOutOfRange { delta_phi } => {
                write!(f, "arm rotation {delta_phi} rad outside (-pi/8, pi/8)")
            }
            CoreError::GridMismatch { left, right } => {
                write!(f, "grid sizes differ: {left} vs {right}")
            }
            CoreError::EllOutOfRange { ell, max_abs } => write!(
                f,
                "OAM index {ell} outside grid-resolved range [-{max_abs}, {})",
                max_abs
            ),
            CoreError::PostSelectionSingular { probability } => write!(
                f,
                "post-selection probability {probability:.3e} below 1e-12 floor"
            ),
            CoreError::WeakValueSingular => {
                write!(f, "pre- and post-selection states are orthogonal")
            }
            CoreError::FitDiverged {
                iterations,
                gradient_norm,
            } => write!(
                f,
                "fit failed to converge after {iterations} iterations (gradient norm {gradient_norm:.3e})"
            ),
            CoreError::InsufficientData { needed, got } => {
                write!(f, "need at least {needed} usable data points, got {got}")
            }
        }
    }
}

impl core::error::Error for CoreError {}
