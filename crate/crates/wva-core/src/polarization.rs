//! Jones calculus for the polarization probe.
//!
//! The probe lives in the two-dimensional space spanned by horizontal and
//! vertical polarization. Waveplates are unitary Jones matrices, the
//! post-selecting polarizer is a projector, and the quarter-half-quarter
//! waveplate stack used inside the interferometer reduces to a pure
//! polarization-dependent (geometric) phase.
//!
//! Phase conventions: retarders carry no global phase beyond fixing the
//! fast-axis phase to zero, so every matrix here is reproducible
//! bit-for-bit. Matrix products follow optical ordering: the rightmost
//! factor acts first.

use core::ops::Mul;

use num_complex::Complex64;

use crate::math::{self, PI};

/// Two-component polarization state (or un-normalized polarization
/// amplitude when produced by a projector).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesVector {
    /// Horizontal complex amplitude.
    pub h: Complex64,
    /// Vertical complex amplitude.
    pub v: Complex64,
}

impl JonesVector {
    pub fn new(h: Complex64, v: Complex64) -> Self {
        JonesVector { h, v }
    }

    /// `|H>`.
    pub fn horizontal() -> Self {
        JonesVector::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    /// `|V>`.
    pub fn vertical() -> Self {
        JonesVector::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    }

    /// Diagonal input state `(|H> + |V>)/sqrt(2)` the interferometer is fed
    /// with.
    pub fn diagonal() -> Self {
        let a = Complex64::new(1.0 / math::sqrt(2.0), 0.0);
        JonesVector::new(a, a)
    }

    /// Antidiagonal state `(|H> - |V>)/sqrt(2)`.
    pub fn antidiagonal() -> Self {
        let a = 1.0 / math::sqrt(2.0);
        JonesVector::new(Complex64::new(a, 0.0), Complex64::new(-a, 0.0))
    }

    /// Diagonal state after the arms acquire opposite phases:
    /// `(e^{-i theta/2}|H> + e^{+i theta/2}|V>)/sqrt(2)`.
    pub fn phased_diagonal(theta: f64) -> Self {
        let (s, c) = math::sincos(theta / 2.0);
        let scale = 1.0 / math::sqrt(2.0);
        JonesVector::new(
            Complex64::new(c * scale, -s * scale),
            Complex64::new(c * scale, s * scale),
        )
    }

    /// Post-selection state
    /// `sin(gamma/2 - pi/4)|H> + cos(gamma/2 - pi/4)|V>`.
    ///
    /// At `gamma = 0` this is antidiagonal up to sign (orthogonal to the
    /// diagonal input); small `gamma` tilts it slightly away, which is what
    /// makes the weak value large.
    pub fn post_selection(gamma_half: f64) -> Self {
        let (s, c) = math::sincos(gamma_half - PI / 4.0);
        JonesVector::new(Complex64::new(s, 0.0), Complex64::new(c, 0.0))
    }

    /// State rejected by the post-selecting polarizer: the orthogonal
    /// complement of [`post_selection`] with the same parameter.
    ///
    /// [`post_selection`]: JonesVector::post_selection
    pub fn post_selection_rejected(gamma_half: f64) -> Self {
        let (s, c) = math::sincos(gamma_half - PI / 4.0);
        JonesVector::new(Complex64::new(c, 0.0), Complex64::new(-s, 0.0))
    }

    /// Inner product `<self|other>` (conjugate-linear in `self`).
    pub fn inner(&self, other: &JonesVector) -> Complex64 {
        self.h.conj() * other.h + self.v.conj() * other.v
    }

    /// Squared norm `|h|^2 + |v|^2`.
    pub fn norm_sqr(&self) -> f64 {
        self.h.norm_sqr() + self.v.norm_sqr()
    }
}

/// 2x2 complex operator on Jones vectors, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesMatrix {
    pub elements: [[Complex64; 2]; 2],
}

impl JonesMatrix {
    pub fn new(elements: [[Complex64; 2]; 2]) -> Self {
        JonesMatrix { elements }
    }

    pub fn identity() -> Self {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        JonesMatrix::new([[l, o], [o, l]])
    }

    /// Rank-one projector `|state><state|`.
    pub fn projector(state: &JonesVector) -> Self {
        JonesMatrix::new([
            [state.h * state.h.conj(), state.h * state.v.conj()],
            [state.v * state.h.conj(), state.v * state.v.conj()],
        ])
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let e = &self.elements;
        JonesMatrix::new([
            [e[0][0].conj(), e[1][0].conj()],
            [e[0][1].conj(), e[1][1].conj()],
        ])
    }

    /// Largest absolute entry of `self - other`, for closeness checks.
    pub fn max_abs_diff(&self, other: &JonesMatrix) -> f64 {
        let mut worst = 0.0_f64;
        for r in 0..2 {
            for c in 0..2 {
                let d = (self.elements[r][c] - other.elements[r][c]).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }
}

impl Mul for JonesMatrix {
    type Output = JonesMatrix;

    fn mul(self, rhs: JonesMatrix) -> JonesMatrix {
        let a = &self.elements;
        let b = &rhs.elements;
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        JonesMatrix::new(out)
    }
}

impl Mul<JonesVector> for JonesMatrix {
    type Output = JonesVector;

    fn mul(self, rhs: JonesVector) -> JonesVector {
        let e = &self.elements;
        JonesVector::new(
            e[0][0] * rhs.h + e[0][1] * rhs.v,
            e[1][0] * rhs.h + e[1][1] * rhs.v,
        )
    }
}

/// Which way a beam traverses the waveplate stack inside the Sagnac loop.
/// Counter-propagating beams see every plate at the mirrored angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagationDirection {
    Forward,
    Backward,
}

/// Quarter-wave plate with fast axis at `theta_q` from horizontal,
/// retardation `pi/2`, fast-axis phase fixed to zero.
pub fn qwp(theta_q: f64) -> JonesMatrix {
    let (s, c) = math::sincos(theta_q);
    let (cc, ss, sc) = (c * c, s * s, s * c);
    let off = Complex64::new(sc, -sc);
    JonesMatrix::new([
        [Complex64::new(cc, ss), off],
        [off, Complex64::new(ss, cc)],
    ])
}

/// Half-wave plate with fast axis at `theta_h` from horizontal.
pub fn hwp(theta_h: f64) -> JonesMatrix {
    let (s2, c2) = math::sincos(2.0 * theta_h);
    let o = |x: f64| Complex64::new(x, 0.0);
    JonesMatrix::new([[o(c2), o(s2)], [o(s2), o(-c2)]])
}

/// The quarter-half-quarter stack producing the geometric phase.
///
/// `theta_h_plate` is the half-wave plate setting `theta_H`; the backward
/// direction sees all three plates at mirrored angles. For either
/// direction the product is diagonal: `|H>` acquires
/// `e^{-i(theta_H/2 - pi/2)}` and `|V>` acquires `e^{+i(theta_H/2 - pi/2)}`,
/// so the two counter-propagating polarizations pick up exactly opposite
/// phases.
pub fn geometric_phase_stack(theta_h_plate: f64, direction: PropagationDirection) -> JonesMatrix {
    let sign = match direction {
        PropagationDirection::Forward => 1.0,
        PropagationDirection::Backward => -1.0,
    };
    qwp(sign * PI / 4.0) * hwp(sign * theta_h_plate / 4.0) * qwp(sign * PI / 4.0)
}

/// Phase acquired by `|H>` in the stack: `-(theta_H/2 - pi/2)`. `|V>`
/// acquires the opposite.
pub fn geometric_phase_h(theta_h_plate: f64) -> f64 {
    -(theta_h_plate / 2.0 - PI / 2.0)
}

/// Intensity-transmission operator of the post-selecting polarizer:
/// the projector onto the selected state plus `extinction_ratio` times the
/// projector onto the rejected state.
///
/// `extinction_ratio` is an intensity ratio in `[0, 1e-2]`; at 0 this is
/// the ideal projector. The leaked field is orthogonally polarized to the
/// selected one, so downstream intensities add incoherently (see
/// `sagnac::post_select`).
pub fn polarizer_projector(gamma_half: f64, extinction_ratio: f64) -> JonesMatrix {
    debug_assert!((0.0..=1e-2).contains(&extinction_ratio));
    let selected = JonesMatrix::projector(&JonesVector::post_selection(gamma_half));
    let rejected = JonesMatrix::projector(&JonesVector::post_selection_rejected(gamma_half));
    let mut out = selected;
    for r in 0..2 {
        for c in 0..2 {
            out.elements[r][c] += extinction_ratio * rejected.elements[r][c];
        }
    }
    out
}
