//! Exact evolution of the joint polarization-angular state through the
//! Sagnac interferometer, and post-selection onto the pointer.
//!
//! The beam enters diagonally polarized in an angular mode `f`, so the
//! joint state is the product `(|H> + |V>)/sqrt(2) (x) |f>`. Inside the
//! loop the Dove prism rotates the counter-propagating arms in opposite
//! directions by `delta_phi / 2` each, entangling polarization with the
//! pointer, and the waveplate stack adds opposite phases `theta / 2`:
//!
//! ```text
//! |Psi> = ( e^{-i theta/2} |H> |f(phi - dphi/2)>
//!         + e^{+i theta/2} |V> |f(phi + dphi/2)> ) / sqrt(2)
//! ```
//!
//! Projecting onto the post-selection polarization collapses the pointer to
//! a superposition of the two rotated copies whose centroid and OAM
//! spectrum carry the amplified signal. Evolution here is exact (full
//! rotation and phase, no series expansion): the first-order theory in
//! [`crate::weak_value`] is the thing under test, not the implementation.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::angular::{AngularGrid, AngularWavefunction, ModeParams};
use crate::error::{CoreError, Result};
use crate::math::{self, PI};

/// Floor below which a post-selection probability is treated as an exact
/// null and the renormalized pointer as meaningless.
const PROBABILITY_FLOOR: f64 = 1e-12;

/// Joint state of the two polarization-tagged arms.
///
/// The physical state is `|H> (x) h_component + |V> (x) v_component`; the
/// angular components carry the arm amplitudes, so after preparation
/// each holds intensity 1/2 and the total is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorBeamState {
    h_component: AngularWavefunction,
    v_component: AngularWavefunction,
}

impl VectorBeamState {
    /// Assembles a state from explicit arm amplitudes; fails with
    /// [`CoreError::GridMismatch`] when the arms live on different grids.
    pub fn from_components(
        h_component: AngularWavefunction,
        v_component: AngularWavefunction,
    ) -> Result<Self> {
        if h_component.grid() != v_component.grid() {
            return Err(CoreError::GridMismatch {
                left: h_component.grid().n_samples(),
                right: v_component.grid().n_samples(),
            });
        }
        Ok(VectorBeamState {
            h_component,
            v_component,
        })
    }

    /// Horizontally polarized arm amplitude.
    pub fn h_component(&self) -> &AngularWavefunction {
        &self.h_component
    }

    /// Vertically polarized arm amplitude.
    pub fn v_component(&self) -> &AngularWavefunction {
        &self.v_component
    }

    /// Shared angular grid.
    pub fn grid(&self) -> AngularGrid {
        self.h_component.grid()
    }

    /// Total intensity over both arms; 1 for a physical state.
    pub fn total_norm(&self) -> f64 {
        self.h_component.total_intensity() + self.v_component.total_intensity()
    }
}

/// The two coupling strengths of one interferometer pass: the full relative
/// rotation `delta_phi` between the arms and the relative geometric phase
/// `theta` (plate setting `theta_H = theta + pi`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoveCoupling {
    delta_phi: f64,
    theta: f64,
}

impl DoveCoupling {
    /// Validates `|delta_phi| < pi/8`; larger rotations leave the regime
    /// where the two arm copies still overlap appreciably.
    pub fn new(delta_phi: f64, theta: f64) -> Result<Self> {
        if !(math::abs(delta_phi) < PI / 8.0) {
            return Err(CoreError::RotationOutOfRange { delta_phi });
        }
        Ok(DoveCoupling { delta_phi, theta })
    }

    /// Full relative rotation between the arms, radians.
    pub fn delta_phi(&self) -> f64 {
        self.delta_phi
    }

    /// Relative geometric phase between the arms, radians.
    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Result of post-selection: the collapsed, renormalized pointer, the
/// success probability, and (for an imperfect polarizer) the incoherent
/// intensity leaked from the rejected polarization.
#[derive(Debug, Clone, PartialEq)]
pub struct PostSelection {
    /// Unit-norm pointer state after the polarizer.
    pub pointer: AngularWavefunction,
    /// Probability that a photon survives post-selection.
    pub probability: f64,
    /// `extinction_ratio * |rejected amplitude|^2` per grid sample, present
    /// when the extinction ratio is nonzero. The leaked field is
    /// orthogonally polarized to the selected one, so it adds to measured
    /// intensities without interfering.
    pub leakage_intensity: Option<Vec<f64>>,
}

/// Prepares the diagonal input state `(|H> + |V>)/sqrt(2) (x) |f>` with a
/// Gaussian angular pointer.
pub fn prepare_initial(pointer_params: &ModeParams, grid: AngularGrid) -> Result<VectorBeamState> {
    let mut f = AngularWavefunction::gaussian(pointer_params, grid)?;
    let scale = 1.0 / math::sqrt(2.0);
    for a in f.amplitudes_mut() {
        *a *= scale;
    }
    Ok(VectorBeamState {
        h_component: f.clone(),
        v_component: f,
    })
}

/// Rotates the arms oppositely: the H arm by `+delta_phi/2`, the V arm by
/// `-delta_phi/2`. Norm and each arm's OAM intensity distribution are
/// preserved.
pub fn apply_dove_prism(state: &VectorBeamState, delta_phi: f64) -> VectorBeamState {
    VectorBeamState {
        h_component: state.h_component.rotate(delta_phi / 2.0),
        v_component: state.v_component.rotate(-delta_phi / 2.0),
    }
}

/// Applies the geometric phase: `e^{-i theta/2}` on the H arm and
/// `e^{+i theta/2}` on the V arm.
pub fn apply_geometric_phase(state: &VectorBeamState, theta: f64) -> VectorBeamState {
    let (s, c) = math::sincos(theta / 2.0);
    let phase_h = Complex64::new(c, -s);
    let phase_v = phase_h.conj();
    let mut h = state.h_component.clone();
    let mut v = state.v_component.clone();
    for a in h.amplitudes_mut() {
        *a *= phase_h;
    }
    for a in v.amplitudes_mut() {
        *a *= phase_v;
    }
    VectorBeamState {
        h_component: h,
        v_component: v,
    }
}

/// One full interferometer pass: Dove-prism rotation followed by the
/// geometric-phase stack.
pub fn evolve(initial: &VectorBeamState, coupling: &DoveCoupling) -> VectorBeamState {
    apply_geometric_phase(
        &apply_dove_prism(initial, coupling.delta_phi()),
        coupling.theta(),
    )
}

/// Projects onto the post-selection polarization
/// `sin(gamma/2 - pi/4)|H> + cos(gamma/2 - pi/4)|V>` and renormalizes the
/// surviving pointer.
///
/// `extinction_ratio` in `[0, 1e-2]` models an imperfect polarizer: the
/// rejected polarization leaks through with that intensity fraction,
/// reported incoherently via [`PostSelection::leakage_intensity`].
///
/// Fails with [`CoreError::PostSelectionSingular`] when the survival
/// probability falls below 1e-12 (exactly orthogonal selection).
pub fn post_select(
    state: &VectorBeamState,
    gamma: f64,
    extinction_ratio: f64,
) -> Result<PostSelection> {
    debug_assert!((0.0..=1e-2).contains(&extinction_ratio));
    let (sin_a, cos_a) = math::sincos(gamma / 2.0 - PI / 4.0);
    let grid = state.grid();

    let selected: Vec<Complex64> = state
        .h_component
        .amplitudes()
        .iter()
        .zip(state.v_component.amplitudes())
        .map(|(h, v)| sin_a * h + cos_a * v)
        .collect();
    let mut pointer = AngularWavefunction::from_samples(grid, selected)?;

    let probability = pointer.total_intensity();
    if probability <= PROBABILITY_FLOOR {
        return Err(CoreError::PostSelectionSingular { probability });
    }
    pointer.renormalize();

    let leakage_intensity = (extinction_ratio > 0.0).then(|| {
        state
            .h_component
            .amplitudes()
            .iter()
            .zip(state.v_component.amplitudes())
            .map(|(h, v)| extinction_ratio * (cos_a * h - sin_a * v).norm_sqr())
            .collect()
    });

    Ok(PostSelection {
        pointer,
        probability,
        leakage_intensity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular::inner_product;

    use approx::assert_abs_diff_eq;

    fn slit_13_7() -> ModeParams {
        ModeParams::centered(math::deg_to_rad(13.7))
    }

    fn initial() -> VectorBeamState {
        prepare_initial(&slit_13_7(), AngularGrid::default()).unwrap()
    }

    #[test]
    fn initial_state_is_balanced_product() {
        let state = initial();
        assert_abs_diff_eq!(state.h_component().total_intensity(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(state.v_component().total_intensity(), 0.5, epsilon = 1e-12);
        assert_eq!(state.h_component(), state.v_component());
        let overlap = inner_product(state.h_component(), state.v_component()).unwrap();
        assert_abs_diff_eq!(overlap.re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(overlap.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn coupling_rejects_large_rotations() {
        assert!(DoveCoupling::new(0.3, 0.0).is_ok());
        assert!(matches!(
            DoveCoupling::new(PI / 8.0, 0.0),
            Err(CoreError::RotationOutOfRange { .. })
        ));
        assert!(matches!(
            DoveCoupling::new(-1.0, 0.0),
            Err(CoreError::RotationOutOfRange { .. })
        ));
    }

    #[test]
    fn dove_prism_rotates_arms_oppositely() {
        let delta_phi = math::deg_to_rad(1.2);
        let rotated = apply_dove_prism(&initial(), delta_phi);
        let c_h = rotated.h_component().centroid_phi().unwrap();
        let c_v = rotated.v_component().centroid_phi().unwrap();
        assert_abs_diff_eq!(c_h, delta_phi / 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(c_v, -delta_phi / 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(rotated.total_norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn dove_prism_preserves_arm_spectra() {
        let state = initial();
        let before: Vec<f64> = state
            .h_component()
            .oam_transform()
            .coefficients()
            .iter()
            .map(|a| a.norm_sqr())
            .collect();
        let rotated = apply_dove_prism(&state, 0.05);
        let after: Vec<f64> = rotated
            .h_component()
            .oam_transform()
            .coefficients()
            .iter()
            .map(|a| a.norm_sqr())
            .collect();
        let worst = before
            .iter()
            .zip(&after)
            .map(|(b, a)| math::abs(b - a))
            .fold(0.0, f64::max);
        assert!(worst < 1e-14, "rotation changed an arm spectrum by {worst}");
    }

    #[test]
    fn geometric_phase_is_opposite_on_the_arms() {
        let state = initial();
        let theta = math::deg_to_rad(10.0);
        let phased = apply_geometric_phase(&state, theta);
        // <h_after | h_before> picks up e^{+i theta/2} on H, the conjugate
        // on V.
        let h_phase = inner_product(phased.h_component(), state.h_component())
            .unwrap()
            .arg();
        let v_phase = inner_product(phased.v_component(), state.v_component())
            .unwrap()
            .arg();
        assert_abs_diff_eq!(h_phase, theta / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v_phase, -theta / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(phased.total_norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn evolution_preserves_total_norm() {
        let coupling = DoveCoupling::new(math::deg_to_rad(1.6), math::deg_to_rad(10.0)).unwrap();
        let evolved = evolve(&initial(), &coupling);
        assert_abs_diff_eq!(evolved.total_norm(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn projective_selection_keeps_the_v_arm() {
        let coupling = DoveCoupling::new(math::deg_to_rad(1.2), 0.0).unwrap();
        let evolved = evolve(&initial(), &coupling);
        let selected = post_select(&evolved, PI / 2.0, 0.0).unwrap();
        assert_abs_diff_eq!(selected.probability, 0.5, epsilon = 1e-12);
        // Pointer is the renormalized V arm: a clean Gaussian rotated by
        // -delta_phi/2.
        let centroid = selected.pointer.centroid_phi().unwrap();
        assert_abs_diff_eq!(centroid, -math::deg_to_rad(0.6), epsilon = 1e-9);
        assert_abs_diff_eq!(selected.pointer.total_intensity(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn weak_selection_amplifies_the_rotation() {
        // delta_phi = 1.2 deg, theta = 0, gamma = 0.1: survival probability
        // (1 - cos(gamma) O)/2 with O = exp(-(delta_phi/2)^2 / eta^2), and
        // a pointer centroid far beyond the bare +-0.6 deg arm rotations.
        let delta_phi = math::deg_to_rad(1.2);
        let eta = math::deg_to_rad(13.7);
        let gamma = 0.1;
        let coupling = DoveCoupling::new(delta_phi, 0.0).unwrap();
        let evolved = evolve(&initial(), &coupling);
        let selected = post_select(&evolved, gamma, 0.0).unwrap();

        let d = delta_phi / 2.0;
        let overlap = math::exp(-d * d / (eta * eta));
        let expected_p = (1.0 - math::cos(gamma) * overlap) / 2.0;
        assert_abs_diff_eq!(selected.probability, expected_p, epsilon = 1e-12);
        assert_abs_diff_eq!(selected.probability, 3.4512e-3, epsilon = 1e-7);

        let centroid = selected.pointer.centroid_phi().unwrap();
        assert_abs_diff_eq!(centroid, -0.1514605, epsilon = 2e-5);
    }

    #[test]
    fn exactly_orthogonal_selection_is_singular() {
        let coupling = DoveCoupling::new(0.0, 0.0).unwrap();
        let evolved = evolve(&initial(), &coupling);
        assert!(matches!(
            post_select(&evolved, 0.0, 0.0),
            Err(CoreError::PostSelectionSingular { .. })
        ));
    }

    #[test]
    fn exchange_symmetry_mirrors_the_centroid() {
        let delta_phi = math::deg_to_rad(1.2);
        let gamma = 0.1;
        let forward = evolve(&initial(), &DoveCoupling::new(delta_phi, 0.0).unwrap());
        let c_forward = post_select(&forward, gamma, 0.0)
            .unwrap()
            .pointer
            .centroid_phi()
            .unwrap();

        let mirrored_raw = evolve(&initial(), &DoveCoupling::new(-delta_phi, 0.0).unwrap());
        let mirrored = VectorBeamState::from_components(
            mirrored_raw.v_component().clone(),
            mirrored_raw.h_component().clone(),
        )
        .unwrap();
        let c_mirrored = post_select(&mirrored, -gamma, 0.0)
            .unwrap()
            .pointer
            .centroid_phi()
            .unwrap();

        assert_abs_diff_eq!(c_mirrored, -c_forward, epsilon = 1e-12);
    }

    #[test]
    fn real_weak_value_leaves_no_oam_shift() {
        let coupling = DoveCoupling::new(math::deg_to_rad(1.2), 0.0).unwrap();
        let evolved = evolve(&initial(), &coupling);
        let selected = post_select(&evolved, 0.1, 0.0).unwrap();
        let ell_centroid = selected.pointer.oam_transform().centroid_ell();
        assert!(
            math::abs(ell_centroid) < 1e-6,
            "theta = 0 produced OAM shift {ell_centroid}"
        );
        // The pointer is real up to a global phase.
        let amplitudes = selected.pointer.amplitudes();
        let peak = amplitudes
            .iter()
            .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
            .unwrap();
        let dephase = peak.conj() / peak.norm();
        let worst_imag = amplitudes
            .iter()
            .map(|a| math::abs((a * dephase).im))
            .fold(0.0, f64::max);
        assert!(worst_imag < 1e-9, "residual imaginary part {worst_imag}");
    }

    #[test]
    fn leakage_accounts_for_the_rejected_intensity() {
        let coupling = DoveCoupling::new(math::deg_to_rad(1.2), 0.0).unwrap();
        let evolved = evolve(&initial(), &coupling);
        let eps = 1e-4;
        let selected = post_select(&evolved, 0.1, eps).unwrap();
        let leak = selected.leakage_intensity.as_ref().unwrap();
        assert!(leak.iter().all(|&x| x >= 0.0));
        let total: f64 = leak.iter().sum::<f64>() * evolved.grid().spacing();
        // Selected and rejected powers partition the total intensity.
        let expected = eps * (1.0 - selected.probability);
        assert_abs_diff_eq!(total, expected, epsilon = 1e-12);

        let ideal = post_select(&evolved, 0.1, 0.0).unwrap();
        assert!(ideal.leakage_intensity.is_none());
    }
}
