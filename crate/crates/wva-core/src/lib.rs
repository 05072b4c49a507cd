//! Wave-optics simulation of weak-value amplification (WVA) for angular
//! rotations.
//!
//! A beam in a Gaussian-apodized angular mode is split into two
//! counter-propagating arms of a polarized Sagnac interferometer. A Dove
//! prism rotates the arms in opposite directions by a small angle, a
//! waveplate stack adds a polarization-dependent geometric phase, and the
//! recombined beam is post-selected on a polarization state nearly
//! orthogonal to the input. The surviving angular pointer acquires a
//! centroid rotation proportional to the real part of the polarization weak
//! value and an orbital-angular-momentum (OAM) shift proportional to the
//! imaginary part, both amplified well beyond the physical rotation.
//!
//! The crate is organized in layers:
//!
//! - [`angular`]: periodic angular grid, wavefunctions, OAM transforms,
//!   circular centroids and widths.
//! - [`polarization`]: Jones vectors, waveplates, geometric-phase stack,
//!   post-selection projectors.
//! - [`sagnac`]: exact evolution of the two-arm vector beam and
//!   post-selection onto the pointer mode.
//! - [`weak_value`]: closed-form weak values (exact and small-angle) and
//!   first-order pointer-shift predictions.
//! - [`measurement`]: projective OAM spectroscopy with Poisson photon
//!   counting and weighted least-squares Gaussian fitting, plus
//!   angular-intensity profiles.
//!
//! `no_std` compatible (requires `alloc`); all math goes through `libm`.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

pub mod angular;
pub mod error;
pub mod fft;
pub mod math;
pub mod measurement;
pub mod polarization;
pub mod sagnac;
pub mod weak_value;

pub use error::{CoreError, Result};
pub use num_complex::Complex64;
