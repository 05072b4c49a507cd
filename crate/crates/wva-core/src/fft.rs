//! In-place radix-2 FFT used by the OAM transforms.
//!
//! Grid sizes are powers of two by construction (see
//! [`crate::angular::AngularGrid`]), so a plain Cooley-Tukey
//! decimation-in-time kernel covers every case. Twiddle factors come from
//! `libm::sincos` per stage rather than a recurrence, keeping rounding error
//! at the few-ulp level even for 4096-point transforms.
//!
//! Conventions: [`forward`] computes `X_k = sum_j x_j e^{-2 pi i j k / N}`
//! (unscaled); [`inverse`] applies the opposite sign and the `1/N` factor,
//! so `inverse(forward(x)) == x` up to rounding.

use num_complex::Complex64;

/// Unscaled forward DFT, `e^{-2 pi i j k / N}` convention.
///
/// Panics if the length is not a power of two.
pub fn forward(data: &mut [Complex64]) {
    radix2(data, -1.0);
}

/// Inverse DFT including the `1/N` normalization.
///
/// Panics if the length is not a power of two.
pub fn inverse(data: &mut [Complex64]) {
    radix2(data, 1.0);
    let scale = 1.0 / data.len() as f64;
    for z in data.iter_mut() {
        *z *= scale;
    }
}

/// In-place bit-reversal permutation.
fn bit_reverse(data: &mut [Complex64]) {
    let n = data.len();
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = (i.reverse_bits() >> (usize::BITS - bits)) as usize;
        if i < j {
            data.swap(i, j);
        }
    }
}

/// Cooley-Tukey radix-2 DIT butterflies; `sign` is the exponent sign.
fn radix2(data: &mut [Complex64], sign: f64) {
    let n = data.len();
    assert!(n.is_power_of_two(), "FFT length {n} is not a power of two");
    if n <= 1 {
        return;
    }

    bit_reverse(data);

    let mut len = 2;
    while len <= n {
        let half = len / 2;
        for k in 0..half {
            let angle = sign * core::f64::consts::TAU * k as f64 / len as f64;
            let (s, c) = libm::sincos(angle);
            let w = Complex64::new(c, s);
            let mut start = 0;
            while start < n {
                let even = data[start + k];
                let odd = data[start + k + half] * w;
                data[start + k] = even + odd;
                data[start + k + half] = even - odd;
                start += len;
            }
        }
        len *= 2;
    }
}
