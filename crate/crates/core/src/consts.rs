//! Physical constants (SI, CODATA 2018) and unit helpers.

use core::f64::consts::PI;

pub const HBAR: f64 = 1.054_571_817e-34;
pub const PLANCK: f64 = 6.626_070_15e-34;
pub const KB: f64 = 1.380_649e-23;
pub const C: f64 = 299_792_458.0;
pub const EPS0: f64 = 8.854_187_812_8e-12;
pub const MU0: f64 = 1.256_637_062_12e-6;
/// Atomic unit of electric polarizability in C·m²/V.
pub const AU_POLARIZABILITY: f64 = 1.648_777_274_36e-41;
pub const TWO_PI: f64 = 2.0 * PI;

/// Frequency in Hz to angular frequency.
#[inline]
pub fn hz(f: f64) -> f64 {
    TWO_PI * f
}

#[inline]
pub fn khz(f: f64) -> f64 {
    TWO_PI * f * 1e3
}

#[inline]
pub fn mhz(f: f64) -> f64 {
    TWO_PI * f * 1e6
}

#[inline]
pub fn thz(f: f64) -> f64 {
    TWO_PI * f * 1e12
}

/// Angular frequency back to ordinary frequency in Hz.
#[inline]
pub fn to_hz(omega: f64) -> f64 {
    omega / TWO_PI
}

/// Vacuum angular frequency of light with the given wavelength.
#[inline]
pub fn optical_omega(wavelength: f64) -> f64 {
    TWO_PI * C / wavelength
}
