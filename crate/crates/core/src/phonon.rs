//! Flexural phonon modes of the nanofiber in the low-frequency limit.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::config::{sound_speed, GeometryParams, MaterialParams};
use crate::consts::{HBAR, KB};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PhononKind {
    /// Standing wave of a fiber segment of length L with index m >= 1.
    Cavity { m: u32 },
    /// Traveling wave with axial propagation constant p (rad/m).
    Traveling { p: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhononMode {
    pub kind: PhononKind,
    /// Azimuthal order, ±1.
    pub j: i8,
    pub omega: f64,
    pub kappa: f64,
    pub nbar: f64,
}

/// `m² π² R v / (2 L²)`.
pub fn cavity_frequency(m: u32, geometry: &GeometryParams, material: &MaterialParams) -> f64 {
    let m = m as f64;
    let l = geometry.length;
    m * m * PI * PI * geometry.radius * sound_speed(material) / (2.0 * l * l)
}

/// Largest `p R` for which the quadratic dispersion is trusted.
pub const LOW_FREQUENCY_LIMIT: f64 = 0.2;

/// `v R p² / 2`, with a flag that is false once `p R` leaves the
/// low-frequency regime.
pub fn traveling_dispersion(p: f64, geometry: &GeometryParams, material: &MaterialParams) -> (f64, bool) {
    let r = geometry.radius;
    (0.5 * sound_speed(material) * r * p * p, libm::fabs(p * r) < LOW_FREQUENCY_LIMIT)
}

/// Density of states `|dω/dp|⁻¹ = 1/(v R p)`.
pub fn density_of_states(p: f64, geometry: &GeometryParams, material: &MaterialParams) -> f64 {
    1.0 / (sound_speed(material) * geometry.radius * libm::fabs(p))
}

/// Radial partial wave of the displacement field, `(1/R, i j/R, -i p r/R)`.
pub fn displacement_partial_wave(mode: &PhononMode, r: f64, geometry: &GeometryParams) -> [Complex64; 3] {
    let rr = geometry.radius;
    let p = match mode.kind {
        PhononKind::Cavity { m } => m as f64 * PI / geometry.length,
        PhononKind::Traveling { p } => p,
    };
    [
        Complex64::new(1.0 / rr, 0.0),
        Complex64::new(0.0, mode.j as f64 / rr),
        Complex64::new(0.0, -p * r / rr),
    ]
}

/// Bose–Einstein occupation.
pub fn thermal_population(omega: f64, temperature: f64) -> f64 {
    1.0 / libm::expm1(HBAR * omega / (KB * temperature))
}

/// High-temperature occupation `k_B T / ħω`.
pub fn thermal_population_classical(omega: f64, temperature: f64) -> f64 {
    KB * temperature / (HBAR * omega)
}

pub fn cavity_mode(m: u32, j: i8, geometry: &GeometryParams, material: &MaterialParams) -> PhononMode {
    let omega = cavity_frequency(m, geometry, material);
    PhononMode {
        kind: PhononKind::Cavity { m },
        j,
        omega,
        kappa: omega / geometry.quality_factor,
        nbar: thermal_population(omega, geometry.temperature),
    }
}

/// Cavity modes `m = 1..=m_max`, each with both azimuthal orders.
pub fn cavity_catalog(m_max: u32, geometry: &GeometryParams, material: &MaterialParams) -> Vec<PhononMode> {
    let mut out = Vec::with_capacity(2 * m_max as usize);
    for m in 1..=m_max {
        for j in [-1i8, 1] {
            out.push(cavity_mode(m, j, geometry, material));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Params;
    use crate::consts::TWO_PI;

    #[test]
    fn fundamental_cavity_mode() {
        let p = Params::default();
        let w = cavity_frequency(1, &p.geometry, &p.material);
        assert!((w / TWO_PI / 55.0e6 - 1.0).abs() < 5e-3, "{}", w / TWO_PI);
        assert!((cavity_frequency(2, &p.geometry, &p.material) / w - 4.0).abs() < 1e-14);
    }

    #[test]
    fn traveling_matches_cavity() {
        let p = Params::default();
        let q = PI / p.geometry.length;
        let (w, ok) = traveling_dispersion(q, &p.geometry, &p.material);
        assert!(ok);
        assert!((w / cavity_frequency(1, &p.geometry, &p.material) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn density_of_states_matches_finite_difference() {
        let p = Params::default();
        let q = 3e5;
        let h = 1.0;
        let dw = (traveling_dispersion(q + h, &p.geometry, &p.material).0
            - traveling_dispersion(q - h, &p.geometry, &p.material).0)
            / (2.0 * h);
        assert!((density_of_states(q, &p.geometry, &p.material) * dw - 1.0).abs() < 1e-9);
    }

    #[test]
    fn partial_wave_shape() {
        let p = Params::default();
        let m = cavity_mode(1, 1, &p.geometry, &p.material);
        let w = displacement_partial_wave(&m, p.geometry.radius, &p.geometry);
        assert_eq!(w[0].re, 1.0 / p.geometry.radius);
        assert_eq!(displacement_partial_wave(&m, 0.0, &p.geometry)[2].norm(), 0.0);
        // leading order in pR: ∫ r (|W_r|² + |W_phi|²) dr = (1 + j²)/2
        let rr = p.geometry.radius;
        let lead = (w[0].norm_sqr() + w[1].norm_sqr()) * rr * rr / 2.0;
        assert!((lead - 1.0).abs() < 1e-12);
    }

    #[test]
    fn occupation() {
        let w = TWO_PI * 55e6;
        let n = thermal_population(w, 420.0);
        assert!((n / 1.59e5 - 1.0).abs() < 5e-3, "{n}");
        assert!((thermal_population_classical(w, 420.0) / n - 1.0).abs() < 1e-5);
        let w1 = KB * 300.0 * core::f64::consts::LN_2 / HBAR;
        assert!((thermal_population(w1, 300.0) - 1.0).abs() < 1e-12);
    }
}
