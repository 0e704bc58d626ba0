//! Atom–phonon overlaps, coupling rates and motional linewidths.
//!
//! Rates are angular frequencies (rad/s). Overlaps are stored divided by ħ,
//! so `A⁽¹⁾` is in rad/s per metre and `A⁽²⁾` in rad/s per square metre.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::config::{sound_speed, GeometryParams, MaterialParams};
use crate::consts::{HBAR, KB};
use crate::eigen::BoundSpectrum;
use crate::error::{Error, Result};
use crate::phonon::{cavity_frequency, cavity_mode, PhononMode};
use crate::potential::PotentialModel;

/// Largest `|ν″ − ν|` included in depopulation sums.
pub const NEIGHBOR_RANGE: usize = 5;

#[derive(Clone, Debug)]
pub struct OverlapTable {
    pub labels: Vec<usize>,
    pub omegas: Vec<f64>,
    a1: Vec<f64>,
    a2: Vec<f64>,
}

impl OverlapTable {
    /// `∫ψ_a ψ_b V′ dr` and `∫ψ_a ψ_b V″ dr` for every pair of states.
    pub fn compute(spectrum: &BoundSpectrum, potential: &PotentialModel) -> Result<Self> {
        spectrum.check_potential(potential)?;
        let x = spectrum.mesh.interior();
        let w = spectrum.weights();
        let n = spectrum.states.len();
        let jets: Vec<(f64, f64)> = x
            .iter()
            .zip(&w)
            .map(|(&xi, &wi)| {
                let j = potential.eval(xi);
                (wi * j.d1, wi * j.d2)
            })
            .collect();
        let mut a1 = vec![0.0; n * n];
        let mut a2 = vec![0.0; n * n];
        for a in 0..n {
            let pa = &spectrum.states[a].psi;
            for b in a..n {
                let pb = &spectrum.states[b].psi;
                let (mut s1, mut s2) = (0.0, 0.0);
                for i in 0..x.len() {
                    let p = pa[i] * pb[i];
                    s1 += p * jets[i].0;
                    s2 += p * jets[i].1;
                }
                a1[a * n + b] = s1;
                a1[b * n + a] = s1;
                a2[a * n + b] = s2;
                a2[b * n + a] = s2;
            }
        }
        Ok(OverlapTable {
            labels: spectrum.states.iter().map(|s| s.nu).collect(),
            omegas: spectrum.states.iter().map(|s| s.omega).collect(),
            a1,
            a2,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, nu: usize) -> Option<usize> {
        self.labels.iter().position(|&l| l == nu)
    }

    /// `A⁽¹⁾` between table positions `a` and `b`.
    pub fn a1(&self, a: usize, b: usize) -> f64 {
        self.a1[a * self.len() + b]
    }

    pub fn a2(&self, a: usize, b: usize) -> f64 {
        self.a2[a * self.len() + b]
    }

    /// `ω_b − ω_a`.
    pub fn transition(&self, a: usize, b: usize) -> f64 {
        self.omegas[b] - self.omegas[a]
    }
}

/// `|g| = √ħ A⁽¹⁾ / (√(2π ρ ω_μ L) R)`.
pub fn coupling_g(mode: &PhononMode, a1: f64, geometry: &GeometryParams, material: &MaterialParams) -> f64 {
    libm::sqrt(HBAR) * libm::fabs(a1)
        / (libm::sqrt(2.0 * PI * material.density * mode.omega * geometry.length) * geometry.radius)
}

/// `G_ν = ħ A⁽²⁾_νν / (2π ρ ω_μ L R²)`.
pub fn coupling_g_diag(mode: &PhononMode, a2: f64, geometry: &GeometryParams, material: &MaterialParams) -> f64 {
    HBAR * a2 / (2.0 * PI * material.density * mode.omega * geometry.length * geometry.radius * geometry.radius)
}

/// Differential coupling `(G_ν′ − G_ν) / 2`.
pub fn coupling_big_g(
    mode: &PhononMode,
    a2_nu: f64,
    a2_nu_prime: f64,
    geometry: &GeometryParams,
    material: &MaterialParams,
) -> f64 {
    0.5 * (coupling_g_diag(mode, a2_nu_prime, geometry, material) - coupling_g_diag(mode, a2_nu, geometry, material))
}

/// Sum of `f` over cavity modes with both azimuthal orders, extended by
/// octaves in `m` until the last octave adds less than 1%.
///
/// The sum always reaches past `omega_reach`. The flag is false if the
/// octave limit was hit first.
pub fn cavity_sum<F>(geometry: &GeometryParams, material: &MaterialParams, omega_reach: f64, f: F) -> (f64, bool)
where
    F: Fn(&PhononMode) -> f64,
{
    let term = |m: u32| f(&cavity_mode(m, -1, geometry, material)) + f(&cavity_mode(m, 1, geometry, material));
    let w1 = cavity_frequency(1, geometry, material);
    let mut m_max = 8u32;
    while (m_max as f64) * (m_max as f64) * w1 < 2.0 * omega_reach && m_max < 1 << 16 {
        m_max *= 2;
    }
    let mut total: f64 = (1..=m_max).map(term).sum();
    while m_max < 1 << 16 {
        let octave: f64 = (m_max + 1..=2 * m_max).map(term).sum();
        total += octave;
        m_max *= 2;
        if libm::fabs(octave) <= 0.01 * libm::fabs(total) {
            return (total, true);
        }
    }
    (total, false)
}

/// Rate with its convergence flags.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rate {
    pub value: f64,
    /// Mode sum converged within the octave budget.
    pub modes_converged: bool,
    /// All neighbours within `NEIGHBOR_RANGE` were present in the table.
    pub neighbors_complete: bool,
}

/// Cavity depopulation rate of the state at table position `a`:
/// `2 Σ_ν″ Σ_μ n̄ |g|² Re[K⁻ + K⁺]`.
pub fn depopulation_rate(
    table: &OverlapTable,
    a: usize,
    geometry: &GeometryParams,
    material: &MaterialParams,
) -> Rate {
    let nu = table.labels[a];
    let lo = nu.saturating_sub(NEIGHBOR_RANGE);
    let mut neighbors_complete = nu >= NEIGHBOR_RANGE;
    let mut modes_converged = true;
    let mut value = 0.0;
    for other in lo..=nu + NEIGHBOR_RANGE {
        if other == nu {
            continue;
        }
        let Some(b) = table.index_of(other) else {
            neighbors_complete = false;
            continue;
        };
        let w = libm::fabs(table.transition(a, b));
        let a1 = table.a1(a, b);
        let (s, ok) = cavity_sum(geometry, material, w, |mode| {
            let g = coupling_g(mode, a1, geometry, material);
            let half = 0.5 * mode.kappa;
            let k_minus = half / (half * half + (w - mode.omega) * (w - mode.omega));
            let k_plus = half / (half * half + (w + mode.omega) * (w + mode.omega));
            mode.nbar * g * g * (k_minus + k_plus)
        });
        modes_converged &= ok;
        value += 2.0 * s;
    }
    Rate { value, modes_converged, neighbors_complete }
}

/// Elastic two-phonon dephasing `8 Σ_μ n̄(n̄+1) G²/κ` of the pair `(a, b)`.
pub fn dephasing_broadening(
    table: &OverlapTable,
    a: usize,
    b: usize,
    geometry: &GeometryParams,
    material: &MaterialParams,
) -> Rate {
    let (a2a, a2b) = (table.a2(a, a), table.a2(b, b));
    let (value, modes_converged) = cavity_sum(geometry, material, 0.0, |mode| {
        let g = coupling_big_g(mode, a2a, a2b, geometry, material);
        8.0 * mode.nbar * (mode.nbar + 1.0) * g * g / mode.kappa
    });
    Rate { value, modes_converged, neighbors_complete: true }
}

/// Fundamental-mode approximation `16 n̄² G₁² Q / ω₁`.
pub fn dephasing_fundamental(
    table: &OverlapTable,
    a: usize,
    b: usize,
    geometry: &GeometryParams,
    material: &MaterialParams,
) -> f64 {
    let mode = cavity_mode(1, 1, geometry, material);
    let g = coupling_big_g(&mode, table.a2(a, a), table.a2(b, b), geometry, material);
    16.0 * mode.nbar * mode.nbar * g * g * geometry.quality_factor / mode.omega
}

/// Depopulation through one transition when the fundamental cavity mode is
/// far above it: `4 n̄ |g₁|² / (ω₁ Q)`.
pub fn depopulation_small_cavity(a1: f64, geometry: &GeometryParams, material: &MaterialParams) -> f64 {
    let mode = cavity_mode(1, 1, geometry, material);
    let g = coupling_g(&mode, a1, geometry, material);
    4.0 * mode.nbar * g * g / (mode.omega * geometry.quality_factor)
}

/// `16/π⁷ · k_B T L⁵ (ħA⁽¹⁾)² / (ħ² R⁵ Q) · √(ρ/E³)`, the high-temperature
/// form of [`depopulation_small_cavity`].
pub fn depopulation_closed_form(a1: f64, geometry: &GeometryParams, material: &MaterialParams) -> f64 {
    let (l, r) = (geometry.length, geometry.radius);
    16.0 / libm::pow(PI, 7.0) * KB * geometry.temperature * libm::pow(l, 5.0) * a1 * a1 / (libm::pow(r, 5.0) * geometry.quality_factor)
        * libm::sqrt(material.density / libm::pow(material.young_modulus, 3.0))
}

/// `32/π¹² · k_B² T² L⁸ Q (ħΔA⁽²⁾)² / (ħ² R⁹) · ρ^{1/2}/E^{5/2}` with
/// `ΔA⁽²⁾ = A⁽²⁾_ν′ν′ − A⁽²⁾_νν`.
pub fn dephasing_closed_form(delta_a2: f64, geometry: &GeometryParams, material: &MaterialParams) -> f64 {
    let (l, r) = (geometry.length, geometry.radius);
    let kt = KB * geometry.temperature;
    let v = sound_speed(material);
    32.0 / libm::pow(PI, 12.0) * kt * kt * libm::pow(l, 8.0) * geometry.quality_factor * delta_a2 * delta_a2
        / (material.density * material.density * libm::pow(r, 9.0) * libm::pow(v, 5.0))
}

/// Thermal frequency shift `Σ_μ G n̄` of the pair, reported but never applied.
pub fn frequency_shift(
    table: &OverlapTable,
    a: usize,
    b: usize,
    geometry: &GeometryParams,
    material: &MaterialParams,
) -> f64 {
    let (a2a, a2b) = (table.a2(a, a), table.a2(b, b));
    cavity_sum(geometry, material, 0.0, |mode| coupling_big_g(mode, a2a, a2b, geometry, material) * mode.nbar).0
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinewidthRecord {
    pub nu: usize,
    pub nu_prime: usize,
    /// `ω_ν′ − ω_ν`.
    pub omega: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma: f64,
    pub modes_converged: bool,
    pub neighbors_complete: bool,
}

/// `Γ = Γ⁽¹⁾ + Γ⁽²⁾` with `Γ⁽¹⁾ = Γ^d_ν + Γ^d_ν′`.
pub fn total_linewidth(
    table: &OverlapTable,
    a: usize,
    b: usize,
    geometry: &GeometryParams,
    material: &MaterialParams,
) -> LinewidthRecord {
    let (lo, hi) = if table.labels[a] <= table.labels[b] { (a, b) } else { (b, a) };
    let da = depopulation_rate(table, lo, geometry, material);
    let db = depopulation_rate(table, hi, geometry, material);
    let dep = dephasing_broadening(table, lo, hi, geometry, material);
    let gamma1 = da.value + db.value;
    LinewidthRecord {
        nu: table.labels[lo],
        nu_prime: table.labels[hi],
        omega: table.transition(lo, hi),
        gamma1,
        gamma2: dep.value,
        gamma: gamma1 + dep.value,
        modes_converged: da.modes_converged && db.modes_converged && dep.modes_converged,
        neighbors_complete: da.neighbors_complete && db.neighbors_complete,
    }
}

/// Records for all nearest-neighbour pairs in the table.
pub fn nearest_neighbor_linewidths(
    table: &OverlapTable,
    geometry: &GeometryParams,
    material: &MaterialParams,
) -> Vec<LinewidthRecord> {
    let mut out = Vec::new();
    for a in 0..table.len() {
        if let Some(b) = table.index_of(table.labels[a] + 1) {
            out.push(total_linewidth(table, a, b, geometry, material));
        }
    }
    out
}

/// Steady-state upper-level population of a weakly driven two-level system
/// with decay `Γ⁻`, thermal excitation `Γ⁺` and pure dephasing `Γᶻ`.
pub fn driven_population(detuning: f64, rabi: f64, gamma_minus: f64, gamma_plus: f64, gamma_z: f64) -> Result<f64> {
    let sum = gamma_minus + gamma_plus;
    if !(sum > 0.0) {
        return Err(Error::DegenerateBath);
    }
    let width = sum + 4.0 * gamma_z;
    let half = 0.5 * width;
    Ok(rabi * rabi / (2.0 * sum) * half / (detuning * detuning + half * half) + gamma_plus / sum)
}

fn trap_prefactor(geometry: &GeometryParams, material: &MaterialParams) -> f64 {
    let r = geometry.radius;
    let stiffness = libm::sqrt(libm::pow(r, 5.0) * libm::sqrt(material.young_modulus * libm::pow(material.density, 3.0)));
    KB * geometry.temperature / (libm::sqrt(2.0) * PI * stiffness)
}

/// Depopulation into the traveling-phonon continuum of a long fiber,
/// `k_B T/(√2 π ħ² √(R⁵√(Eρ³))) Σ |ħA⁽¹⁾|²/|ω|^{5/2}`, for every state in the
/// table.
pub fn trap_depopulation_numeric(table: &OverlapTable, geometry: &GeometryParams, material: &MaterialParams) -> Vec<f64> {
    let pre = trap_prefactor(geometry, material);
    (0..table.len())
        .map(|a| {
            let s: f64 = (0..table.len())
                .filter(|&b| b != a)
                .map(|b| {
                    let a1 = table.a1(a, b);
                    a1 * a1 / libm::pow(libm::fabs(table.transition(a, b)), 2.5)
                })
                .sum();
            pre * s
        })
        .collect()
}

/// Harmonic-trap limit `(2ν+1)/(2√2 π) · k_B T M/ħ · √(ω_r/(R⁵√(Eρ³)))`.
pub fn trap_depopulation_harmonic(
    nu: usize,
    omega_r: f64,
    mass: f64,
    geometry: &GeometryParams,
    material: &MaterialParams,
) -> f64 {
    let r = geometry.radius;
    let stiffness = libm::pow(r, 5.0) * libm::sqrt(material.young_modulus * libm::pow(material.density, 3.0));
    (2 * nu + 1) as f64 / (2.0 * libm::sqrt(2.0) * PI) * KB * geometry.temperature * mass / HBAR
        * libm::sqrt(omega_r / stiffness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Params;

    #[test]
    fn driven_population_limits() {
        let (gm, gp, gz) = (3.0, 1.0, 0.5);
        let bg = driven_population(1e9, 0.1, gm, gp, gz).unwrap();
        assert!((bg - 0.25).abs() < 1e-12);
        let width = gm + gp + 4.0 * gz;
        let peak = driven_population(0.0, 0.1, gm, gp, gz).unwrap() - 0.25;
        let half = driven_population(0.5 * width, 0.1, gm, gp, gz).unwrap() - 0.25;
        assert!((half / peak - 0.5).abs() < 1e-12);
        // Γᶻ = 0 and Γ⁺ = Γ⁻: peak Ω²/(2·2Γ) · 2/(2Γ)
        let g = 2.0;
        let p = driven_population(0.0, 0.1, g, g, 0.0).unwrap() - 0.5;
        assert!((p - 0.01 / (4.0 * g) / g).abs() < 1e-15);
        assert!(matches!(driven_population(0.0, 0.1, 0.0, 0.0, 1.0), Err(Error::DegenerateBath)));
    }

    #[test]
    fn couplings_scale() {
        let p = Params::default();
        let m1 = cavity_mode(1, 1, &p.geometry, &p.material);
        let m2 = cavity_mode(2, 1, &p.geometry, &p.material);
        let r = coupling_g(&m1, 1.0, &p.geometry, &p.material) / coupling_g(&m2, 1.0, &p.geometry, &p.material);
        assert!((r - 2.0).abs() < 1e-12);
        assert_eq!(coupling_big_g(&m1, 3.0, 3.0, &p.geometry, &p.material), 0.0);
        let gb = coupling_big_g(&m1, 0.0, 1.0, &p.geometry, &p.material) / coupling_big_g(&m2, 0.0, 1.0, &p.geometry, &p.material);
        assert!((gb - 4.0).abs() < 1e-12);
    }

    #[test]
    fn closed_forms_follow_the_mode_formulas() {
        let p = Params::default();
        let a1 = 1e15;
        let s = depopulation_small_cavity(a1, &p.geometry, &p.material);
        let c = depopulation_closed_form(a1, &p.geometry, &p.material);
        assert!((s / c - 1.0).abs() < 1e-4, "{s} {c}");
        let mode = cavity_mode(1, 1, &p.geometry, &p.material);
        let g = coupling_big_g(&mode, 0.0, 1e20, &p.geometry, &p.material);
        let n = crate::phonon::thermal_population_classical(mode.omega, p.geometry.temperature);
        let f = 16.0 * n * n * g * g * p.geometry.quality_factor / mode.omega;
        let c2 = dephasing_closed_form(1e20, &p.geometry, &p.material);
        assert!((f / c2 - 1.0).abs() < 1e-10, "{f} {c2}");
    }

    #[test]
    fn harmonic_rate_scalings() {
        let p = Params::default();
        let g0 = trap_depopulation_harmonic(0, 1e6, 2.2e-25, &p.geometry, &p.material);
        let g3 = trap_depopulation_harmonic(3, 1e6, 2.2e-25, &p.geometry, &p.material);
        let g0q = trap_depopulation_harmonic(0, 4e6, 2.2e-25, &p.geometry, &p.material);
        assert!((g3 / g0 - 7.0).abs() < 1e-12);
        assert!((g0q / g0 - 2.0).abs() < 1e-12);
    }
}
