//! Franck–Condon factors and the heterodyne sideband spectrum.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::config::BeamParams;
use crate::consts::{EPS0, HBAR};
use crate::eigen::BoundSpectrum;
use crate::error::{Error, Result};
use crate::linewidth::LinewidthRecord;
use crate::potential::OpticalTerm;

/// `E_s E_p/(2π)² · 𝓔*_s·𝓔_p` with the scattered mode taken equal to the
/// probe mode.
#[derive(Clone, Copy, Debug)]
pub struct FieldProduct {
    pub term: OpticalTerm,
    pub prefactor: f64,
}

impl FieldProduct {
    pub fn probe(beam: &BeamParams, radius: f64, permittivity: f64) -> Result<Self> {
        let term = OpticalTerm::new(beam, radius, permittivity, 0.0)?;
        let e2 = HBAR * EPS0 * term.mode.omega / 2.0;
        Ok(FieldProduct { term, prefactor: e2 / (4.0 * PI * PI) })
    }

    pub fn value(&self, x: f64) -> f64 {
        self.prefactor * self.term.mode_intensity(x)
    }
}

/// Real, symmetric Franck–Condon matrix over the states of one spectrum.
#[derive(Clone, Debug)]
pub struct FcTable {
    pub labels: Vec<usize>,
    pub omegas: Vec<f64>,
    values: Vec<f64>,
}

impl FcTable {
    pub fn compute(spectrum: &BoundSpectrum, probe: &FieldProduct) -> Self {
        let x = spectrum.mesh.interior();
        let fw: Vec<f64> = x.iter().zip(spectrum.weights()).map(|(&xi, w)| w * probe.value(xi)).collect();
        let n = spectrum.states.len();
        let mut values = vec![0.0; n * n];
        for a in 0..n {
            for b in a..n {
                let (pa, pb) = (&spectrum.states[a].psi, &spectrum.states[b].psi);
                let s: f64 = (0..x.len()).map(|i| pa[i] * pb[i] * fw[i]).sum();
                values[a * n + b] = s;
                values[b * n + a] = s;
            }
        }
        FcTable {
            labels: spectrum.states.iter().map(|s| s.nu).collect(),
            omegas: spectrum.states.iter().map(|s| s.omega).collect(),
            values,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.values[a * self.len() + b]
    }

    /// `F_{ν′ν}` by label.
    pub fn by_label(&self, nu_prime: usize, nu: usize) -> Option<f64> {
        let a = self.labels.iter().position(|&l| l == nu_prime)?;
        let b = self.labels.iter().position(|&l| l == nu)?;
        Some(self.get(a, b))
    }
}

/// Normalization taken from the two-color trap's 1→0 anti-Stokes sideband.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Reference {
    /// `n(1)|F₀₁|²` with unit occupation.
    pub weight: f64,
    /// FWHM of the 1→0 line, rad/s.
    pub width: f64,
}

impl Reference {
    /// Peak spectral density of the reference line.
    pub fn peak(&self) -> f64 {
        2.0 * self.weight / (PI * self.width)
    }
}

/// Reference line from the trap's Franck–Condon table and its per-state
/// depopulation rates (indexed like the table).
pub fn reference_power(trap_fc: &FcTable, trap_rates: &[f64]) -> Result<Reference> {
    let f = trap_fc.by_label(1, 0).ok_or(Error::NoTrap)?;
    let i0 = trap_fc.labels.iter().position(|&l| l == 0).ok_or(Error::NoTrap)?;
    let i1 = trap_fc.labels.iter().position(|&l| l == 1).ok_or(Error::NoTrap)?;
    let width = trap_rates[i0] + trap_rates[i1];
    if !(width > 0.0) || f == 0.0 {
        return Err(Error::NoTrap);
    }
    Ok(Reference { weight: f * f, width })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumLine {
    /// Initial state.
    pub nu: usize,
    /// Final state.
    pub nu_prime: usize,
    /// Sideband offset `ω_ν − ω_ν′`, positive for anti-Stokes lines.
    pub center: f64,
    pub width: f64,
    /// `n(ν)|F|²`.
    pub weight: f64,
    /// Weight over the reference weight.
    pub weight_rel: f64,
    /// Peak height over the reference peak height.
    pub peak_rel: f64,
}

impl SpectrumLine {
    pub fn is_anti_stokes(&self) -> bool {
        self.center > 0.0
    }

    /// Contribution to `P(ω)/P₀`.
    pub fn density(&self, omega: f64, reference: &Reference) -> f64 {
        let half = 0.5 * self.width;
        let d = omega - self.center;
        self.weight * half / (d * d + half * half) * reference.width / (2.0 * reference.weight)
    }
}

/// Both sidebands of every linewidth record, with equal occupation for all
/// states of the table.
pub fn spectrum_lines(fc: &FcTable, records: &[LinewidthRecord], reference: &Reference) -> Vec<SpectrumLine> {
    let mut out = Vec::with_capacity(2 * records.len());
    for r in records {
        let Some(f) = fc.by_label(r.nu_prime, r.nu) else { continue };
        if !(r.gamma > 0.0) {
            continue;
        }
        let weight = f * f;
        let weight_rel = weight / reference.weight;
        let peak_rel = weight_rel * reference.width / r.gamma;
        // ν′ → ν releases ω_ν′ − ω_ν into the scattered light
        out.push(SpectrumLine { nu: r.nu_prime, nu_prime: r.nu, center: r.omega, width: r.gamma, weight, weight_rel, peak_rel });
        out.push(SpectrumLine { nu: r.nu, nu_prime: r.nu_prime, center: -r.omega, width: r.gamma, weight, weight_rel, peak_rel });
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumGrid {
    pub omega: Vec<f64>,
    /// `P(ω)/P₀`.
    pub density: Vec<f64>,
}

/// Default sample count.
pub const GRID_SAMPLES: usize = 2048;
const MAX_SAMPLES: usize = 1 << 20;

/// Samples `P(ω)/P₀` on `window` with at least [`GRID_SAMPLES`] points and
/// eight points per width of the narrowest line near the window.
pub fn assemble_spectrum(lines: &[SpectrumLine], reference: &Reference, window: (f64, f64)) -> Result<SpectrumGrid> {
    let (lo, hi) = window;
    if !(hi > lo) {
        return Err(Error::Domain("spectrum window must satisfy lo < hi"));
    }
    let min_width = lines
        .iter()
        .filter(|l| l.center + 5.0 * l.width >= lo && l.center - 5.0 * l.width <= hi)
        .map(|l| l.width)
        .fold(f64::INFINITY, f64::min);
    let mut n = GRID_SAMPLES;
    if min_width.is_finite() {
        let need = libm::ceil(8.0 * (hi - lo) / min_width) as usize + 1;
        n = n.max(need).min(MAX_SAMPLES);
    }
    let omega: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let density = omega.iter().map(|&w| lines.iter().map(|l| l.density(w, reference)).sum()).collect();
    Ok(SpectrumGrid { omega, density })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(center: f64, width: f64, weight: f64) -> SpectrumLine {
        SpectrumLine { nu: 1, nu_prime: 0, center, width, weight, weight_rel: weight, peak_rel: weight / width }
    }

    #[test]
    fn reference_line_has_unit_peak() {
        let r = Reference { weight: 2.0, width: 10.0 };
        let l = line(100.0, 10.0, 2.0);
        assert!((l.density(100.0, &r) - 1.0).abs() < 1e-15);
        assert!((l.density(105.0, &r) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn area_independent_of_width() {
        let r = Reference { weight: 1.0, width: 1.0 };
        let area = |w: f64| {
            let g = assemble_spectrum(&[line(0.0, w, 1.0)], &r, (-2e4, 2e4)).unwrap();
            let dw = g.omega[1] - g.omega[0];
            g.density.iter().sum::<f64>() * dw
        };
        let (a1, a2) = (area(2.0), area(8.0));
        assert!((a1 / a2 - 1.0).abs() < 2e-3, "{a1} {a2}");
    }

    #[test]
    fn grid_is_a_superposition() {
        let r = Reference { weight: 1.0, width: 3.0 };
        let ls = [line(10.0, 2.0, 1.0), line(20.0, 4.0, 0.5)];
        let both = assemble_spectrum(&ls, &r, (0.0, 30.0)).unwrap();
        let one = assemble_spectrum(&ls[..1], &r, (0.0, 30.0)).unwrap();
        for i in 0..both.omega.len() {
            let d = both.density[i] - one.density[i] - ls[1].density(both.omega[i], &r);
            assert!(d.abs() < 1e-12);
        }
        assert!(both.omega.len() >= GRID_SAMPLES);
        assert!(both.omega.len() >= 8 * 30 / 2);
    }
}
