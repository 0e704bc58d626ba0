//! Material, atom, geometry and beam parameters.
//!
//! Everything is stored in SI units with energies expressed as angular
//! frequencies (energy divided by ħ). The flat `key = value` text form uses
//! the units spelled out in each key name.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::consts::{optical_omega, thz, AU_POLARIZABILITY, TWO_PI};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaterialParams {
    /// kg/m³
    pub density: f64,
    /// Pa
    pub young_modulus: f64,
    pub permittivity: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AtomParams {
    /// kg
    pub mass: f64,
    /// van der Waals coefficient C/ħ in rad/s·m³.
    pub c3: f64,
    /// Depth of the adsorption minimum in rad/s (negative).
    pub v_min: f64,
    /// Repulsive amplitude D/ħ in rad/s·m¹².
    pub d12: f64,
    /// Optical transition angular frequency.
    pub transition_omega: f64,
    /// Natural linewidth of the optical transition, rad/s.
    pub natural_linewidth: f64,
}

/// Exponential short-range barrier `D exp(-x p)` used as an alternative
/// repulsive wall.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpBarrierParams {
    pub c3: f64,
    /// rad/s
    pub d: f64,
    /// 1/m
    pub p: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeometryParams {
    /// Fiber radius R, m.
    pub radius: f64,
    /// Phonon cavity length L, m.
    pub length: f64,
    pub quality_factor: f64,
    /// Fiber temperature, K.
    pub temperature: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Polarization {
    QuasiCircular,
    /// Quasi-linear with the polarization plane at azimuth `plane` (rad).
    QuasiLinear { plane: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Configuration {
    Running,
    /// Two counterpropagating beams, each carrying the beam power.
    Standing,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BeamParams {
    /// Free-space wavelength, m.
    pub wavelength: f64,
    /// Power per beam, W.
    pub power: f64,
    pub polarization: Polarization,
    pub configuration: Configuration,
    /// Scalar polarizability of the atom at this wavelength, C·m²/V.
    pub polarizability: f64,
}

impl BeamParams {
    pub fn omega(&self) -> f64 {
        optical_omega(self.wavelength)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericsParams {
    /// Phase advance of the local de Broglie wave per mesh cell, rad.
    pub phase_step: f64,
    /// Default outer box edge measured from the surface, m.
    pub r_out: f64,
}

/// Where the polarizability defaults come from.
pub const POLARIZABILITY_SOURCE: &str = "Cs 6S1/2 scalar polarizability: D1 (894.593 nm) and D2 (852.347 nm) \
oscillators with reduced dipole elements 4.4890 and 6.3238 e·a0, plus 15.8 a.u. ionic core and 4.0 a.u. \
higher-lying lines";

/// Cesium ground-state scalar polarizability in atomic units.
pub fn cesium_polarizability_au(wavelength_nm: f64) -> f64 {
    const HARTREE_NM: f64 = 45.563_352_5;
    let w = HARTREE_NM / wavelength_nm;
    let w1 = HARTREE_NM / 894.592_959_86;
    let w2 = HARTREE_NM / 852.347_275_82;
    let d1 = 4.4890f64;
    let d2 = 6.3238f64;
    (d1 * d1 * w1 / (w1 * w1 - w * w) + d2 * d2 * w2 / (w2 * w2 - w * w)) / 3.0 + 15.8 + 4.0
}

/// Full run configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    pub material: MaterialParams,
    pub atom: AtomParams,
    pub exp_barrier: ExpBarrierParams,
    pub geometry: GeometryParams,
    /// Red-detuned trap beam.
    pub red: BeamParams,
    /// Blue-detuned trap beam.
    pub blue: BeamParams,
    pub probe: BeamParams,
    /// Red-detuned beam forming the hybrid surface-bound potential.
    pub hybrid: BeamParams,
    pub numerics: NumericsParams,
    /// Explicitly set keys, kept for the run manifest.
    pub overrides: BTreeMap<String, String>,
}

pub fn sound_speed(material: &MaterialParams) -> f64 {
    libm::sqrt(material.young_modulus / material.density)
}

/// Repulsive amplitude `D` placing the minimum of `-C x^-3 + D x^-12` at
/// `v_min`.
pub fn solve_repulsive_amplitude(c3: f64, v_min: f64) -> Result<f64> {
    if !(v_min < 0.0) || !v_min.is_finite() {
        return Err(Error::Domain("adsorption minimum must be negative"));
    }
    if !(c3 > 0.0) || !c3.is_finite() {
        return Err(Error::Domain("van der Waals coefficient must be positive"));
    }
    let x3 = 0.75 * c3 / -v_min;
    Ok(0.25 * c3 * x3 * x3 * x3)
}

/// Position of the adsorption minimum, `(4D/C)^(1/9)`.
pub fn adsorption_minimum_position(c3: f64, d12: f64) -> f64 {
    libm::pow(4.0 * d12 / c3, 1.0 / 9.0)
}

fn au(x: f64) -> f64 {
    x * AU_POLARIZABILITY
}

impl Default for Params {
    fn default() -> Self {
        let c3 = thz(1.18) * 1e-27;
        let v_min = thz(-128.0);
        let beam = |nm: f64, mw: f64, pol, cfg| BeamParams {
            wavelength: nm * 1e-9,
            power: mw * 1e-3,
            polarization: pol,
            configuration: cfg,
            polarizability: au(cesium_polarizability_au(nm)),
        };
        Params {
            material: MaterialParams { density: 2200.0, young_modulus: 72.6e9, permittivity: 2.1 },
            atom: AtomParams {
                mass: 2.21e-25,
                c3,
                v_min,
                d12: solve_repulsive_amplitude(c3, v_min).unwrap_or(f64::NAN),
                transition_omega: optical_omega(852.347_275_82e-9),
                natural_linewidth: TWO_PI * 5.234e6,
            },
            exp_barrier: ExpBarrierParams { c3: thz(1.56) * 1e-27, d: thz(1.6e6), p: 53e9 },
            geometry: GeometryParams { radius: 305e-9, length: 5e-6, quality_factor: 100.0, temperature: 420.0 },
            red: beam(1064.0, 2.0, Polarization::QuasiLinear { plane: 0.0 }, Configuration::Standing),
            blue: beam(
                840.0,
                4.5,
                Polarization::QuasiLinear { plane: core::f64::consts::FRAC_PI_2 },
                Configuration::Running,
            ),
            probe: beam(1000.0, 1.0, Polarization::QuasiCircular, Configuration::Running),
            hybrid: beam(1064.0, 1.0, Polarization::QuasiCircular, Configuration::Running),
            numerics: NumericsParams { phase_step: 2.5e-3, r_out: 3e-6 },
            overrides: BTreeMap::new(),
        }
    }
}

/// Every accepted key, in documentation order.
pub const KEYS: &[&str] = &[
    "fiber.radius_nm",
    "fiber.length_um",
    "fiber.quality_factor",
    "fiber.temperature_K",
    "material.density_kg_m3",
    "material.young_modulus_GPa",
    "material.permittivity",
    "atom.mass_kg",
    "atom.c3_THz_nm3",
    "atom.v_min_THz",
    "atom.d_kHz_nm12",
    "atom.transition_wavelength_nm",
    "atom.natural_linewidth_MHz",
    "atom.exp_barrier.c3_THz_nm3",
    "atom.exp_barrier.d_THz",
    "atom.exp_barrier.p_per_nm",
    "beams.<beam>.wavelength_nm",
    "beams.<beam>.power_mW",
    "beams.<beam>.polarization",
    "beams.<beam>.plane_deg",
    "beams.<beam>.configuration",
    "beams.<beam>.polarizability_au",
    "numerics.phase_step",
    "numerics.r_out_um",
];

pub const BEAM_NAMES: [&str; 4] = ["red", "blue", "probe", "hybrid"];

fn number(key: &str, raw: &str) -> Result<f64> {
    let v: f64 = raw.trim().parse().map_err(|_| Error::config(key, "not a number"))?;
    if !v.is_finite() {
        return Err(Error::config(key, "not finite"));
    }
    Ok(v)
}

impl Params {
    /// Parses a flat `key = value` document on top of the defaults.
    pub fn from_kv_str(text: &str) -> Result<Params> {
        let mut map = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = match line.find('#') {
                Some(i) => &line[..i],
                None => line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::config(&format!("line {}", n + 1), "expected `key = value`"))?;
            let (k, v) = (k.trim(), v.trim());
            if map.insert(k.to_string(), v.to_string()).is_some() {
                return Err(Error::config(k, "duplicate key"));
            }
        }
        Params::from_overrides(map)
    }

    /// Applies overrides to the defaults, re-derives dependent quantities
    /// and validates.
    pub fn from_overrides(map: BTreeMap<String, String>) -> Result<Params> {
        let mut p = Params::default();
        for (k, v) in map.iter() {
            p.set(k, v)?;
        }
        if !map.contains_key("atom.d_kHz_nm12") {
            p.atom.d12 = solve_repulsive_amplitude(p.atom.c3, p.atom.v_min)
                .map_err(|_| Error::config("atom.v_min_THz", "must be negative"))?;
        }
        for name in BEAM_NAMES {
            if !map.contains_key(&format!("beams.{name}.polarizability_au")) {
                let b = p.beam_mut(name).expect("known beam");
                b.polarizability = au(cesium_polarizability_au(b.wavelength * 1e9));
            }
        }
        p.overrides = map;
        p.validate()?;
        Ok(p)
    }

    pub fn beam(&self, name: &str) -> Option<&BeamParams> {
        match name {
            "red" => Some(&self.red),
            "blue" => Some(&self.blue),
            "probe" => Some(&self.probe),
            "hybrid" => Some(&self.hybrid),
            _ => None,
        }
    }

    fn beam_mut(&mut self, name: &str) -> Option<&mut BeamParams> {
        match name {
            "red" => Some(&mut self.red),
            "blue" => Some(&mut self.blue),
            "probe" => Some(&mut self.probe),
            "hybrid" => Some(&mut self.hybrid),
            _ => None,
        }
    }

    fn set(&mut self, key: &str, raw: &str) -> Result<()> {
        if let Some(rest) = key.strip_prefix("beams.") {
            let (name, field) = rest.split_once('.').ok_or_else(|| Error::config(key, "unknown key"))?;
            let b = self.beam_mut(name).ok_or_else(|| Error::config(key, "unknown beam"))?;
            match field {
                "wavelength_nm" => b.wavelength = number(key, raw)? * 1e-9,
                "power_mW" => b.power = number(key, raw)? * 1e-3,
                "polarizability_au" => b.polarizability = au(number(key, raw)?),
                "polarization" => {
                    b.polarization = match raw {
                        "circular" => Polarization::QuasiCircular,
                        "linear" => match b.polarization {
                            Polarization::QuasiLinear { plane } => Polarization::QuasiLinear { plane },
                            Polarization::QuasiCircular => Polarization::QuasiLinear { plane: 0.0 },
                        },
                        _ => return Err(Error::config(key, "expected `circular` or `linear`")),
                    }
                }
                "plane_deg" => {
                    let plane = number(key, raw)?.to_radians();
                    b.polarization = Polarization::QuasiLinear { plane };
                }
                "configuration" => {
                    b.configuration = match raw {
                        "running" => Configuration::Running,
                        "standing" => Configuration::Standing,
                        _ => return Err(Error::config(key, "expected `running` or `standing`")),
                    }
                }
                _ => return Err(Error::config(key, "unknown key")),
            }
            return Ok(());
        }
        let v = || number(key, raw);
        match key {
            "fiber.radius_nm" => self.geometry.radius = v()? * 1e-9,
            "fiber.length_um" => self.geometry.length = v()? * 1e-6,
            "fiber.quality_factor" => self.geometry.quality_factor = v()?,
            "fiber.temperature_K" => self.geometry.temperature = v()?,
            "material.density_kg_m3" => self.material.density = v()?,
            "material.young_modulus_GPa" => self.material.young_modulus = v()? * 1e9,
            "material.permittivity" => self.material.permittivity = v()?,
            "atom.mass_kg" => self.atom.mass = v()?,
            "atom.c3_THz_nm3" => self.atom.c3 = thz(v()?) * 1e-27,
            "atom.v_min_THz" => self.atom.v_min = thz(v()?),
            "atom.d_kHz_nm12" => self.atom.d12 = TWO_PI * v()? * 1e3 * 1e-108,
            "atom.transition_wavelength_nm" => {
                let l = v()?;
                if !(l > 0.0) {
                    return Err(Error::config(key, "must be positive"));
                }
                self.atom.transition_omega = optical_omega(l * 1e-9)
            }
            "atom.natural_linewidth_MHz" => self.atom.natural_linewidth = TWO_PI * v()? * 1e6,
            "atom.exp_barrier.c3_THz_nm3" => self.exp_barrier.c3 = thz(v()?) * 1e-27,
            "atom.exp_barrier.d_THz" => self.exp_barrier.d = thz(v()?),
            "atom.exp_barrier.p_per_nm" => self.exp_barrier.p = v()? * 1e9,
            "numerics.phase_step" => self.numerics.phase_step = v()?,
            "numerics.r_out_um" => self.numerics.r_out = v()? * 1e-6,
            _ => return Err(Error::config(key, "unknown key")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |x: f64, k: &str| if x > 0.0 && x.is_finite() { Ok(()) } else { Err(Error::config(k, "must be positive")) };
        pos(self.geometry.radius, "fiber.radius_nm")?;
        pos(self.geometry.length, "fiber.length_um")?;
        if !(self.geometry.quality_factor >= 1.0) {
            return Err(Error::config("fiber.quality_factor", "must be at least 1"));
        }
        pos(self.geometry.temperature, "fiber.temperature_K")?;
        pos(self.material.density, "material.density_kg_m3")?;
        pos(self.material.young_modulus, "material.young_modulus_GPa")?;
        if !(self.material.permittivity > 1.0) {
            return Err(Error::config("material.permittivity", "must exceed 1"));
        }
        pos(self.atom.mass, "atom.mass_kg")?;
        pos(self.atom.c3, "atom.c3_THz_nm3")?;
        if !(self.atom.v_min < 0.0) {
            return Err(Error::config("atom.v_min_THz", "must be negative"));
        }
        pos(self.atom.d12, "atom.d_kHz_nm12")?;
        pos(self.atom.natural_linewidth, "atom.natural_linewidth_MHz")?;
        pos(self.exp_barrier.c3, "atom.exp_barrier.c3_THz_nm3")?;
        if !(self.exp_barrier.d >= 0.0) {
            return Err(Error::config("atom.exp_barrier.d_THz", "must not be negative"));
        }
        pos(self.exp_barrier.p, "atom.exp_barrier.p_per_nm")?;
        for name in BEAM_NAMES {
            let b = self.beam(name).expect("known beam");
            pos(b.wavelength, &format!("beams.{name}.wavelength_nm"))?;
            if !(b.power >= 0.0) || !b.power.is_finite() {
                return Err(Error::config(&format!("beams.{name}.power_mW"), "must not be negative"));
            }
            if !b.polarizability.is_finite() {
                return Err(Error::config(&format!("beams.{name}.polarizability_au"), "not finite"));
            }
        }
        if !(self.numerics.phase_step > 0.0 && self.numerics.phase_step <= 0.5) {
            return Err(Error::config("numerics.phase_step", "must lie in (0, 0.5]"));
        }
        pos(self.numerics.r_out, "numerics.r_out_um")?;
        Ok(())
    }

    /// Resolved values of every key in the text form's units.
    pub fn snapshot(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        let mut put = |k: &str, v: String| out.push((k.to_string(), v));
        let g = &self.geometry;
        put("fiber.radius_nm", num(g.radius * 1e9));
        put("fiber.length_um", num(g.length * 1e6));
        put("fiber.quality_factor", num(g.quality_factor));
        put("fiber.temperature_K", num(g.temperature));
        let m = &self.material;
        put("material.density_kg_m3", num(m.density));
        put("material.young_modulus_GPa", num(m.young_modulus * 1e-9));
        put("material.permittivity", num(m.permittivity));
        let a = &self.atom;
        let th = 1e-12 / TWO_PI;
        put("atom.mass_kg", format!("{:e}", a.mass));
        put("atom.c3_THz_nm3", num(a.c3 * th * 1e27));
        put("atom.v_min_THz", num(a.v_min * th));
        put("atom.d_kHz_nm12", num(a.d12 / TWO_PI * 1e-3 * 1e108));
        put("atom.transition_wavelength_nm", num(TWO_PI * crate::consts::C / a.transition_omega * 1e9));
        put("atom.natural_linewidth_MHz", num(a.natural_linewidth / TWO_PI * 1e-6));
        let e = &self.exp_barrier;
        put("atom.exp_barrier.c3_THz_nm3", num(e.c3 * th * 1e27));
        put("atom.exp_barrier.d_THz", num(e.d * th));
        put("atom.exp_barrier.p_per_nm", num(e.p * 1e-9));
        for name in BEAM_NAMES {
            let b = self.beam(name).expect("known beam");
            let pre = format!("beams.{name}.");
            put(&(pre.clone() + "wavelength_nm"), num(b.wavelength * 1e9));
            put(&(pre.clone() + "power_mW"), num(b.power * 1e3));
            match b.polarization {
                Polarization::QuasiCircular => put(&(pre.clone() + "polarization"), "circular".into()),
                Polarization::QuasiLinear { plane } => {
                    put(&(pre.clone() + "polarization"), "linear".into());
                    put(&(pre.clone() + "plane_deg"), num(plane.to_degrees()));
                }
            }
            let cfg = match b.configuration {
                Configuration::Running => "running",
                Configuration::Standing => "standing",
            };
            put(&(pre.clone() + "configuration"), cfg.into());
            put(&(pre + "polarizability_au"), num(b.polarizability / AU_POLARIZABILITY));
        }
        put("numerics.phase_step", num(self.numerics.phase_step));
        put("numerics.r_out_um", num(self.numerics.r_out * 1e6));
        out
    }
}

/// Shortest text for `v` rounded to 15 significant digits, so unit
/// conversions do not leak round-off into the snapshot.
fn num(v: f64) -> String {
    let r: f64 = format!("{v:.14e}").parse().unwrap_or(v);
    format!("{r}")
}
