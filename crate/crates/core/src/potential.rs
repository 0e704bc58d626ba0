//! Radial potentials with analytic first and second derivatives.
//!
//! All potentials are angular frequencies (energy / ħ). Models are evaluated
//! at the distance `x = r - R` from the fiber surface so that sub-nanometre
//! wall positions keep full relative precision.

use crate::config::{
    adsorption_minimum_position, AtomParams, BeamParams, Configuration, ExpBarrierParams, Params, Polarization,
};
use crate::consts::HBAR;
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::photon::{solve_wavelength, GuidedMode};
use crate::roots::brent;

/// Light shift of one guided beam, `-(α/4)|E|²/ħ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OpticalTerm {
    pub mode: GuidedMode,
    /// Converts `|mode field|²` to physical `|E|²` at the beam power.
    pub scale2: f64,
    pub polarizability: f64,
    pub polarization: Polarization,
    pub configuration: Configuration,
    /// Azimuth at which the potential is evaluated, rad.
    pub azimuth: f64,
}

impl OpticalTerm {
    pub fn new(beam: &BeamParams, radius: f64, permittivity: f64, azimuth: f64) -> Result<Self> {
        let mode = solve_wavelength(beam.wavelength, radius, permittivity)?;
        Ok(Self::with_mode(mode, beam, azimuth))
    }

    pub fn with_mode(mode: GuidedMode, beam: &BeamParams, azimuth: f64) -> Self {
        OpticalTerm {
            mode,
            scale2: beam.power / mode.unit_power,
            polarizability: beam.polarizability,
            polarization: beam.polarization,
            configuration: beam.configuration,
            azimuth,
        }
    }

    /// `|E|²` at surface distance `x`, with derivatives.
    pub fn intensity(&self, x: f64) -> Jet {
        let [er, ep, ez] = self.mode.exterior_jets(self.mode.radius + x);
        let (er2, ep2, ez2) = (er.sqr(), ep.sqr(), ez.sqr());
        let i = match (self.polarization, self.configuration) {
            (Polarization::QuasiCircular, Configuration::Running) => er2 + ep2 + ez2,
            // transverse antinode of two counterpropagating beams: axial parts cancel
            (Polarization::QuasiCircular, Configuration::Standing) => (er2 + ep2) * 4.0,
            (Polarization::QuasiLinear { plane }, cfg) => {
                let c = libm::cos(self.azimuth - plane);
                let s = libm::sin(self.azimuth - plane);
                match cfg {
                    Configuration::Running => ((er2 + ez2) * (c * c) + ep2 * (s * s)) * 2.0,
                    Configuration::Standing => (er2 * (c * c) + ep2 * (s * s)) * 8.0,
                }
            }
        };
        i * self.scale2
    }

    pub fn eval(&self, x: f64) -> Jet {
        self.intensity(x) * (-0.25 * self.polarizability / HBAR)
    }

    /// Polarization-resolved `𝓔*·𝓔` of the normalized mode field.
    pub fn mode_intensity(&self, x: f64) -> f64 {
        self.intensity(x).v / self.scale2
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PotentialKind {
    /// `-C x^-3 + D x^-12` with `x = r - R`.
    Adsorption { c3: f64, d12: f64 },
    /// `-C x^-3 + D exp(-p x)`.
    AdsorptionExp { c3: f64, d: f64, p: f64 },
    /// Adsorption plus one red-detuned running beam.
    Hybrid { c3: f64, d12: f64, optical: OpticalTerm },
    /// Adsorption plus a red standing wave and a blue running beam.
    TwoColorTrap { c3: f64, d12: f64, red: OpticalTerm, blue: OpticalTerm },
    /// `floor + M ω_t² (x - center)² / 2ħ`.
    Harmonic { omega_t: f64, center: f64, floor: f64 },
    /// Flat `floor` between hard walls at the domain edges.
    Box { floor: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PotentialModel {
    pub kind: PotentialKind,
    /// Fiber radius; zero for the synthetic test potentials.
    pub radius: f64,
    pub mass: f64,
    /// Evaluation domain `[x_in, x_out]` as surface distances.
    pub domain: (f64, f64),
    /// Azimuthal order of the angular-momentum barrier, if included.
    pub angular_order: Option<u32>,
}

#[inline]
fn vdw(c3: f64, x: Jet) -> Jet {
    x.powi(-3) * (-c3)
}

/// `-C x^-3 + D x^-12` at `r`, failing inside the fiber.
pub fn adsorption_potential(r: f64, c3: f64, d12: f64, radius: f64) -> Result<Jet> {
    if !(r > radius) {
        return Err(Error::Domain("adsorption potential needs r > R"));
    }
    let x = Jet::var(r - radius);
    Ok(vdw(c3, x) + x.powi(-12) * d12)
}

/// `-C x^-3 + D exp(-p x)` at `r`, failing inside the fiber.
pub fn adsorption_potential_exp(r: f64, c3: f64, d: f64, p: f64, radius: f64) -> Result<Jet> {
    if !(r > radius) {
        return Err(Error::Domain("adsorption potential needs r > R"));
    }
    let x = Jet::var(r - radius);
    Ok(vdw(c3, x) + (x * -p).exp() * d)
}

/// Minimum of a confining potential near a starting bracket.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarmonicFit {
    /// Surface distance of the minimum.
    pub x0: f64,
    pub v0: f64,
    /// `sqrt(ħ V''(r0) / M)`.
    pub omega_r: f64,
}

/// Two-color trap landmarks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrapFit {
    pub minimum: HarmonicFit,
    /// Top of the barrier separating the trap from the surface.
    pub barrier_x: f64,
    pub barrier_v: f64,
}

impl PotentialModel {
    pub fn adsorption(atom: &AtomParams, radius: f64, r_out: f64) -> Self {
        let mut m = PotentialModel {
            kind: PotentialKind::Adsorption { c3: atom.c3, d12: atom.d12 },
            radius,
            mass: atom.mass,
            domain: (0.0, r_out),
            angular_order: None,
        };
        m.domain.0 = m.wall_point(10.0 * -m.depth());
        m
    }

    pub fn adsorption_exp(exp: &ExpBarrierParams, mass: f64, radius: f64, r_out: f64) -> Self {
        let mut m = PotentialModel {
            kind: PotentialKind::AdsorptionExp { c3: exp.c3, d: exp.d, p: exp.p },
            radius,
            mass,
            domain: (0.0, r_out),
            angular_order: None,
        };
        if exp.d > 0.0 {
            m.domain.0 = m.wall_point(10.0 * -m.depth());
        }
        m
    }

    /// Adsorption plus the `hybrid` beam of `params`.
    pub fn hybrid(params: &Params) -> Result<Self> {
        let g = &params.geometry;
        let optical = OpticalTerm::new(&params.hybrid, g.radius, params.material.permittivity, 0.0)?;
        let mut m = PotentialModel {
            kind: PotentialKind::Hybrid { c3: params.atom.c3, d12: params.atom.d12, optical },
            radius: g.radius,
            mass: params.atom.mass,
            domain: (0.0, params.numerics.r_out),
            angular_order: None,
        };
        m.domain.0 = m.wall_point(10.0 * -m.depth());
        Ok(m)
    }

    /// Adsorption plus the red standing wave and the blue running beam,
    /// evaluated along the red polarization plane. The domain starts at the
    /// barrier top so that the trap states are separated from the surface.
    pub fn two_color_trap(params: &Params) -> Result<(Self, TrapFit)> {
        let g = &params.geometry;
        let eps = params.material.permittivity;
        let azimuth = match params.red.polarization {
            Polarization::QuasiLinear { plane } => plane,
            Polarization::QuasiCircular => 0.0,
        };
        let red = OpticalTerm::new(&params.red, g.radius, eps, azimuth)?;
        let blue = OpticalTerm::new(&params.blue, g.radius, eps, azimuth)?;
        let mut m = PotentialModel {
            kind: PotentialKind::TwoColorTrap { c3: params.atom.c3, d12: params.atom.d12, red, blue },
            radius: g.radius,
            mass: params.atom.mass,
            domain: (0.0, params.numerics.r_out),
            angular_order: None,
        };
        let fit = m.trap_fit()?;
        m.domain.0 = fit.barrier_x;
        Ok((m, fit))
    }

    pub fn harmonic(mass: f64, omega_t: f64, center: f64, half_width: f64) -> Self {
        PotentialModel {
            kind: PotentialKind::Harmonic { omega_t, center, floor: 0.0 },
            radius: 0.0,
            mass,
            domain: (center - half_width, center + half_width),
            angular_order: None,
        }
    }

    pub fn boxed(mass: f64, left: f64, width: f64) -> Self {
        PotentialModel { kind: PotentialKind::Box { floor: 0.0 }, radius: 0.0, mass, domain: (left, left + width), angular_order: None }
    }

    /// Test potential moved down by `offset` so its low levels are bound.
    pub fn shifted(&self, offset: f64) -> Self {
        let kind = match self.kind {
            PotentialKind::Harmonic { omega_t, center, floor } => {
                PotentialKind::Harmonic { omega_t, center, floor: floor + offset }
            }
            PotentialKind::Box { floor } => PotentialKind::Box { floor: floor + offset },
            ref k => k.clone(),
        };
        PotentialModel { kind, ..self.clone() }
    }

    /// Adds `ħ(l² - 1/4)/(2 M r²)`.
    pub fn centrifugal_correction(&self, l: u32) -> Self {
        PotentialModel { angular_order: Some(l), ..self.clone() }
    }

    /// Oscillator length of the harmonic test potential.
    pub fn oscillator_length(&self) -> Option<f64> {
        match self.kind {
            PotentialKind::Harmonic { omega_t, .. } => Some(libm::sqrt(HBAR / (self.mass * omega_t))),
            _ => None,
        }
    }

    /// Potential at surface distance `x` with derivatives in `x`.
    pub fn eval(&self, x: f64) -> Jet {
        let r = self.radius + x;
        let xj = Jet::var(x);
        let mut v = match &self.kind {
            PotentialKind::Adsorption { c3, d12 } => vdw(*c3, xj) + xj.powi(-12) * *d12,
            PotentialKind::AdsorptionExp { c3, d, p } => vdw(*c3, xj) + (xj * -*p).exp() * *d,
            PotentialKind::Hybrid { c3, d12, optical } => vdw(*c3, xj) + xj.powi(-12) * *d12 + optical.eval(x),
            PotentialKind::TwoColorTrap { c3, d12, red, blue } => {
                vdw(*c3, xj) + xj.powi(-12) * *d12 + red.eval(x) + blue.eval(x)
            }
            PotentialKind::Harmonic { omega_t, center, floor } => {
                let k = self.mass * omega_t * omega_t / HBAR;
                let y = x - center;
                Jet::new(floor + 0.5 * k * y * y, k * y, k)
            }
            PotentialKind::Box { floor } => Jet::constant(*floor),
        };
        if let Some(l) = self.angular_order {
            let lf = l as f64;
            let a = HBAR * (lf * lf - 0.25) / (2.0 * self.mass);
            v = v + Jet::var(r).powi(-2) * a;
        }
        v
    }

    #[inline]
    pub fn value(&self, x: f64) -> f64 {
        self.eval(x).v
    }

    /// Potential energy `ħ V` in joules.
    pub fn energy(&self, x: f64) -> f64 {
        HBAR * self.value(x)
    }

    /// Surface distance of the adsorption minimum.
    pub fn adsorption_minimum(&self) -> Option<f64> {
        match &self.kind {
            PotentialKind::Adsorption { c3, d12 }
            | PotentialKind::Hybrid { c3, d12, .. }
            | PotentialKind::TwoColorTrap { c3, d12, .. } => Some(adsorption_minimum_position(*c3, *d12)),
            PotentialKind::AdsorptionExp { c3, d, p } => {
                if *d <= 0.0 {
                    return None;
                }
                // V' = 3C/x⁴ - D p e^{-px}; minimum where it changes sign from - to +
                let f = |x: f64| 3.0 * c3 / libm::pow(x, 4.0) - d * p * libm::exp(-p * x);
                let mut x = 1e-3 / p;
                let mut last = f(x);
                let mut seen_neg = last < 0.0;
                while x < 1e3 / p {
                    let xn = x * 1.01;
                    let fnx = f(xn);
                    if seen_neg && last < 0.0 && fnx >= 0.0 {
                        return brent(f, x, xn, 1e-15);
                    }
                    seen_neg |= fnx < 0.0;
                    last = fnx;
                    x = xn;
                }
                None
            }
            _ => None,
        }
    }

    /// Value at the adsorption minimum.
    pub fn depth(&self) -> f64 {
        match self.adsorption_minimum() {
            Some(x) => self.value(x),
            None => 0.0,
        }
    }

    /// Point on the repulsive wall (inside the adsorption minimum) where the
    /// potential reaches `level`.
    pub fn wall_point(&self, level: f64) -> f64 {
        let xm = match self.adsorption_minimum() {
            Some(x) => x,
            None => return self.domain.0,
        };
        let f = |x: f64| self.value(x) - level;
        let mut lo = 0.5 * xm;
        while f(lo) < 0.0 && lo > 1e-6 * xm {
            lo *= 0.5;
        }
        brent(f, lo, xm, 1e-14).unwrap_or(lo)
    }

    /// Newton-refined minimum of the potential inside `[lo, hi]`.
    pub fn harmonic_fit(&self, lo: f64, hi: f64) -> Option<HarmonicFit> {
        let x0 = brent(|x| self.eval(x).d1, lo, hi, 1e-14)?;
        let j = self.eval(x0);
        if j.d2 <= 0.0 {
            return None;
        }
        Some(HarmonicFit { x0, v0: j.v, omega_r: libm::sqrt(HBAR * j.d2 / self.mass) })
    }

    /// Outermost local minimum within 500 nm of the surface and the barrier
    /// on its inner side.
    pub fn trap_fit(&self) -> Result<TrapFit> {
        let n = 4000;
        let (x_lo, x_hi) = (1e-9f64, 500e-9f64);
        let ratio = libm::pow(x_hi / x_lo, 1.0 / n as f64);
        let xs: alloc::vec::Vec<f64> = (0..=n).map(|i| x_lo * libm::pow(ratio, i as f64)).collect();
        let vs: alloc::vec::Vec<f64> = xs.iter().map(|&x| self.value(x)).collect();
        let imin = (1..n).rev().find(|&i| vs[i] < vs[i - 1] && vs[i] <= vs[i + 1]).ok_or(Error::NoTrap)?;
        let minimum = self
            .harmonic_fit(xs[imin - 1], xs[imin + 1])
            .ok_or(Error::NoTrap)?;
        let imax = (1..imin).rev().find(|&i| vs[i] > vs[i - 1] && vs[i] >= vs[i + 1]).ok_or(Error::NoTrap)?;
        let xb = brent(|x| self.eval(x).d1, xs[imax - 1], xs[imax + 1], 1e-14).ok_or(Error::NoTrap)?;
        Ok(TrapFit { minimum, barrier_x: xb, barrier_v: self.value(xb) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::consts::{thz, TWO_PI};

    fn fd_check(m: &PotentialModel, x: f64) {
        let h = 1e-4 * x;
        let j = m.eval(x);
        let (p, c, q) = (m.value(x + h), m.value(x), m.value(x - h));
        let d1 = (p - q) / (2.0 * h);
        let d2 = (p - 2.0 * c + q) / (h * h);
        assert!(((j.d1 - d1) / d1).abs() < 1e-6, "V' at {x}: {} vs {d1}", j.d1);
        assert!(((j.d2 - d2) / d2).abs() < 1e-5, "V'' at {x}: {} vs {d2}", j.d2);
    }

    #[test]
    fn adsorption_landmarks() {
        let p = Params::default();
        let m = PotentialModel::adsorption(&p.atom, p.geometry.radius, 3e-6);
        let xm = m.adsorption_minimum().unwrap();
        assert!((xm * 1e9 - 0.190).abs() < 1e-3, "{}", xm * 1e9);
        assert!(((m.depth() - thz(-128.0)) / thz(128.0)).abs() < 1e-10);
        assert!(m.eval(xm).d1.abs() < 1e-9 * thz(128.0) / xm);
        let far = m.value(60e-9);
        let tail = -p.atom.c3 / (60e-9f64).powi(3);
        assert!(((far - tail) / tail).abs() < 1e-3);
        assert!(adsorption_potential(m.radius, p.atom.c3, p.atom.d12, m.radius).is_err());
        fd_check(&m, 0.3e-9);
        fd_check(&m, 40e-9);
    }

    #[test]
    fn exp_barrier_depth() {
        let p = Params::default();
        let m = PotentialModel::adsorption_exp(&p.exp_barrier, p.atom.mass, p.geometry.radius, 3e-6);
        let d = m.depth() / TWO_PI * 1e-12;
        assert!(d < 0.0 && d > -200.0, "{d}");
        fd_check(&m, 0.3e-9);
        let pure = PotentialModel::adsorption_exp(
            &ExpBarrierParams { d: 0.0, ..p.exp_barrier },
            p.atom.mass,
            p.geometry.radius,
            3e-6,
        );
        let x = 2e-9;
        let want = -p.exp_barrier.c3 / (x * x * x);
        assert!(((pure.value(x) - want) / want).abs() < 1e-14);
    }

    #[test]
    fn trap_landmarks() {
        let p = Params::default();
        let (m, fit) = PotentialModel::two_color_trap(&p).unwrap();
        let x0 = fit.minimum.x0;
        assert!(x0 > 100e-9 && x0 < 400e-9, "{}", x0 * 1e9);
        assert!(fit.barrier_x < fit.minimum.x0 && fit.barrier_v > fit.minimum.v0);
        let w = libm::sqrt(HBAR * m.eval(fit.minimum.x0).d2 / m.mass);
        assert_eq!(w, fit.minimum.omega_r);
        fd_check(&m, fit.minimum.x0 + 10e-9);
        fd_check(&m, 30e-9);
    }

    #[test]
    fn hybrid_is_sum() {
        let p = Params::default();
        let h = PotentialModel::hybrid(&p).unwrap();
        let a = PotentialModel::adsorption(&p.atom, p.geometry.radius, 3e-6);
        let o = match &h.kind {
            PotentialKind::Hybrid { optical, .. } => *optical,
            _ => unreachable!(),
        };
        for x in [0.5e-9, 10e-9, 100e-9, 1e-6] {
            let (s, t) = (h.eval(x), a.eval(x) + o.eval(x));
            assert_eq!(s.v, t.v);
            assert!(o.eval(x).v < 0.0);
        }
        fd_check(&h, 150e-9);
    }
}
