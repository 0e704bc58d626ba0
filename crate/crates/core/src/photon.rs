//! HE11 guided modes of a step-index cylinder in vacuum.
//!
//! Field convention for the azimuthal order m = +1: the electric partial
//! waves are `(i e_r, e_phi, e_z)` and the magnetic ones `(h_r, i h_phi,
//! i h_z)` with real `e_*`, `h_*`, all multiplying `exp(i(phi + k z - w t))`.

use num_complex::Complex64;

use crate::bessel::{j1_derivs, k1_derivs};
use crate::consts::{C, EPS0, MU0, TWO_PI};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::quad::integrate;
use crate::roots::brent;

const FIRST_J0_ZERO: f64 = 2.405;
const SCAN_BRACKETS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GuidedMode {
    pub omega: f64,
    /// Propagation constant, rad/m.
    pub k: f64,
    /// Transverse wavenumber inside the fiber.
    pub a: f64,
    /// Decay constant outside the fiber.
    pub b: f64,
    pub alpha_t: f64,
    pub beta_t: f64,
    /// Amplitude fixing `eps0^2 ∫ r eps |E|^2 dr = 1`.
    pub amplitude: f64,
    pub radius: f64,
    pub permittivity: f64,
    /// Axial power carried by the normalized field, W.
    pub unit_power: f64,
}

/// Single-mode cutoff wavelength `2π R sqrt(eps - 1) / 2.405`.
pub fn cutoff_wavelength(radius: f64, permittivity: f64) -> Result<f64> {
    if !(permittivity > 1.0) {
        return Err(Error::Domain("permittivity must exceed 1"));
    }
    Ok(TWO_PI * radius * libm::sqrt(permittivity - 1.0) / FIRST_J0_ZERO)
}

/// Both sides of the HE11 frequency equation at `(omega, k)`.
pub fn frequency_equation(omega: f64, k: f64, radius: f64, eps: f64) -> (f64, f64) {
    let a = libm::sqrt(omega * omega * eps / (C * C) - k * k);
    let b = libm::sqrt(k * k - omega * omega / (C * C));
    let [j, jp, _] = j1_derivs(a * radius);
    let [kk, kp, _, _] = k1_derivs(b * radius);
    let lhs = (a * j * kp + b * kk * jp) * (a * j * kp + eps * b * kk * jp);
    let r = (eps - 1.0) / (radius * C) * k * omega / (a * b) * j * kk;
    (lhs, r * r)
}

/// Relative residual of the frequency equation.
pub fn frequency_residual(omega: f64, k: f64, radius: f64, eps: f64) -> f64 {
    let (l, r) = frequency_equation(omega, k, radius, eps);
    libm::fabs(l - r) / (libm::fabs(l) + libm::fabs(r))
}

/// Sign changes of the frequency equation over `n` equal sub-brackets of the
/// open interval between the light lines.
pub fn scan_roots(omega: f64, radius: f64, eps: f64, n: usize) -> alloc::vec::Vec<(f64, f64)> {
    let lo = omega / C;
    let hi = omega * libm::sqrt(eps) / C;
    let f = |k: f64| {
        let (l, r) = frequency_equation(omega, k, radius, eps);
        l - r
    };
    let at = |i: usize| lo + (hi - lo) * (i as f64 + 0.5) / (n as f64 + 1.0);
    let mut out = alloc::vec::Vec::new();
    let mut k0 = at(0);
    let mut f0 = f(k0);
    for i in 1..=n {
        let k1 = at(i);
        let f1 = f(k1);
        if (f0 > 0.0) != (f1 > 0.0) {
            out.push((k0, k1));
        }
        k0 = k1;
        f0 = f1;
    }
    out
}

/// Solves for the HE11 propagation constant at angular frequency `omega`.
pub fn solve_dispersion(omega: f64, radius: f64, eps: f64) -> Result<GuidedMode> {
    if !(eps > 1.0) || !(radius > 0.0) || !(omega > 0.0) {
        return Err(Error::Domain("mode solver needs omega > 0, R > 0, eps > 1"));
    }
    let brackets = scan_roots(omega, radius, eps, SCAN_BRACKETS);
    let (lo, hi) = match brackets.len() {
        0 => return Err(Error::NoGuidedMode),
        1 => brackets[0],
        n => return Err(Error::AmbiguousMode { roots: n }),
    };
    let f = |k: f64| {
        let (l, r) = frequency_equation(omega, k, radius, eps);
        l - r
    };
    let k = brent(f, lo, hi, 1e-15).ok_or(Error::NoGuidedMode)?;
    Ok(GuidedMode::from_root(omega, k, radius, eps))
}

/// Mode at a free-space wavelength.
pub fn solve_wavelength(wavelength: f64, radius: f64, eps: f64) -> Result<GuidedMode> {
    solve_dispersion(TWO_PI * C / wavelength, radius, eps)
}

impl GuidedMode {
    fn from_root(omega: f64, k: f64, radius: f64, eps: f64) -> Self {
        let a = libm::sqrt(omega * omega * eps / (C * C) - k * k);
        let b = libm::sqrt(k * k - omega * omega / (C * C));
        let [j, jp, _] = j1_derivs(a * radius);
        let [kk, kp, _, _] = k1_derivs(b * radius);
        let alpha_t = j / kk;
        let beta_t = (eps - 1.0) / (radius * C) * k * omega / (a * b) * j * kk / (a * j * kp + b * jp * kk);
        let mut m = GuidedMode {
            omega,
            k,
            a,
            b,
            alpha_t,
            beta_t,
            amplitude: 1.0,
            radius,
            permittivity: eps,
            unit_power: 0.0,
        };
        m.amplitude = 1.0 / libm::sqrt(m.norm_integral());
        m.unit_power = m.power();
        m
    }

    pub fn effective_index(&self) -> f64 {
        self.k * C / self.omega
    }

    pub fn wavelength(&self) -> f64 {
        TWO_PI * C / self.omega
    }

    /// Outer integration limit beyond which the field is below e^-30.
    fn r_max(&self) -> f64 {
        self.radius + 30.0 / self.b
    }

    /// Real electric amplitudes `(e_r, e_phi, e_z)`.
    pub fn field(&self, r: f64) -> [f64; 3] {
        let (am, w) = (self.amplitude, self.omega / C);
        if r < self.radius {
            let x = self.a * r;
            let [j, jp, _] = j1_derivs(x);
            let j_over_r = if x < 1e-8 { 0.5 * self.a } else { j / r };
            let s = am / (self.a * self.a);
            [
                s * (self.k * self.a * jp - w * self.beta_t * j_over_r),
                s * (self.beta_t * w * self.a * jp - self.k * j_over_r),
                am * j,
            ]
        } else {
            let [kk, kp, _, _] = k1_derivs(self.b * r);
            let s = -self.alpha_t * am / (self.b * self.b);
            [
                s * (self.k * self.b * kp - self.beta_t * w * kk / r),
                s * (self.beta_t * w * self.b * kp - self.k * kk / r),
                self.alpha_t * am * kk,
            ]
        }
    }

    /// Complex partial waves `(E_r, E_phi, E_z)`.
    pub fn mode_field(&self, r: f64) -> [Complex64; 3] {
        let [er, ep, ez] = self.field(r);
        [Complex64::new(0.0, er), Complex64::new(ep, 0.0), Complex64::new(ez, 0.0)]
    }

    /// Real magnetic amplitudes `(h_r, h_phi, h_z)`.
    pub fn magnetic(&self, r: f64) -> [f64; 3] {
        let am = self.amplitude;
        let bz = am * self.beta_t / (MU0 * C);
        let w = self.omega;
        if r < self.radius {
            let x = self.a * r;
            let [j, jp, _] = j1_derivs(x);
            let j_over_r = if x < 1e-8 { 0.5 * self.a } else { j / r };
            let e = EPS0 * self.permittivity;
            let a2 = self.a * self.a;
            let (ez_r, ezp) = (am * j_over_r, am * self.a * jp);
            let (hz_r, hzp) = (bz * j_over_r, bz * self.a * jp);
            [-(self.k * hzp - w * e * ez_r) / a2, (w * e * ezp - self.k * hz_r) / a2, bz * j]
        } else {
            let [kk, kp, _, _] = k1_derivs(self.b * r);
            let b2 = self.b * self.b;
            let (ez, ezp) = (self.alpha_t * am * kk, self.alpha_t * am * self.b * kp);
            let (hz, hzp) = (self.alpha_t * bz * kk, self.alpha_t * bz * self.b * kp);
            [(self.k * hzp - w * EPS0 * ez / r) / b2, -(w * EPS0 * ezp - self.k * hz / r) / b2, hz]
        }
    }

    /// Axial Poynting density `Re(E_r H_phi* - E_phi H_r*)`.
    pub fn poynting(&self, r: f64) -> f64 {
        let [er, ep, _] = self.field(r);
        let [hr, hp, _] = self.magnetic(r);
        er * hp - ep * hr
    }

    /// Squared modulus of the electric partial wave.
    pub fn intensity(&self, r: f64) -> f64 {
        let [a, b, c] = self.field(r);
        a * a + b * b + c * c
    }

    /// `eps0^2 ∫ r eps(r) |E|^2 dr` over the whole cross-section radius.
    pub fn norm_integral(&self) -> f64 {
        let inner = integrate(|r| r * self.intensity(r), 0.0, self.radius, 1e-13, 0.0);
        let outer = integrate(|r| r * self.intensity(r), self.radius, self.r_max(), 1e-13, 0.0);
        EPS0 * EPS0 * (self.permittivity * inner + outer)
    }

    /// Axial power `π ∫ Re(E_r H_phi* - E_phi H_r*) r dr`.
    pub fn power(&self) -> f64 {
        let inner = integrate(|r| r * self.poynting(r), 0.0, self.radius, 1e-13, 0.0);
        let outer = integrate(|r| r * self.poynting(r), self.radius, self.r_max(), 1e-13, 0.0);
        core::f64::consts::PI * (inner + outer)
    }

    /// Exterior amplitudes `(e_r, e_phi, e_z)` with radial derivatives.
    pub fn exterior_jets(&self, r: f64) -> [Jet; 3] {
        let b = self.b;
        let [k0, k1, k2, k3] = k1_derivs(b * r);
        let kk = Jet::new(k0, b * k1, b * b * k2);
        let kp = Jet::new(k1, b * k2, b * b * k3);
        let inv_r = Jet::var(r).recip();
        let w = self.omega / C;
        let s = -self.alpha_t * self.amplitude / (b * b);
        let er = (kp * (self.k * b) - kk * inv_r * (self.beta_t * w)) * s;
        let ep = (kp * (self.beta_t * w * b) - kk * inv_r * self.k) * s;
        let ez = kk * (self.alpha_t * self.amplitude);
        [er, ep, ez]
    }
}
