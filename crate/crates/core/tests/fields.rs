use nanobound_core::config::{adsorption_minimum_position, sound_speed, solve_repulsive_amplitude, Params};
use nanobound_core::consts::{thz, C, TWO_PI};
use nanobound_core::photon::{cutoff_wavelength, solve_wavelength};
use proptest::prelude::*;

#[test]
fn cutoff_follows_the_first_bessel_zero() {
    // single-mode cutoff at V = 2πR√(ε−1)/λ = 2.405, the first zero of J0 rounded
    for (r, eps) in [(305e-9, 2.1), (200e-9, 2.1), (250e-9, 2.25)] {
        let want = TWO_PI * r * (eps - 1.0f64).sqrt() / 2.404_825_557_695_773;
        let got = cutoff_wavelength(r, eps).unwrap();
        assert!((got / want - 1.0).abs() < 1e-4);
    }
}

#[test]
fn guided_mode_index_lies_between_cladding_and_core() {
    let p = Params::default();
    for nm in [700.0, 852.0, 1000.0, 1064.0] {
        let m = solve_wavelength(nm * 1e-9, p.geometry.radius, p.material.permittivity).unwrap();
        let n = m.effective_index();
        assert!(n > 1.0 && n < p.material.permittivity.sqrt(), "{nm} nm: {n}");
        assert!((m.omega - TWO_PI * C / (nm * 1e-9)).abs() / m.omega < 1e-12);
    }
    let short = solve_wavelength(700e-9, p.geometry.radius, p.material.permittivity).unwrap();
    let long = solve_wavelength(1064e-9, p.geometry.radius, p.material.permittivity).unwrap();
    assert!(short.effective_index() > long.effective_index());
}

#[test]
fn sound_speed_of_silica() {
    let p = Params::default();
    let v = sound_speed(&p.material);
    assert!((v / (p.material.young_modulus / p.material.density).sqrt() - 1.0).abs() < 1e-15);
}

fn brute_minimum(c3: f64, d: f64) -> f64 {
    let x0 = adsorption_minimum_position(c3, d);
    let mut best = f64::INFINITY;
    for i in 0..=200_000 {
        let x = x0 * (0.8 + 0.4 * i as f64 / 200_000.0);
        best = best.min(-c3 / x.powi(3) + d / x.powi(12));
    }
    best
}

#[test]
fn repulsive_amplitude_places_the_minimum() {
    let c3 = thz(1.18) * 1e-27;
    let v_min = thz(-128.0);
    let d = solve_repulsive_amplitude(c3, v_min).unwrap();
    assert!((brute_minimum(c3, d) / v_min - 1.0).abs() < 1e-9);
}

#[test]
fn repulsive_amplitude_rejects_bad_input() {
    assert!(solve_repulsive_amplitude(1.0, 1.0).is_err());
    assert!(solve_repulsive_amplitude(-1.0, -1.0).is_err());
    assert!(solve_repulsive_amplitude(f64::NAN, -1.0).is_err());
}

proptest! {
    #[test]
    fn repulsive_amplitude_round_trips(c_thz in 0.2f64..5.0, depth_thz in 1.0f64..500.0) {
        let c3 = thz(c_thz) * 1e-27;
        let v_min = thz(-depth_thz);
        let d = solve_repulsive_amplitude(c3, v_min).unwrap();
        prop_assert!((brute_minimum(c3, d) / v_min - 1.0).abs() < 1e-8);
    }
}
