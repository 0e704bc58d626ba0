//! Cylinder functions needed by the guided-mode solver.
//!
//! `J0`, `J1` come from `libm`. The modified Bessel functions of the second
//! kind use the ascending series for `x <= 2` and Steed's continued fraction
//! (Temme's form) above.

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[inline]
pub fn j0(x: f64) -> f64 {
    libm::j0(x)
}

#[inline]
pub fn j1(x: f64) -> f64 {
    libm::j1(x)
}

/// `I0(x)` and `I1(x)` from their power series.
pub fn i01(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let (mut t0, mut t1) = (1.0, 0.5 * x);
    let (mut s0, mut s1) = (t0, t1);
    let mut k = 1.0;
    while k < 500.0 {
        t0 *= q / (k * k);
        t1 *= q / (k * (k + 1.0));
        s0 += t0;
        s1 += t1;
        if t0 < 1e-17 * s0 && t1 < 1e-17 * s1 {
            break;
        }
        k += 1.0;
    }
    (s0, s1)
}

/// `K0(x)` and `K1(x)` for `x > 0`.
pub fn k01(x: f64) -> (f64, f64) {
    debug_assert!(x > 0.0);
    if x <= 2.0 {
        k01_series(x)
    } else {
        k01_steed(x)
    }
}

#[inline]
pub fn k0(x: f64) -> f64 {
    k01(x).0
}

#[inline]
pub fn k1(x: f64) -> f64 {
    k01(x).1
}

fn k01_series(x: f64) -> (f64, f64) {
    let (i0, i1) = i01(x);
    let l = libm::log(0.5 * x);
    let q = 0.25 * x * x;
    // K0 tail: sum q^k/(k!)^2 H_k; K1 tail: sum (psi(k+1)+psi(k+2)) q^k/(k!(k+1)!)
    let mut h = 0.0; // harmonic number H_k
    let mut t0 = 1.0; // q^k/(k!)^2
    let mut t1 = 1.0; // q^k/(k!(k+1)!)
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut k = 0.0f64;
    loop {
        let psi1 = h - EULER_GAMMA;
        let psi2 = h + 1.0 / (k + 1.0) - EULER_GAMMA;
        s0 += t0 * h;
        s1 += t1 * (psi1 + psi2);
        k += 1.0;
        h += 1.0 / k;
        t0 *= q / (k * k);
        t1 *= q / (k * (k + 1.0));
        if t1 * (2.0 * h + 1.0) < 1e-18 * libm::fabs(s1) && t0 * h < 1e-18 * s0 || k > 60.0 {
            break;
        }
    }
    let k0 = -(l + EULER_GAMMA) * i0 + s0;
    let k1 = 1.0 / x + l * i1 - 0.25 * x * s1;
    (k0, k1)
}

fn k01_steed(x: f64) -> (f64, f64) {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if libm::fabs(dels / s) < 1e-17 {
            break;
        }
    }
    h *= a1;
    let k0 = libm::sqrt(core::f64::consts::PI / (2.0 * x)) * libm::exp(-x) / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

/// `J1` and its first two derivatives.
pub fn j1_derivs(x: f64) -> [f64; 3] {
    let j0 = j0(x);
    let j1 = j1(x);
    if x == 0.0 {
        return [0.0, 0.5, 0.0];
    }
    let jp = j0 - j1 / x;
    let jpp = -jp / x - (1.0 - 1.0 / (x * x)) * j1;
    [j1, jp, jpp]
}

/// `K1` and its first three derivatives.
pub fn k1_derivs(x: f64) -> [f64; 4] {
    let (k0, k1) = k01(x);
    let xi = 1.0 / x;
    let kp = -k0 - k1 * xi;
    let kpp = -kp * xi + (1.0 + xi * xi) * k1;
    let kppp = kp * xi * xi - kpp * xi + (1.0 + xi * xi) * kp - 2.0 * k1 * xi * xi * xi;
    [k1, kp, kpp, kppp]
}
