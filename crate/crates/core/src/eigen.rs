//! Bound states of the discretized radial Hamiltonian.
//!
//! Three-point finite differences on a graded mesh, symmetrized with the node
//! weights, give a real symmetric tridiagonal matrix. Eigenvalues come from
//! Sturm-count bisection inside the energy window and eigenvectors from a
//! few steps of shifted inverse iteration.

use alloc::vec;
use alloc::vec::Vec;

use crate::consts::HBAR;
use crate::error::{Error, Result};
use crate::mesh::{build_mesh, Mesh, MeshPolicy};
use crate::potential::PotentialModel;

#[derive(Clone, Debug)]
pub struct MotionalState {
    /// Number of eigenvalues below this one, equal to the node count.
    pub nu: usize,
    /// Energy over ħ in rad/s, negative when bound.
    pub omega: f64,
    /// `ψ(x_i)` at the interior nodes with `Σ w_i ψ_i² = 1`.
    pub psi: Vec<f64>,
    pub normalized: bool,
}

#[derive(Clone, Debug)]
pub struct BoundSpectrum {
    pub mesh: Mesh,
    /// Potential at the interior nodes, rad/s.
    pub potential: Vec<f64>,
    pub window: (f64, f64),
    /// Ascending in energy.
    pub states: Vec<MotionalState>,
    /// Whether energies carry the two-mesh extrapolation.
    pub extrapolated: bool,
}

impl BoundSpectrum {
    pub fn by_label(&self, nu: usize) -> Option<&MotionalState> {
        self.states.iter().find(|s| s.nu == nu)
    }

    /// State whose energy lies closest to `omega`.
    pub fn nearest(&self, omega: f64) -> Option<&MotionalState> {
        self.states
            .iter()
            .min_by(|a, b| libm::fabs(a.omega - omega).total_cmp(&libm::fabs(b.omega - omega)))
    }

    pub fn weights(&self) -> Vec<f64> {
        self.mesh.weights()
    }

    /// Fails with `MeshMismatch` unless `potential` reproduces the stored
    /// node values.
    pub fn check_potential(&self, potential: &PotentialModel) -> Result<()> {
        let x = self.mesh.interior();
        let n = x.len();
        for &i in &[0, n / 3, n / 2, n - 1] {
            let v = potential.value(x[i]);
            if libm::fabs(v - self.potential[i]) > 1e-12 * libm::fabs(v).max(1.0) {
                return Err(Error::MeshMismatch);
            }
        }
        Ok(())
    }
}

/// Cap on inverse-iteration steps per eigenvector.
pub const MAX_INVERSE_STEPS: usize = 8;

/// Sign convention: the largest component is positive.
fn orient(y: &mut [f64]) {
    let imax = y
        .iter()
        .enumerate()
        .max_by(|a, b| libm::fabs(*a.1).total_cmp(&libm::fabs(*b.1)))
        .map(|p| p.0)
        .unwrap_or(0);
    if y[imax] < 0.0 {
        for a in y.iter_mut() {
            *a = -*a;
        }
    }
}

/// The symmetric tridiagonal operator `T = W^{1/2} H W^{-1/2}` acting on
/// `φ = √w ψ`.
#[derive(Clone, Debug)]
pub struct Discretization {
    pub mesh: Mesh,
    pub potential: Vec<f64>,
    w: Vec<f64>,
    d: Vec<f64>,
    e: Vec<f64>,
    e2: Vec<f64>,
    pivmin: f64,
}

impl Discretization {
    pub fn new(potential: &PotentialModel, mesh: Mesh) -> Self {
        let t = HBAR / (2.0 * potential.mass);
        let x = &mesh.nodes;
        let n = mesh.len();
        let w = mesh.weights();
        let v: Vec<f64> = mesh.interior().iter().map(|&xi| potential.value(xi)).collect();
        let mut d = Vec::with_capacity(n);
        let mut e = Vec::with_capacity(n.saturating_sub(1));
        for i in 0..n {
            let hl = x[i + 1] - x[i];
            let hr = x[i + 2] - x[i + 1];
            d.push(t * (1.0 / hl + 1.0 / hr) / w[i] + v[i]);
            if i + 1 < n {
                e.push(-t / (hr * libm::sqrt(w[i] * w[i + 1])));
            }
        }
        let e2: Vec<f64> = e.iter().map(|a| a * a).collect();
        let emax = e2.iter().cloned().fold(1.0f64, f64::max);
        Discretization { mesh, potential: v, w, d, e, e2, pivmin: f64::MIN_POSITIVE * emax }
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    /// Number of eigenvalues strictly below `lambda`.
    pub fn count_below(&self, lambda: f64) -> usize {
        let mut count = 0;
        let mut q = self.d[0] - lambda;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.d.len() {
            if libm::fabs(q) < self.pivmin {
                q = -self.pivmin;
            }
            q = self.d[i] - lambda - self.e2[i - 1] / q;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Counts for four shifts in one sweep; the independent recurrences
    /// overlap in the pipeline.
    pub fn count_below4(&self, lambda: [f64; 4]) -> [usize; 4] {
        let mut count = [0usize; 4];
        let mut q = [0.0f64; 4];
        for k in 0..4 {
            q[k] = self.d[0] - lambda[k];
            count[k] += (q[k] < 0.0) as usize;
        }
        for i in 1..self.d.len() {
            let (d, e2) = (self.d[i], self.e2[i - 1]);
            for k in 0..4 {
                let p = if libm::fabs(q[k]) < self.pivmin { -self.pivmin } else { q[k] };
                q[k] = d - lambda[k] - e2 / p;
                count[k] += (q[k] < 0.0) as usize;
            }
        }
        count
    }

    /// Brackets `(index, lo, hi)` isolating each eigenvalue in `[lo, hi)`,
    /// ascending.
    pub fn brackets(&self, lo: f64, hi: f64) -> Result<Vec<(usize, f64, f64)>> {
        let c_lo = self.count_below(lo);
        let c_hi = self.count_below(hi);
        let mut out = Vec::with_capacity(c_hi.saturating_sub(c_lo));
        let mut stack = vec![(lo, hi, c_lo, c_hi)];
        while let Some((a, b, ca, cb)) = stack.pop() {
            if cb <= ca {
                continue;
            }
            let tol = 1e-4 * libm::fabs(a).max(libm::fabs(b)) + 1e-6;
            if cb - ca == 1 && b - a <= tol {
                out.push((ca, a, b));
                continue;
            }
            // five-way section
            let h = (b - a) / 5.0;
            let pts = [a + h, a + 2.0 * h, a + 3.0 * h, a + 4.0 * h];
            if !(pts[0] > a && pts[3] < b) {
                return Err(Error::NonConvergence { lo: a, hi: b });
            }
            let cs = self.count_below4(pts);
            let edges = [(a, ca), (pts[0], cs[0]), (pts[1], cs[1]), (pts[2], cs[2]), (pts[3], cs[3]), (b, cb)];
            for s in edges.windows(2).rev() {
                if s[1].1 < s[0].1 {
                    return Err(Error::NonConvergence { lo: a, hi: b });
                }
                stack.push((s[0].0, s[1].0, s[0].1, s[1].1));
            }
        }
        out.sort_by_key(|p| p.0);
        Ok(out)
    }

    /// Rayleigh quotient and unit eigenvector for an isolating bracket.
    ///
    /// Inverse iteration at the bracket midpoint runs until the residual
    /// reaches `1e-9 |ω|` or stops improving, at most [`MAX_INVERSE_STEPS`]
    /// steps. The result must meet `1e-6 |ω|` plus the rounding floor.
    pub fn refine(&self, lo: f64, hi: f64) -> Result<(f64, Vec<f64>)> {
        let lu = ShiftedLu::factor(&self.d, &self.e, 0.5 * (lo + hi));
        let mut phi = self.start_vector();
        let slack = hi - lo;
        let mut prev = f64::INFINITY;
        let mut best: Option<(f64, f64, Vec<f64>)> = None;
        for step in 1..=MAX_INVERSE_STEPS {
            self.inverse_step(&lu, &mut phi, lo, hi)?;
            if step < 3 {
                continue;
            }
            let tp = self.apply(&phi);
            let omega: f64 = tp.iter().zip(&phi).map(|(a, b)| a * b).sum();
            if !(omega > lo - slack && omega < hi + slack) {
                continue;
            }
            let res = self.residual(&phi, omega);
            let floor = 64.0 * f64::EPSILON * self.residual_scale(&phi);
            let scale = libm::fabs(omega);
            if res <= 1e-6 * scale + floor {
                best = Some((omega, res, phi.clone()));
                if res <= 1e-9 * scale || res > 0.5 * prev {
                    break;
                }
            }
            prev = res;
        }
        match best {
            Some((omega, _, mut phi)) => {
                orient(&mut phi);
                Ok((omega, phi))
            }
            None => Err(Error::NonConvergence { lo, hi }),
        }
    }

    fn start_vector(&self) -> Vec<f64> {
        // deterministic start vector with no special structure
        let mut state = 0x2545_f491_4f6c_dd1du64;
        (0..self.len())
            .map(|_| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                0.5 + (state >> 11) as f64 / (1u64 << 53) as f64
            })
            .collect()
    }

    fn inverse_step(&self, lu: &ShiftedLu, y: &mut [f64], lo: f64, hi: f64) -> Result<()> {
        lu.solve(y);
        let norm = libm::sqrt(y.iter().map(|a| a * a).sum::<f64>());
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::NonConvergence { lo, hi });
        }
        for a in y.iter_mut() {
            *a /= norm;
        }
        Ok(())
    }

    /// Matrix-vector product `T φ`.
    pub fn apply(&self, phi: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.d[i] * phi[i];
                if i > 0 {
                    s += self.e[i - 1] * phi[i - 1];
                }
                if i + 1 < n {
                    s += self.e[i] * phi[i + 1];
                }
                s
            })
            .collect()
    }

    /// `‖Tφ − ωφ‖ / ‖φ‖`.
    pub fn residual(&self, phi: &[f64], omega: f64) -> f64 {
        let tp = self.apply(phi);
        let r: f64 = tp.iter().zip(phi).map(|(a, p)| (a - omega * p) * (a - omega * p)).sum();
        let nn: f64 = phi.iter().map(|p| p * p).sum();
        libm::sqrt(r / nn)
    }

    /// Rounding floor of the residual: `‖ |T| |φ| ‖ / ‖φ‖`.
    pub fn residual_scale(&self, phi: &[f64]) -> f64 {
        let n = self.len();
        let mut s = 0.0;
        for i in 0..n {
            let mut a = libm::fabs(self.d[i] * phi[i]);
            if i > 0 {
                a += libm::fabs(self.e[i - 1] * phi[i - 1]);
            }
            if i + 1 < n {
                a += libm::fabs(self.e[i] * phi[i + 1]);
            }
            s += a * a;
        }
        let nn: f64 = phi.iter().map(|p| p * p).sum();
        libm::sqrt(s / nn)
    }

    /// Unit eigenvector `φ` of `T` for the eigenvalue nearest `lambda`,
    /// after three steps of inverse iteration.
    pub fn eigenvector(&self, lambda: f64) -> Result<Vec<f64>> {
        let lu = ShiftedLu::factor(&self.d, &self.e, lambda);
        let mut y = self.start_vector();
        for _ in 0..3 {
            self.inverse_step(&lu, &mut y, lambda, lambda)?;
        }
        orient(&mut y);
        Ok(y)
    }

    /// Full state for an isolating bracket with label `nu`.
    pub fn state(&self, nu: usize, lo: f64, hi: f64) -> Result<MotionalState> {
        let (omega, phi) = self.refine(lo, hi)?;
        let psi: Vec<f64> = phi.iter().zip(&self.w).map(|(p, w)| p / libm::sqrt(*w)).collect();
        Ok(MotionalState { nu, omega, psi, normalized: true })
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    /// Solves all states in `window`.
    pub fn solve(self, window: (f64, f64)) -> Result<BoundSpectrum> {
        let mut states = Vec::new();
        for (nu, lo, hi) in self.brackets(window.0, window.1)? {
            states.push(self.state(nu, lo, hi)?);
        }
        Ok(BoundSpectrum { mesh: self.mesh, potential: self.potential, window, states, extrapolated: false })
    }
}

/// LU factorization of `T - λ` with partial pivoting.
struct ShiftedLu {
    dl: Vec<f64>,
    dd: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swap: Vec<bool>,
}

impl ShiftedLu {
    fn factor(d: &[f64], e: &[f64], lambda: f64) -> Self {
        let n = d.len();
        let mut dl = e.to_vec();
        let mut du = e.to_vec();
        let mut dd: Vec<f64> = d.iter().map(|v| v - lambda).collect();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swap = vec![false; n.saturating_sub(1)];
        let tiny = f64::EPSILON * d.iter().fold(0.0f64, |m, v| m.max(libm::fabs(*v))) * 1e-10;
        for i in 0..n.saturating_sub(1) {
            if libm::fabs(dd[i]) >= libm::fabs(dl[i]) {
                if dd[i] == 0.0 {
                    dd[i] = tiny;
                }
                let fact = dl[i] / dd[i];
                dl[i] = fact;
                dd[i + 1] -= fact * du[i];
            } else {
                let fact = dd[i] / dl[i];
                dd[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = dd[i + 1];
                dd[i + 1] = temp - fact * dd[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swap[i] = true;
            }
        }
        if n > 0 && dd[n - 1] == 0.0 {
            dd[n - 1] = tiny;
        }
        ShiftedLu { dl, dd, du, du2, swap }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = b.len();
        for i in 0..n - 1 {
            if self.swap[i] {
                let t = b[i];
                b[i] = b[i + 1];
                b[i + 1] = t - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.dd[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.dd[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.dd[i];
        }
    }
}

/// Builds the mesh and solves every bound state in `window`.
///
/// Energies are extrapolated from this mesh and one with twice the phase
/// step, removing the leading `h²` error; wavefunctions live on the finer
/// mesh.
pub fn solve_bound_states(potential: &PotentialModel, window: (f64, f64), policy: MeshPolicy) -> Result<BoundSpectrum> {
    let mesh = build_mesh(potential, window, policy)?;
    let mut fine = Discretization::new(potential, mesh).solve(window)?;
    let coarse_policy = match policy {
        MeshPolicy::PhaseAdaptive { phase_step } => MeshPolicy::PhaseAdaptive { phase_step: 2.0 * phase_step },
        MeshPolicy::Uniform { phase_step } => MeshPolicy::Uniform { phase_step: 2.0 * phase_step },
    };
    let coarse = Discretization::new(potential, build_mesh(potential, window, coarse_policy)?);
    let brackets = coarse.brackets(window.0, window.1)?;
    if brackets.len() != fine.states.len() {
        return Err(Error::NonConvergence { lo: window.0, hi: window.1 });
    }
    for (s, &(nu, lo, hi)) in fine.states.iter_mut().zip(&brackets) {
        if nu != s.nu {
            return Err(Error::NonConvergence { lo, hi });
        }
        let (omega_coarse, _) = coarse.refine(lo, hi)?;
        s.omega += (s.omega - omega_coarse) / 3.0;
    }
    fine.extrapolated = true;
    Ok(fine)
}

/// Solves on a single mesh without extrapolation.
pub fn solve_on_mesh(potential: &PotentialModel, mesh: Mesh, window: (f64, f64)) -> Result<BoundSpectrum> {
    Discretization::new(potential, mesh).solve(window)
}

/// `Σ w ψ_a ψ_b` on a shared mesh.
pub fn overlap(w: &[f64], a: &[f64], b: &[f64]) -> f64 {
    w.iter().zip(a).zip(b).map(|((w, a), b)| w * a * b).sum()
}
