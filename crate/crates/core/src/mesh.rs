//! Graded one-dimensional meshes for the radial Schrödinger equation.

use alloc::vec::Vec;

use crate::consts::HBAR;
use crate::error::{Error, Result};
use crate::potential::{PotentialKind, PotentialModel};

/// How nodes are distributed between the Dirichlet walls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MeshPolicy {
    /// Nodes at equal increments `phase_step` of the local phase `∫ k_eff dx`.
    PhaseAdaptive { phase_step: f64 },
    /// Equal spacing `phase_step / max k_eff`.
    Uniform { phase_step: f64 },
}

impl MeshPolicy {
    /// Phase-adaptive grading for surface potentials, uniform spacing for the
    /// synthetic test potentials.
    pub fn for_potential(potential: &PotentialModel, phase_step: f64) -> Self {
        match potential.kind {
            PotentialKind::Harmonic { .. } | PotentialKind::Box { .. } => MeshPolicy::Uniform { phase_step },
            _ => MeshPolicy::PhaseAdaptive { phase_step },
        }
    }

    pub fn phase_step(&self) -> f64 {
        match *self {
            MeshPolicy::PhaseAdaptive { phase_step } | MeshPolicy::Uniform { phase_step } => phase_step,
        }
    }

    /// Same policy with half the step.
    pub fn refined(&self) -> Self {
        match *self {
            MeshPolicy::PhaseAdaptive { phase_step } => MeshPolicy::PhaseAdaptive { phase_step: 0.5 * phase_step },
            MeshPolicy::Uniform { phase_step } => MeshPolicy::Uniform { phase_step: 0.5 * phase_step },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    /// Surface distances `x_0 < ... < x_{N+1}`; the end nodes carry the
    /// Dirichlet conditions.
    pub nodes: Vec<f64>,
    pub policy: MeshPolicy,
}

impl Mesh {
    pub fn x_in(&self) -> f64 {
        self.nodes[0]
    }

    pub fn x_out(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Number of interior nodes.
    pub fn len(&self) -> usize {
        self.nodes.len() - 2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Interior node positions.
    pub fn interior(&self) -> &[f64] {
        &self.nodes[1..self.nodes.len() - 1]
    }

    /// Trapezoidal weights `(x_{i+1} - x_{i-1}) / 2` of the interior nodes.
    pub fn weights(&self) -> Vec<f64> {
        self.nodes.windows(3).map(|w| 0.5 * (w[2] - w[0])).collect()
    }
}

fn check_window(window: (f64, f64)) -> Result<()> {
    let (lo, hi) = window;
    if !(lo < hi) || hi > 0.0 || !lo.is_finite() {
        return Err(Error::Domain("energy window must satisfy lo < hi <= 0"));
    }
    Ok(())
}

/// Outer box edge: beyond it `|V|` stays below `|E_hi| / 100`, capped by the
/// potential's domain.
fn outer_edge(potential: &PotentialModel, e_hi: f64) -> f64 {
    let (x_in, x_out) = potential.domain;
    if e_hi >= 0.0 {
        return x_out;
    }
    let level = 0.01 * -e_hi;
    let n = 2000;
    let ratio = libm::pow(x_out / x_in, 1.0 / n as f64);
    let mut x = x_out;
    for _ in 0..n {
        let prev = x / ratio;
        if libm::fabs(potential.value(prev)) >= level {
            return x;
        }
        x = prev;
    }
    x_out
}

/// Builds the mesh for bound states in `window = (E_lo, E_hi)` (rad/s).
pub fn build_mesh(potential: &PotentialModel, window: (f64, f64), policy: MeshPolicy) -> Result<Mesh> {
    check_window(window)?;
    let (e_lo, e_hi) = window;
    let floor = libm::fabs(e_hi).max(1e-3 * libm::fabs(e_lo));
    let scale = 2.0 * potential.mass / HBAR;
    let k_eff = |x: f64| libm::sqrt(scale * (libm::fabs(potential.value(x) - e_hi) + floor));

    let (x_in, x_out) = match potential.kind {
        PotentialKind::Harmonic { omega_t, center, floor } => {
            // eight oscillator lengths beyond the outermost turning point
            let l = potential.oscillator_length().unwrap_or(0.0);
            let half = (libm::sqrt(2.0 * (e_hi - floor).max(0.0) / omega_t) + 8.0) * l;
            (center - half, center + half)
        }
        PotentialKind::Box { .. } => potential.domain,
        _ => (potential.domain.0, outer_edge(potential, e_hi)),
    };
    if !(x_out > x_in) {
        return Err(Error::Domain("empty mesh domain"));
    }

    let nodes = match policy {
        MeshPolicy::Uniform { phase_step } => {
            let kmax = (0..=10_000)
                .map(|i| k_eff(x_in + (x_out - x_in) * i as f64 / 10_000.0))
                .fold(0.0f64, f64::max);
            let n = libm::ceil((x_out - x_in) * kmax / phase_step) as usize + 1;
            let h = (x_out - x_in) / n as f64;
            (0..=n).map(|i| if i == n { x_out } else { x_in + h * i as f64 }).collect()
        }
        MeshPolicy::PhaseAdaptive { phase_step } => {
            // integrate dx/ds = 1/k_eff with classical RK4 steps in s
            let g = |x: f64| 1.0 / k_eff(x);
            let mut nodes = Vec::new();
            let mut x = x_in;
            let ds = phase_step;
            nodes.push(x);
            loop {
                let k1 = g(x);
                let k2 = g(x + 0.5 * ds * k1);
                let k3 = g(x + 0.5 * ds * k2);
                let k4 = g(x + ds * k3);
                let xn = x + ds / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                if xn >= x_out {
                    // merge a sliver of a last cell into its neighbour
                    if x_out - x < 0.5 * (xn - x) && nodes.len() > 1 {
                        nodes.pop();
                    }
                    nodes.push(x_out);
                    break;
                }
                nodes.push(xn);
                x = xn;
            }
            nodes
        }
    };
    if nodes.len() < 3 {
        return Err(Error::Domain("mesh has no interior nodes"));
    }
    Ok(Mesh { nodes, policy })
}
