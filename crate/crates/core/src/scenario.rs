//! End-to-end pipelines for the adsorbed, hybrid and two-color-trap cases.

use alloc::vec::Vec;

use crate::config::Params;
use crate::consts::mhz;
use crate::eigen::{solve_bound_states, BoundSpectrum};
use crate::error::{Error, Result};
use crate::linewidth::{
    nearest_neighbor_linewidths, total_linewidth, trap_depopulation_harmonic, trap_depopulation_numeric,
    LinewidthRecord, OverlapTable,
};
use crate::mesh::MeshPolicy;
use crate::potential::{PotentialModel, TrapFit};
use crate::spectrum::{
    assemble_spectrum, reference_power, spectrum_lines, FcTable, FieldProduct, Reference, SpectrumGrid, SpectrumLine,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    Adsorbed,
    Hybrid,
    Trap,
}

impl Scenario {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "adsorbed" => Some(Scenario::Adsorbed),
            "hybrid" => Some(Scenario::Hybrid),
            "trap" => Some(Scenario::Trap),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Adsorbed => "adsorbed",
            Scenario::Hybrid => "hybrid",
            Scenario::Trap => "trap",
        }
    }

    /// Anti-Stokes window plotted for this case, rad/s.
    pub fn default_omega_window(&self) -> (f64, f64) {
        match self {
            Scenario::Adsorbed | Scenario::Hybrid => (crate::consts::khz(240.0), crate::consts::khz(1000.0)),
            Scenario::Trap => (crate::consts::khz(0.0), crate::consts::khz(600.0)),
        }
    }
}

/// Bound-state window used for surface-bound states.
pub fn default_window() -> (f64, f64) {
    (mhz(-25.0), 0.0)
}

#[derive(Clone, Debug)]
pub struct Solved {
    pub potential: PotentialModel,
    pub spectrum: BoundSpectrum,
    pub overlaps: OverlapTable,
}

fn policy(params: &Params) -> MeshPolicy {
    MeshPolicy::PhaseAdaptive { phase_step: params.numerics.phase_step }
}

fn finish(potential: PotentialModel, window: (f64, f64), params: &Params) -> Result<Solved> {
    let spectrum = solve_bound_states(&potential, window, policy(params))?;
    let overlaps = OverlapTable::compute(&spectrum, &potential)?;
    Ok(Solved { potential, spectrum, overlaps })
}

pub fn adsorption_potential(params: &Params) -> PotentialModel {
    PotentialModel::adsorption(&params.atom, params.geometry.radius, params.numerics.r_out)
}

pub fn solve_adsorbed(params: &Params, window: (f64, f64)) -> Result<Solved> {
    finish(adsorption_potential(params), window, params)
}

pub fn solve_hybrid(params: &Params, window: (f64, f64)) -> Result<Solved> {
    finish(PotentialModel::hybrid(params)?, window, params)
}

/// Exponential-barrier variant of the adsorption potential.
pub fn solve_adsorbed_exp(params: &Params, window: (f64, f64)) -> Result<Solved> {
    let v = PotentialModel::adsorption_exp(&params.exp_barrier, params.atom.mass, params.geometry.radius, params.numerics.r_out);
    finish(v, window, params)
}

#[derive(Clone, Debug)]
pub struct TrapSolution {
    pub solved: Solved,
    pub fit: TrapFit,
    /// Traveling-phonon depopulation rate per state, rad/s.
    pub numeric: Vec<f64>,
    /// Harmonic-limit rate per state, rad/s.
    pub harmonic: Vec<f64>,
}

/// Number of trap levels kept above the ground state.
pub const TRAP_LEVELS: usize = 12;

pub fn solve_trap(params: &Params) -> Result<TrapSolution> {
    let (potential, fit) = PotentialModel::two_color_trap(params)?;
    let v0 = fit.minimum.v0;
    let top = (v0 + (TRAP_LEVELS as f64 + 0.5) * fit.minimum.omega_r).min(fit.barrier_v).min(0.0);
    if !(top > v0) {
        return Err(Error::NoTrap);
    }
    let solved = finish(potential, (v0, top), params)?;
    if solved.spectrum.states.len() < 2 {
        return Err(Error::NoTrap);
    }
    let numeric = trap_depopulation_numeric(&solved.overlaps, &params.geometry, &params.material);
    let harmonic = solved
        .overlaps
        .labels
        .iter()
        .map(|&nu| trap_depopulation_harmonic(nu, fit.minimum.omega_r, params.atom.mass, &params.geometry, &params.material))
        .collect();
    Ok(TrapSolution { solved, fit, numeric, harmonic })
}

/// Depopulation-limited nearest-neighbour lines of the trap.
pub fn trap_linewidths(trap: &TrapSolution) -> Vec<LinewidthRecord> {
    let t = &trap.solved.overlaps;
    let mut out = Vec::new();
    for a in 0..t.len() {
        if let Some(b) = t.index_of(t.labels[a] + 1) {
            let gamma1 = trap.numeric[a] + trap.numeric[b];
            out.push(LinewidthRecord {
                nu: t.labels[a],
                nu_prime: t.labels[b],
                omega: t.transition(a, b),
                gamma1,
                gamma2: 0.0,
                gamma: gamma1,
                modes_converged: true,
                neighbors_complete: true,
            });
        }
    }
    out
}

pub fn probe(params: &Params) -> Result<FieldProduct> {
    FieldProduct::probe(&params.probe, params.geometry.radius, params.material.permittivity)
}

pub fn reference(params: &Params, trap: &TrapSolution) -> Result<Reference> {
    let fc = FcTable::compute(&trap.solved.spectrum, &probe(params)?);
    reference_power(&fc, &trap.numeric)
}

#[derive(Clone, Debug)]
pub struct SpectrumResult {
    pub scenario: Scenario,
    pub reference: Reference,
    pub records: Vec<LinewidthRecord>,
    /// Lines of the requested branch whose centres fall in the window.
    pub lines: Vec<SpectrumLine>,
    pub grid: SpectrumGrid,
}

/// Linewidth records for every pair of states in the table.
pub fn all_pair_linewidths(solved: &Solved, params: &Params) -> Vec<LinewidthRecord> {
    let t = &solved.overlaps;
    let mut out = Vec::new();
    for a in 0..t.len() {
        for b in a + 1..t.len() {
            out.push(total_linewidth(t, a, b, &params.geometry, &params.material));
        }
    }
    out
}

/// Full spectrum of one case over `omega_window` (anti-Stokes when positive).
pub fn scenario_spectrum(params: &Params, scenario: Scenario, omega_window: (f64, f64)) -> Result<SpectrumResult> {
    let trap = solve_trap(params)?;
    let reference = reference(params, &trap)?;
    let (solved, records) = match scenario {
        Scenario::Adsorbed => {
            let s = solve_adsorbed(params, default_window())?;
            let r = all_pair_linewidths(&s, params);
            (s, r)
        }
        Scenario::Hybrid => {
            let s = solve_hybrid(params, default_window())?;
            let r = all_pair_linewidths(&s, params);
            (s, r)
        }
        Scenario::Trap => {
            let r = trap_linewidths(&trap);
            (trap.solved.clone(), r)
        }
    };
    let fc = FcTable::compute(&solved.spectrum, &probe(params)?);
    let all = spectrum_lines(&fc, &records, &reference);
    let grid = assemble_spectrum(&all, &reference, omega_window)?;
    let lines = all
        .into_iter()
        .filter(|l| l.center >= omega_window.0 && l.center <= omega_window.1)
        .collect();
    Ok(SpectrumResult { scenario, reference, records, lines, grid })
}

/// Nearest-neighbour records only.
pub fn nearest_neighbor_records(solved: &Solved, params: &Params) -> Vec<LinewidthRecord> {
    nearest_neighbor_linewidths(&solved.overlaps, &params.geometry, &params.material)
}
