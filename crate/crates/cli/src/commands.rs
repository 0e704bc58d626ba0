//! Subcommand pipelines. Each returns the (possibly adjusted) parameters it
//! ran with and the tables to write.

use rayon::prelude::*;

use nanobound_core::config::{GeometryParams, Params};
use nanobound_core::consts::{khz, mhz, TWO_PI};
use nanobound_core::eigen::{solve_bound_states, BoundSpectrum};
use nanobound_core::linewidth::{nearest_neighbor_linewidths, total_linewidth, LinewidthRecord, OverlapTable};
use nanobound_core::mesh::MeshPolicy;
use nanobound_core::phonon::{cavity_mode, thermal_population};
use nanobound_core::photon::solve_wavelength;
use nanobound_core::potential::PotentialModel;
use nanobound_core::scenario::{self, Scenario, SpectrumResult};

use crate::args::{Command, Figure, ModesKind, PotentialArg, ScenarioArg};
use crate::output::{Cell, Table};
use crate::CliError;

const NM: f64 = 1e-9;
const THZ: f64 = TWO_PI * 1e12;

pub fn dispatch(command: &Command, mut params: Params) -> Result<(Params, Vec<Table>), CliError> {
    let tables = match command {
        Command::Modes { kind: ModesKind::Photon { wavelength_nm, rmax_nm, points } } => {
            vec![photon_table("photon_mode", &params, *wavelength_nm, *rmax_nm, *points)?]
        }
        Command::Modes { kind: ModesKind::Phonon { max_m } } => vec![phonon_table(&params, *max_m)?],
        Command::Potential { kind, rmax_nm, points } => {
            let model = model_for(*kind, &params)?;
            vec![potential_table("potential", &model, *rmax_nm, *points)?]
        }
        Command::States { potential, window_mhz, wavefunctions } => {
            let window = parse_window_mhz(window_mhz)?;
            let model = model_for(*potential, &params)?;
            let sp = solve(&model, window, &params)?;
            let mut out = vec![states_table("states", &sp)];
            if *wavefunctions {
                for s in &sp.states {
                    out.push(single_wavefunction(&sp, s.nu, &model));
                }
            }
            out
        }
        Command::Linewidths { potential, window_mhz } => {
            let window = parse_window_mhz(window_mhz)?;
            let model = model_for(*potential, &params)?;
            let sp = solve(&model, window, &params)?;
            let table = OverlapTable::compute(&sp, &model)?;
            let recs = nearest_neighbor_linewidths(&table, &params.geometry, &params.material);
            vec![linewidth_table("linewidths", &recs, &params.geometry)]
        }
        Command::ScanCavity { lengths_um, temperatures_k, potential, nu } => {
            let lengths: Vec<f64> = parse_list(lengths_um, "--lengths-um")?.into_iter().map(|l| l * 1e-6).collect();
            let temps = match temperatures_k {
                Some(t) => parse_list(t, "--temperatures-k")?,
                None => vec![params.geometry.temperature],
            };
            let model = model_for(*potential, &params)?;
            let sp = solve(&model, scenario::default_window(), &params)?;
            let table = OverlapTable::compute(&sp, &model)?;
            vec![scan_table("scan_cavity", &table, *nu, &lengths, &temps, &params)?]
        }
        Command::Spectrum { scenario: sc, omega_khz } => {
            let sc = match sc {
                ScenarioArg::Adsorbed => Scenario::Adsorbed,
                ScenarioArg::Hybrid => Scenario::Hybrid,
                ScenarioArg::Trap => Scenario::Trap,
            };
            let window = match omega_khz {
                Some(w) => {
                    let (lo, hi) = parse_pair(w, "--omega-khz")?;
                    (khz(lo), khz(hi))
                }
                None => sc.default_omega_window(),
            };
            spectrum_tables("", &scenario::scenario_spectrum(&params, sc, window)?)
        }
        Command::Reproduce { figure } => reproduce(*figure, &mut params)?,
    };
    Ok((params, tables))
}

fn parse_list(s: &str, flag: &str) -> Result<Vec<f64>, CliError> {
    let v: Result<Vec<f64>, _> = s.split(',').map(|x| x.trim().parse::<f64>()).collect();
    match v {
        Ok(v) if !v.is_empty() && v.iter().all(|x| x.is_finite() && *x > 0.0) => Ok(v),
        _ => Err(CliError::Config(format!("{flag}: expected a comma-separated list of positive numbers, got `{s}`"))),
    }
}

fn parse_pair(s: &str, flag: &str) -> Result<(f64, f64), CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    let bad = || CliError::Config(format!("{flag}: expected `lo,hi`, got `{s}`"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn parse_window_mhz(s: &str) -> Result<(f64, f64), CliError> {
    let (lo, hi) = parse_pair(s, "--window-mhz")?;
    if hi > 0.0 {
        return Err(CliError::Config("--window-mhz: bound-state window must end at or below 0".into()));
    }
    Ok((mhz(lo), mhz(hi)))
}

pub fn model_for(kind: PotentialArg, params: &Params) -> Result<PotentialModel, CliError> {
    Ok(match kind {
        PotentialArg::Adsorption => scenario::adsorption_potential(params),
        PotentialArg::AdsorptionExp => PotentialModel::adsorption_exp(
            &params.exp_barrier,
            params.atom.mass,
            params.geometry.radius,
            params.numerics.r_out,
        ),
        PotentialArg::Hybrid => PotentialModel::hybrid(params)?,
        PotentialArg::Trap => PotentialModel::two_color_trap(params)?.0,
    })
}

fn solve(model: &PotentialModel, window: (f64, f64), params: &Params) -> Result<BoundSpectrum, CliError> {
    Ok(solve_bound_states(model, window, MeshPolicy::PhaseAdaptive { phase_step: params.numerics.phase_step })?)
}

fn photon_table(name: &str, params: &Params, wavelength_nm: f64, rmax_nm: f64, points: usize) -> Result<Table, CliError> {
    if !(wavelength_nm > 0.0 && rmax_nm > 0.0 && points >= 2) {
        return Err(CliError::Config("modes photon: wavelength, rmax and points must be positive".into()));
    }
    let r = params.geometry.radius;
    let mode = solve_wavelength(wavelength_nm * NM, r, params.material.permittivity)?;
    let mut t = Table::new(name, &["r_nm", "re_e_r", "im_e_r", "re_e_phi", "im_e_phi", "re_e_z", "im_e_z"])
        .meta("wavelength_nm", wavelength_nm)
        .meta("radius_nm", r / NM)
        .meta("k_per_m", mode.k)
        .meta("a_per_m", mode.a)
        .meta("b_per_m", mode.b)
        .meta("effective_index", mode.effective_index())
        .meta("normalization", "eps0^2 * integral of eps |E|^2 r dr = 1");
    for i in 0..points {
        let rr = rmax_nm * NM * i as f64 / (points - 1) as f64;
        let f = mode.mode_field(rr);
        t.push(vec![
            (rr / NM).into(),
            f[0].re.into(),
            f[0].im.into(),
            f[1].re.into(),
            f[1].im.into(),
            f[2].re.into(),
            f[2].im.into(),
        ]);
    }
    Ok(t)
}

fn phonon_table(params: &Params, max_m: u32) -> Result<Table, CliError> {
    if max_m == 0 {
        return Err(CliError::Config("modes phonon: --max-m must be at least 1".into()));
    }
    let g = &params.geometry;
    let mut t = Table::new("phonon_modes", &["m", "omega_over_2pi_Hz", "kappa_over_2pi_Hz", "nbar_300K", "nbar_420K"])
        .meta("length_um", g.length * 1e6)
        .meta("quality_factor", g.quality_factor);
    for m in 1..=max_m {
        let mode = cavity_mode(m, 1, g, &params.material);
        t.push(vec![
            m.into(),
            (mode.omega / TWO_PI).into(),
            (mode.kappa / TWO_PI).into(),
            thermal_population(mode.omega, 300.0).into(),
            thermal_population(mode.omega, 420.0).into(),
        ]);
    }
    Ok(t)
}

fn sample_start(model: &PotentialModel) -> f64 {
    let depth = model.depth();
    if depth < 0.0 {
        model.wall_point(10.0 * -depth)
    } else {
        model.domain.0
    }
}

fn potential_table(name: &str, model: &PotentialModel, rmax_nm: f64, points: usize) -> Result<Table, CliError> {
    let x_lo = sample_start(model);
    let x_hi = rmax_nm * NM - model.radius;
    if x_hi.partial_cmp(&x_lo) != Some(std::cmp::Ordering::Greater) || points < 2 {
        return Err(CliError::Config(format!("potential: --rmax-nm must exceed {:.4} nm", (model.radius + x_lo) / NM)));
    }
    let mut t = Table::new(name, &["r_nm", "V_over_h_THz", "Vp_over_h_THz_per_nm", "Vpp_over_h_THz_per_nm2"])
        .meta("radius_nm", model.radius / NM)
        .meta("sampling", "logarithmic in distance from the surface");
    let ratio = (x_hi / x_lo).powf(1.0 / (points - 1) as f64);
    for i in 0..points {
        let x = if i + 1 == points { x_hi } else { x_lo * ratio.powi(i as i32) };
        let j = model.eval(x);
        t.push(vec![
            ((model.radius + x) / NM).into(),
            (j.v / THZ).into(),
            (j.d1 / THZ * NM).into(),
            (j.d2 / THZ * NM * NM).into(),
        ]);
    }
    Ok(t)
}

fn states_table(name: &str, sp: &BoundSpectrum) -> Table {
    let mut t = Table::new(name, &["nu", "omega_over_2pi_Hz"])
        .meta("window_MHz", format!("{},{}", sp.window.0 / TWO_PI / 1e6, sp.window.1 / TWO_PI / 1e6))
        .meta("mesh_nodes", sp.mesh.len())
        .meta("extrapolated", sp.extrapolated);
    for s in &sp.states {
        t.push(vec![s.nu.into(), (s.omega / TWO_PI).into()]);
    }
    t
}

/// Indices of roughly `n` nodes evenly spaced in `log x`.
fn log_sample(x: &[f64], n: usize) -> Vec<usize> {
    let (lo, hi) = (x[0].ln(), x[x.len() - 1].ln());
    let mut out: Vec<usize> = Vec::with_capacity(n);
    let mut j = 0;
    for k in 0..n {
        let target = lo + (hi - lo) * k as f64 / (n - 1) as f64;
        while j + 1 < x.len() && x[j].ln() < target {
            j += 1;
        }
        if out.last() != Some(&j) {
            out.push(j);
        }
    }
    out
}

fn single_wavefunction(sp: &BoundSpectrum, nu: usize, model: &PotentialModel) -> Table {
    let x = sp.mesh.interior();
    let s = sp.by_label(nu).expect("state from this spectrum");
    let mut t = Table::new(&format!("psi_{nu}"), &["r_nm", "psi_per_sqrt_m"])
        .meta("nu", nu)
        .meta("omega_over_2pi_Hz", s.omega / TWO_PI)
        .meta("normalization", "sum of w_i psi_i^2 = 1");
    for i in log_sample(x, 4000) {
        t.push(vec![((model.radius + x[i]) / NM).into(), s.psi[i].into()]);
    }
    t
}

fn wavefunction_table(name: &str, sp: &BoundSpectrum, labels: &[usize], radius: f64) -> Table {
    let x = sp.mesh.interior();
    let mut cols = vec!["r_nm".to_string()];
    cols.extend(labels.iter().map(|l| format!("psi_{l}")));
    let col_refs: Vec<&str> = cols.iter().map(String::as_str).collect();
    let mut t = Table::new(name, &col_refs).meta("normalization", "sum of w_i psi_i^2 = 1");
    let states: Vec<_> = labels.iter().filter_map(|&l| sp.by_label(l)).collect();
    for i in log_sample(x, 2000) {
        let mut row: Vec<Cell> = vec![((radius + x[i]) / NM).into()];
        row.extend(states.iter().map(|s| Cell::from(s.psi[i])));
        t.push(row);
    }
    t
}

fn linewidth_table(name: &str, recs: &[LinewidthRecord], g: &GeometryParams) -> Table {
    let mut t = Table::new(
        name,
        &["nu", "nu_prime", "omega_kHz", "gamma1_Hz", "gamma2_Hz", "gamma_Hz", "modes_converged", "neighbors_complete"],
    )
    .meta("length_um", g.length * 1e6)
    .meta("quality_factor", g.quality_factor)
    .meta("temperature_K", g.temperature)
    .meta("units", "omega and widths divided by 2 pi");
    for r in recs {
        t.push(vec![
            r.nu.into(),
            r.nu_prime.into(),
            (r.omega / TWO_PI / 1e3).into(),
            (r.gamma1 / TWO_PI).into(),
            (r.gamma2 / TWO_PI).into(),
            (r.gamma / TWO_PI).into(),
            r.modes_converged.into(),
            r.neighbors_complete.into(),
        ]);
    }
    t
}

/// Linewidth of `nu → nu+1` for each temperature and length.
fn scan_table(
    name: &str,
    table: &OverlapTable,
    nu: usize,
    lengths: &[f64],
    temps: &[f64],
    params: &Params,
) -> Result<Table, CliError> {
    let missing = || CliError::Config(format!("states {nu} and {} are not both in the solved window", nu + 1));
    let a = table.index_of(nu).ok_or_else(missing)?;
    let b = table.index_of(nu + 1).ok_or_else(missing)?;
    let w = table.transition(a, b);
    let mut sep = f64::INFINITY;
    if let Some(c) = table.index_of(nu + 2) {
        sep = sep.min((table.transition(b, c) - w).abs());
    }
    if nu > 0 {
        if let Some(c) = table.index_of(nu - 1) {
            sep = sep.min((table.transition(c, a) - w).abs());
        }
    }
    let jobs: Vec<(f64, f64)> = temps.iter().flat_map(|&t| lengths.iter().map(move |&l| (t, l))).collect();
    let rows: Vec<Vec<Cell>> = jobs
        .par_iter()
        .map(|&(temp, len)| {
            let g = GeometryParams { length: len, temperature: temp, ..params.geometry };
            let r = total_linewidth(table, a, b, &g, &params.material);
            vec![
                (len * 1e6).into(),
                temp.into(),
                (r.gamma1 / TWO_PI).into(),
                (r.gamma2 / TWO_PI).into(),
                (r.gamma / TWO_PI).into(),
                (r.gamma / sep).into(),
                r.modes_converged.into(),
            ]
        })
        .collect();
    let mut t = Table::new(
        name,
        &["length_um", "temperature_K", "gamma1_Hz", "gamma2_Hz", "gamma_Hz", "gamma_over_separation", "modes_converged"],
    )
    .meta("nu", nu)
    .meta("nu_prime", nu + 1)
    .meta("omega_kHz", w / TWO_PI / 1e3)
    .meta("separation_kHz", sep / TWO_PI / 1e3)
    .meta("quality_factor", params.geometry.quality_factor);
    for r in rows {
        t.push(r);
    }
    Ok(t)
}

fn spectrum_tables(prefix: &str, r: &SpectrumResult) -> Vec<Table> {
    let mut lines = r.lines.clone();
    lines.sort_by(|a, b| a.center.total_cmp(&b.center).then(a.nu.cmp(&b.nu)));
    let mut lt = Table::new(
        &format!("{prefix}lines"),
        &["nu", "nu_prime", "center_kHz", "fwhm_Hz", "weight_rel", "peak_rel"],
    )
    .meta("scenario", r.scenario.name())
    .meta("reference", "trap 1->0 anti-Stokes line; P/P0 is relative to its peak spectral density")
    .meta("reference_fwhm_Hz", r.reference.width / TWO_PI);
    for l in &lines {
        lt.push(vec![
            l.nu.into(),
            l.nu_prime.into(),
            (l.center / TWO_PI / 1e3).into(),
            (l.width / TWO_PI).into(),
            l.weight_rel.into(),
            l.peak_rel.into(),
        ]);
    }
    let mut gt = Table::new(&format!("{prefix}grid"), &["omega_kHz", "P_over_P0"]).meta("scenario", r.scenario.name());
    for (w, p) in r.grid.omega.iter().zip(&r.grid.density) {
        gt.push(vec![(w / TWO_PI / 1e3).into(), (*p).into()]);
    }
    vec![lt, gt]
}

/// Cavity lengths of the scan, 1 to 100 µm, in meters.
pub fn figs1_lengths() -> Vec<f64> {
    (0..=24).map(|i| 1e-6 * 10f64.powf(i as f64 / 12.0)).collect()
}

fn reproduce(figure: Figure, params: &mut Params) -> Result<Vec<Table>, CliError> {
    let p = figure.name();
    match figure {
        Figure::Fig2a | Figure::Fig2b => {
            let model = if figure == Figure::Fig2a {
                scenario::adsorption_potential(params)
            } else {
                PotentialModel::hybrid(params)?
            };
            let sp = solve(&model, scenario::default_window(), params)?;
            let shown: Vec<usize> = sp.states.iter().filter(|s| s.omega > mhz(-6.0)).map(|s| s.nu).collect();
            Ok(vec![
                potential_table(&format!("{p}_potential"), &model, 1000.0 + model.radius / NM, 2000)?,
                states_table(&format!("{p}_states"), &sp),
                wavefunction_table(&format!("{p}_wavefunctions"), &sp, &shown, model.radius),
            ])
        }
        Figure::Fig3a | Figure::Fig3b => {
            let (sc, temp) = if figure == Figure::Fig3a { (Scenario::Adsorbed, 300.0) } else { (Scenario::Hybrid, 420.0) };
            params.geometry.temperature = temp;
            let r = scenario::scenario_spectrum(params, sc, sc.default_omega_window())?;
            Ok(spectrum_tables(&format!("{p}_"), &r))
        }
        Figure::FigS1 => {
            let model = PotentialModel::hybrid(params)?;
            let sp = solve(&model, scenario::default_window(), params)?;
            let table = OverlapTable::compute(&sp, &model)?;
            Ok(vec![scan_table(&format!("{p}_scan"), &table, 261, &figs1_lengths(), &[300.0, 420.0], params)?])
        }
        Figure::FigS2 => {
            params.geometry.temperature = 600.0;
            let trap = scenario::solve_trap(params)?;
            let fit = trap.fit;
            let model = &trap.solved.potential;
            let mut st = Table::new(&format!("{p}_states"), &["nu", "omega_above_min_kHz", "numeric_rate_per_s", "harmonic_rate_per_s"])
                .meta("temperature_K", 600.0)
                .meta("trap_minimum_nm", fit.minimum.x0 / NM)
                .meta("trap_depth_MHz", fit.minimum.v0 / TWO_PI / 1e6)
                .meta("omega_r_over_2pi_kHz", fit.minimum.omega_r / TWO_PI / 1e3)
                .meta("barrier_nm", fit.barrier_x / NM)
                .meta("rates", "depopulation rates in 1/s");
            for (i, s) in trap.solved.spectrum.states.iter().enumerate() {
                st.push(vec![
                    s.nu.into(),
                    ((s.omega - fit.minimum.v0) / TWO_PI / 1e3).into(),
                    trap.numeric[i].into(),
                    trap.harmonic[i].into(),
                ]);
            }
            let mut full = model.clone();
            full.domain.0 = 1e-9;
            Ok(vec![potential_table(&format!("{p}_potential"), &full, 1000.0 + model.radius / NM, 2000)?, st])
        }
    }
}
