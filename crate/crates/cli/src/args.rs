//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "nanobound", version, about = "Bound motional states of atoms on an optical nanofiber")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Flat `key = value` configuration file; falls back to $NANOBOUND_CONFIG.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Also write a JSON mirror of every CSV.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Guided photon or flexural phonon modes.
    Modes {
        #[command(subcommand)]
        kind: ModesKind,
    },
    /// Sample a radial potential with its first two derivatives.
    Potential {
        #[arg(long, value_enum)]
        kind: PotentialArg,
        #[arg(long, default_value_t = 1000.0)]
        rmax_nm: f64,
        #[arg(long, default_value_t = 2000)]
        points: usize,
    },
    /// Bound states in an energy window.
    States {
        #[arg(long, value_enum, default_value = "adsorption")]
        potential: PotentialArg,
        /// `lo,hi` in MHz (energy over h), e.g. `--window-mhz=-25,0`.
        #[arg(long, allow_hyphen_values = true, default_value = "-25,0")]
        window_mhz: String,
        /// Write one wavefunction file per state.
        #[arg(long)]
        wavefunctions: bool,
    },
    /// Nearest-neighbour linewidths in an energy window.
    Linewidths {
        #[arg(long, value_enum, default_value = "hybrid")]
        potential: PotentialArg,
        #[arg(long, allow_hyphen_values = true, default_value = "-25,0")]
        window_mhz: String,
    },
    /// Linewidth of one transition as a function of cavity length.
    ScanCavity {
        /// Comma-separated lengths in µm.
        #[arg(long)]
        lengths_um: String,
        /// Comma-separated temperatures in K (default: configured temperature).
        #[arg(long)]
        temperatures_k: Option<String>,
        #[arg(long, value_enum, default_value = "hybrid")]
        potential: PotentialArg,
        /// Lower state ν of the ν → ν+1 transition.
        #[arg(long, default_value_t = 261)]
        nu: usize,
    },
    /// Heterodyne sideband spectrum.
    Spectrum {
        #[arg(long, value_enum)]
        scenario: ScenarioArg,
        /// `lo,hi` in kHz; defaults to the scenario's plotting window.
        #[arg(long, allow_hyphen_values = true)]
        omega_khz: Option<String>,
    },
    /// Regenerate the data behind a figure with its published settings.
    Reproduce {
        #[arg(value_enum)]
        figure: Figure,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum ModesKind {
    Photon {
        #[arg(long, default_value_t = 1064.0)]
        wavelength_nm: f64,
        #[arg(long, default_value_t = 1000.0)]
        rmax_nm: f64,
        #[arg(long, default_value_t = 500)]
        points: usize,
    },
    Phonon {
        #[arg(long, default_value_t = 20)]
        max_m: u32,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialArg {
    Adsorption,
    AdsorptionExp,
    Hybrid,
    Trap,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioArg {
    Adsorbed,
    Hybrid,
    Trap,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    #[value(name = "fig2a")]
    Fig2a,
    #[value(name = "fig2b")]
    Fig2b,
    #[value(name = "fig3a")]
    Fig3a,
    #[value(name = "fig3b")]
    Fig3b,
    #[value(name = "figS1")]
    FigS1,
    #[value(name = "figS2")]
    FigS2,
}

impl Figure {
    pub fn name(&self) -> &'static str {
        match self {
            Figure::Fig2a => "fig2a",
            Figure::Fig2b => "fig2b",
            Figure::Fig3a => "fig3a",
            Figure::Fig3b => "fig3b",
            Figure::FigS1 => "figS1",
            Figure::FigS2 => "figS2",
        }
    }
}
