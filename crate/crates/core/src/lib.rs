//! Quantized motion of atoms bound to an optical nanofiber.
//!
//! The crate is `no_std` with `alloc`. It covers the guided photon and
//! flexural phonon modes of the fiber, radial potentials, a windowed
//! bound-state eigensolver, phonon-induced linewidths and the heterodyne
//! fluorescence spectrum built from Franck–Condon factors.

#![no_std]
// `!(x > 0.0)` deliberately rejects NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bessel;
pub mod config;
pub mod consts;
pub mod error;
pub mod eigen;
pub mod jet;
pub mod linewidth;
pub mod mesh;
pub mod phonon;
pub mod photon;
pub mod potential;
pub mod quad;
pub mod roots;
pub mod scenario;
pub mod spectrum;

pub use error::{Error, Result};
pub use jet::Jet;
