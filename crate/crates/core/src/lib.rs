//! Time-bin coined quantum walks in coupled fiber ring cavities.
//!
//! A pulse circulating in two (or `2D`) fiber rings joined by a coupler
//! performs a coined quantum walk: the coupler is the coin, the ring the pulse
//! occupies is the coin state, and the arrival time of the pulse at a tap
//! encodes the lattice position. This crate contains
//!
//! * [`walk`]: the ideal walk engine, coin constructors, a brute-force path-sum
//!   oracle and the Bhattacharyya fidelity;
//! * [`cavity`]: timing, loss and tap model of the fiber network, including a
//!   polarization-resolved walk;
//! * [`detector`]: a seeded, parallel Monte-Carlo single-photon detector with
//!   jitter, TDC quantization, one detection per trial and background;
//! * [`analysis`]: the inverse pipeline from detection events to peak
//!   energies, losses, normalized distributions and fidelities;
//! * [`config`] and [`report`]: run configuration and the text file formats;
//! * [`commands`]: the simulate, analyze and compare operations.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cavity;
pub mod commands;
pub mod config;
pub mod detector;
pub mod error;
pub mod report;
pub mod walk;

pub use error::{Error, Result};
