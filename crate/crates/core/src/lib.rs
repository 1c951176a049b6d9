//! Structural dissipativity analysis for linear symmetric hyperbolic systems
//!
//! ```text
//! A0 u_t + sum_j A^j u_{x_j} + L u = 0
//! ```
//!
//! with a relaxation matrix `L` that is nonnegative but not necessarily
//! symmetric. The crate checks the structural conditions that govern the
//! decay of such systems, builds compensating matrices, classifies the
//! uniform dissipativity type from the spectrum, and certifies pointwise and
//! L² decay estimates in Fourier space.
//!
//! Module map:
//!
//! - [`system`]: system data, direction/frequency types, kernels, the
//!   Fourier-space generator.
//! - [`conditions`]: condition checks over sampled directions, with margins.
//! - [`compensator`]: compensating matrices `K(ω)`, including the Kalman-type
//!   construction and its parameter search.
//! - [`spectrum`]: eigenvalue sweeps and `(p, q)` classification.
//! - [`decay`]: mode propagation, Lyapunov certificates, decay fits.
//! - [`catalog`]: Timoshenko, linearized Euler–Maxwell and a damped-wave toy.
//! - [`cli`], [`model`], [`svg`]: command line, model files and plots.
//!
//! Parallel sweeps use rayon when the `parallel` feature is on (default);
//! see [`exec`] for the sequential fallback.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod cli;
pub mod compensator;
pub mod conditions;
pub mod constraint;
pub mod decay;
pub mod error;
pub mod exec;
pub mod linalg;
pub mod model;
pub mod props;
pub mod report;
pub mod spectrum;
pub mod sphere;
pub mod svg;
pub mod system;

pub use error::{Error, Result};

/// Version string embedded in every report.
pub const VERSION: &str = concat!("hyperdiss ", env!("CARGO_PKG_VERSION"));
