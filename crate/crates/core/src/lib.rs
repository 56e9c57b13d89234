//! Controllability Gramians of single-integrator networks.
//!
//! The crate builds canonical network families (star, path, ring,
//! complete), scales them to Schur stability, solves the discrete Lyapunov
//! equation for the controllability Gramian and compares the measured
//! condition number and least eigenvalue against closed-form bounds. The
//! [`leaders`] module covers input placement on directed stars, paths and
//! rings.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
#[cfg(feature = "cli")]
pub mod cli;
pub mod csv;
pub mod densela;
pub mod error;
pub mod gramian;
pub mod graphs;
pub mod leaders;

pub use densela::{Matrix, Spectrum, SpectrumKind};
pub use error::{Error, Result};
