//! One-dimensional viscoelastic blood-flow modelling: an asymptotic-preserving
//! IMEX finite-volume solver for synthetic data and an asymptotic-preserving
//! neural network that infers the wall parameters `(E0, tau_r)` from area and
//! velocity waveforms.

pub mod apnn;
pub mod autodiff;
pub mod boundary;
pub mod cli;
pub mod data_io;
pub mod error;
pub mod fv;
pub mod interp;
pub mod vessel;

pub use error::{Error, Result};
