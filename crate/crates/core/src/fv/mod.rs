//! Finite-volume IMEX solver for the viscoelastic one-dimensional model.

pub mod dot;
pub mod imex;
pub mod solver;
pub mod weno;

pub use dot::{Conserved, InterfaceFlux, PathQuadrature};
pub use imex::ImexTableau;
pub use solver::{
    implicit_relaxation_stage, simulate, Boundaries, Grid1D, SimulationConfig, SimulationOutput, Solver,
    SolverOptions, StateField, StationSeries, StepReport,
};
pub use weno::{BoundaryTreatment, FaceValues, Weno3, WenoWeights};
