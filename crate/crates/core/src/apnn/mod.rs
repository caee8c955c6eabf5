//! Asymptotic-preserving neural network: a physics-informed loss for the
//! viscoelastic model whose relaxation residual stays well defined as
//! `tau_r -> 0`, and joint training of the network with `(tau_r, E0)`.

pub mod collocation;
pub mod loss;
pub mod train;

pub use collocation::{
    cell_center_stations, uniform_unit_grid, CollocationSet, DataPoint, InitialPoint, LossWeights, PhysicsContext,
    ResidualPoint, StationCoeffs,
};
pub use loss::{
    elastic_residual_loss, evaluate_loss, loss_gradient, residual_loss_at_zero_tau, residuals, FieldJets, LossBreakdown,
    LossGradient,
};
pub use train::{mean_pre, predict_fields, train, HistoryRecord, TrainConfig, TrainReport, Trainer};
