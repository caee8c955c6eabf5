//! Full-batch Adam training over the network and the inverse parameters.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::collocation::{CollocationSet, LossWeights, PhysicsContext};
use super::loss::{evaluate_loss, loss_gradient, LossBreakdown};
use crate::autodiff::{AdamState, Checkpoint, InverseParams, MlpNet, CHECKPOINT_VERSION, DEFAULT_LAYERS};
use crate::data_io::FieldSnapshotSeries;
use crate::error::{Error, Result};
use crate::vessel::Quantity;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    /// One epoch is one full-batch gradient step.
    pub epochs: usize,
    pub learning_rate: f64,
    pub weights: LossWeights,
    pub seed: u64,
    pub layers: Vec<usize>,
    /// History is recorded every `log_every` epochs, plus the first and last.
    pub log_every: usize,
    pub checkpoint_every: Option<usize>,
    pub checkpoint_path: Option<PathBuf>,
    /// Starting `(tau_r [s], E0 [Pa])`; defaults to `(0.05 T, 1.5 E_inf)`.
    pub initial_guess: Option<(f64, f64)>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 200_000,
            learning_rate: 1e-3,
            weights: LossWeights::default(),
            seed: 0,
            layers: DEFAULT_LAYERS.to_vec(),
            log_every: 100,
            checkpoint_every: None,
            checkpoint_path: None,
            initial_guess: None,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        self.weights.validate()?;
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::Config(format!("learning rate must be positive, got {}", self.learning_rate)));
        }
        if self.log_every == 0 || self.checkpoint_every == Some(0) {
            return Err(Error::Config("log and checkpoint intervals must be at least 1".into()));
        }
        Ok(())
    }
}

/// One thinned history row; `tau_r` in s and `e0` in Pa.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistoryRecord {
    pub epoch: usize,
    pub data: f64,
    pub residual: f64,
    pub boundary: f64,
    pub total: f64,
    pub tau_r: f64,
    pub e0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub history: Vec<HistoryRecord>,
    pub epochs: usize,
    pub tau_r: f64,
    pub e0: f64,
    pub final_loss: LossBreakdown,
}

pub const REPORT_HEADER: &str = "epoch,L_d,L_r,L_b,L,tau_r,E0";

impl TrainReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(REPORT_HEADER);
        s.push('\n');
        for r in &self.history {
            s.push_str(&format!(
                "{},{:e},{:e},{:e},{:e},{:e},{:e}\n",
                r.epoch, r.data, r.residual, r.boundary, r.total, r.tau_r, r.e0
            ));
        }
        s
    }
}

/// Training state that can be advanced epoch by epoch.
#[derive(Debug, Clone)]
pub struct Trainer {
    ctx: PhysicsContext,
    set: CollocationSet,
    config: TrainConfig,
    net: MlpNet,
    xi: InverseParams,
    adam: AdamState,
    epoch: usize,
    history: Vec<HistoryRecord>,
    last_loss: Option<LossBreakdown>,
}

impl Trainer {
    pub fn new(ctx: PhysicsContext, set: CollocationSet, config: TrainConfig) -> Result<Self> {
        config.validate()?;
        set.validate()?;
        let net = MlpNet::glorot(&config.layers, config.seed)?;
        let xi = match config.initial_guess {
            Some((tau, e0)) => ctx.inverse_params(tau, e0)?,
            None => ctx.initial_guess(),
        };
        Self::with_state(ctx, set, config, net, xi)
    }

    /// Start from an explicit network and inverse parameters.
    pub fn with_state(
        ctx: PhysicsContext,
        set: CollocationSet,
        config: TrainConfig,
        net: MlpNet,
        xi: InverseParams,
    ) -> Result<Self> {
        config.validate()?;
        let adam = AdamState::new(net.param_count() + 2, config.learning_rate);
        Ok(Trainer { ctx, set, config, net, xi, adam, epoch: 0, history: Vec::new(), last_loss: None })
    }

    pub fn resume(ctx: PhysicsContext, set: CollocationSet, config: TrainConfig, ck: &Checkpoint) -> Result<Self> {
        let net = ck.net()?;
        let mut t = Self::with_state(ctx, set, config, net, ck.xi)?;
        if ck.adam.m.len() != t.adam.m.len() {
            return Err(Error::Config("checkpoint does not match the network layout".into()));
        }
        t.adam = ck.adam.clone();
        t.epoch = ck.epoch;
        Ok(t)
    }

    pub fn net(&self) -> &MlpNet {
        &self.net
    }

    pub fn xi(&self) -> InverseParams {
        self.xi
    }

    pub fn epoch(&self) -> usize {
        self.epoch
    }

    pub fn context(&self) -> &PhysicsContext {
        &self.ctx
    }

    pub fn collocation(&self) -> &CollocationSet {
        &self.set
    }

    pub fn config(&self) -> &TrainConfig {
        &self.config
    }

    pub fn history(&self) -> &[HistoryRecord] {
        &self.history
    }

    /// Physical `(tau_r, E0)` of the current iterate.
    pub fn parameters(&self) -> (f64, f64) {
        self.ctx.physical(&self.xi)
    }

    pub fn loss(&self) -> Result<LossBreakdown> {
        evaluate_loss(&self.net, &self.xi, &self.set, &self.config.weights)
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            version: CHECKPOINT_VERSION,
            layers: self.net.sizes().to_vec(),
            params: self.net.params(),
            xi: self.xi,
            adam: self.adam.clone(),
            epoch: self.epoch,
            seed: self.config.seed,
            rng_words: self.net.sizes().windows(2).map(|w| (w[0] * w[1]) as u64).sum(),
        }
    }

    fn record(&mut self, loss: LossBreakdown) {
        let (tau_r, e0) = self.parameters();
        self.history.push(HistoryRecord {
            epoch: self.epoch,
            data: loss.data,
            residual: loss.residual,
            boundary: loss.boundary,
            total: loss.total,
            tau_r,
            e0,
        });
    }

    fn abort(&self, detail: String) -> Error {
        let mut saved = None;
        if let Some(path) = &self.config.checkpoint_path {
            if self.checkpoint().save(path).is_ok() {
                saved = Some(path.clone());
            }
        }
        Error::TrainingAborted { epoch: self.epoch, detail, checkpoint: saved }
    }

    /// One Adam step; returns the loss at the parameters before the step.
    pub fn step(&mut self) -> Result<LossBreakdown> {
        let g = loss_gradient(&self.net, &self.xi, &self.set, &self.config.weights).map_err(|e| self.abort(e.to_string()))?;
        if self.epoch % self.config.log_every == 0 {
            self.record(g.loss);
        }
        let mut params = self.net.params();
        params.push(self.xi.log_tau_r);
        params.push(self.xi.log_e0);
        let mut grads = g.net;
        grads.extend_from_slice(&g.xi);
        self.adam.step(&mut params, &grads).map_err(|e| self.abort(e.to_string()))?;
        let np = self.net.param_count();
        self.xi = InverseParams { log_tau_r: params[np], log_e0: params[np + 1] };
        self.net.set_params(&params[..np]).map_err(|e| self.abort(e.to_string()))?;
        self.epoch += 1;
        self.last_loss = Some(g.loss);
        if let (Some(every), Some(path)) = (self.config.checkpoint_every, &self.config.checkpoint_path) {
            if self.epoch % every == 0 {
                self.checkpoint().save(path)?;
            }
        }
        Ok(g.loss)
    }

    /// Run until `config.epochs` total epochs and close the history with the
    /// loss of the final iterate.
    pub fn run(&mut self) -> Result<TrainReport> {
        while self.epoch < self.config.epochs {
            self.step()?;
        }
        let loss = self.loss().map_err(|e| self.abort(e.to_string()))?;
        if self.history.last().map(|r| r.epoch) != Some(self.epoch) {
            self.record(loss);
        }
        if let Some(path) = &self.config.checkpoint_path {
            self.checkpoint().save(path)?;
        }
        Ok(self.report(loss))
    }

    pub fn report(&self, final_loss: LossBreakdown) -> TrainReport {
        let (tau_r, e0) = self.parameters();
        TrainReport { history: self.history.clone(), epochs: self.epoch, tau_r, e0, final_loss }
    }
}

/// Train from scratch; convenience wrapper around [`Trainer`].
pub fn train(
    ctx: &PhysicsContext,
    set: &CollocationSet,
    config: &TrainConfig,
) -> Result<(TrainReport, MlpNet, InverseParams)> {
    let mut trainer = Trainer::new(ctx.clone(), set.clone(), config.clone())?;
    let report = trainer.run()?;
    Ok((report, trainer.net.clone(), trainer.xi))
}

/// Redimensionalized predictions on a space-time grid: `x` in m, `t` as
/// cycle fractions in `[0, 1]`. The returned times are seconds from the
/// start of the cycle.
pub fn predict_fields(net: &MlpNet, ctx: &PhysicsContext, x: &[f64], t: &[f64]) -> FieldSnapshotSeries {
    let s = &ctx.scales;
    let mut xs = Vec::with_capacity(x.len() * t.len());
    let mut ts = Vec::with_capacity(x.len() * t.len());
    for &tj in t {
        for &xi in x {
            xs.push(s.scale(Quantity::Length, xi));
            ts.push(tj);
        }
    }
    let mut out = FieldSnapshotSeries {
        x: x.to_vec(),
        t: t.iter().map(|&tj| s.unscale(Quantity::Time, tj)).collect(),
        area: Vec::with_capacity(t.len()),
        velocity: Vec::with_capacity(t.len()),
        pressure: Vec::with_capacity(t.len()),
    };
    if x.is_empty() {
        return out;
    }
    let mut outputs = Vec::with_capacity(xs.len());
    for (cx, ct) in xs.chunks(super::loss::DEFAULT_CHUNK).zip(ts.chunks(super::loss::DEFAULT_CHUNK)) {
        outputs.extend(net.forward_batch(cx, ct).outputs);
    }
    for row in outputs.chunks(x.len()) {
        out.area.push(row.iter().map(|o| s.unscale(Quantity::Area, o.area.v)).collect());
        out.velocity.push(row.iter().map(|o| s.unscale(Quantity::Velocity, o.velocity.v)).collect());
        out.pressure.push(row.iter().map(|o| s.unscale(Quantity::Pressure, o.pressure.v)).collect());
    }
    out
}

/// Mean percentage relative error, each sample's error normalized by the
/// mean magnitude of the reference over the cycle.
pub fn mean_pre(pred: &[f64], reference: &[f64]) -> f64 {
    assert_eq!(pred.len(), reference.len());
    let scale = reference.iter().map(|r| r.abs()).sum::<f64>() / reference.len() as f64;
    if scale == 0.0 {
        return if pred == reference { 0.0 } else { f64::INFINITY };
    }
    100.0 * pred.iter().zip(reference).map(|(p, r)| (p - r).abs()).sum::<f64>() / (reference.len() as f64 * scale)
}
