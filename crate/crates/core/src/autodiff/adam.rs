//! Adam with bias correction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub k: u64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    pub lr: f64,
}

impl AdamState {
    pub fn new(len: usize, lr: f64) -> Self {
        AdamState { m: vec![0.0; len], v: vec![0.0; len], k: 0, beta1: 0.9, beta2: 0.999, eps: 1e-8, lr }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.m.len() == self.v.len()
            && (0.0..1.0).contains(&self.beta1)
            && (0.0..1.0).contains(&self.beta2)
            && self.eps > 0.0
            && self.lr.is_finite()
            && self.lr >= 0.0;
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "invalid Adam settings: beta1 = {}, beta2 = {}, eps = {}, lr = {}",
                self.beta1, self.beta2, self.eps, self.lr
            )));
        }
        if self.m.iter().chain(&self.v).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { term: "Adam moments".into() });
        }
        Ok(())
    }

    /// One update of `params` in place. A non-finite gradient leaves both the
    /// parameters and the state untouched.
    pub fn step(&mut self, params: &mut [f64], grads: &[f64]) -> Result<()> {
        if params.len() != self.m.len() || grads.len() != self.m.len() {
            return Err(Error::InvalidParameter(format!(
                "Adam state has {} entries, got {} parameters and {} gradients",
                self.m.len(),
                params.len(),
                grads.len()
            )));
        }
        if let Some(i) = grads.iter().position(|g| !g.is_finite()) {
            return Err(Error::NonFinite { term: format!("gradient entry {i}") });
        }
        self.k += 1;
        let bc1 = 1.0 - self.beta1.powf(self.k as f64);
        let bc2 = 1.0 - self.beta2.powf(self.k as f64);
        for ((p, &g), (m, v)) in params.iter_mut().zip(grads).zip(self.m.iter_mut().zip(self.v.iter_mut())) {
            *m = self.beta1 * *m + (1.0 - self.beta1) * g;
            *v = self.beta2 * *v + (1.0 - self.beta2) * g * g;
            let mhat = *m / bc1;
            let vhat = *v / bc2;
            *p -= self.lr * mhat / (vhat.sqrt() + self.eps);
        }
        Ok(())
    }
}
