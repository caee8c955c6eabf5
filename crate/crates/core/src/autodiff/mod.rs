//! Automatic differentiation for the network and its physics residuals.
//!
//! Input derivatives travel forward through the network as tangents; the
//! loss is then differentiated in reverse, both through the layers and
//! through the residual expressions recorded on a [`Tape`].

pub mod adam;
pub mod mlp;
pub mod tape;

use std::path::Path;

use serde::{Deserialize, Serialize};

pub use adam::AdamState;
pub use mlp::{BatchForward, Jet, MlpNet, NetOutput, DEFAULT_LAYERS};
pub use tape::{sigmoid, softplus, Dual2, Real, Tape, Var};

use crate::error::{Error, Result};

/// Learnable wall parameters in log form, nondimensional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InverseParams {
    pub log_tau_r: f64,
    pub log_e0: f64,
}

impl InverseParams {
    pub fn from_values(tau_r: f64, e0: f64) -> Result<Self> {
        if !(tau_r > 0.0 && e0 > 0.0 && tau_r.is_finite() && e0.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "inverse parameters must be positive, got tau_r = {tau_r}, E0 = {e0}"
            )));
        }
        Ok(InverseParams { log_tau_r: tau_r.ln(), log_e0: e0.ln() })
    }

    pub fn tau_r(&self) -> f64 {
        self.log_tau_r.exp()
    }

    pub fn e0(&self) -> f64 {
        self.log_e0.exp()
    }
}

pub const CHECKPOINT_VERSION: u32 = 1;

/// Complete optimizer snapshot. The parameter vector holds the network
/// parameters followed by `log_tau_r` and `log_e0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub layers: Vec<usize>,
    pub params: Vec<f64>,
    pub xi: InverseParams,
    pub adam: AdamState,
    pub epoch: usize,
    pub seed: u64,
    /// Words drawn from the seeded stream; initialization is its only consumer.
    pub rng_words: u64,
}

impl Checkpoint {
    pub fn net(&self) -> Result<MlpNet> {
        let mut net = MlpNet::zeros(&self.layers)?;
        net.set_params(&self.params)?;
        Ok(net)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        let tmp = path.with_extension("json.tmp");
        std::fs::write(&tmp, serde_json::to_vec(self)?)?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let ck: Checkpoint = serde_json::from_slice(&std::fs::read(path)?)?;
        if ck.version != CHECKPOINT_VERSION {
            return Err(Error::Config(format!(
                "{}: checkpoint version {} is not supported",
                path.display(),
                ck.version
            )));
        }
        ck.adam.validate()?;
        ck.net()?;
        Ok(ck)
    }
}
