//! JSON run configuration.
//!
//! Lengths in m, moduli in Pa, viscosity in Pa s, resistances in Pa s/m^3,
//! compliance in m^3/Pa, flow in m^3/s and times in s. Pressures are either
//! a bare number in Pa or `{"value": v, "unit": "Pa" | "kPa" | "mmHg"}`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::apnn::{LossWeights, TrainConfig};
use crate::boundary::{InflowProfile, WindkesselRCR};
use crate::data_io::SyntheticConfig;
use crate::error::{Error, Result};
use crate::fv::{ImexTableau, SolverOptions};
use crate::vessel::{calibrate_e_inf, VesselGeometry, VesselKind, WallModel};

pub const MMHG: f64 = 133.322_387_415;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PressureUnit {
    Pa,
    #[serde(rename = "kPa")]
    KPa,
    #[serde(rename = "mmHg")]
    MmHg,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Pressure {
    Pa(f64),
    Value { value: f64, unit: PressureUnit },
}

impl Pressure {
    pub fn pascals(&self) -> f64 {
        match *self {
            Pressure::Pa(v) => v,
            Pressure::Value { value, unit: PressureUnit::Pa } => value,
            Pressure::Value { value, unit: PressureUnit::KPa } => value * 1e3,
            Pressure::Value { value, unit: PressureUnit::MmHg } => value * MMHG,
        }
    }
}

impl Default for Pressure {
    fn default() -> Self {
        Pressure::Pa(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VesselBlock {
    #[serde(default = "artery")]
    pub kind: VesselKind,
    pub length: f64,
    pub radius_in: f64,
    pub radius_out: f64,
    pub wall_thickness: f64,
    pub p0: Pressure,
    #[serde(default = "blood_density")]
    pub rho: f64,
}

fn artery() -> VesselKind {
    VesselKind::Artery
}

fn blood_density() -> f64 {
    1060.0
}

/// `e_inf` may be replaced by a reference wave speed `c_ref`, and `eta` by
/// `tau_r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallBlock {
    pub e0: f64,
    pub e_inf: Option<f64>,
    pub c_ref: Option<f64>,
    pub eta: Option<f64>,
    pub tau_r: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InflowBlock {
    /// The tabulated profile shipped with the library.
    Default {
        #[serde(default = "one")]
        scale: f64,
    },
    Csv {
        path: PathBuf,
        #[serde(default = "one")]
        scale: f64,
    },
    Constant {
        flow: f64,
    },
    Fourier {
        period: f64,
        mean: f64,
        cos: Vec<f64>,
        sin: Vec<f64>,
    },
}

fn one() -> f64 {
    1.0
}

impl Default for InflowBlock {
    fn default() -> Self {
        InflowBlock::Default { scale: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutletBlock {
    pub r1: f64,
    pub r2: f64,
    pub c: f64,
    #[serde(default)]
    pub p_out: Pressure,
    /// Initial compliance pressure; defaults to `p0`.
    pub p_c: Option<Pressure>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverBlock {
    pub cells: usize,
    pub cfl: f64,
    pub t_end: f64,
    /// Output cadence of `simulate`, in samples per cycle.
    pub outputs_per_cycle: usize,
    pub tableau: Option<ImexTableau>,
}

impl Default for SolverBlock {
    fn default() -> Self {
        SolverBlock { cells: 12, cfl: 0.9, t_end: 20.0, outputs_per_cycle: 100, tableau: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DatasetBlock {
    /// Waveform CSV to train on; a synthetic set is generated when absent.
    pub path: Option<PathBuf>,
    pub n_data: usize,
    pub n_residual: usize,
    /// Number of equal-cell residual stations for measured data.
    pub stations: usize,
    /// Resample measured data onto this many uniform times first.
    pub resample: Option<usize>,
}

impl Default for DatasetBlock {
    fn default() -> Self {
        DatasetBlock { path: None, n_data: 120, n_residual: 200, stations: 12, resample: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainingBlock {
    pub epochs: usize,
    pub learning_rate: f64,
    pub weights: LossWeights,
    pub layers: Vec<usize>,
    pub log_every: usize,
    pub checkpoint_every: Option<usize>,
    pub initial_tau_r: Option<f64>,
    pub initial_e0: Option<f64>,
}

impl Default for TrainingBlock {
    fn default() -> Self {
        let t = TrainConfig::default();
        TrainingBlock {
            epochs: t.epochs,
            learning_rate: t.learning_rate,
            weights: t.weights,
            layers: t.layers,
            log_every: t.log_every,
            checkpoint_every: Some(10_000),
            initial_tau_r: None,
            initial_e0: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub vessel: VesselBlock,
    pub wall: WallBlock,
    #[serde(default)]
    pub inflow: InflowBlock,
    pub outlet: OutletBlock,
    #[serde(default)]
    pub solver: SolverBlock,
    #[serde(default)]
    pub dataset: DatasetBlock,
    #[serde(default)]
    pub training: TrainingBlock,
    #[serde(default)]
    pub seed: u64,
    pub output: Option<PathBuf>,
    /// Directory of the config file; relative paths resolve against it.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl RunConfig {
    pub fn from_json_str(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid configuration: {e}")))?;
        cfg.base_dir = base_dir.to_path_buf();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read configuration {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        Self::from_json_str(&text, &base).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry().validate()?;
        self.wall_model()?;
        self.windkessel()?;
        self.solver_options()?.validate()?;
        if self.solver.cells < 3 {
            return Err(Error::Config(format!("at least 3 cells are required, got {}", self.solver.cells)));
        }
        if !(self.solver.t_end > 0.0) || self.solver.outputs_per_cycle < 2 {
            return Err(Error::Config("t_end must be positive and outputs_per_cycle at least 2".into()));
        }
        if self.dataset.stations == 0 {
            return Err(Error::Config("at least one residual station is required".into()));
        }
        self.train_config().validate()
    }

    pub fn geometry(&self) -> VesselGeometry {
        let v = &self.vessel;
        VesselGeometry {
            length: v.length,
            radius_in: v.radius_in,
            radius_out: v.radius_out,
            wall_thickness: v.wall_thickness,
            p0: v.p0.pascals(),
            p_out: self.outlet.p_out.pascals(),
        }
    }

    pub fn e_inf(&self) -> Result<f64> {
        match (self.wall.e_inf, self.wall.c_ref) {
            (Some(e), None) => Ok(e),
            (None, Some(c)) => calibrate_e_inf(&self.geometry(), self.vessel.rho, c, self.vessel.kind),
            _ => Err(Error::Config("wall needs exactly one of `e_inf` or `c_ref`".into())),
        }
    }

    pub fn wall_model(&self) -> Result<WallModel> {
        let e_inf = self.e_inf()?;
        let (kind, e0, rho) = (self.vessel.kind, self.wall.e0, self.vessel.rho);
        match (self.wall.eta, self.wall.tau_r) {
            (Some(eta), None) => WallModel::from_viscosity(kind, e0, e_inf, eta, rho),
            (None, Some(tau)) => WallModel::from_relaxation_time(kind, e0, e_inf, tau, rho),
            _ => Err(Error::Config("wall needs exactly one of `eta` or `tau_r`".into())),
        }
    }

    pub fn inflow(&self) -> Result<InflowProfile> {
        match &self.inflow {
            InflowBlock::Default { scale } => InflowProfile::default_ta().scaled(*scale),
            InflowBlock::Csv { path, scale } => InflowProfile::from_csv(&self.resolve(path))?.scaled(*scale),
            InflowBlock::Constant { flow } => Ok(InflowProfile::constant(*flow)),
            InflowBlock::Fourier { period, mean, cos, sin } => InflowProfile::fourier(*period, *mean, cos.clone(), sin.clone()),
        }
    }

    pub fn windkessel(&self) -> Result<WindkesselRCR> {
        let o = &self.outlet;
        let p_c = o.p_c.map(|p| p.pascals()).unwrap_or(self.vessel.p0.pascals());
        WindkesselRCR::new(o.r1, o.r2, o.c, o.p_out.pascals(), p_c)
    }

    pub fn solver_options(&self) -> Result<SolverOptions> {
        let mut opts = SolverOptions { cfl: self.solver.cfl, ..Default::default() };
        if let Some(t) = &self.solver.tableau {
            t.validate()?;
            opts.tableau = t.clone();
        }
        Ok(opts)
    }

    pub fn synthetic_config(&self) -> Result<SyntheticConfig> {
        Ok(SyntheticConfig {
            geometry: self.geometry(),
            wall: self.wall_model()?,
            inflow: self.inflow()?,
            outlet: self.windkessel()?,
            cells: self.solver.cells,
            options: self.solver_options()?,
            t_end: self.solver.t_end,
            n_data: self.dataset.n_data,
            n_residual: self.dataset.n_residual,
        })
    }

    pub fn train_config(&self) -> TrainConfig {
        let t = &self.training;
        let initial_guess = match (t.initial_tau_r, t.initial_e0) {
            (Some(a), Some(b)) => Some((a, b)),
            _ => None,
        };
        TrainConfig {
            epochs: t.epochs,
            learning_rate: t.learning_rate,
            weights: t.weights,
            seed: self.seed,
            layers: t.layers.clone(),
            log_every: t.log_every,
            checkpoint_every: t.checkpoint_every,
            checkpoint_path: None,
            initial_guess,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TA: &str = include_str!("../../../../configs/ta_table1.json");

    #[test]
    fn shipped_config_matches_table_values() {
        let cfg = RunConfig::from_json_str(TA, Path::new(".")).unwrap();
        let wall = cfg.wall_model().unwrap();
        assert!((wall.tau_r - 0.009).abs() < 5e-4);
        assert_eq!(cfg.geometry().p0, 9467.0);
        assert_eq!(cfg.solver.cells, 12);
        assert_eq!(cfg.solver.cfl, 0.9);
        assert_eq!(cfg.solver.t_end, 20.0);
        assert_eq!(cfg.training.weights, LossWeights::default());
    }

    #[test]
    fn pressure_units() {
        let p: Pressure = serde_json::from_str(r#"{"value": 75, "unit": "mmHg"}"#).unwrap();
        assert!((p.pascals() - 9999.179).abs() < 1e-3);
        let p: Pressure = serde_json::from_str("9467").unwrap();
        assert_eq!(p.pascals(), 9467.0);
        let p: Pressure = serde_json::from_str(r#"{"value": 9.467, "unit": "kPa"}"#).unwrap();
        assert!((p.pascals() - 9467.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_cfl() {
        let bad = TA.replace("\"cfl\": 0.9", "\"cfl\": 1.5");
        assert!(RunConfig::from_json_str(&bad, Path::new(".")).is_err());
    }
}
