//! Waveform and field files, resampling, cycle normalization and synthetic
//! dataset generation.
//!
//! Waveform CSV: `#key=value` metadata lines, then the header `t,A,u` or
//! `t,A,u,p`, then one row per sample in SI units. Field CSV: header
//! `t,x,A,u,p`, rows ordered by time, then position.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::apnn::{cell_center_stations, uniform_unit_grid, CollocationSet, PhysicsContext};
use crate::boundary::{InflowProfile, WindkesselRCR};
use crate::error::{Error, Result};
use crate::fv::{simulate, Boundaries, SimulationConfig, SolverOptions};
use crate::interp::Pchip;
use crate::vessel::{calibrate_e_inf, VesselGeometry, VesselKind, WallModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Synthetic,
    Measured,
}

/// Geometry and material metadata carried with a waveform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetMeta {
    pub kind: VesselKind,
    pub length: f64,
    pub radius_in: f64,
    pub radius_out: f64,
    pub wall_thickness: f64,
    pub rho: f64,
    pub p0: f64,
    /// Reference wave speed used to calibrate `E_inf` when it is not given.
    pub c_ref: Option<f64>,
    pub e_inf: Option<f64>,
    pub provenance: Provenance,
    /// Original time of a sample is `time_origin + time_scale * t`.
    pub time_origin: f64,
    pub time_scale: f64,
    /// Any further `#key=value` entries, kept verbatim.
    pub extra: BTreeMap<String, String>,
}

/// Samples at one axial station.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveformDataset {
    /// Station `x_m` in m.
    pub station: f64,
    /// Cycle length in the units of `t`.
    pub period: f64,
    pub t: Vec<f64>,
    pub area: Vec<f64>,
    pub velocity: Vec<f64>,
    pub pressure: Option<Vec<f64>>,
    pub meta: DatasetMeta,
}

const META_KEYS: [&str; 14] = [
    "station",
    "period",
    "kind",
    "length",
    "radius_in",
    "radius_out",
    "wall_thickness",
    "rho",
    "p0",
    "c_ref",
    "e_inf",
    "provenance",
    "time_origin",
    "time_scale",
];

impl WaveformDataset {
    pub fn validate(&self) -> Result<()> {
        let origin = "waveform";
        let n = self.t.len();
        if n == 0 || self.area.len() != n || self.velocity.len() != n || self.pressure.as_ref().is_some_and(|p| p.len() != n) {
            return Err(Error::Schema { path: origin.into(), row: 0, detail: "columns must be nonempty and equally long".into() });
        }
        for k in 0..n {
            let row = k + 1;
            let bad = |detail: &str| Error::Schema { path: origin.into(), row, detail: detail.into() };
            if !self.t[k].is_finite() || (k > 0 && !(self.t[k] > self.t[k - 1])) {
                return Err(bad("time must be finite and strictly increasing"));
            }
            if !(self.area[k] > 0.0 && self.area[k].is_finite()) {
                return Err(bad("area must be positive"));
            }
            if !self.velocity[k].is_finite() || self.pressure.as_ref().is_some_and(|p| !p[k].is_finite()) {
                return Err(bad("non-finite sample"));
            }
        }
        if !(self.period > 0.0) || self.t[n - 1] - self.t[0] > self.period * (1.0 + 1e-9) {
            return Err(Error::Schema { path: origin.into(), row: 0, detail: format!("samples span more than the period {}", self.period) });
        }
        self.geometry().validate()?;
        if !(self.meta.rho > 0.0) || !(self.meta.time_scale > 0.0) {
            return Err(Error::Schema { path: origin.into(), row: 0, detail: "rho and time_scale must be positive".into() });
        }
        if !(0.0..=self.meta.length).contains(&self.station) {
            return Err(Error::Schema { path: origin.into(), row: 0, detail: "station outside the vessel".into() });
        }
        if self.meta.e_inf.is_none() && self.meta.c_ref.is_none() {
            return Err(Error::Schema { path: origin.into(), row: 0, detail: "either e_inf or c_ref metadata is required".into() });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn geometry(&self) -> VesselGeometry {
        let m = &self.meta;
        VesselGeometry {
            length: m.length,
            radius_in: m.radius_in,
            radius_out: m.radius_out,
            wall_thickness: m.wall_thickness,
            p0: m.p0,
            p_out: 0.0,
        }
    }

    /// `E_inf` from metadata, or calibrated from `c_ref` with the mean radius.
    pub fn e_inf(&self) -> Result<f64> {
        match (self.meta.e_inf, self.meta.c_ref) {
            (Some(e), _) => Ok(e),
            (None, Some(c)) => calibrate_e_inf(&self.geometry(), self.meta.rho, c, self.meta.kind),
            (None, None) => Err(Error::Config("dataset has neither e_inf nor c_ref".into())),
        }
    }

    /// Cycle length in s.
    pub fn physical_period(&self) -> f64 {
        self.period * self.meta.time_scale
    }

    pub fn physics_context(&self) -> Result<PhysicsContext> {
        PhysicsContext::new(self.meta.kind, self.geometry(), self.meta.rho, self.e_inf()?, self.station, self.physical_period())
    }

    /// Training points: data at the station, residual points on `stations`
    /// (m) times `n_residual_times` uniform cycle fractions.
    pub fn collocation(&self, stations: &[f64], n_residual_times: usize) -> Result<CollocationSet> {
        let ds = normalize_cycle(self);
        CollocationSet::build(
            &self.physics_context()?,
            &ds.t,
            &ds.area,
            &ds.velocity,
            stations,
            &uniform_unit_grid(n_residual_times),
        )
    }

    /// Default residual stations: 12 equal-cell centres over the vessel.
    pub fn default_stations(&self) -> Vec<f64> {
        cell_center_stations(self.meta.length, 12)
    }

    pub fn metadata_value(&self, key: &str) -> Option<f64> {
        self.meta.extra.get(key).and_then(|v| v.parse().ok())
    }

    pub fn to_csv_string(&self) -> String {
        let m = &self.meta;
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "#{k}={v}");
        };
        kv("station", self.station.to_string());
        kv("period", self.period.to_string());
        kv("kind", kind_name(m.kind).into());
        kv("length", m.length.to_string());
        kv("radius_in", m.radius_in.to_string());
        kv("radius_out", m.radius_out.to_string());
        kv("wall_thickness", m.wall_thickness.to_string());
        kv("rho", m.rho.to_string());
        kv("p0", m.p0.to_string());
        if let Some(c) = m.c_ref {
            kv("c_ref", c.to_string());
        }
        if let Some(e) = m.e_inf {
            kv("e_inf", e.to_string());
        }
        kv("provenance", match m.provenance {
            Provenance::Synthetic => "synthetic".into(),
            Provenance::Measured => "measured".into(),
        });
        kv("time_origin", m.time_origin.to_string());
        kv("time_scale", m.time_scale.to_string());
        for (k, v) in &m.extra {
            kv(k, v.clone());
        }
        s.push_str(if self.pressure.is_some() { "t,A,u,p\n" } else { "t,A,u\n" });
        for k in 0..self.len() {
            let _ = write!(s, "{},{},{}", self.t[k], self.area[k], self.velocity[k]);
            if let Some(p) = &self.pressure {
                let _ = write!(s, ",{}", p[k]);
            }
            s.push('\n');
        }
        s
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string())?;
        Ok(())
    }

    pub fn from_csv_str(text: &str, origin: &str) -> Result<Self> {
        let schema = |row: usize, detail: String| Error::Schema { path: origin.into(), row, detail };
        let mut meta: BTreeMap<String, String> = BTreeMap::new();
        let mut header: Option<Vec<String>> = None;
        let mut cols: Vec<Vec<f64>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if header.is_some() {
                    continue;
                }
                let (k, v) = rest.split_once('=').ok_or_else(|| schema(lineno + 1, format!("malformed metadata line `{line}`")))?;
                meta.insert(k.trim().to_string(), v.trim().to_string());
                continue;
            }
            match &header {
                None => {
                    let names: Vec<String> = line.split(',').map(|c| c.trim().to_string()).collect();
                    let ok = names.len() >= 3 && names[0] == "t" && names[1] == "A" && names[2] == "u"
                        && (names.len() == 3 || (names.len() == 4 && names[3] == "p"));
                    if !ok {
                        return Err(schema(lineno + 1, format!("expected header `t,A,u[,p]`, found `{line}`")));
                    }
                    cols = vec![Vec::new(); names.len()];
                    header = Some(names);
                }
                Some(names) => {
                    let fields: Vec<&str> = line.split(',').collect();
                    let row = cols[0].len() + 1;
                    if fields.len() != names.len() {
                        return Err(schema(row, format!("expected {} columns, found {}", names.len(), fields.len())));
                    }
                    for (c, f) in cols.iter_mut().zip(&fields) {
                        c.push(f.trim().parse().map_err(|_| schema(row, format!("cannot parse `{f}` as a number")))?);
                    }
                }
            }
        }
        if header.is_none() {
            return Err(schema(0, "missing header `t,A,u[,p]`".into()));
        }
        let get = |k: &str| -> Result<f64> {
            let v = meta.get(k).ok_or_else(|| schema(0, format!("missing metadata `{k}`")))?;
            v.parse().map_err(|_| schema(0, format!("metadata `{k}` is not a number: `{v}`")))
        };
        let opt = |k: &str| -> Result<Option<f64>> { meta.get(k).map(|_| get(k)).transpose() };
        let kind = match meta.get("kind").map(String::as_str).unwrap_or("artery") {
            "artery" => VesselKind::Artery,
            "vein" => VesselKind::Vein,
            other => return Err(schema(0, format!("unknown vessel kind `{other}`"))),
        };
        let provenance = match meta.get("provenance").map(String::as_str).unwrap_or("measured") {
            "synthetic" => Provenance::Synthetic,
            "measured" => Provenance::Measured,
            other => return Err(schema(0, format!("unknown provenance `{other}`"))),
        };
        let t = cols[0].clone();
        let period = match opt("period")? {
            Some(p) => p,
            None if t.len() > 1 => t[t.len() - 1] - t[0],
            None => return Err(schema(0, "missing metadata `period`".into())),
        };
        let extra = meta.iter().filter(|(k, _)| !META_KEYS.contains(&k.as_str())).map(|(k, v)| (k.clone(), v.clone())).collect();
        let length = get("length")?;
        let ds = WaveformDataset {
            station: opt("station")?.unwrap_or(0.5 * length),
            period,
            t,
            area: cols[1].clone(),
            velocity: cols[2].clone(),
            pressure: cols.get(3).cloned(),
            meta: DatasetMeta {
                kind,
                length,
                radius_in: get("radius_in")?,
                radius_out: get("radius_out")?,
                wall_thickness: get("wall_thickness")?,
                rho: opt("rho")?.unwrap_or(1060.0),
                p0: get("p0")?,
                c_ref: opt("c_ref")?,
                e_inf: opt("e_inf")?,
                provenance,
                time_origin: opt("time_origin")?.unwrap_or(0.0),
                time_scale: opt("time_scale")?.unwrap_or(1.0),
                extra,
            },
        };
        ds.validate().map_err(|e| match e {
            Error::Schema { row, detail, .. } => Error::Schema { path: origin.into(), row, detail },
            other => other,
        })?;
        Ok(ds)
    }
}

fn kind_name(kind: VesselKind) -> &'static str {
    match kind {
        VesselKind::Artery => "artery",
        VesselKind::Vein => "vein",
    }
}

pub fn load_waveform_csv(path: &Path) -> Result<WaveformDataset> {
    let text = std::fs::read_to_string(path)?;
    WaveformDataset::from_csv_str(&text, &path.display().to_string())
}

/// Monotone-cubic resampling onto `n` uniform times spanning one period from
/// the first sample.
pub fn resample_uniform(ds: &WaveformDataset, n: usize) -> Result<WaveformDataset> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("resampling needs at least 2 points, got {n}")));
    }
    let t0 = ds.t[0];
    let times: Vec<f64> = (0..n).map(|k| t0 + ds.period * k as f64 / (n - 1) as f64).collect();
    let resample = |y: &[f64]| -> Result<Vec<f64>> {
        if ds.len() == 1 {
            return Ok(vec![y[0]; n]);
        }
        let p = Pchip::new(&ds.t, y)?;
        Ok(times.iter().map(|&t| p.eval(t)).collect())
    };
    let out = WaveformDataset {
        area: resample(&ds.area)?,
        velocity: resample(&ds.velocity)?,
        pressure: ds.pressure.as_deref().map(resample).transpose()?,
        t: times,
        ..ds.clone()
    };
    Ok(out)
}

/// Map the time axis affinely so the cycle starts at 0 with length 1.
pub fn normalize_cycle(ds: &WaveformDataset) -> WaveformDataset {
    let t0 = ds.t[0];
    let mut out = ds.clone();
    if t0 == 0.0 && ds.period == 1.0 {
        return out;
    }
    out.t = ds.t.iter().map(|&t| (t - t0) / ds.period).collect();
    if let Some(last) = out.t.last_mut() {
        if (ds.t[ds.len() - 1] - t0 - ds.period).abs() <= 1e-12 * ds.period {
            *last = 1.0;
        }
    }
    out.period = 1.0;
    out.meta.time_origin = ds.meta.time_origin + ds.meta.time_scale * t0;
    out.meta.time_scale = ds.meta.time_scale * ds.period;
    out
}

/// Original times of a (normalized) dataset.
pub fn original_times(ds: &WaveformDataset) -> Vec<f64> {
    ds.t.iter().map(|&t| ds.meta.time_origin + ds.meta.time_scale * t).collect()
}

/// Space-time fields; arrays are indexed `[time][station]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSnapshotSeries {
    pub x: Vec<f64>,
    pub t: Vec<f64>,
    pub area: Vec<Vec<f64>>,
    pub velocity: Vec<Vec<f64>>,
    pub pressure: Vec<Vec<f64>>,
}

impl FieldSnapshotSeries {
    pub fn validate(&self) -> Result<()> {
        let (nt, nx) = (self.t.len(), self.x.len());
        for field in [&self.area, &self.velocity, &self.pressure] {
            if field.len() != nt || field.iter().any(|r| r.len() != nx) {
                return Err(Error::Schema { path: "fields".into(), row: 0, detail: "field arrays are not rectangular".into() });
            }
            if field.iter().flatten().any(|v| !v.is_finite()) {
                return Err(Error::Schema { path: "fields".into(), row: 0, detail: "non-finite field value".into() });
            }
        }
        Ok(())
    }

    /// Values of one field at station index `i` over time.
    pub fn station_series(field: &[Vec<f64>], i: usize) -> Vec<f64> {
        field.iter().map(|row| row[i]).collect()
    }

    pub fn to_csv_string(&self) -> String {
        let mut s = String::from("t,x,A,u,p\n");
        for (j, &t) in self.t.iter().enumerate() {
            for (i, &x) in self.x.iter().enumerate() {
                let _ = writeln!(s, "{},{},{},{},{}", t, x, self.area[j][i], self.velocity[j][i], self.pressure[j][i]);
            }
        }
        s
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string())?;
        Ok(())
    }

    pub fn from_csv_str(text: &str, origin: &str) -> Result<Self> {
        let schema = |row: usize, detail: String| Error::Schema { path: origin.into(), row, detail };
        let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| schema(0, "empty file".into()))?;
        if header.split(',').map(str::trim).collect::<Vec<_>>() != ["t", "x", "A", "u", "p"] {
            return Err(schema(0, format!("expected header `t,x,A,u,p`, found `{header}`")));
        }
        let mut out = FieldSnapshotSeries { x: Vec::new(), t: Vec::new(), area: Vec::new(), velocity: Vec::new(), pressure: Vec::new() };
        for (k, line) in lines.enumerate() {
            let row = k + 1;
            let v: Vec<f64> = line
                .split(',')
                .map(|f| f.trim().parse().map_err(|_| schema(row, format!("cannot parse `{f}`"))))
                .collect::<Result<_>>()?;
            if v.len() != 5 {
                return Err(schema(row, format!("expected 5 columns, found {}", v.len())));
            }
            if out.t.last() != Some(&v[0]) {
                if out.t.last().is_some_and(|&t| !(v[0] > t)) {
                    return Err(schema(row, "times must be increasing".into()));
                }
                out.t.push(v[0]);
                out.area.push(Vec::new());
                out.velocity.push(Vec::new());
                out.pressure.push(Vec::new());
            }
            let j = out.t.len() - 1;
            let i = out.area[j].len();
            if j == 0 {
                out.x.push(v[1]);
            } else if out.x.get(i) != Some(&v[1]) {
                return Err(schema(row, "stations differ between time levels".into()));
            }
            out.area[j].push(v[2]);
            out.velocity[j].push(v[3]);
            out.pressure[j].push(v[4]);
        }
        out.validate().map_err(|e| match e {
            Error::Schema { detail, .. } => schema(0, detail),
            other => other,
        })?;
        Ok(out)
    }

    pub fn load_csv(path: &Path) -> Result<Self> {
        Self::from_csv_str(&std::fs::read_to_string(path)?, &path.display().to_string())
    }
}

/// Everything needed to generate a synthetic training set.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    pub geometry: VesselGeometry,
    pub wall: WallModel,
    pub inflow: InflowProfile,
    pub outlet: WindkesselRCR,
    pub cells: usize,
    pub options: SolverOptions,
    /// Simulated time; the last cycle `[t_end - T, t_end]` is sampled.
    pub t_end: f64,
    pub n_data: usize,
    pub n_residual: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticDataset {
    /// Samples at `L0 / 2` over the last cycle, in absolute simulation time.
    pub waveform: WaveformDataset,
    /// Reference fields at the cell centres on the residual times.
    pub fields: FieldSnapshotSeries,
    pub steps: usize,
    pub max_mass_balance_error: f64,
}

pub fn make_synthetic_dataset(config: &SyntheticConfig) -> Result<SyntheticDataset> {
    let period = config.inflow.period();
    if !(config.t_end >= period) {
        return Err(Error::Config(format!("t_end = {} s is shorter than one cycle ({period} s)", config.t_end)));
    }
    if config.n_data < 2 || config.n_residual < 2 {
        return Err(Error::Config("data and residual time counts must be at least 2".into()));
    }
    let start = config.t_end - period;
    let grid_times = |n: usize| -> Vec<f64> {
        (0..n).map(|k| if k + 1 == n { config.t_end } else { start + period * k as f64 / (n - 1) as f64 }).collect()
    };
    let data_times = grid_times(config.n_data);
    let residual_times = grid_times(config.n_residual);
    let mut all: Vec<f64> = data_times.iter().chain(&residual_times).copied().collect();
    all.sort_by(f64::total_cmp);
    all.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * config.t_end.max(1.0));
    let station = 0.5 * config.geometry.length;
    let sim = SimulationConfig {
        geometry: config.geometry.clone(),
        wall: config.wall,
        boundaries: Boundaries::Coupled { inflow: config.inflow.clone(), outlet: config.outlet },
        cells: config.cells,
        options: config.options.clone(),
        t_end: config.t_end,
        output_times: all.clone(),
        stations: vec![station],
    };
    let out = simulate(&sim)?;
    let find = |t: f64| -> usize {
        all.iter()
            .position(|&s| (s - t).abs() <= 1e-12 * config.t_end.max(1.0))
            .expect("requested output time")
    };
    let series = &out.stations[0];
    let di: Vec<usize> = data_times.iter().map(|&t| find(t)).collect();
    let mut extra = BTreeMap::new();
    extra.insert("e0_ref".into(), config.wall.e0.to_string());
    extra.insert("tau_r_ref".into(), config.wall.tau_r.to_string());
    extra.insert("eta".into(), config.wall.eta.to_string());
    extra.insert("cells".into(), config.cells.to_string());
    extra.insert("t_end".into(), config.t_end.to_string());
    let waveform = WaveformDataset {
        station,
        period,
        t: di.iter().map(|&k| series.t[k]).collect(),
        area: di.iter().map(|&k| series.area[k]).collect(),
        velocity: di.iter().map(|&k| series.velocity[k]).collect(),
        pressure: Some(di.iter().map(|&k| series.pressure[k]).collect()),
        meta: DatasetMeta {
            kind: config.wall.kind,
            length: config.geometry.length,
            radius_in: config.geometry.radius_in,
            radius_out: config.geometry.radius_out,
            wall_thickness: config.geometry.wall_thickness,
            rho: config.wall.rho,
            p0: config.geometry.p0,
            c_ref: None,
            e_inf: Some(config.wall.e_inf),
            provenance: Provenance::Synthetic,
            time_origin: 0.0,
            time_scale: 1.0,
            extra,
        },
    };
    let ri: Vec<usize> = residual_times.iter().map(|&t| find(t)).collect();
    let fields = FieldSnapshotSeries {
        x: out.grid.centers.clone(),
        t: ri.iter().map(|&k| out.snapshots[k].t).collect(),
        area: ri.iter().map(|&k| out.snapshots[k].area()).collect(),
        velocity: ri.iter().map(|&k| out.snapshots[k].velocity()).collect(),
        pressure: ri.iter().map(|&k| out.snapshots[k].pressure()).collect(),
    };
    waveform.validate()?;
    Ok(SyntheticDataset { waveform, fields, steps: out.steps, max_mass_balance_error: out.max_mass_balance_error })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize) -> WaveformDataset {
        let t: Vec<f64> = (0..n).map(|k| 0.5 + 0.952 * k as f64 / (n - 1) as f64).collect();
        WaveformDataset {
            station: 0.12,
            period: 0.952,
            area: t.iter().map(|&s| 4.9e-4 * (1.0 + 0.1 * (6.6 * s).sin())).collect(),
            velocity: t.iter().map(|&s| 0.3 * (6.6 * s).cos()).collect(),
            pressure: None,
            t,
            meta: DatasetMeta {
                kind: VesselKind::Artery,
                length: 0.24137,
                radius_in: 0.015,
                radius_out: 0.010,
                wall_thickness: 0.001,
                rho: 1060.0,
                p0: 9467.0,
                c_ref: None,
                e_inf: Some(0.533e6),
                provenance: Provenance::Measured,
                time_origin: 0.0,
                time_scale: 1.0,
                extra: BTreeMap::new(),
            },
        }
    }

    #[test]
    fn csv_round_trip() {
        let mut ds = sample(9);
        ds.meta.extra.insert("note".into(), "abc".into());
        ds.pressure = Some(ds.area.iter().map(|a| a * 2e7).collect());
        let back = WaveformDataset::from_csv_str(&ds.to_csv_string(), "mem").unwrap();
        assert_eq!(back, ds);
    }

    #[test]
    fn zero_area_row_is_reported() {
        let mut ds = sample(5);
        ds.area[2] = 0.0;
        match WaveformDataset::from_csv_str(&ds.to_csv_string(), "mem") {
            Err(Error::Schema { row, .. }) => assert_eq!(row, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn normalization_is_idempotent_and_invertible() {
        let ds = sample(7);
        let n = normalize_cycle(&ds);
        assert_eq!(*n.t.last().unwrap(), 1.0);
        assert_eq!(normalize_cycle(&n), n);
        for (a, b) in original_times(&n).iter().zip(&ds.t) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn resampling_on_original_grid() {
        let ds = sample(11);
        let r = resample_uniform(&ds, 11).unwrap();
        for (a, b) in r.area.iter().zip(&ds.area) {
            assert!((a - b).abs() < 1e-12 * b);
        }
    }

    #[test]
    fn field_csv_round_trip() {
        let f = FieldSnapshotSeries {
            x: vec![0.1, 0.2],
            t: vec![0.0, 0.5, 1.0],
            area: vec![vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]],
            velocity: vec![vec![0.1, 0.2], vec![0.3, 0.4], vec![0.5, 0.6]],
            pressure: vec![vec![9.0, 8.0], vec![7.0, 6.0], vec![5.0, 4.0]],
        };
        assert_eq!(FieldSnapshotSeries::from_csv_str(&f.to_csv_string(), "mem").unwrap(), f);
    }
}
