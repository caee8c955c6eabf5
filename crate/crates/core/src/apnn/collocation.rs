//! Nondimensional problem description: physical context, per-station tube-law
//! coefficients and the data / residual / initial point sets.

use serde::{Deserialize, Serialize};

use crate::autodiff::InverseParams;
use crate::error::{Error, Result};
use crate::vessel::{NonDimScales, Quantity, VesselGeometry, VesselKind, WallModel};

/// Physical setting of one training problem.
///
/// Scales: `L_c = L0`, `A_c = A0(x_m)`, `U_c = 1 m/s`, `P_c = rho U_c^2` and
/// `T_c` equal to one cardiac cycle, so the network's time input runs over
/// `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicsContext {
    pub kind: VesselKind,
    pub geometry: VesselGeometry,
    pub rho: f64,
    /// Asymptotic modulus in Pa; fixed, never learned.
    pub e_inf: f64,
    /// Measurement station `x_m` in m.
    pub station: f64,
    /// Cycle length in s.
    pub period: f64,
    pub scales: NonDimScales,
}

/// Tube-law coefficients at one station, nondimensional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationCoeffs {
    pub a0: f64,
    pub p0: f64,
    pub w: f64,
    pub m: f64,
    pub n: f64,
    pub e_inf: f64,
}

impl PhysicsContext {
    pub fn new(
        kind: VesselKind,
        geometry: VesselGeometry,
        rho: f64,
        e_inf: f64,
        station: f64,
        period: f64,
    ) -> Result<Self> {
        geometry.validate()?;
        if !(e_inf.is_finite() && e_inf > 0.0) {
            return Err(Error::InvalidParameter(format!("E_inf must be positive, got {e_inf}")));
        }
        if !(0.0..=geometry.length).contains(&station) {
            return Err(Error::InvalidParameter(format!(
                "station {station} m lies outside the vessel [0, {}] m",
                geometry.length
            )));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidParameter(format!("cycle period must be positive, got {period}")));
        }
        let scales = NonDimScales::new(geometry.length, geometry.area_at(station), 1.0, rho)?.with_cycle(period)?;
        Ok(PhysicsContext { kind, geometry, rho, e_inf, station, period, scales })
    }

    pub fn strouhal(&self) -> f64 {
        self.scales.strouhal()
    }

    /// Coefficients at axial position `x` (m).
    pub fn coeffs_at(&self, x: f64) -> StationCoeffs {
        let (m, n) = self.kind.exponents();
        let r0 = self.geometry.radius_at(x);
        StationCoeffs {
            a0: self.scales.scale(Quantity::Area, self.geometry.area_at(x)),
            p0: self.scales.scale(Quantity::Pressure, self.geometry.p0),
            w: self.kind.geometry_coefficient(r0, self.geometry.wall_thickness),
            m,
            n,
            e_inf: self.scales.scale(Quantity::Pressure, self.e_inf),
        }
    }

    /// Physical `(tau_r [s], E0 [Pa])` for a set of inverse parameters.
    pub fn physical(&self, xi: &InverseParams) -> (f64, f64) {
        (
            self.scales.unscale(Quantity::Time, xi.tau_r()),
            self.scales.unscale(Quantity::Pressure, xi.e0()),
        )
    }

    pub fn inverse_params(&self, tau_r: f64, e0: f64) -> Result<InverseParams> {
        InverseParams::from_values(self.scales.scale(Quantity::Time, tau_r), self.scales.scale(Quantity::Pressure, e0))
    }

    /// Starting guess `tau_r = 0.05 T`, `E0 = 1.5 E_inf`.
    pub fn initial_guess(&self) -> InverseParams {
        self.inverse_params(0.05 * self.period, 1.5 * self.e_inf).expect("positive by construction")
    }

    /// Wall model with the given physical parameters, for running the solver.
    pub fn wall(&self, tau_r: f64, e0: f64) -> Result<WallModel> {
        WallModel::from_relaxation_time(self.kind, e0, self.e_inf, tau_r, self.rho)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DataPoint {
    pub x: f64,
    pub t: f64,
    pub area: f64,
    pub velocity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualPoint {
    pub x: f64,
    pub t: f64,
    pub coeffs: StationCoeffs,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialPoint {
    pub x: f64,
    pub area: f64,
    pub pressure: f64,
}

/// All training points, nondimensional. Positivity is penalized on the
/// residual points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollocationSet {
    pub strouhal: f64,
    pub data: Vec<DataPoint>,
    pub residual: Vec<ResidualPoint>,
    pub initial: Vec<InitialPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossWeights {
    pub data: f64,
    pub residual: f64,
    pub boundary: f64,
}

impl Default for LossWeights {
    fn default() -> Self {
        LossWeights { data: 10.0, residual: 1.0, boundary: 1.0 }
    }
}

impl LossWeights {
    pub fn validate(&self) -> Result<()> {
        if [self.data, self.residual, self.boundary].iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidParameter(format!("loss weights must be non-negative: {self:?}")));
        }
        Ok(())
    }
}

/// `n` uniform samples over `[0, 1]`, both ends included.
pub fn uniform_unit_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|k| k as f64 / (n - 1) as f64).collect(),
    }
}

/// `n` stations at the centres of `n` equal cells over `[0, length]`.
pub fn cell_center_stations(length: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| (i as f64 + 0.5) * length / n as f64).collect()
}

impl CollocationSet {
    /// Assemble from physical samples at the station. `times` are already
    /// normalized to the cycle; `stations` are in m.
    pub fn build(
        ctx: &PhysicsContext,
        times: &[f64],
        area: &[f64],
        velocity: &[f64],
        stations: &[f64],
        residual_times: &[f64],
    ) -> Result<Self> {
        if times.len() != area.len() || times.len() != velocity.len() {
            return Err(Error::InvalidParameter("data columns differ in length".into()));
        }
        let s = &ctx.scales;
        let xm = s.scale(Quantity::Length, ctx.station);
        let data = times
            .iter()
            .zip(area.iter().zip(velocity))
            .map(|(&t, (&a, &u))| DataPoint {
                x: xm,
                t,
                area: s.scale(Quantity::Area, a),
                velocity: s.scale(Quantity::Velocity, u),
            })
            .collect();
        let mut residual = Vec::with_capacity(stations.len() * residual_times.len());
        for &t in residual_times {
            for &x in stations {
                residual.push(ResidualPoint { x: s.scale(Quantity::Length, x), t, coeffs: ctx.coeffs_at(x) });
            }
        }
        let initial = stations
            .iter()
            .map(|&x| {
                let c = ctx.coeffs_at(x);
                InitialPoint { x: s.scale(Quantity::Length, x), area: c.a0, pressure: c.p0 }
            })
            .collect();
        let set = CollocationSet { strouhal: ctx.strouhal(), data, residual, initial };
        set.validate()?;
        Ok(set)
    }

    pub fn validate(&self) -> Result<()> {
        if self.data.is_empty() || self.residual.is_empty() || self.initial.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "collocation set needs data, residual and initial points (got {}, {}, {})",
                self.data.len(),
                self.residual.len(),
                self.initial.len()
            )));
        }
        let inside = |x: f64, t: f64| (-1e-12..=1.0 + 1e-12).contains(&x) && (-1e-12..=1.0 + 1e-12).contains(&t);
        if !self.data.iter().all(|p| inside(p.x, p.t) && p.area > 0.0 && p.velocity.is_finite())
            || !self.residual.iter().all(|p| inside(p.x, p.t))
            || !self.initial.iter().all(|p| inside(p.x, 0.0) && p.area > 0.0 && p.pressure.is_finite())
        {
            return Err(Error::InvalidParameter("collocation point outside the unit domain".into()));
        }
        if !(self.strouhal.is_finite() && self.strouhal > 0.0) {
            return Err(Error::InvalidParameter(format!("invalid strouhal factor {}", self.strouhal)));
        }
        Ok(())
    }
}
