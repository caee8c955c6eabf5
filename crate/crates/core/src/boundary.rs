//! Inlet flow forcing and the three-element Windkessel outlet.
//!
//! Both ends are closed by a single boundary state `Q_b` built from the
//! interior state next to the face and the invariants of the waves that
//! leave the domain: `I0 = p - E0/W (a^m - a^n)` together with `u - Gamma(A)`
//! at the inlet and `u + Gamma(A)` at the outlet, where
//! `Gamma(A) = int_{A0}^{A} c(s)/s ds` uses the instantaneous wave speed.

use std::path::Path;

use crate::error::{Error, Result};
use crate::fv::dot::Conserved;
use crate::interp::Pchip;
use crate::vessel::TubeLaw;

const MAX_NEWTON: usize = 50;
const NEWTON_TOL: f64 = 1e-10;

/// Shipped inflow waveform, one cycle of 20/21 s.
pub const DEFAULT_INFLOW_CSV: &str = include_str!("../data/inflow_ta.csv");

/// Periodic inlet flow rate `Q(t)` in m^3/s.
#[derive(Debug, Clone, PartialEq)]
pub enum InflowProfile {
    /// Samples covering one period; `t[0]` is the phase origin.
    Tabulated { t: Vec<f64>, q: Vec<f64>, interp: Pchip },
    /// `mean + sum_k (a_k cos(2 pi k t / T) + b_k sin(2 pi k t / T))`.
    Fourier { period: f64, mean: f64, cos: Vec<f64>, sin: Vec<f64> },
}

impl InflowProfile {
    pub fn tabulated(t: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        let interp = Pchip::periodic(&t, &q)?;
        Ok(InflowProfile::Tabulated { t, q, interp })
    }

    pub fn fourier(period: f64, mean: f64, cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidParameter(format!("inflow period must be positive, got {period}")));
        }
        if !mean.is_finite() || cos.iter().chain(&sin).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("Fourier coefficients must be finite".into()));
        }
        Ok(InflowProfile::Fourier { period, mean, cos, sin })
    }

    pub fn constant(q: f64) -> Self {
        InflowProfile::Fourier { period: 1.0, mean: q, cos: Vec::new(), sin: Vec::new() }
    }

    /// Parse a `t,Q` CSV with a header row.
    pub fn from_csv_str(text: &str, origin: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
        let schema = |row: usize, detail: String| Error::Schema { path: origin.to_string(), row, detail };
        match lines.next() {
            Some((_, header)) => {
                let cols: Vec<&str> = header.split(',').map(str::trim).collect();
                if cols != ["t", "Q"] {
                    return Err(schema(1, format!("expected header `t,Q`, found `{header}`")));
                }
            }
            None => return Err(schema(1, "empty file".into())),
        }
        let (mut t, mut q) = (Vec::new(), Vec::new());
        for (i, line) in lines {
            let mut fields = line.split(',').map(str::trim);
            let mut next = |name: &str| -> Result<f64> {
                let raw = fields.next().ok_or_else(|| schema(i + 1, format!("missing column {name}")))?;
                raw.parse::<f64>().map_err(|e| schema(i + 1, format!("column {name}: {e}")))
            };
            let ti = next("t")?;
            let qi = next("Q")?;
            if t.last().is_some_and(|&prev| ti <= prev) {
                return Err(schema(i + 1, "time must be strictly increasing".into()));
            }
            t.push(ti);
            q.push(qi);
        }
        if t.len() < 3 {
            return Err(schema(0, "at least 3 samples are required".into()));
        }
        Self::tabulated(t, q).map_err(|e| schema(0, e.to_string()))
    }

    pub fn from_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_csv_str(&text, &path.display().to_string())
    }

    pub fn default_ta() -> Self {
        Self::from_csv_str(DEFAULT_INFLOW_CSV, "inflow_ta.csv").expect("shipped inflow table is valid")
    }

    pub fn period(&self) -> f64 {
        match self {
            InflowProfile::Tabulated { t, .. } => t[t.len() - 1] - t[0],
            InflowProfile::Fourier { period, .. } => *period,
        }
    }

    pub fn flow(&self, time: f64) -> f64 {
        match self {
            InflowProfile::Tabulated { interp, t, .. } => interp.eval(t[0] + time),
            InflowProfile::Fourier { period, mean, cos, sin } => {
                let w = 2.0 * std::f64::consts::PI * time / period;
                let mut q = *mean;
                for k in 0..cos.len().max(sin.len()) {
                    let arg = (k + 1) as f64 * w;
                    q += cos.get(k).unwrap_or(&0.0) * arg.cos() + sin.get(k).unwrap_or(&0.0) * arg.sin();
                }
                q
            }
        }
    }

    /// The same profile multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        match self {
            InflowProfile::Tabulated { t, q, .. } => {
                Self::tabulated(t.clone(), q.iter().map(|v| v * factor).collect())
            }
            InflowProfile::Fourier { period, mean, cos, sin } => Self::fourier(
                *period,
                mean * factor,
                cos.iter().map(|v| v * factor).collect(),
                sin.iter().map(|v| v * factor).collect(),
            ),
        }
    }

    /// Average flow over one period (midpoint rule, 256 samples).
    pub fn mean_flow(&self) -> f64 {
        let period = self.period();
        let n = 256;
        (0..n).map(|k| self.flow((k as f64 + 0.5) * period / n as f64)).sum::<f64>() / n as f64
    }
}

/// Three-element Windkessel: `R1` in series with `R2 || C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindkesselRCR {
    /// Proximal resistance in Pa s/m^3.
    pub r1: f64,
    /// Distal resistance in Pa s/m^3.
    pub r2: f64,
    /// Compliance in m^3/Pa.
    pub c: f64,
    /// Venous pressure in Pa.
    pub p_out: f64,
    /// Pressure across the compliance in Pa.
    pub p_c: f64,
}

impl WindkesselRCR {
    pub fn new(r1: f64, r2: f64, c: f64, p_out: f64, p_c: f64) -> Result<Self> {
        let wk = WindkesselRCR { r1, r2, c, p_out, p_c };
        wk.validate()?;
        Ok(wk)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("R1", self.r1), ("R2", self.r2), ("C", self.c)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("Windkessel {name} must be positive, got {v}")));
            }
        }
        if !self.p_out.is_finite() || !self.p_c.is_finite() {
            return Err(Error::InvalidParameter("Windkessel pressures must be finite".into()));
        }
        Ok(())
    }

    pub fn time_constant(&self) -> f64 {
        self.r2 * self.c
    }

    /// Implicit Euler for `C dp_c/dt = Q - (p_c - p_out) / R2`.
    pub fn advance(&mut self, dt: f64, flow: f64) {
        self.p_c = (self.p_c + dt / self.c * (flow + self.p_out / self.r2)) / (1.0 + dt / (self.r2 * self.c));
    }
}

fn elastic_part(law: &TubeLaw, a: f64) -> f64 {
    -law.instantaneous_invariant(a, 0.0)
}

/// Inlet boundary state with `A u = flow`.
///
/// `interior` is the state on the inner side of the inlet face and `law`
/// the tube law at the face.
pub fn inflow_boundary(interior: &Conserved, flow: f64, law: &TubeLaw) -> Result<Conserved> {
    let (ai, qi, pi) = (interior[0], interior[1], interior[2]);
    let target = qi / ai - law.riemann_integral(ai);
    let i0 = law.instantaneous_invariant(ai, pi);
    let mut a = ai;
    let velocity_scale = 1.0f64.max(law.wave_speed(law.a0));
    for _ in 0..MAX_NEWTON {
        let phi = flow / a - law.riemann_integral(a) - target;
        if phi.abs() < NEWTON_TOL * velocity_scale {
            return Ok([a, flow, i0 + elastic_part(law, a)]);
        }
        let dphi = -flow / (a * a) - law.wave_speed(a) / a;
        let mut step = phi / dphi;
        while !(a - step > 0.0) {
            step *= 0.5;
        }
        a -= step;
        if !a.is_finite() {
            break;
        }
    }
    Err(Error::BoundarySolve {
        side: "inlet",
        detail: format!("Newton iteration did not converge for Q = {flow:e} (interior {interior:?})"),
    })
}

/// Outlet boundary state coupled to the Windkessel at its current `p_c`.
pub fn windkessel_boundary(interior: &Conserved, wk: &WindkesselRCR, law: &TubeLaw) -> Result<Conserved> {
    let (ai, qi, pi) = (interior[0], interior[1], interior[2]);
    let w3 = qi / ai + law.riemann_integral(ai);
    let i0 = law.instantaneous_invariant(ai, pi);
    let pressure_scale = law.rho;
    let mut a = ai;
    for _ in 0..MAX_NEWTON {
        let u = w3 - law.riemann_integral(a);
        let q = a * u;
        let p = i0 + elastic_part(law, a);
        let r = p - wk.p_c - wk.r1 * q;
        if r.abs() < NEWTON_TOL * pressure_scale {
            return Ok([a, q, p]);
        }
        let dr = law.e0 * law.g(a) - wk.r1 * (u - law.wave_speed(a));
        let step = r / dr;
        let next = a - step;
        if !(next > 0.0) || !next.is_finite() {
            return Err(Error::BoundarySolve {
                side: "outlet",
                detail: format!("Newton iterate left the positive-area domain (A = {next:e})"),
            });
        }
        a = next;
    }
    Err(Error::BoundarySolve {
        side: "outlet",
        detail: format!("Newton iteration exceeded {MAX_NEWTON} iterations (interior {interior:?})"),
    })
}
