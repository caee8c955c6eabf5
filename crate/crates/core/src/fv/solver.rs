//! Grid, state and the IMEX time stepper.
//!
//! The semi-discrete scheme for cell `i` reads
//!
//! ```text
//! dQ_i/dt = -1/dx [ F_{i+1/2} - F_{i-1/2} + D_{i+1/2}/2 + D_{i-1/2}/2 + int_i B(Q_h) dQ_h ] + S(Q_i)
//! ```
//!
//! where `F` is the DOT flux, `D` the path integral of `B` across each
//! interface and the last integral runs over the reconstructed profile
//! inside the cell. Transport is explicit, the relaxation source implicit.

use crate::boundary::{inflow_boundary, windkessel_boundary, InflowProfile, WindkesselRCR};
use crate::error::{Error, Result};
use crate::fv::dot::{nonconservative_product, physical_flux, Conserved, PathQuadrature};
use crate::fv::imex::ImexTableau;
use crate::fv::weno::{BoundaryTreatment, FaceValues, Weno3};
use crate::vessel::{TubeLaw, VesselGeometry, WallModel};

/// Uniform grid with the tube law frozen per cell and per face.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    pub length: f64,
    pub dx: f64,
    pub centers: Vec<f64>,
    pub faces: Vec<f64>,
    /// Laws with `A0` equal to the exact cell mean of `pi R0(x)^2`.
    pub cell_laws: Vec<TubeLaw>,
    /// Laws at the face positions.
    pub face_laws: Vec<TubeLaw>,
}

impl Grid1D {
    pub fn new(geom: &VesselGeometry, wall: &WallModel, cells: usize) -> Result<Self> {
        geom.validate()?;
        wall.validate()?;
        if cells < 3 {
            return Err(Error::Config(format!("at least 3 cells are required, got {cells}")));
        }
        let dx = geom.length / cells as f64;
        let faces: Vec<f64> = (0..=cells).map(|j| j as f64 * dx).collect();
        let centers: Vec<f64> = (0..cells).map(|i| (i as f64 + 0.5) * dx).collect();
        let h0 = geom.wall_thickness;
        let cell_laws = (0..cells)
            .map(|i| {
                let mut law = wall.tube_law(geom.radius_at(centers[i]), h0, geom.p0);
                law.a0 = geom.mean_area(faces[i], faces[i + 1]);
                law
            })
            .collect();
        let face_laws = faces.iter().map(|&x| wall.tube_law(geom.radius_at(x), h0, geom.p0)).collect();
        Ok(Grid1D { length: geom.length, dx, centers, faces, cell_laws, face_laws })
    }

    pub fn cells(&self) -> usize {
        self.centers.len()
    }

    /// `(A0, 0, p0)` in every cell.
    pub fn equilibrium(&self) -> StateField {
        StateField { t: 0.0, cells: self.cell_laws.iter().map(|l| [l.a0, 0.0, l.p0]).collect() }
    }

    /// Linear interpolation between cell centres, extrapolating past the
    /// outermost centres.
    pub fn interpolate(&self, values: &[f64], x: f64) -> f64 {
        let n = self.cells();
        let s = (x / self.dx - 0.5).clamp(0.0, (n - 1) as f64);
        let i = (s.floor() as usize).min(n - 2);
        let w = x / self.dx - 0.5 - i as f64;
        values[i] + w * (values[i + 1] - values[i])
    }
}

/// Cell averages of `(A, A u, p)` at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateField {
    pub t: f64,
    pub cells: Vec<Conserved>,
}

impl StateField {
    pub fn area(&self) -> Vec<f64> {
        self.cells.iter().map(|q| q[0]).collect()
    }

    pub fn velocity(&self) -> Vec<f64> {
        self.cells.iter().map(|q| q[1] / q[0]).collect()
    }

    pub fn pressure(&self) -> Vec<f64> {
        self.cells.iter().map(|q| q[2]).collect()
    }

    /// `sum_i A_i dx`.
    pub fn volume(&self, dx: f64) -> f64 {
        self.cells.iter().map(|q| q[0]).sum::<f64>() * dx
    }

    pub fn validate(&self) -> Result<()> {
        check_cells(&self.cells, self.t)
    }
}

fn check_cells(cells: &[Conserved], t: f64) -> Result<()> {
    for (i, q) in cells.iter().enumerate() {
        if !(q[0] > 0.0) || !q[0].is_finite() {
            return Err(Error::Positivity { cell: i, time: t, area: q[0] });
        }
        if !q[1].is_finite() || !q[2].is_finite() {
            return Err(Error::NonFinite { term: format!("state of cell {i} at t = {t}") });
        }
    }
    Ok(())
}

/// How the two ends of the domain are closed.
#[derive(Debug, Clone, PartialEq)]
pub enum Boundaries {
    /// Wrap-around; only meaningful for uniform vessels.
    Periodic,
    /// Prescribed inlet flow and an RCR outlet.
    Coupled { inflow: InflowProfile, outlet: WindkesselRCR },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub cfl: f64,
    pub tableau: ImexTableau,
    pub weno: Weno3,
    pub quadrature: PathQuadrature,
    /// Abort once the stable step falls below this value (s).
    pub dt_floor: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            cfl: 0.9,
            tableau: ImexTableau::default(),
            weno: Weno3::default(),
            quadrature: PathQuadrature::default(),
            dt_floor: 1e-9,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::Config(format!("CFL must lie in (0, 1], got {}", self.cfl)));
        }
        if !(self.dt_floor > 0.0) {
            return Err(Error::Config("dt floor must be positive".into()));
        }
        self.tableau.validate()
    }
}

/// Closed-form solution of the implicit relaxation stage
/// `p = p* - dt (p - F) / tau`; `tau = 0` projects onto `F`.
pub fn implicit_relaxation_stage(p_star: f64, dt_eff: f64, tau_r: f64, f_eq: f64) -> f64 {
    if tau_r == 0.0 {
        return f_eq;
    }
    if tau_r.is_infinite() {
        return p_star;
    }
    (tau_r * p_star + dt_eff * f_eq) / (tau_r + dt_eff)
}

/// Diagnostics of one time step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub dt: f64,
    pub volume_before: f64,
    pub volume_after: f64,
    /// Volume entering minus leaving through the ends during the step.
    pub boundary_volume: f64,
    /// Step-averaged outflow rate.
    pub outflow: f64,
}

impl StepReport {
    /// `|dV - net boundary volume| / V`.
    pub fn mass_balance_error(&self) -> f64 {
        ((self.volume_after - self.volume_before) - self.boundary_volume).abs() / self.volume_before
    }
}

struct Scratch {
    faces: [FaceValues; 3],
    column: Vec<f64>,
    rhs: Vec<Vec<Conserved>>,
    source: Vec<Vec<Conserved>>,
    stage: Vec<Conserved>,
    inflow: Vec<f64>,
    outflow: Vec<f64>,
}

pub struct Solver {
    grid: Grid1D,
    tau_r: f64,
    options: SolverOptions,
    boundaries: Boundaries,
    scales: [f64; 3],
    scratch: Scratch,
}

impl Solver {
    pub fn new(grid: Grid1D, tau_r: f64, options: SolverOptions, boundaries: Boundaries) -> Result<Self> {
        options.validate()?;
        if !(tau_r >= 0.0) {
            return Err(Error::InvalidParameter(format!("tau_r must be non-negative, got {tau_r}")));
        }
        let t = &options.tableau;
        let s = t.stages();
        if tau_r == 0.0 {
            // stages without an implicit solve must not feed the source of later stages
            for k in (0..s).filter(|&k| t.implicit[k][k] == 0.0) {
                if (0..s).any(|i| t.implicit[i][k] != 0.0) {
                    return Err(Error::Config(format!("tableau {} cannot be used with tau_r = 0", t.name)));
                }
            }
        }
        if let Boundaries::Coupled { outlet, .. } = &boundaries {
            outlet.validate()?;
        }
        let n = grid.cells();
        let a_scale = grid.cell_laws.iter().map(|l| l.a0).sum::<f64>() / n as f64;
        let rho = grid.cell_laws[0].rho;
        let scratch = Scratch {
            faces: Default::default(),
            column: vec![0.0; n],
            rhs: vec![vec![[0.0; 3]; n]; s],
            source: vec![vec![[0.0; 3]; n]; s],
            stage: vec![[0.0; 3]; n],
            inflow: vec![0.0; s],
            outflow: vec![0.0; s],
        };
        Ok(Solver { grid, tau_r, options, boundaries, scales: [a_scale, a_scale, rho], scratch })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn tau_r(&self) -> f64 {
        self.tau_r
    }

    pub fn options(&self) -> &SolverOptions {
        &self.options
    }

    pub fn boundaries(&self) -> &Boundaries {
        &self.boundaries
    }

    pub fn windkessel(&self) -> Option<&WindkesselRCR> {
        match &self.boundaries {
            Boundaries::Coupled { outlet, .. } => Some(outlet),
            Boundaries::Periodic => None,
        }
    }

    /// `CFL dx / max_i (|u_i| + c_i)` with the instantaneous wave speed.
    pub fn stable_dt(&self, state: &StateField) -> Result<f64> {
        let mut smax: f64 = 0.0;
        for (q, law) in state.cells.iter().zip(&self.grid.cell_laws) {
            smax = smax.max((q[1] / q[0]).abs() + law.wave_speed(q[0]));
        }
        let dt = self.options.cfl * self.grid.dx / smax;
        if !(dt >= self.options.dt_floor) {
            return Err(Error::TimeStepFloor { dt, time: state.t });
        }
        Ok(dt)
    }

    /// Boundary states `(inlet, outlet)` for `state`, or `None` when periodic.
    pub fn boundary_states(&mut self, state: &StateField) -> Result<Option<(Conserved, Conserved)>> {
        let Boundaries::Coupled { inflow, outlet } = &self.boundaries else {
            return Ok(None);
        };
        let n = self.grid.cells();
        reconstruct(&self.options.weno, &state.cells, BoundaryTreatment::Extrapolate, &self.scales, &mut self.scratch)?;
        let f = &self.scratch.faces;
        let first = [f[0].left[0], f[1].left[0], f[2].left[0]];
        let last = [f[0].right[n - 1], f[1].right[n - 1], f[2].right[n - 1]];
        let inlet = inflow_boundary(&first, inflow.flow(state.t), &self.grid.face_laws[0])?;
        let outlet = windkessel_boundary(&last, outlet, &self.grid.face_laws[n])?;
        Ok(Some((inlet, outlet)))
    }

    /// Advance by one step of at most `max_dt`.
    pub fn step(&mut self, state: &mut StateField, max_dt: f64) -> Result<StepReport> {
        let dt = self.stable_dt(state)?.min(max_dt);
        if !(dt > 0.0) {
            return Err(Error::InvalidParameter(format!("step size must be positive, got {dt}")));
        }
        let tab = self.options.tableau.clone();
        let s = tab.stages();
        let t0 = state.t;
        let volume_before = state.volume(self.grid.dx);

        let mut stage = std::mem::take(&mut self.scratch.stage);
        let result = self.run_stages(state, dt, &tab, &mut stage);
        self.scratch.stage = stage;
        result?;
        state.t = t0 + dt;

        let mut net = 0.0;
        let mut outflow = 0.0;
        for j in 0..s - 1 {
            net += tab.explicit_b[j] * (self.scratch.inflow[j] - self.scratch.outflow[j]);
            outflow += tab.explicit_b[j] * self.scratch.outflow[j];
        }
        if let Boundaries::Coupled { outlet, .. } = &mut self.boundaries {
            outlet.advance(dt, outflow);
        }
        Ok(StepReport {
            dt,
            volume_before,
            volume_after: state.volume(self.grid.dx),
            boundary_volume: dt * net,
            outflow,
        })
    }

    fn run_stages(&mut self, state: &mut StateField, dt: f64, tab: &ImexTableau, stage: &mut [Conserved]) -> Result<()> {
        let n = self.grid.cells();
        let s = tab.stages();
        let t0 = state.t;
        let tau = self.tau_r;
        for k in 0..s {
            for i in 0..n {
                let mut q = state.cells[i];
                for j in 0..k {
                    let (ae, ai) = (tab.explicit[k][j], tab.implicit[k][j]);
                    for c in 0..3 {
                        q[c] += dt * (ae * self.scratch.rhs[j][i][c] + ai * self.scratch.source[j][i][c]);
                    }
                }
                stage[i] = q;
            }
            let akk = tab.implicit[k][k];
            let t_stage = t0 + tab.c[k] * dt;
            for i in 0..n {
                let law = &self.grid.cell_laws[i];
                let q = &mut stage[i];
                if !(q[0] > 0.0) {
                    return Err(Error::Positivity { cell: i, time: t_stage, area: q[0] });
                }
                let f_eq = law.f(q[0]);
                let s_p = if akk > 0.0 {
                    let p_new = implicit_relaxation_stage(q[2], dt * akk, tau, f_eq);
                    let s_p = (p_new - q[2]) / (dt * akk);
                    q[2] = p_new;
                    s_p
                } else if tau > 0.0 {
                    -(q[2] - f_eq) / tau
                } else {
                    0.0
                };
                self.scratch.source[k][i] = [0.0, 0.0, s_p];
            }
            check_cells(stage, t_stage)?;
            if k + 1 < s {
                let mut rhs = std::mem::take(&mut self.scratch.rhs[k]);
                let result = self.transport(stage, t_stage, &mut rhs);
                self.scratch.rhs[k] = rhs;
                let (q_in, q_out) = result?;
                self.scratch.inflow[k] = q_in;
                self.scratch.outflow[k] = q_out;
            } else {
                state.cells.copy_from_slice(stage);
            }
        }
        Ok(())
    }

    /// Explicit transport operator; returns the boundary mass fluxes `(in, out)`.
    fn transport(&mut self, cells: &[Conserved], t: f64, out: &mut [Conserved]) -> Result<(f64, f64)> {
        let n = cells.len();
        let periodic = matches!(self.boundaries, Boundaries::Periodic);
        let treatment = if periodic { BoundaryTreatment::Periodic } else { BoundaryTreatment::Extrapolate };
        reconstruct(&self.options.weno, cells, treatment, &self.scales, &mut self.scratch)?;
        let faces = &self.scratch.faces;
        let left = |i: usize| [faces[0].left[i], faces[1].left[i], faces[2].left[i]];
        let right = |i: usize| [faces[0].right[i], faces[1].right[i], faces[2].right[i]];
        let quad = &self.options.quadrature;
        let inv_dx = 1.0 / self.grid.dx;
        out.iter_mut().for_each(|q| *q = [0.0; 3]);

        let interior_start = if periodic { 0 } else { 1 };
        for j in interior_start..n {
            let lower = if j == 0 { n - 1 } else { j - 1 };
            let (ql, qr) = (right(lower), left(j));
            let iface = quad.dot_flux(&ql, &qr, &self.grid.face_laws[j], j)?;
            for c in 0..3 {
                out[lower][c] -= inv_dx * (iface.flux[c] + 0.5 * iface.jump[c]);
                out[j][c] += inv_dx * (iface.flux[c] - 0.5 * iface.jump[c]);
            }
        }

        let mut fluxes = (0.0, 0.0);
        if let Boundaries::Coupled { inflow, outlet } = &self.boundaries {
            let q0 = left(0);
            let qb = inflow_boundary(&q0, inflow.flow(t), &self.grid.face_laws[0])?;
            let f = physical_flux(&qb);
            let d = quad.path_jump(&qb, &q0, &self.grid.face_laws[0]);
            for c in 0..3 {
                out[0][c] += inv_dx * (f[c] - d[c]);
            }
            let qn = right(n - 1);
            let qb_out = windkessel_boundary(&qn, outlet, &self.grid.face_laws[n])?;
            let f_out = physical_flux(&qb_out);
            let d = quad.path_jump(&qn, &qb_out, &self.grid.face_laws[n]);
            for c in 0..3 {
                out[n - 1][c] -= inv_dx * (f_out[c] + d[c]);
            }
            fluxes = (f[0], f_out[0]);
        }

        // smooth (in-cell) part of the non-conservative product on a parabola
        for i in 0..n {
            let (l, r, m) = (left(i), right(i), cells[i]);
            let law = &self.grid.cell_laws[i];
            let mut b = [0.0; 3];
            let mut cq = [0.0; 3];
            for c in 0..3 {
                b[c] = r[c] - l[c];
                cq[c] = 3.0 * (l[c] + r[c]) - 6.0 * m[c];
            }
            let mut acc = [0.0; 3];
            for &(s, w) in &CELL_GAUSS {
                let mut q = [0.0; 3];
                let mut dq = [0.0; 3];
                for c in 0..3 {
                    let a = m[c] - cq[c] / 12.0;
                    q[c] = a + b[c] * s + cq[c] * s * s;
                    dq[c] = b[c] + 2.0 * cq[c] * s;
                }
                if !(q[0] > 0.0) {
                    return Err(Error::Positivity { cell: i, time: t, area: q[0] });
                }
                let bq = nonconservative_product(&q, law, &dq);
                for c in 0..3 {
                    acc[c] += w * bq[c];
                }
            }
            for c in 0..3 {
                out[i][c] -= inv_dx * acc[c];
            }
        }
        Ok(fluxes)
    }
}

/// Three-point Gauss-Legendre rule on `[-1/2, 1/2]`.
const CELL_GAUSS: [(f64, f64); 3] = [
    (-0.387_298_334_620_741_7, 5.0 / 18.0),
    (0.0, 8.0 / 18.0),
    (0.387_298_334_620_741_7, 5.0 / 18.0),
];

fn reconstruct(
    weno: &Weno3,
    cells: &[Conserved],
    treatment: BoundaryTreatment,
    scales: &[f64; 3],
    scratch: &mut Scratch,
) -> Result<()> {
    for c in 0..3 {
        scratch.column.clear();
        scratch.column.extend(cells.iter().map(|q| q[c]));
        weno.reconstruct_into(&scratch.column, treatment, scales[c], &mut scratch.faces[c])?;
    }
    Ok(())
}

/// Samples of `(A, u, p)` at a fixed axial position.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StationSeries {
    pub x: f64,
    pub t: Vec<f64>,
    pub area: Vec<f64>,
    pub velocity: Vec<f64>,
    pub pressure: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub geometry: VesselGeometry,
    pub wall: WallModel,
    pub boundaries: Boundaries,
    pub cells: usize,
    pub options: SolverOptions,
    pub t_end: f64,
    /// Times at which full fields and station samples are recorded.
    pub output_times: Vec<f64>,
    pub stations: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationOutput {
    pub grid: Grid1D,
    pub snapshots: Vec<StateField>,
    pub stations: Vec<StationSeries>,
    /// Boundary states `(inlet, outlet)` at every output time (coupled runs only).
    pub boundary_states: Vec<(Conserved, Conserved)>,
    /// Windkessel pressure `p_c` at every output time (coupled runs only).
    pub windkessel_pressure: Vec<f64>,
    pub final_state: StateField,
    pub steps: usize,
    pub max_mass_balance_error: f64,
}

/// Run from diastolic equilibrium to `t_end`.
pub fn simulate(config: &SimulationConfig) -> Result<SimulationOutput> {
    let grid = Grid1D::new(&config.geometry, &config.wall, config.cells)?;
    let state = grid.equilibrium();
    simulate_from(config, grid, state)
}

/// Run from an arbitrary initial state.
pub fn simulate_from(config: &SimulationConfig, grid: Grid1D, mut state: StateField) -> Result<SimulationOutput> {
    if !(config.t_end >= state.t) || !config.t_end.is_finite() {
        return Err(Error::Config(format!("t_end = {} precedes the initial time", config.t_end)));
    }
    if config.output_times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config("output times must be strictly increasing".into()));
    }
    if config.output_times.iter().any(|&t| t < state.t || t > config.t_end) {
        return Err(Error::Config("output times must lie inside the simulated interval".into()));
    }
    state.validate()?;
    let mut solver = Solver::new(grid, config.wall.tau_r, config.options.clone(), config.boundaries.clone())?;
    let mut output = SimulationOutput {
        grid: solver.grid().clone(),
        snapshots: Vec::with_capacity(config.output_times.len()),
        stations: config.stations.iter().map(|&x| StationSeries { x, ..Default::default() }).collect(),
        boundary_states: Vec::new(),
        windkessel_pressure: Vec::new(),
        final_state: state.clone(),
        steps: 0,
        max_mass_balance_error: 0.0,
    };
    let mut next_output = 0;
    let record = |solver: &mut Solver, state: &StateField, output: &mut SimulationOutput| -> Result<()> {
        let (a, u, p) = (state.area(), state.velocity(), state.pressure());
        for series in &mut output.stations {
            series.t.push(state.t);
            series.area.push(solver.grid().interpolate(&a, series.x));
            series.velocity.push(solver.grid().interpolate(&u, series.x));
            series.pressure.push(solver.grid().interpolate(&p, series.x));
        }
        if let Some(b) = solver.boundary_states(state)? {
            output.boundary_states.push(b);
        }
        if let Some(wk) = solver.windkessel() {
            output.windkessel_pressure.push(wk.p_c);
        }
        output.snapshots.push(state.clone());
        Ok(())
    };
    while next_output < config.output_times.len() && config.output_times[next_output] <= state.t {
        record(&mut solver, &state, &mut output)?;
        next_output += 1;
    }
    let eps = 1e-12 * config.t_end.abs().max(1.0);
    while state.t < config.t_end - eps {
        let target = config.output_times.get(next_output).copied().unwrap_or(config.t_end).min(config.t_end);
        let remaining = target - state.t;
        let report = solver.step(&mut state, remaining)?;
        output.steps += 1;
        output.max_mass_balance_error = output.max_mass_balance_error.max(report.mass_balance_error());
        if (target - state.t).abs() <= eps {
            state.t = target;
        }
        while next_output < config.output_times.len() && config.output_times[next_output] <= state.t + eps {
            record(&mut solver, &state, &mut output)?;
            next_output += 1;
        }
    }
    output.final_state = state;
    Ok(output)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vessel::VesselKind;

    fn geometry(uniform: bool) -> VesselGeometry {
        VesselGeometry {
            length: 0.24137,
            radius_in: 0.015,
            radius_out: if uniform { 0.015 } else { 0.010 },
            wall_thickness: 0.001,
            p0: 9467.0,
            p_out: 0.0,
        }
    }

    fn wall() -> WallModel {
        WallModel::from_viscosity(VesselKind::Artery, 0.727e6, 0.533e6, 23_884.0, 1060.0).unwrap()
    }

    #[test]
    fn implicit_stage_values() {
        assert_eq!(implicit_relaxation_stage(9467.0, 0.5, 0.009, 9467.0), 9467.0);
        assert_eq!(implicit_relaxation_stage(10_000.0, 0.001, f64::INFINITY, 9467.0), 10_000.0);
        assert_eq!(implicit_relaxation_stage(10_000.0, 0.001, 0.0, 9467.0), 9467.0);
        // (0.009 * 10 + 0.001 * 9.467) / 0.010 kPa
        let p = implicit_relaxation_stage(10_000.0, 0.001, 0.009, 9467.0);
        assert!((p - 9946.7).abs() < 1e-9, "{p}");
    }

    #[test]
    fn grid_layout() {
        let g = Grid1D::new(&geometry(false), &wall(), 12).unwrap();
        assert_eq!(g.cells(), 12);
        assert!((g.dx - 0.24137 / 12.0).abs() < 1e-16);
        assert!((g.interpolate(&g.centers, 0.5 * g.length) - 0.5 * g.length).abs() < 1e-15);
        assert!(Grid1D::new(&geometry(false), &wall(), 2).is_err());
    }

    #[test]
    fn equilibrium_is_preserved_on_tapered_vessel() {
        let geom = geometry(false);
        let grid = Grid1D::new(&geom, &wall(), 12).unwrap();
        // without inflow the rest state needs p_out = p0, otherwise the compliance drains
        let outlet = WindkesselRCR::new(18.503e6, 104.92e6, 10.163e-9, geom.p0, geom.p0).unwrap();
        let bc = Boundaries::Coupled { inflow: InflowProfile::constant(0.0), outlet };
        let mut solver = Solver::new(grid.clone(), wall().tau_r, SolverOptions::default(), bc).unwrap();
        let mut state = grid.equilibrium();
        let start = state.clone();
        for _ in 0..50 {
            solver.step(&mut state, f64::INFINITY).unwrap();
        }
        for (a, b) in state.cells.iter().zip(&start.cells) {
            assert!((a[0] - b[0]).abs() <= 1e-12 * b[0]);
            assert!(a[1].abs() <= 1e-12 * b[0]);
            assert!((a[2] - b[2]).abs() <= 1e-12 * b[2]);
        }
    }

    #[test]
    fn rejects_bad_cfl() {
        let grid = Grid1D::new(&geometry(true), &wall(), 12).unwrap();
        let options = SolverOptions { cfl: 1.5, ..Default::default() };
        assert!(matches!(Solver::new(grid, 0.009, options, Boundaries::Periodic), Err(Error::Config(_))));
    }
}
