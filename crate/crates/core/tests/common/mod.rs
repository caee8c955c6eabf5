#![allow(dead_code)]

use std::path::Path;

use hemoflow::cli::RunConfig;
use hemoflow::data_io::SyntheticConfig;
use hemoflow::vessel::TubeLaw;

pub const TA_JSON: &str = include_str!("../../../../configs/ta_table1.json");

pub fn ta_run_config() -> RunConfig {
    RunConfig::from_json_str(TA_JSON, Path::new(".")).unwrap()
}

pub fn ta_synthetic() -> SyntheticConfig {
    ta_run_config().synthetic_config().unwrap()
}

/// Five-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss5() -> [(f64, f64); 5] {
    let a = (5.0f64 - 2.0 * (10.0f64 / 7.0).sqrt()).sqrt() / 3.0;
    let b = (5.0f64 + 2.0 * (10.0f64 / 7.0).sqrt()).sqrt() / 3.0;
    let wa = (322.0 + 13.0 * 70f64.sqrt()) / 900.0;
    let wb = (322.0 - 13.0 * 70f64.sqrt()) / 900.0;
    [(-b, wb), (-a, wa), (0.0, 128.0 / 225.0), (a, wa), (b, wb)]
}

/// Cell averages of `f` on `n` equal cells of `[0, length]`.
pub fn cell_averages<const K: usize>(length: f64, n: usize, f: impl Fn(f64) -> [f64; K]) -> Vec<[f64; K]> {
    let dx = length / n as f64;
    (0..n)
        .map(|i| {
            let xc = (i as f64 + 0.5) * dx;
            let mut q = [0.0; K];
            for (s, w) in gauss5() {
                let v = f(xc + 0.5 * s * dx);
                for k in 0..K {
                    q[k] += 0.5 * w * v[k];
                }
            }
            q
        })
        .collect()
}

/// Elastic limit of the model on a uniform periodic vessel, written in
/// conservation form: `A_t + q_x = 0`, `q_t + (q^2/A + P(A)/rho)_x = 0`
/// with `P(A) = int A F'(A) dA`. Fifth-order WENO-JS on `(A, q)`, Rusanov
/// fluxes and SSP-RK3. Returns `(A, q)` cell averages at each output time.
pub struct ElasticOracle {
    pub law: TubeLaw,
    pub length: f64,
    pub cells: usize,
    pub cfl: f64,
}

impl ElasticOracle {
    fn pressure_integral(&self, a: f64) -> f64 {
        // Artery law only: A F'(A) = E_inf sqrt(A) / (2 W sqrt(A0)).
        assert!(self.law.m == 0.5 && self.law.n == 0.0);
        self.law.e_inf * a.powf(1.5) / (3.0 * self.law.w * self.law.a0.sqrt())
    }

    fn flux(&self, q: [f64; 2]) -> [f64; 2] {
        [q[1], q[1] * q[1] / q[0] + self.pressure_integral(q[0]) / self.law.rho]
    }

    fn speed(&self, q: [f64; 2]) -> f64 {
        (q[1] / q[0]).abs() + self.law.elastic_wave_speed(q[0])
    }

    fn weno5(v: [f64; 5], scale: f64) -> f64 {
        let [a, b, c, d, e] = v;
        let p0 = (2.0 * a - 7.0 * b + 11.0 * c) / 6.0;
        let p1 = (-b + 5.0 * c + 2.0 * d) / 6.0;
        let p2 = (2.0 * c + 5.0 * d - e) / 6.0;
        let b0 = 13.0 / 12.0 * (a - 2.0 * b + c).powi(2) + 0.25 * (a - 4.0 * b + 3.0 * c).powi(2);
        let b1 = 13.0 / 12.0 * (b - 2.0 * c + d).powi(2) + 0.25 * (b - d).powi(2);
        let b2 = 13.0 / 12.0 * (c - 2.0 * d + e).powi(2) + 0.25 * (3.0 * c - 4.0 * d + e).powi(2);
        let eps = 1e-6 * scale * scale;
        let w0 = 0.1 / (eps + b0).powi(2);
        let w1 = 0.6 / (eps + b1).powi(2);
        let w2 = 0.3 / (eps + b2).powi(2);
        (w0 * p0 + w1 * p1 + w2 * p2) / (w0 + w1 + w2)
    }

    fn rhs(&self, q: &[[f64; 2]]) -> (Vec<[f64; 2]>, f64) {
        let n = q.len();
        let dx = self.length / n as f64;
        let at = |i: isize| q[i.rem_euclid(n as isize) as usize];
        let mut flux = vec![[0.0; 2]; n];
        let mut smax: f64 = 0.0;
        let scale = [0, 1].map(|k| q.iter().map(|v| v[k].abs()).fold(0.0, f64::max).max(1e-3 * self.law.a0));
        for (j, fj) in flux.iter_mut().enumerate() {
            // Interface j + 1/2.
            let j = j as isize;
            let mut left = [0.0; 2];
            let mut right = [0.0; 2];
            for k in 0..2 {
                left[k] = Self::weno5([at(j - 2)[k], at(j - 1)[k], at(j)[k], at(j + 1)[k], at(j + 2)[k]], scale[k]);
                right[k] = Self::weno5([at(j + 3)[k], at(j + 2)[k], at(j + 1)[k], at(j)[k], at(j - 1)[k]], scale[k]);
            }
            let s = self.speed(left).max(self.speed(right));
            smax = smax.max(s);
            let (fl, fr) = (self.flux(left), self.flux(right));
            for k in 0..2 {
                fj[k] = 0.5 * (fl[k] + fr[k]) - 0.5 * s * (right[k] - left[k]);
            }
        }
        let mut out = vec![[0.0; 2]; n];
        for i in 0..n {
            let im = (i + n - 1) % n;
            for k in 0..2 {
                out[i][k] = -(flux[i][k] - flux[im][k]) / dx;
            }
        }
        (out, smax)
    }

    pub fn run(&self, init: &[[f64; 2]], outputs: &[f64]) -> Vec<Vec<[f64; 2]>> {
        let dx = self.length / self.cells as f64;
        let mut q = init.to_vec();
        let mut t = 0.0;
        let mut out = Vec::new();
        for &t_out in outputs {
            while t < t_out {
                let (k1, s) = self.rhs(&q);
                let dt = (self.cfl * dx / s).min(t_out - t);
                let q1: Vec<_> = q.iter().zip(&k1).map(|(a, b)| [a[0] + dt * b[0], a[1] + dt * b[1]]).collect();
                let (k2, _) = self.rhs(&q1);
                let q2: Vec<_> = q
                    .iter()
                    .zip(q1.iter().zip(&k2))
                    .map(|(a, (b, c))| [0.75 * a[0] + 0.25 * (b[0] + dt * c[0]), 0.75 * a[1] + 0.25 * (b[1] + dt * c[1])])
                    .collect();
                let (k3, _) = self.rhs(&q2);
                q = q
                    .iter()
                    .zip(q2.iter().zip(&k3))
                    .map(|(a, (b, c))| {
                        [
                            a[0] / 3.0 + 2.0 / 3.0 * (b[0] + dt * c[0]),
                            a[1] / 3.0 + 2.0 / 3.0 * (b[1] + dt * c[1]),
                        ]
                    })
                    .collect();
                t += dt;
            }
            out.push(q.clone());
        }
        out
    }
}

/// `||a - b|| / ||b||` in the discrete L2 norm.
pub fn rel_l2(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    (num / den).sqrt()
}

/// Average groups of `k` consecutive fine cells.
pub fn coarsen(fine: &[f64], k: usize) -> Vec<f64> {
    fine.chunks(k).map(|c| c.iter().sum::<f64>() / k as f64).collect()
}

use hemoflow::fv::{Boundaries, Grid1D, Solver, SolverOptions, StateField};
use hemoflow::vessel::{VesselGeometry, VesselKind, WallModel};

pub fn uniform_vessel() -> VesselGeometry {
    VesselGeometry { length: 0.24137, radius_in: 0.0125, radius_out: 0.0125, wall_thickness: 0.001, p0: 9467.0, p_out: 0.0 }
}

/// Smooth periodic area pulse with zero velocity.
pub fn pulse(law: &TubeLaw, length: f64, amp: f64) -> impl Fn(f64) -> [f64; 2] + '_ {
    move |x| [law.a0 * (1.0 + amp * (2.0 * std::f64::consts::PI * x / length).sin()), 0.0]
}

/// Viscoelastic run on the uniform periodic vessel from `p = F(A)`;
/// returns `(A, q, p)` cell averages at the output times.
pub fn viscoelastic_periodic(cells: usize, tau_r: f64, amp: f64, outputs: &[f64]) -> Vec<Vec<[f64; 3]>> {
    let geom = uniform_vessel();
    let wall = WallModel::from_relaxation_time(VesselKind::Artery, 0.727e6, 0.533e6, tau_r, 1060.0).unwrap();
    let grid = Grid1D::new(&geom, &wall, cells).unwrap();
    let law = grid.cell_laws[0];
    let f = pulse(&law, geom.length, amp);
    let cells_q = cell_averages(geom.length, cells, |x| {
        let [a, q] = f(x);
        [a, q, law.f(a)]
    });
    let mut solver = Solver::new(grid, tau_r, SolverOptions::default(), Boundaries::Periodic).unwrap();
    let mut state = StateField { t: 0.0, cells: cells_q };
    let mut out = Vec::new();
    for &t_out in outputs {
        while state.t < t_out - 1e-15 {
            let rest = t_out - state.t;
            solver.step(&mut state, rest).unwrap();
        }
        out.push(state.cells.clone());
    }
    out
}

use hemoflow::apnn::{CollocationSet, PhysicsContext};
use hemoflow::data_io::{make_synthetic_dataset, SyntheticDataset};

/// The Table 1 synthetic set with its training context and points
/// (120 data times, 200 residual times, 12 stations).
pub fn ta_training() -> (SyntheticDataset, PhysicsContext, CollocationSet) {
    let ds = make_synthetic_dataset(&ta_synthetic()).unwrap();
    let ctx = ds.waveform.physics_context().unwrap();
    let set = ds.waveform.collocation(&ds.fields.x, 200).unwrap();
    (ds, ctx, set)
}

/// Combined self-convergence error between solutions on `n` and `2n`
/// cells: the L2 norm of each field's difference (fine solution averaged
/// onto the coarse grid), scaled by that field's range, summed in quadrature.
pub fn combined_error(coarse: &[[f64; 3]], fine: &[[f64; 3]]) -> ([f64; 3], f64) {
    let n = coarse.len();
    let mut e = [0.0; 3];
    for i in 0..n {
        for v in 0..3 {
            let r = 0.5 * (fine[2 * i][v] + fine[2 * i + 1][v]);
            e[v] += (coarse[i][v] - r).powi(2) / n as f64;
        }
    }
    let range = [0, 1, 2].map(|v| {
        let hi = fine.iter().map(|q| q[v]).fold(f64::MIN, f64::max);
        let lo = fine.iter().map(|q| q[v]).fold(f64::MAX, f64::min);
        hi - lo
    });
    let per = e.map(f64::sqrt);
    let comb = (0..3).map(|v| e[v] / range[v].powi(2)).sum::<f64>().sqrt();
    (per, comb)
}
