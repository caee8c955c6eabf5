mod common;

use common::{rel_l2, ta_synthetic, uniform_vessel};
use hemoflow::boundary::{InflowProfile, WindkesselRCR};
use hemoflow::fv::dot::{abs_jacobian_product, jacobian};
use hemoflow::fv::{simulate, Boundaries, Conserved, PathQuadrature, SimulationConfig, SolverOptions};
use hemoflow::vessel::{TubeLaw, VesselKind, WallModel};
use nalgebra::Matrix3;
use proptest::prelude::*;

fn ta_law() -> TubeLaw {
    WallModel::from_relaxation_time(VesselKind::Artery, 0.727e6, 0.533e6, 0.009, 1060.0)
        .unwrap()
        .tube_law(0.0125, 0.001, 9467.0)
}

/// `|J|` through Sylvester's formula on eigenvalues found numerically.
fn abs_jacobian_oracle(q: &Conserved, law: &TubeLaw) -> Matrix3<f64> {
    let j = jacobian(q, law);
    let m = Matrix3::from_fn(|r, c| j[r][c]);
    let mut lam: Vec<f64> = m.complex_eigenvalues().iter().map(|z| {
        assert!(z.im.abs() < 1e-9 * z.re.abs().max(1.0));
        z.re
    }).collect();
    lam.sort_by(f64::total_cmp);
    let id = Matrix3::identity();
    let mut out = Matrix3::zeros();
    for k in 0..3 {
        let mut term = id * lam[k].abs();
        for i in 0..3 {
            if i != k {
                term = term * (m - id * lam[i]) / (lam[k] - lam[i]);
            }
        }
        out += term;
    }
    out
}

fn dense_dissipation(ql: &Conserved, qr: &Conserved, law: &TubeLaw) -> [f64; 3] {
    let dq = nalgebra::Vector3::new(qr[0] - ql[0], qr[1] - ql[1], qr[2] - ql[2]);
    let mut acc = nalgebra::Vector3::zeros();
    for (s, w) in PathQuadrature::gauss_legendre(64).nodes {
        let psi = [ql[0] + s * dq[0], ql[1] + s * dq[1], ql[2] + s * dq[2]];
        acc += abs_jacobian_oracle(&psi, law) * dq * w;
    }
    [acc[0], acc[1], acc[2]]
}

fn state() -> impl Strategy<Value = Conserved> {
    let a0 = ta_law().a0;
    (0.7f64..1.4, -1.0f64..1.0, 8000.0f64..16000.0).prop_map(move |(al, u, p)| [al * a0, al * a0 * u, p])
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn abs_jacobian_matches_sylvester_formula(q in state(), d in state()) {
        let law = ta_law();
        let dq = [d[0] - q[0], d[1] - q[1], d[2] - q[2]];
        let got = abs_jacobian_product(&q, &law, &dq, 0).unwrap();
        let want = abs_jacobian_oracle(&q, &law) * nalgebra::Vector3::new(dq[0], dq[1], dq[2]);
        for k in 0..3 {
            let scale = want.abs().max() + 1e-300;
            prop_assert!((got[k] - want[k]).abs() <= 1e-8 * scale, "{k}: {} vs {}", got[k], want[k]);
        }
    }

    #[test]
    fn dot_dissipation_matches_dense_quadrature(ql in state(), qr in state()) {
        let law = ta_law();
        let dense = PathQuadrature::gauss_legendre(64).dot_flux(&ql, &qr, &law, 0).unwrap();
        let fl = hemoflow::fv::dot::physical_flux(&ql);
        let fr = hemoflow::fv::dot::physical_flux(&qr);
        let oracle = dense_dissipation(&ql, &qr, &law);
        let scale = oracle.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for k in 0..3 {
            let got = fl[k] + fr[k] - 2.0 * dense.flux[k];
            prop_assert!((got - oracle[k]).abs() <= 1e-8 * scale, "{k}: {got} vs {}", oracle[k]);
        }
    }

    #[test]
    fn default_quadrature_resolves_neighbouring_states(ql in state(), dal in -0.02f64..0.02, du in -0.05f64..0.05) {
        let law = ta_law();
        let qr = [ql[0] * (1.0 + dal), ql[1] + ql[0] * du, ql[2]];
        let flux = PathQuadrature::default().dot_flux(&ql, &qr, &law, 0).unwrap();
        let fl = hemoflow::fv::dot::physical_flux(&ql);
        let fr = hemoflow::fv::dot::physical_flux(&qr);
        let oracle = dense_dissipation(&ql, &qr, &law);
        let scale = oracle.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for k in 0..3 {
            let got = fl[k] + fr[k] - 2.0 * flux.flux[k];
            prop_assert!((got - oracle[k]).abs() <= 1e-8 * scale, "{k}: {got} vs {}", oracle[k]);
        }
    }
}

fn coupled(inflow: InflowProfile, outlet: WindkesselRCR, t_end: f64, outputs: Vec<f64>) -> SimulationConfig {
    let geometry = uniform_vessel();
    SimulationConfig {
        geometry,
        wall: WallModel::from_relaxation_time(VesselKind::Artery, 0.727e6, 0.533e6, 0.009, 1060.0).unwrap(),
        boundaries: Boundaries::Coupled { inflow, outlet },
        cells: 24,
        options: SolverOptions::default(),
        t_end,
        output_times: outputs,
        stations: vec![0.5 * 0.24137],
    }
}

#[test]
fn zero_inflow_with_matched_venous_pressure_stays_at_rest() {
    let p0 = uniform_vessel().p0;
    let wk = WindkesselRCR::new(18.503e6, 104.92e6, 10.163e-9, p0, p0).unwrap();
    let outputs: Vec<f64> = (1..=20).map(|k| 0.1 * k as f64).collect();
    let out = simulate(&coupled(InflowProfile::constant(0.0), wk, 2.0, outputs)).unwrap();
    let eq = out.grid.equilibrium();
    let p_c = 1060.0;
    for snap in &out.snapshots {
        for (q, e) in snap.cells.iter().zip(&eq.cells) {
            assert!((q[0] - e[0]).abs() <= 1e-12 * e[0]);
            assert!(q[1].abs() <= 1e-12 * e[0]);
            assert!((q[2] - e[2]).abs() <= 1e-10 * p_c);
        }
    }
    for p in &out.windkessel_pressure {
        assert!((p - p0).abs() <= 1e-10 * p_c);
    }
}

#[test]
fn inlet_state_carries_the_sinusoidal_flow() {
    let inflow = InflowProfile::fourier(1.0, 5e-5, vec![0.0], vec![3e-5]).unwrap();
    let wk = WindkesselRCR::new(18.503e6, 104.92e6, 10.163e-9, 0.0, 9467.0).unwrap();
    let outputs: Vec<f64> = (1..=50).map(|k| 0.04 * k as f64).collect();
    let out = simulate(&coupled(inflow.clone(), wk, 2.0, outputs.clone())).unwrap();
    for (t, (inlet, _)) in outputs.iter().zip(&out.boundary_states) {
        let q = inflow.flow(*t);
        assert!((inlet[1] - q).abs() <= 1e-8 * q.abs().max(1e-5), "t = {t}: {} vs {q}", inlet[1]);
    }
}

#[test]
fn compliance_charges_exponentially() {
    let (r2, c, flow): (f64, f64, f64) = (104.92e6, 10.163e-9, 5e-5);
    let tau = r2 * c;
    assert!((tau - 1.066).abs() < 1e-3);
    let p_inf = r2 * flow;
    let mut last = f64::INFINITY;
    for dt in [4e-3, 2e-3, 1e-3] {
        let mut wk = WindkesselRCR::new(18.503e6, r2, c, 0.0, 0.0).unwrap();
        let mut worst: f64 = 0.0;
        let steps = (5.0 / dt) as usize;
        for k in 1..=steps {
            wk.advance(dt, flow);
            let exact = p_inf * (1.0 - (-(k as f64) * dt / tau).exp());
            worst = worst.max((wk.p_c - exact).abs() / p_inf);
        }
        assert!(worst < last);
        last = worst;
    }
    assert!(last < 0.01, "{last}");
}

#[test]
fn ta_run_reaches_a_periodic_state() {
    let syn = ta_synthetic();
    let period = syn.inflow.period();
    let per_cycle = 100;
    let start = syn.t_end - 2.0 * period;
    let outputs: Vec<f64> = (0..=2 * per_cycle).map(|k| start + period * k as f64 / per_cycle as f64).collect();
    let config = SimulationConfig {
        geometry: syn.geometry.clone(),
        wall: syn.wall,
        boundaries: Boundaries::Coupled { inflow: syn.inflow.clone(), outlet: syn.outlet },
        cells: syn.cells,
        options: syn.options.clone(),
        t_end: syn.t_end,
        output_times: outputs,
        stations: vec![],
    };
    let out = simulate(&config).unwrap();
    let field = |range: std::ops::Range<usize>, f: fn(&hemoflow::fv::StateField) -> Vec<f64>| -> Vec<f64> {
        range.flat_map(|k| f(&out.snapshots[k])).collect()
    };
    let fields: [fn(&hemoflow::fv::StateField) -> Vec<f64>; 3] =
        [|s| s.area(), |s| s.velocity(), |s| s.pressure()];
    for f in fields {
        let prev = field(0..per_cycle, f);
        let last = field(per_cycle..2 * per_cycle, f);
        assert!(rel_l2(&last, &prev) < 0.01);
    }
    assert!(out.max_mass_balance_error < 1e-12);
}
