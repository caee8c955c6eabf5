mod common;

use std::sync::OnceLock;

use hemoflow::boundary::InflowProfile;
use hemoflow::data_io::*;
use hemoflow::vessel::calibrate_tau_r;

fn ta() -> &'static SyntheticDataset {
    static DS: OnceLock<SyntheticDataset> = OnceLock::new();
    DS.get_or_init(|| make_synthetic_dataset(&common::ta_synthetic()).unwrap())
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

#[test]
fn ta_dataset_has_120_samples_at_the_midpoint() {
    let w = &ta().waveform;
    assert_eq!(w.len(), 120);
    assert_eq!(w.station, 0.5 * 0.24137);
    assert!(w.pressure.is_some());
    assert_eq!(ta().fields.t.len(), 200);
    assert_eq!(ta().fields.x.len(), 12);
}

#[test]
fn ta_metadata_relaxation_time() {
    let cfg = common::ta_synthetic();
    let tau = ta().waveform.metadata_value("tau_r_ref").unwrap();
    assert!((tau - calibrate_tau_r(cfg.wall.eta, cfg.wall.e0, cfg.wall.e_inf).unwrap()).abs() <= 1e-15);
    assert!((tau - 0.009).abs() < 0.0005, "{tau}");
}

#[test]
fn exported_waveform_reloads_bitwise() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ta_midpoint.csv");
    let w = &ta().waveform;
    w.write_csv(&path).unwrap();
    let back = load_waveform_csv(&path).unwrap();
    assert_eq!(&back, w);
    assert_eq!(back.to_csv_string(), std::fs::read_to_string(&path).unwrap());
}

#[test]
fn exported_fields_reload_bitwise() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fields.csv");
    ta().fields.write_csv(&path).unwrap();
    assert_eq!(FieldSnapshotSeries::load_csv(&path).unwrap(), ta().fields);
}

#[test]
fn resampling_preserves_cycle_means() {
    let w = &ta().waveform;
    let r = resample_uniform(w, 200).unwrap();
    let p = w.pressure.as_ref().unwrap();
    let rp = r.pressure.as_ref().unwrap();
    assert!((mean(&r.area) / mean(&w.area) - 1.0).abs() < 0.005);
    assert!((mean(rp) / mean(p) - 1.0).abs() < 0.005);
    assert!((mean(&r.velocity) - mean(&w.velocity)).abs() < 0.005 * mean(&w.velocity).abs());
}

#[test]
fn resampled_linear_ramp_is_exact() {
    let mut w = ta().waveform.clone();
    let t0 = w.t[0];
    let n = 7;
    w.t = (0..n).map(|k| t0 + w.period * k as f64 / (n - 1) as f64).collect();
    w.area = w.t.iter().map(|t| 4e-4 + 1e-5 * (t - t0)).collect();
    w.velocity = w.t.iter().map(|t| -0.2 + 0.5 * (t - t0)).collect();
    w.pressure = None;
    for m in [2, 5, 13, 101] {
        let r = resample_uniform(&w, m).unwrap();
        for k in 0..m {
            let dt = r.t[k] - t0;
            assert!((r.area[k] - (4e-4 + 1e-5 * dt)).abs() <= 1e-15);
            assert!((r.velocity[k] - (-0.2 + 0.5 * dt)).abs() <= 1e-13);
        }
    }
}

#[test]
fn resampled_constant_stays_constant() {
    let mut w = ta().waveform.clone();
    w.area = vec![5e-4; w.len()];
    w.velocity = vec![0.25; w.len()];
    let r = resample_uniform(&w, 57).unwrap();
    assert!(r.area.iter().all(|&a| a == 5e-4));
    assert!(r.velocity.iter().all(|&u| u == 0.25));
}

#[test]
fn normalized_cycle_ends_at_one_and_maps_back() {
    let w = &ta().waveform;
    let n = normalize_cycle(w);
    assert_eq!(*n.t.last().unwrap(), 1.0);
    assert_eq!(normalize_cycle(&n), n);
    for (a, b) in original_times(&n).iter().zip(&w.t) {
        assert!((a - b).abs() <= 1e-14 * b.abs());
    }
}

#[test]
fn zero_inflow_gives_a_resting_waveform() {
    let mut cfg = common::ta_synthetic();
    cfg.inflow = InflowProfile::constant(0.0);
    cfg.outlet.p_out = cfg.geometry.p0;
    cfg.outlet.p_c = cfg.geometry.p0;
    cfg.t_end = 2.0;
    let w = make_synthetic_dataset(&cfg).unwrap().waveform;
    let a0 = cfg.geometry.area_at(w.station);
    let p = w.pressure.as_ref().unwrap();
    for k in 0..w.len() {
        assert!((w.area[k] - w.area[0]).abs() <= 1e-12 * a0);
        assert!(w.velocity[k].abs() <= 1e-12);
        assert!((p[k] - cfg.geometry.p0).abs() <= 1e-10 * cfg.wall.rho);
    }
}
