//! Command-line front end.

pub mod config;
pub mod svg;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub use config::RunConfig;

use crate::apnn::{cell_center_stations, mean_pre, predict_fields, uniform_unit_grid, HistoryRecord, Trainer};
use crate::autodiff::Checkpoint;
use crate::data_io::{
    load_waveform_csv, make_synthetic_dataset, normalize_cycle, resample_uniform, FieldSnapshotSeries, SyntheticConfig,
    SyntheticDataset, WaveformDataset,
};
use crate::error::{Error, Result};
use svg::{Panel, Series};

#[derive(Debug, Parser)]
#[command(name = "hemoflow", version, about = "Viscoelastic 1D blood flow and wall-parameter inference")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on this value.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, env = "HEMOFLOW_OUT")]
    pub out: Option<PathBuf>,
    /// Override the number of solver cells.
    #[arg(long, global = true)]
    pub cells: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the solver over the configured interval.
    Simulate,
    /// Write the synthetic training set (midpoint waveform and reference fields).
    GenerateData,
    /// Fit the network and (tau_r, E0) to a midpoint waveform.
    Train(TrainArgs),
    /// Evaluate a checkpoint on the station x time grid.
    Predict(PredictArgs),
    /// Render figures from existing CSV outputs.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Waveform CSV; overrides the configured dataset.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    #[arg(long)]
    pub epochs: Option<usize>,
    /// Continue from a checkpoint.
    #[arg(long)]
    pub resume: Option<PathBuf>,
    /// Print progress every this many epochs (0 disables).
    #[arg(long, default_value_t = 1000)]
    pub progress: usize,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub checkpoint: PathBuf,
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Number of uniform times over the cycle.
    #[arg(long, default_value_t = 200)]
    pub times: usize,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Reference field CSV (`t,x,A,u,p`).
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Predicted field CSV (`t,x,A,u,p`).
    #[arg(long)]
    pub prediction: Option<PathBuf>,
    /// Training report CSV.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Station for the overlays in m; defaults to the middle of the grid.
    #[arg(long)]
    pub station: Option<f64>,
    #[arg(long)]
    pub e0_ref: Option<f64>,
    #[arg(long)]
    pub tau_r_ref: Option<f64>,
}

/// Process exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::InvalidParameter(_) => 2,
        Error::Schema { .. } | Error::Io(_) | Error::Json(_) => 3,
        Error::TrainingAborted { .. } | Error::NonFinite { .. } => 5,
        _ => 4,
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::Config("--threads must be at least 1".into()));
        }
        // A second initialization (tests running several commands) is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match &cli.command {
        Command::Simulate => simulate(cli),
        Command::GenerateData => generate_data(cli),
        Command::Train(args) => train(cli, args),
        Command::Predict(args) => predict(cli, args),
        Command::Plot(args) => plot(cli, args),
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let path = cli.config.as_ref().ok_or_else(|| Error::Config("--config is required for this command".into()))?;
    let mut cfg = RunConfig::load(path)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(cells) = cli.cells {
        cfg.solver.cells = cells;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn out_dir(cli: &Cli, cfg: Option<&RunConfig>) -> Result<PathBuf> {
    let dir = cli.out.clone().or_else(|| cfg.and_then(|c| c.output.clone())).unwrap_or_else(|| PathBuf::from("out"));
    std::fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct SolverSummary {
    cells: usize,
    dx: f64,
    t_end: f64,
    steps: usize,
    max_mass_balance_error: f64,
    tau_r: f64,
    e0: f64,
    e_inf: f64,
    seed: u64,
}

fn solver_summary(cfg: &RunConfig, sc: &SyntheticConfig, ds: &SyntheticDataset) -> SolverSummary {
    SolverSummary {
        cells: sc.cells,
        dx: sc.geometry.length / sc.cells as f64,
        t_end: sc.t_end,
        steps: ds.steps,
        max_mass_balance_error: ds.max_mass_balance_error,
        tau_r: sc.wall.tau_r,
        e0: sc.wall.e0,
        e_inf: sc.wall.e_inf,
        seed: cfg.seed,
    }
}

fn simulate(cli: &Cli) -> Result<()> {
    let cfg = load_config(cli)?;
    let dir = out_dir(cli, Some(&cfg))?;
    let mut sc = cfg.synthetic_config()?;
    sc.n_data = cfg.solver.outputs_per_cycle + 1;
    sc.n_residual = cfg.solver.outputs_per_cycle + 1;
    let ds = make_synthetic_dataset(&sc)?;
    ds.fields.write_csv(&dir.join("fields.csv"))?;
    ds.waveform.write_csv(&dir.join("waveform.csv"))?;
    write_json(&dir.join("summary.json"), &solver_summary(&cfg, &sc, &ds))?;
    write_text(&dir.join("waveform.svg"), &waveform_figure("Midpoint waveforms, last cycle", &ds.waveform))?;
    write_field_maps(&dir, "", &ds.fields)?;
    println!("simulate: {} steps, {} cells, outputs in {}", ds.steps, sc.cells, dir.display());
    Ok(())
}

fn generate_data(cli: &Cli) -> Result<()> {
    let cfg = load_config(cli)?;
    let dir = out_dir(cli, Some(&cfg))?;
    let sc = cfg.synthetic_config()?;
    let ds = make_synthetic_dataset(&sc)?;
    ds.waveform.write_csv(&dir.join("dataset.csv"))?;
    ds.fields.write_csv(&dir.join("reference_fields.csv"))?;
    write_json(&dir.join("summary.json"), &solver_summary(&cfg, &sc, &ds))?;
    println!("generate-data: {} samples at x = {} m, outputs in {}", ds.waveform.len(), ds.waveform.station, dir.display());
    Ok(())
}

/// The training waveform, residual stations, and reference fields when the
/// data are synthetic.
struct TrainingData {
    waveform: WaveformDataset,
    stations: Vec<f64>,
    reference: Option<FieldSnapshotSeries>,
}

fn training_data(cfg: &RunConfig, dataset: Option<&Path>, dir: &Path) -> Result<TrainingData> {
    let path = dataset.map(Path::to_path_buf).or_else(|| cfg.dataset.path.as_ref().map(|p| cfg.resolve(p)));
    match path {
        Some(p) => {
            if !p.is_file() {
                return Err(Error::Config(format!("dataset file {} does not exist", p.display())));
            }
            let mut waveform = load_waveform_csv(&p)?;
            if let Some(n) = cfg.dataset.resample {
                waveform = resample_uniform(&waveform, n)?;
            }
            let stations = cell_center_stations(waveform.meta.length, cfg.dataset.stations);
            Ok(TrainingData { waveform, stations, reference: None })
        }
        None => {
            let ds = make_synthetic_dataset(&cfg.synthetic_config()?)?;
            ds.waveform.write_csv(&dir.join("dataset.csv"))?;
            ds.fields.write_csv(&dir.join("reference_fields.csv"))?;
            Ok(TrainingData { stations: ds.fields.x.clone(), waveform: ds.waveform, reference: Some(ds.fields) })
        }
    }
}

#[derive(Debug, Serialize)]
struct TrainSummary {
    epochs: usize,
    tau_r: f64,
    e0: f64,
    tau_r_ref: Option<f64>,
    e0_ref: Option<f64>,
    loss: crate::apnn::LossBreakdown,
    pre_area: f64,
    pre_velocity: f64,
    pre_pressure: Option<f64>,
    seconds: f64,
    seed: u64,
}

fn train(cli: &Cli, args: &TrainArgs) -> Result<()> {
    let cfg = load_config(cli)?;
    let dir = out_dir(cli, Some(&cfg))?;
    let data = training_data(&cfg, args.dataset.as_deref(), &dir)?;
    let ctx = data.waveform.physics_context()?;
    let set = data.waveform.collocation(&data.stations, cfg.dataset.n_residual)?;
    let mut tc = cfg.train_config();
    if let Some(e) = args.epochs {
        tc.epochs = e;
    }
    tc.checkpoint_path = Some(dir.join("checkpoint.json"));
    let mut trainer = match &args.resume {
        Some(p) => Trainer::resume(ctx.clone(), set, tc.clone(), &Checkpoint::load(p)?)?,
        None => Trainer::new(ctx.clone(), set, tc.clone())?,
    };
    let start = Instant::now();
    while trainer.epoch() < tc.epochs {
        let loss = trainer.step()?;
        let done = trainer.epoch() - 1;
        if args.progress > 0 && done % args.progress == 0 {
            let (tau, e0) = trainer.parameters();
            eprintln!("epoch {done}: L = {:.4e} (L_d {:.3e}, L_r {:.3e}, L_b {:.3e}), tau_r = {tau:.5} s, E0 = {e0:.4e} Pa", loss.total, loss.data, loss.residual, loss.boundary);
        }
    }
    let report = trainer.run()?;
    let seconds = start.elapsed().as_secs_f64();
    write_text(&dir.join("train_report.csv"), &report.to_csv())?;
    let fields = predict_fields(trainer.net(), &ctx, &data.stations, &uniform_unit_grid(cfg.dataset.n_residual));
    fields.write_csv(&dir.join("predicted_fields.csv"))?;

    let wave = normalize_cycle(&data.waveform);
    let pred = predict_fields(trainer.net(), &ctx, &[data.waveform.station], &wave.t);
    let col = |f: &[Vec<f64>]| FieldSnapshotSeries::station_series(f, 0);
    let pre_area = mean_pre(&col(&pred.area), &data.waveform.area);
    let pre_velocity = mean_pre(&col(&pred.velocity), &data.waveform.velocity);
    let pre_pressure = data.waveform.pressure.as_ref().map(|p| mean_pre(&col(&pred.pressure), p));
    let t: Vec<f64> = pred.t.clone();
    let reference = [Some(data.waveform.area.clone()), Some(data.waveform.velocity.clone()), data.waveform.pressure.clone()];
    let predicted = [col(&pred.area), col(&pred.velocity), col(&pred.pressure)];
    let title = format!("Midpoint waveforms at x = {:.4} m", data.waveform.station);
    write_text(&dir.join("waveform_overlay.svg"), &overlay_figure(&title, &t, &reference, &t, &predicted))?;
    let e0_ref = data.waveform.metadata_value("e0_ref");
    let tau_r_ref = data.waveform.metadata_value("tau_r_ref");
    write_text(&dir.join("parameter_history.svg"), &history_figure(&report.history, e0_ref, tau_r_ref))?;
    write_text(&dir.join("loss_history.svg"), &loss_figure(&report.history))?;
    write_field_maps(&dir, "predicted_", &fields)?;
    if let Some(r) = &data.reference {
        write_field_maps(&dir, "reference_", r)?;
    }
    let summary = TrainSummary {
        epochs: report.epochs,
        tau_r: report.tau_r,
        e0: report.e0,
        tau_r_ref,
        e0_ref,
        loss: report.final_loss,
        pre_area,
        pre_velocity,
        pre_pressure,
        seconds,
        seed: tc.seed,
    };
    write_json(&dir.join("summary.json"), &summary)?;
    println!(
        "train: {} epochs, tau_r = {:.5} s, E0 = {:.4e} Pa, PRE A {:.3}% u {:.3}%{}, outputs in {}",
        report.epochs,
        report.tau_r,
        report.e0,
        pre_area,
        pre_velocity,
        pre_pressure.map(|p| format!(" p {p:.3}%")).unwrap_or_default(),
        dir.display()
    );
    Ok(())
}

fn predict(cli: &Cli, args: &PredictArgs) -> Result<()> {
    let cfg = load_config(cli)?;
    let dir = out_dir(cli, Some(&cfg))?;
    if args.times < 2 {
        return Err(Error::Config("--times must be at least 2".into()));
    }
    let ck = Checkpoint::load(&args.checkpoint)?;
    let net = ck.net()?;
    let data = training_data(&cfg, args.dataset.as_deref(), &dir)?;
    let ctx = data.waveform.physics_context()?;
    let fields = predict_fields(&net, &ctx, &data.stations, &uniform_unit_grid(args.times));
    fields.write_csv(&dir.join("predicted_fields.csv"))?;
    write_field_maps(&dir, "predicted_", &fields)?;
    let (tau, e0) = ctx.physical(&ck.xi);
    println!("predict: epoch {}, tau_r = {tau:.5} s, E0 = {e0:.4e} Pa, outputs in {}", ck.epoch, dir.display());
    Ok(())
}

fn plot(cli: &Cli, args: &PlotArgs) -> Result<()> {
    let dir = out_dir(cli, None)?;
    if args.reference.is_none() && args.prediction.is_none() && args.report.is_none() {
        return Err(Error::Config("plot needs at least one of --reference, --prediction or --report".into()));
    }
    let reference = args.reference.as_deref().map(FieldSnapshotSeries::load_csv).transpose()?;
    let prediction = args.prediction.as_deref().map(FieldSnapshotSeries::load_csv).transpose()?;
    if let Some(r) = &reference {
        write_field_maps(&dir, "reference_", r)?;
    }
    if let Some(p) = &prediction {
        write_field_maps(&dir, "predicted_", p)?;
    }
    let lines = |f: &FieldSnapshotSeries| -> Result<(f64, Vec<f64>, [Vec<f64>; 3])> {
        let target = args.station.unwrap_or_else(|| 0.5 * (f.x[0] + f.x[f.x.len() - 1]));
        let i = nearest(&f.x, target);
        let t: Vec<f64> = f.t.iter().map(|&s| s - f.t[0]).collect();
        let col = |v: &[Vec<f64>]| FieldSnapshotSeries::station_series(v, i);
        Ok((f.x[i], t, [col(&f.area), col(&f.velocity), col(&f.pressure)]))
    };
    match (&reference, &prediction) {
        (Some(r), Some(p)) => {
            let (x, tr, rv) = lines(r)?;
            let (_, tp, pv) = lines(p)?;
            let rv = rv.map(Some);
            let svg = overlay_figure(&format!("Waveforms at x = {x:.4} m"), &tr, &rv, &tp, &pv);
            write_text(&dir.join("waveform_overlay.svg"), &svg)?;
        }
        (Some(f), None) | (None, Some(f)) => {
            let (x, t, v) = lines(f)?;
            let v = v.map(Some);
            write_text(&dir.join("waveform_overlay.svg"), &overlay_figure(&format!("Waveforms at x = {x:.4} m"), &t, &v, &[], &[vec![], vec![], vec![]]))?;
        }
        (None, None) => {}
    }
    if let Some(path) = &args.report {
        let text = std::fs::read_to_string(path)?;
        let history = parse_report_csv(&text, &path.display().to_string())?;
        write_text(&dir.join("parameter_history.svg"), &history_figure(&history, args.e0_ref, args.tau_r_ref))?;
        write_text(&dir.join("loss_history.svg"), &loss_figure(&history))?;
    }
    println!("plot: figures in {}", dir.display());
    Ok(())
}

fn nearest(x: &[f64], target: f64) -> usize {
    let mut best = 0;
    for (i, &v) in x.iter().enumerate() {
        if (v - target).abs() < (x[best] - target).abs() {
            best = i;
        }
    }
    best
}

/// Read back the history written by [`crate::apnn::TrainReport::to_csv`].
pub fn parse_report_csv(text: &str, origin: &str) -> Result<Vec<HistoryRecord>> {
    let schema = |row: usize, detail: String| Error::Schema { path: origin.to_string(), row, detail };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == crate::apnn::train::REPORT_HEADER => {}
        Some((_, h)) => return Err(schema(1, format!("unexpected header `{h}`"))),
        None => return Err(schema(1, "empty file".into())),
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 7 {
            return Err(schema(i + 1, format!("expected 7 columns, found {}", cols.len())));
        }
        let num = |k: usize| cols[k].parse::<f64>().map_err(|e| schema(i + 1, format!("column {}: {e}", k + 1)));
        let epoch = cols[0].parse::<usize>().map_err(|e| schema(i + 1, format!("epoch: {e}")))?;
        out.push(HistoryRecord { epoch, data: num(1)?, residual: num(2)?, boundary: num(3)?, total: num(4)?, tau_r: num(5)?, e0: num(6)? });
    }
    Ok(out)
}

fn linear_at(t: &[f64], y: &[f64], s: f64) -> f64 {
    if t.len() == 1 || s <= t[0] {
        return y[0];
    }
    let k = t.partition_point(|&v| v <= s);
    if k >= t.len() {
        return y[y.len() - 1];
    }
    let w = (s - t[k - 1]) / (t[k] - t[k - 1]);
    y[k - 1] + w * (y[k] - y[k - 1])
}

const FIELDS: [(&str, &str, f64); 3] = [("Area", "A [cm^2]", 1e4), ("Velocity", "u [m/s]", 1.0), ("Pressure", "p [kPa]", 1e-3)];

/// Reference and predicted curves per field with the mean PRE of the
/// prediction sampled on the reference times.
pub fn overlay_figure(title: &str, t_ref: &[f64], reference: &[Option<Vec<f64>>; 3], t_pred: &[f64], predicted: &[Vec<f64>; 3]) -> String {
    let mut panels = Vec::new();
    for (k, (name, label, scale)) in FIELDS.iter().enumerate() {
        let mut panel = Panel::new(*name, "t [s]", *label);
        let sc = |v: &[f64]| v.iter().map(|x| x * scale).collect::<Vec<_>>();
        let have_pred = !predicted[k].is_empty() && !t_pred.is_empty();
        match &reference[k] {
            Some(r) => {
                panel = panel.with(Series::new("reference", t_ref.to_vec(), sc(r)));
                if have_pred {
                    let on_ref: Vec<f64> = t_ref.iter().map(|&s| linear_at(t_pred, &predicted[k], s)).collect();
                    panel.note = Some(format!("mean PRE = {:.3}%", mean_pre(&on_ref, r)));
                }
            }
            None if !have_pred => continue,
            None => panel.note = Some("not measured".into()),
        }
        if have_pred {
            panel = panel.with(Series::new("prediction", t_pred.to_vec(), sc(&predicted[k])).dashed());
        }
        panels.push(panel);
    }
    svg::figure(title, &panels)
}

fn waveform_figure(title: &str, w: &WaveformDataset) -> String {
    let t: Vec<f64> = w.t.iter().map(|&s| s - w.t[0]).collect();
    overlay_figure(title, &t, &[Some(w.area.clone()), Some(w.velocity.clone()), w.pressure.clone()], &[], &[vec![], vec![], vec![]])
}

/// `E0` and `tau_r` against epoch with optional reference lines.
pub fn history_figure(history: &[HistoryRecord], e0_ref: Option<f64>, tau_r_ref: Option<f64>) -> String {
    let epochs: Vec<f64> = history.iter().map(|r| r.epoch as f64).collect();
    let mut e0 = Panel::new("Young modulus", "epoch", "E0 [MPa]")
        .with(Series::new("E0", epochs.clone(), history.iter().map(|r| r.e0 * 1e-6).collect()));
    if let Some(v) = e0_ref {
        e0.hlines.push((format!("ref {:.3}", v * 1e-6), v * 1e-6));
    }
    let mut tau = Panel::new("Relaxation time", "epoch", "tau_r [s]")
        .with(Series::new("tau_r", epochs, history.iter().map(|r| r.tau_r).collect()));
    if let Some(v) = tau_r_ref {
        tau.hlines.push((format!("ref {v:.4}"), v));
    }
    svg::figure("Parameter history", &[e0, tau])
}

pub fn loss_figure(history: &[HistoryRecord]) -> String {
    let epochs: Vec<f64> = history.iter().map(|r| r.epoch as f64).collect();
    let mut p = Panel::new("Loss terms", "epoch", "loss")
        .with(Series::new("L", epochs.clone(), history.iter().map(|r| r.total).collect()))
        .with(Series::new("L_d", epochs.clone(), history.iter().map(|r| r.data).collect()))
        .with(Series::new("L_r", epochs.clone(), history.iter().map(|r| r.residual).collect()))
        .with(Series::new("L_b", epochs, history.iter().map(|r| r.boundary).collect()));
    p.log_y = true;
    svg::figure("Training loss", &[p])
}

fn write_field_maps(dir: &Path, prefix: &str, f: &FieldSnapshotSeries) -> Result<()> {
    let t: Vec<f64> = f.t.iter().map(|&s| s - f.t[0]).collect();
    for ((name, _, scale), (tag, values, unit)) in FIELDS.iter().zip([
        ("area", &f.area, "cm^2"),
        ("velocity", &f.velocity, "m/s"),
        ("pressure", &f.pressure, "kPa"),
    ]) {
        let scaled: Vec<Vec<f64>> = values.iter().map(|r| r.iter().map(|v| v * scale).collect()).collect();
        let svg = svg::heat_map(name, "x [m]", "t [s]", &f.x, &t, &scaled, unit);
        write_text(&dir.join(format!("{prefix}{tag}_map.svg")), &svg)?;
    }
    Ok(())
}
