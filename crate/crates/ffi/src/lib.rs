//! C interface to the hemoflow solver and trainer.
//!
//! Every fallible call returns an [`HfStatus`]; on failure the message is
//! kept per thread and read with [`hf_last_error_message`]. Handles are
//! opaque and must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, UnwindSafe};
use std::path::Path;
use std::ptr;

use hemoflow::apnn::Trainer;
use hemoflow::cli::RunConfig;
use hemoflow::data_io::{load_waveform_csv, make_synthetic_dataset, SyntheticDataset, WaveformDataset};
use hemoflow::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidConfig = 2,
    Io = 3,
    Solver = 4,
    Training = 5,
    InvalidArgument = 6,
    Panic = 7,
}

/// Field selector for the waveform accessors.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HfField {
    Time = 0,
    Area = 1,
    Velocity = 2,
    Pressure = 3,
}

/// Result of a synthetic simulation.
pub struct HfSimulation {
    data: SyntheticDataset,
}

pub struct HfTrainer {
    trainer: Trainer,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HfLoss {
    pub data: f64,
    pub residual: f64,
    pub boundary: f64,
    pub total: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> HfStatus {
    match e {
        Error::Config(_) | Error::InvalidParameter(_) => HfStatus::InvalidConfig,
        Error::Schema { .. } | Error::Io(_) | Error::Json(_) => HfStatus::Io,
        Error::TrainingAborted { .. } | Error::NonFinite { .. } => HfStatus::Training,
        _ => HfStatus::Solver,
    }
}

fn guard<F: FnOnce() -> Result<(), (HfStatus, String)> + UnwindSafe>(f: F) -> HfStatus {
    match catch_unwind(f) {
        Ok(Ok(())) => {
            set_error(String::new());
            HfStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            HfStatus::Panic
        }
    }
}

fn lift(e: Error) -> (HfStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, (HfStatus, String)> {
    if p.is_null() {
        return Err((HfStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (HfStatus::InvalidArgument, format!("{name} is not valid UTF-8")))
}

fn parse_config(json: &str) -> Result<RunConfig, (HfStatus, String)> {
    RunConfig::from_json_str(json, Path::new(".")).map_err(lift)
}

/// Copy the last error message of this thread into `buf` (NUL terminated,
/// truncated to `len`). Returns the full message length in bytes.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn hf_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Run the solver for a JSON run configuration and keep the midpoint
/// waveform of the last cycle.
///
/// # Safety
/// `config_json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hf_simulation_run(config_json: *const c_char, out: *mut *mut HfSimulation) -> HfStatus {
    guard(|| {
        if out.is_null() {
            return Err((HfStatus::NullPointer, "out is null".into()));
        }
        *out = ptr::null_mut();
        let cfg = parse_config(str_arg(config_json, "config_json")?)?;
        let data = make_synthetic_dataset(&cfg.synthetic_config().map_err(lift)?).map_err(lift)?;
        *out = Box::into_raw(Box::new(HfSimulation { data }));
        Ok(())
    })
}

/// # Safety
/// `sim` must come from [`hf_simulation_run`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hf_simulation_free(sim: *mut HfSimulation) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Number of waveform samples.
///
/// # Safety
/// `sim` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hf_simulation_len(sim: *const HfSimulation) -> usize {
    sim.as_ref().map_or(0, |s| s.data.waveform.len())
}

/// Solver steps taken.
///
/// # Safety
/// `sim` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hf_simulation_steps(sim: *const HfSimulation) -> usize {
    sim.as_ref().map_or(0, |s| s.data.steps)
}

/// Copy one waveform column (SI units) into `buf`, which must hold
/// [`hf_simulation_len`] values.
///
/// # Safety
/// `sim` must be a live handle and `buf` point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn hf_simulation_waveform(sim: *const HfSimulation, field: HfField, buf: *mut f64, len: usize) -> HfStatus {
    guard(|| {
        let s = sim.as_ref().ok_or((HfStatus::NullPointer, "simulation handle is null".into()))?;
        if buf.is_null() {
            return Err((HfStatus::NullPointer, "buf is null".into()));
        }
        copy_column(&s.data.waveform, field, std::slice::from_raw_parts_mut(buf, len))
    })
}

fn copy_column(w: &WaveformDataset, field: HfField, dst: &mut [f64]) -> Result<(), (HfStatus, String)> {
    let src: &[f64] = match field {
        HfField::Time => &w.t,
        HfField::Area => &w.area,
        HfField::Velocity => &w.velocity,
        HfField::Pressure => w.pressure.as_deref().ok_or((HfStatus::InvalidArgument, "no pressure column".into()))?,
    };
    if dst.len() < src.len() {
        return Err((HfStatus::InvalidArgument, format!("buffer holds {} values, {} needed", dst.len(), src.len())));
    }
    dst[..src.len()].copy_from_slice(src);
    Ok(())
}

/// Create a trainer from a JSON run configuration. With a null
/// `dataset_path` the synthetic set of the configuration is generated.
///
/// # Safety
/// String arguments must be NUL-terminated (or null where allowed) and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hf_trainer_new(config_json: *const c_char, dataset_path: *const c_char, out: *mut *mut HfTrainer) -> HfStatus {
    guard(|| {
        if out.is_null() {
            return Err((HfStatus::NullPointer, "out is null".into()));
        }
        *out = ptr::null_mut();
        let cfg = parse_config(str_arg(config_json, "config_json")?)?;
        let (waveform, stations) = if dataset_path.is_null() {
            let ds = make_synthetic_dataset(&cfg.synthetic_config().map_err(lift)?).map_err(lift)?;
            (ds.waveform, ds.fields.x)
        } else {
            let w = load_waveform_csv(Path::new(str_arg(dataset_path, "dataset_path")?)).map_err(lift)?;
            let st = hemoflow::apnn::cell_center_stations(w.meta.length, cfg.dataset.stations);
            (w, st)
        };
        let ctx = waveform.physics_context().map_err(lift)?;
        let set = waveform.collocation(&stations, cfg.dataset.n_residual).map_err(lift)?;
        let trainer = Trainer::new(ctx, set, cfg.train_config()).map_err(lift)?;
        *out = Box::into_raw(Box::new(HfTrainer { trainer }));
        Ok(())
    })
}

/// # Safety
/// `t` must come from [`hf_trainer_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hf_trainer_free(t: *mut HfTrainer) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Advance `epochs` optimizer steps; `loss` (nullable) receives the loss
/// before the last step.
///
/// # Safety
/// `t` must be a live handle; `loss` null or writable.
#[no_mangle]
pub unsafe extern "C" fn hf_trainer_step(t: *mut HfTrainer, epochs: usize, loss: *mut HfLoss) -> HfStatus {
    guard(|| {
        let h = t.as_mut().ok_or((HfStatus::NullPointer, "trainer handle is null".into()))?;
        let mut last = None;
        for _ in 0..epochs {
            last = Some(h.trainer.step().map_err(lift)?);
        }
        if let (Some(l), Some(dst)) = (last, loss.as_mut()) {
            *dst = HfLoss { data: l.data, residual: l.residual, boundary: l.boundary, total: l.total };
        }
        Ok(())
    })
}

/// Epochs completed so far.
///
/// # Safety
/// `t` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hf_trainer_epoch(t: *const HfTrainer) -> usize {
    t.as_ref().map_or(0, |h| h.trainer.epoch())
}

/// Current `tau_r` [s] and `E0` [Pa].
///
/// # Safety
/// `t` must be a live handle; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn hf_trainer_parameters(t: *const HfTrainer, tau_r: *mut f64, e0: *mut f64) -> HfStatus {
    guard(|| {
        let h = t.as_ref().ok_or((HfStatus::NullPointer, "trainer handle is null".into()))?;
        if tau_r.is_null() || e0.is_null() {
            return Err((HfStatus::NullPointer, "output pointer is null".into()));
        }
        let (a, b) = h.trainer.parameters();
        *tau_r = a;
        *e0 = b;
        Ok(())
    })
}

/// Write a JSON checkpoint of the complete optimizer state.
///
/// # Safety
/// `t` must be a live handle and `path` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn hf_trainer_save_checkpoint(t: *const HfTrainer, path: *const c_char) -> HfStatus {
    guard(|| {
        let h = t.as_ref().ok_or((HfStatus::NullPointer, "trainer handle is null".into()))?;
        let p = str_arg(path, "path")?;
        h.trainer.checkpoint().save(Path::new(p)).map_err(lift)
    })
}
