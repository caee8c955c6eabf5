//! Physics-informed loss and its gradient.
//!
//! ```text
//! R1 = s A_t + (A u)_x
//! R2 = s (A u)_t + (A u^2)_x + A p_x
//! R3 = tau (p_t + E0 G(A) (A u)_x / s) + (p - F(A))
//! ```
//!
//! in nondimensional variables, with `s` the strouhal factor of the scales.
//! `R3` multiplies by `tau` rather than dividing by it, so `tau = 0` leaves
//! exactly the elastic closure `p - F(A)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::collocation::{CollocationSet, LossWeights, StationCoeffs};
use crate::autodiff::{BatchForward, InverseParams, Jet, MlpNet, NetOutput, Real, Tape};
use crate::error::{Error, Result};
use crate::vessel::TubeLaw;

/// Network outputs and partials at one point, in any scalar type.
#[derive(Debug, Clone, Copy)]
pub struct FieldJets<T> {
    pub a: T,
    pub a_x: T,
    pub a_t: T,
    pub u: T,
    pub u_x: T,
    pub u_t: T,
    pub p: T,
    pub p_x: T,
    pub p_t: T,
}

impl FieldJets<f64> {
    pub fn from_output(o: &NetOutput) -> Self {
        FieldJets {
            a: o.area.v,
            a_x: o.area.dx,
            a_t: o.area.dt,
            u: o.velocity.v,
            u_x: o.velocity.dx,
            u_t: o.velocity.dt,
            p: o.pressure.v,
            p_x: o.pressure.dx,
            p_t: o.pressure.dt,
        }
    }
}

/// `(R1, R2, R3)` at one point for nondimensional `tau` and `E0`.
pub fn residuals<T: Real>(f: &FieldJets<T>, tau: T, e0: T, c: &StationCoeffs, strouhal: f64) -> [T; 3] {
    let q = f.a * f.u;
    let q_x = f.a_x * f.u + f.a * f.u_x;
    let q_t = f.a_t * f.u + f.a * f.u_t;
    let r1 = f.a_t * strouhal + q_x;
    let r2 = q_t * strouhal + (q_x * f.u + q * f.u_x) + f.a * f.p_x;
    let alpha = f.a / c.a0;
    let (am, an) = if c.m == 0.5 && c.n == 0.0 {
        (alpha.sqrt(), alpha.lift(1.0))
    } else {
        (alpha.powf(c.m), alpha.powf(c.n))
    };
    let g = (am * c.m - an * c.n) / (f.a * c.w);
    let f_eq = (am - an) * (c.e_inf / c.w) + c.p0;
    let r3 = tau * (f.p_t + e0 * g * q_x / strouhal) + (f.p - f_eq);
    [r1, r2, r3]
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct LossBreakdown {
    pub data: f64,
    pub residual: f64,
    pub boundary: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LossGradient {
    pub loss: LossBreakdown,
    /// Gradient with respect to the flat network parameters.
    pub net: Vec<f64>,
    /// Gradient with respect to `(log_tau_r, log_e0)`.
    pub xi: [f64; 2],
}

pub const DEFAULT_CHUNK: usize = 128;

#[derive(Clone, Copy)]
enum Role {
    Data(usize),
    Residual(usize),
    Initial(usize),
}

/// Per-chunk partial sums: data, R1, R2, R3, positivity, initial area, initial pressure.
const SUMS: usize = 7;

fn roles(set: &CollocationSet) -> Vec<Role> {
    (0..set.data.len())
        .map(Role::Data)
        .chain((0..set.residual.len()).map(Role::Residual))
        .chain((0..set.initial.len()).map(Role::Initial))
        .collect()
}

fn coords(set: &CollocationSet, role: Role) -> (f64, f64) {
    match role {
        Role::Data(i) => (set.data[i].x, set.data[i].t),
        Role::Residual(i) => (set.residual[i].x, set.residual[i].t),
        Role::Initial(i) => (set.initial[i].x, 0.0),
    }
}

fn forward_chunk(net: &MlpNet, set: &CollocationSet, chunk: &[Role]) -> BatchForward {
    let (xs, ts): (Vec<f64>, Vec<f64>) = chunk.iter().map(|&r| coords(set, r)).unzip();
    net.forward_batch(&xs, &ts)
}

fn combine(sums: &[f64; SUMS], set: &CollocationSet, w: &LossWeights) -> LossBreakdown {
    let nd = set.data.len() as f64;
    let nr = set.residual.len() as f64;
    let ni = set.initial.len() as f64;
    let data = sums[0] / nd;
    let residual = sums[1] / nr + sums[2] / nr + sums[3] / nr;
    let boundary = sums[4] / nr + sums[5] / ni + sums[6] / ni;
    LossBreakdown { data, residual, boundary, total: w.data * data + w.residual * residual + w.boundary * boundary }
}

fn check_finite(loss: &LossBreakdown) -> Result<()> {
    for (name, v) in [("L_d", loss.data), ("L_r", loss.residual), ("L_b", loss.boundary), ("L", loss.total)] {
        if !v.is_finite() {
            return Err(Error::NonFinite { term: name.into() });
        }
    }
    Ok(())
}

/// Pairwise sum of equally long vectors, in a fixed order.
fn tree_sum(mut parts: Vec<Vec<f64>>) -> Vec<f64> {
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(mut a) = it.next() {
            if let Some(b) = it.next() {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
            }
            next.push(a);
        }
        parts = next;
    }
    parts.pop().unwrap_or_default()
}

fn positivity(p: f64) -> f64 {
    let v = p.abs() - p;
    v * v
}

/// Loss components on the raw network outputs; no gradients.
pub fn evaluate_loss(
    net: &MlpNet,
    xi: &InverseParams,
    set: &CollocationSet,
    weights: &LossWeights,
) -> Result<LossBreakdown> {
    let (tau, e0) = (xi.tau_r(), xi.e0());
    let roles = roles(set);
    let parts: Vec<Vec<f64>> = roles
        .par_chunks(DEFAULT_CHUNK)
        .map(|chunk| {
            let fwd = forward_chunk(net, set, chunk);
            let mut sums = vec![0.0; SUMS];
            for (o, &role) in fwd.outputs.iter().zip(chunk) {
                accumulate_plain(&mut sums, o, role, set, tau, e0);
            }
            sums
        })
        .collect();
    let sums: [f64; SUMS] = tree_sum(parts).try_into().expect("fixed length");
    let loss = combine(&sums, set, weights);
    check_finite(&loss)?;
    Ok(loss)
}

fn accumulate_plain(sums: &mut [f64], o: &NetOutput, role: Role, set: &CollocationSet, tau: f64, e0: f64) {
    match role {
        Role::Data(i) => {
            let d = &set.data[i];
            sums[0] += (o.area.v - d.area).powi(2) + (o.velocity.v - d.velocity).powi(2);
        }
        Role::Residual(i) => {
            let r = residuals(&FieldJets::from_output(o), tau, e0, &set.residual[i].coeffs, set.strouhal);
            sums[1] += r[0] * r[0];
            sums[2] += r[1] * r[1];
            sums[3] += r[2] * r[2];
            sums[4] += positivity(o.pressure.v);
        }
        Role::Initial(i) => {
            let p = &set.initial[i];
            sums[5] += (o.area.v - p.area).powi(2);
            sums[6] += (o.pressure.v - p.pressure).powi(2);
        }
    }
}

/// Mean squared residuals with the elastic closure `R3 = p - F(A)`, built
/// from the tube law directly rather than through [`residuals`].
pub fn elastic_residual_loss(net: &MlpNet, set: &CollocationSet) -> f64 {
    let mut s = [0.0; 3];
    for pt in &set.residual {
        let o = net.forward_batch(&[pt.x], &[pt.t]).outputs[0];
        let c = &pt.coeffs;
        let law = TubeLaw { a0: c.a0, p0: c.p0, w: c.w, m: c.m, n: c.n, e0: c.e_inf, e_inf: c.e_inf, rho: 1.0 };
        let (a, u, p) = (o.area, o.velocity, o.pressure);
        let q_x = a.dx * u.v + a.v * u.dx;
        let r1 = a.dt * set.strouhal + q_x;
        let r2 = (a.dt * u.v + a.v * u.dt) * set.strouhal + (q_x * u.v + a.v * u.v * u.dx) + a.v * p.dx;
        let r3 = p.v - law.f(a.v);
        s[0] += r1 * r1;
        s[1] += r2 * r2;
        s[2] += r3 * r3;
    }
    let n = set.residual.len() as f64;
    s[0] / n + s[1] / n + s[2] / n
}

/// `L_r` with the relaxation time forced to zero.
pub fn residual_loss_at_zero_tau(net: &MlpNet, xi: &InverseParams, set: &CollocationSet) -> Result<f64> {
    let e0 = xi.e0();
    let mut s = [0.0; 3];
    for pt in &set.residual {
        let o = net.forward_batch(&[pt.x], &[pt.t]).outputs[0];
        let r = residuals(&FieldJets::from_output(&o), 0.0, e0, &pt.coeffs, set.strouhal);
        for k in 0..3 {
            s[k] += r[k] * r[k];
        }
    }
    let n = set.residual.len() as f64;
    let v = s[0] / n + s[1] / n + s[2] / n;
    if !v.is_finite() {
        return Err(Error::NonFinite { term: "L_r".into() });
    }
    Ok(v)
}

/// Total loss and its gradient with respect to the network parameters and
/// the log inverse parameters.
pub fn loss_gradient(
    net: &MlpNet,
    xi: &InverseParams,
    set: &CollocationSet,
    weights: &LossWeights,
) -> Result<LossGradient> {
    let roles = roles(set);
    let np = net.param_count();
    let nd = set.data.len() as f64;
    let nr = set.residual.len() as f64;
    let ni = set.initial.len() as f64;
    let (wd, wr, wb) = (weights.data / nd, weights.residual / nr, weights.boundary);
    let parts: Vec<Vec<f64>> = roles
        .par_chunks(DEFAULT_CHUNK)
        .map(|chunk| {
            let fwd = forward_chunk(net, set, chunk);
            // Layout: network gradient, d/dlog_tau, d/dlog_e0, then the loss sums.
            let mut out = vec![0.0; np + 2 + SUMS];
            let mut adjoints = vec![NetOutput::default(); chunk.len()];
            let tape = Tape::with_capacity(96);
            let mut adj = Vec::with_capacity(96);
            for ((o, &role), seed) in fwd.outputs.iter().zip(chunk).zip(adjoints.iter_mut()) {
                match role {
                    Role::Data(i) => {
                        let d = &set.data[i];
                        let (ea, eu) = (o.area.v - d.area, o.velocity.v - d.velocity);
                        out[np + 2] += ea * ea + eu * eu;
                        seed.area.v = 2.0 * wd * ea;
                        seed.velocity.v = 2.0 * wd * eu;
                    }
                    Role::Initial(i) => {
                        let p = &set.initial[i];
                        let (ea, ep) = (o.area.v - p.area, o.pressure.v - p.pressure);
                        out[np + 2 + 5] += ea * ea;
                        out[np + 2 + 6] += ep * ep;
                        seed.area.v = 2.0 * wb / ni * ea;
                        seed.pressure.v = 2.0 * wb / ni * ep;
                    }
                    Role::Residual(i) => {
                        tape.clear();
                        let leaves: [f64; 9] = [
                            o.area.v,
                            o.area.dx,
                            o.area.dt,
                            o.velocity.v,
                            o.velocity.dx,
                            o.velocity.dt,
                            o.pressure.v,
                            o.pressure.dx,
                            o.pressure.dt,
                        ];
                        let v: Vec<_> = leaves.iter().map(|&x| tape.var(x)).collect();
                        let lt = tape.var(xi.log_tau_r);
                        let le = tape.var(xi.log_e0);
                        let f = FieldJets {
                            a: v[0],
                            a_x: v[1],
                            a_t: v[2],
                            u: v[3],
                            u_x: v[4],
                            u_t: v[5],
                            p: v[6],
                            p_x: v[7],
                            p_t: v[8],
                        };
                        let r = residuals(&f, lt.exp(), le.exp(), &set.residual[i].coeffs, set.strouhal);
                        let pos = (f.p.abs() - f.p).square();
                        let objective = (r[0].square() + r[1].square() + r[2].square()) * wr + pos * (wb / nr);
                        tape.gradient_into(objective, &mut adj);
                        let g = |k: usize| adj[v[k].index()];
                        seed.area = Jet::new(g(0), g(1), g(2));
                        seed.velocity = Jet::new(g(3), g(4), g(5));
                        seed.pressure = Jet::new(g(6), g(7), g(8));
                        out[np] += adj[lt.index()];
                        out[np + 1] += adj[le.index()];
                        for k in 0..3 {
                            out[np + 3 + k] += r[k].value() * r[k].value();
                        }
                        out[np + 2 + 4] += pos.value();
                    }
                }
            }
            net.backward_batch(&fwd, &adjoints, &mut out[..np]);
            out
        })
        .collect();
    let mut total = tree_sum(parts);
    let sums: [f64; SUMS] = total[np + 2..].try_into().expect("fixed length");
    let loss = combine(&sums, set, weights);
    check_finite(&loss)?;
    let xi_grad = [total[np], total[np + 1]];
    total.truncate(np);
    if let Some(i) = total.iter().position(|g| !g.is_finite()) {
        return Err(Error::NonFinite { term: format!("gradient of network parameter {i}") });
    }
    if !xi_grad.iter().all(|g| g.is_finite()) {
        return Err(Error::NonFinite { term: "gradient of the inverse parameters".into() });
    }
    Ok(LossGradient { loss, net: total, xi: xi_grad })
}
