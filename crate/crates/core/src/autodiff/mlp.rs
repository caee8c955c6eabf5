//! Fully connected `tanh` network mapping `(x, t)` to `(A, u, p)`.
//!
//! Two evaluation paths share the same parameters:
//!
//! * [`MlpNet::forward_with_input_derivs`] evaluates one point in forward mode
//!   with [`Dual2`] numbers.
//! * [`MlpNet::forward_batch`] / [`MlpNet::backward_batch`] push a whole batch
//!   through the net as one matrix product per layer. Values and the two input
//!   tangents are stacked column-wise, `[H | dH/dx | dH/dt]`, so the first
//!   derivatives come for free and the reverse sweep differentiates through
//!   them as well.

use ndarray::{s, Array1, Array2, ArrayView2, Axis, Zip};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::tape::{sigmoid, softplus, Dual2, Real};
use crate::error::{Error, Result};

pub const DEFAULT_LAYERS: [usize; 5] = [2, 32, 32, 32, 3];

/// Value of one output together with its input partials.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Jet {
    pub v: f64,
    pub dx: f64,
    pub dt: f64,
}

impl Jet {
    pub fn new(v: f64, dx: f64, dt: f64) -> Self {
        Jet { v, dx, dt }
    }
}

/// Network outputs at one point. The same layout doubles as the adjoint
/// seed for [`MlpNet::backward_batch`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct NetOutput {
    pub area: Jet,
    pub velocity: Jet,
    pub pressure: Jet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlpNet {
    sizes: Vec<usize>,
    weights: Vec<Array2<f64>>,
    biases: Vec<Array1<f64>>,
}

/// Everything the reverse sweep needs from a batched forward pass.
#[derive(Debug, Clone)]
pub struct BatchForward {
    n: usize,
    /// Layer inputs, each `[H | Hx | Ht]`; entry 0 is the input layer.
    stacks: Vec<Array2<f64>>,
    /// Pre-activations of each layer, same layout.
    pre: Vec<Array2<f64>>,
    pub outputs: Vec<NetOutput>,
}

impl BatchForward {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

impl MlpNet {
    /// All-zero network with the given layer sizes.
    pub fn zeros(sizes: &[usize]) -> Result<Self> {
        if sizes.len() < 2 || sizes[0] != 2 || sizes[sizes.len() - 1] != 3 || sizes.contains(&0) {
            return Err(Error::InvalidParameter(format!(
                "layer sizes must start with 2 inputs and end with 3 outputs, got {sizes:?}"
            )));
        }
        let weights = sizes.windows(2).map(|w| Array2::zeros((w[1], w[0]))).collect();
        let biases = sizes[1..].iter().map(|&n| Array1::zeros(n)).collect();
        Ok(MlpNet { sizes: sizes.to_vec(), weights, biases })
    }

    /// Uniform Glorot initialization with zero biases.
    pub fn glorot(sizes: &[usize], seed: u64) -> Result<Self> {
        let mut net = Self::zeros(sizes)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for w in &mut net.weights {
            let (fan_out, fan_in) = w.dim();
            let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
            w.iter_mut().for_each(|v| *v = rng.random_range(-limit..limit));
        }
        Ok(net)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn weights(&self) -> &[Array2<f64>] {
        &self.weights
    }

    pub fn biases(&self) -> &[Array1<f64>] {
        &self.biases
    }

    pub fn param_count(&self) -> usize {
        self.sizes.windows(2).map(|w| w[1] * (w[0] + 1)).sum()
    }

    /// Flat parameter vector: per layer, the weight matrix row-major, then its bias.
    pub fn params(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        for (w, b) in self.weights.iter().zip(&self.biases) {
            out.extend(w.iter());
            out.extend(b.iter());
        }
        out
    }

    pub fn set_params(&mut self, params: &[f64]) -> Result<()> {
        if params.len() != self.param_count() {
            return Err(Error::InvalidParameter(format!(
                "expected {} parameters, got {}",
                self.param_count(),
                params.len()
            )));
        }
        if let Some(i) = params.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { term: format!("network parameter {i}") });
        }
        let mut k = 0;
        for (w, b) in self.weights.iter_mut().zip(&mut self.biases) {
            for v in w.iter_mut().chain(b.iter_mut()) {
                *v = params[k];
                k += 1;
            }
        }
        Ok(())
    }

    pub fn with_params(&self, params: &[f64]) -> Result<Self> {
        let mut net = self.clone();
        net.set_params(params)?;
        Ok(net)
    }

    /// Evaluate in any scalar type; returns `(A, u, p)`.
    pub fn eval<T: Real>(&self, x: T, t: T) -> [T; 3] {
        let mut h = vec![x, t];
        let last = self.weights.len() - 1;
        for (l, (w, b)) in self.weights.iter().zip(&self.biases).enumerate() {
            let next: Vec<T> = w
                .outer_iter()
                .zip(b.iter())
                .map(|(row, &bias)| {
                    let mut z = x.lift(bias);
                    for (&wij, &hj) in row.iter().zip(&h) {
                        z = z + hj * wij;
                    }
                    if l < last {
                        z.tanh()
                    } else {
                        z
                    }
                })
                .collect();
            h = next;
        }
        [h[0].softplus(), h[1], h[2]]
    }

    pub fn forward(&self, x: f64, t: f64) -> [f64; 3] {
        self.eval(x, t)
    }

    pub fn forward_with_input_derivs(&self, x: f64, t: f64) -> NetOutput {
        let [a, u, p] = self.eval(Dual2::input(x, 0), Dual2::input(t, 1));
        let jet = |d: Dual2| Jet::new(d.v, d.d[0], d.d[1]);
        NetOutput { area: jet(a), velocity: jet(u), pressure: jet(p) }
    }

    /// Batched forward pass with input tangents.
    pub fn forward_batch(&self, xs: &[f64], ts: &[f64]) -> BatchForward {
        assert_eq!(xs.len(), ts.len());
        let n = xs.len();
        let mut input = Array2::zeros((2, 3 * n));
        for j in 0..n {
            input[[0, j]] = xs[j];
            input[[1, j]] = ts[j];
            input[[0, n + j]] = 1.0;
            input[[1, 2 * n + j]] = 1.0;
        }
        let layers = self.weights.len();
        let mut stacks = Vec::with_capacity(layers);
        let mut pre = Vec::with_capacity(layers);
        stacks.push(input);
        for l in 0..layers {
            let mut z = self.weights[l].dot(&stacks[l]);
            z.slice_mut(s![.., ..n]).outer_iter_mut().zip(self.biases[l].iter()).for_each(|(mut row, &b)| {
                row.mapv_inplace(|v| v + b);
            });
            if l + 1 < layers {
                let mut h = Array2::zeros(z.dim());
                {
                    let (hv, rest) = h.view_mut().split_at(Axis(1), n);
                    let (hx, ht) = rest.split_at(Axis(1), n);
                    let zv = z.slice(s![.., ..n]);
                    let zx = z.slice(s![.., n..2 * n]);
                    let zt = z.slice(s![.., 2 * n..]);
                    Zip::from(hv).and(hx).and(ht).and(zv).and(zx).and(zt).for_each(|hv, hx, ht, &zv, &zx, &zt| {
                        let th = zv.tanh();
                        let sd = 1.0 - th * th;
                        *hv = th;
                        *hx = sd * zx;
                        *ht = sd * zt;
                    });
                }
                pre.push(z);
                stacks.push(h);
            } else {
                pre.push(z);
            }
        }
        let o = &pre[layers - 1];
        let outputs = (0..n)
            .map(|j| {
                let (o0, o0x, o0t) = (o[[0, j]], o[[0, n + j]], o[[0, 2 * n + j]]);
                let sg = sigmoid(o0);
                NetOutput {
                    area: Jet::new(softplus(o0), sg * o0x, sg * o0t),
                    velocity: Jet::new(o[[1, j]], o[[1, n + j]], o[[1, 2 * n + j]]),
                    pressure: Jet::new(o[[2, j]], o[[2, n + j]], o[[2, 2 * n + j]]),
                }
            })
            .collect();
        BatchForward { n, stacks, pre, outputs }
    }

    /// Accumulate into `grad` the parameter gradient of `sum_j <adjoint_j, output_j>`.
    pub fn backward_batch(&self, fwd: &BatchForward, adjoints: &[NetOutput], grad: &mut [f64]) {
        let n = fwd.n;
        assert_eq!(adjoints.len(), n);
        assert_eq!(grad.len(), self.param_count());
        let layers = self.weights.len();
        let o = &fwd.pre[layers - 1];
        let mut zbar = Array2::zeros((3, 3 * n));
        for (j, adj) in adjoints.iter().enumerate() {
            let (o0, o0x, o0t) = (o[[0, j]], o[[0, n + j]], o[[0, 2 * n + j]]);
            let sg = sigmoid(o0);
            let dsg = sg * (1.0 - sg);
            zbar[[0, j]] = adj.area.v * sg + (adj.area.dx * o0x + adj.area.dt * o0t) * dsg;
            zbar[[0, n + j]] = adj.area.dx * sg;
            zbar[[0, 2 * n + j]] = adj.area.dt * sg;
            zbar[[1, j]] = adj.velocity.v;
            zbar[[1, n + j]] = adj.velocity.dx;
            zbar[[1, 2 * n + j]] = adj.velocity.dt;
            zbar[[2, j]] = adj.pressure.v;
            zbar[[2, n + j]] = adj.pressure.dx;
            zbar[[2, 2 * n + j]] = adj.pressure.dt;
        }
        let offsets = self.offsets();
        for l in (0..layers).rev() {
            let prev = &fwd.stacks[l];
            let wgrad = zbar.dot(&prev.t());
            let off = offsets[l];
            let (rows, cols) = self.weights[l].dim();
            for (g, v) in grad[off..off + rows * cols].iter_mut().zip(wgrad.iter()) {
                *g += v;
            }
            for (i, g) in grad[off + rows * cols..off + rows * cols + rows].iter_mut().enumerate() {
                *g += zbar.slice(s![i, ..n]).sum();
            }
            if l == 0 {
                break;
            }
            let hbar = self.weights[l].t().dot(&zbar);
            zbar = hidden_adjoint(hbar.view(), fwd.stacks[l].view(), fwd.pre[l - 1].view(), n);
        }
    }

    /// Start of each layer's block in the flat parameter vector.
    fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.weights.len());
        let mut k = 0;
        for w in self.sizes.windows(2) {
            off.push(k);
            k += w[1] * (w[0] + 1);
        }
        off
    }
}

/// Pull `[Hbar | Hxbar | Htbar]` back through `H = tanh(Z)`, `Hx = S Zx`, `Ht = S Zt`
/// with `S = 1 - H^2`.
fn hidden_adjoint(hbar: ArrayView2<f64>, h: ArrayView2<f64>, z: ArrayView2<f64>, n: usize) -> Array2<f64> {
    let mut zbar = Array2::zeros(hbar.dim());
    for (((mut out, hb), hr), zr) in zbar.outer_iter_mut().zip(hbar.outer_iter()).zip(h.outer_iter()).zip(z.outer_iter()) {
        let out = out.as_slice_mut().expect("standard layout");
        let (hb, hr, zr) = (hb.as_slice().expect("standard layout"), hr.as_slice().unwrap(), zr.as_slice().unwrap());
        for j in 0..n {
            let hv = hr[j];
            let sd = 1.0 - hv * hv;
            let (hxb, htb) = (hb[n + j], hb[2 * n + j]);
            let sbar = hxb * zr[n + j] + htb * zr[2 * n + j];
            out[j] = hb[j] * sd - 2.0 * sbar * hv * sd;
            out[n + j] = hxb * sd;
            out[2 * n + j] = htb * sd;
        }
    }
    zbar
}
