//! Third-order WENO reconstruction of interface values from cell averages.

use crate::error::{Error, Result};

/// How the stencil is completed next to the ends of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryTreatment {
    /// Cells wrap around.
    Periodic,
    /// One ghost cell per side filled by linear extrapolation.
    Extrapolate,
}

/// Nonlinear weighting used to blend the two linear candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WenoWeights {
    /// Jiang-Shu weights `d_k / (beta_k + eps)^2`.
    JiangShu,
    /// Borges-style weights `d_k (1 + (tau / (beta_k + eps))^2)` with `tau = |beta_0 - beta_1|`.
    Z,
    /// The optimal linear weights; exact for quadratics but oscillatory at jumps.
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weno3 {
    pub weights: WenoWeights,
    /// Regularisation of the smoothness indicators, in units of `scale^2`.
    pub epsilon: f64,
}

impl Default for Weno3 {
    fn default() -> Self {
        Weno3 { weights: WenoWeights::Z, epsilon: 1e-12 }
    }
}

/// Reconstructed values at both faces of every cell.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FaceValues {
    /// Value at the left face `x_{i-1/2}` seen from inside cell `i`.
    pub left: Vec<f64>,
    /// Value at the right face `x_{i+1/2}` seen from inside cell `i`.
    pub right: Vec<f64>,
}

impl FaceValues {
    /// `(left state, right state)` at interface `j` (between cells `j-1` and `j`).
    ///
    /// For non-periodic grids `j` ranges over `1..n`; the two boundary faces
    /// only have an interior side.
    pub fn interface(&self, j: usize) -> (f64, f64) {
        let n = self.left.len();
        let lower = if j == 0 { n - 1 } else { j - 1 };
        (self.right[lower], self.left[j % n])
    }
}

impl Weno3 {
    /// Reconstruct face values of `averages`; `scale` is the field's typical
    /// magnitude, so `epsilon` acts on dimensionless differences.
    pub fn reconstruct(&self, averages: &[f64], boundary: BoundaryTreatment, scale: f64) -> Result<FaceValues> {
        let mut out = FaceValues::default();
        self.reconstruct_into(averages, boundary, scale, &mut out)?;
        Ok(out)
    }

    pub fn reconstruct_into(
        &self,
        averages: &[f64],
        boundary: BoundaryTreatment,
        scale: f64,
        out: &mut FaceValues,
    ) -> Result<()> {
        let n = averages.len();
        if n < 3 {
            return Err(Error::Config(format!("WENO3 needs at least 3 cells, got {n}")));
        }
        out.left.resize(n, 0.0);
        out.right.resize(n, 0.0);
        let eps = self.epsilon * scale * scale;
        let (ghost_lo, ghost_hi) = match boundary {
            BoundaryTreatment::Periodic => (averages[n - 1], averages[0]),
            BoundaryTreatment::Extrapolate => {
                (2.0 * averages[0] - averages[1], 2.0 * averages[n - 1] - averages[n - 2])
            }
        };
        for i in 0..n {
            let qm = if i == 0 { ghost_lo } else { averages[i - 1] };
            let q0 = averages[i];
            let qp = if i + 1 == n { ghost_hi } else { averages[i + 1] };
            let (left, right) = self.cell(qm, q0, qp, eps);
            out.left[i] = left;
            out.right[i] = right;
        }
        Ok(())
    }

    /// `(left face, right face)` of the middle cell of a three-cell stencil.
    #[inline]
    pub fn cell(&self, qm: f64, q0: f64, qp: f64, eps: f64) -> (f64, f64) {
        let dm = q0 - qm;
        let dp = qp - q0;
        let beta0 = dm * dm;
        let beta1 = dp * dp;
        // right face: candidates from {i-1, i} (d = 1/3) and {i, i+1} (d = 2/3)
        let (w0, w1) = self.weights(beta0, beta1, 1.0 / 3.0, 2.0 / 3.0, eps);
        let right = w0 * (q0 + 0.5 * dm) + w1 * (q0 + 0.5 * dp);
        // left face mirrors the optimal weights
        let (w0, w1) = self.weights(beta0, beta1, 2.0 / 3.0, 1.0 / 3.0, eps);
        let left = w0 * (q0 - 0.5 * dm) + w1 * (q0 - 0.5 * dp);
        (left, right)
    }

    #[inline]
    fn weights(&self, beta0: f64, beta1: f64, d0: f64, d1: f64, eps: f64) -> (f64, f64) {
        let (a0, a1) = match self.weights {
            WenoWeights::Linear => return (d0, d1),
            WenoWeights::JiangShu => (d0 / (beta0 + eps).powi(2), d1 / (beta1 + eps).powi(2)),
            WenoWeights::Z => {
                let tau = (beta0 - beta1).abs();
                let r0 = tau / (beta0 + eps);
                let r1 = tau / (beta1 + eps);
                (d0 * (1.0 + r0 * r0), d1 * (1.0 + r1 * r1))
            }
        };
        let sum = a0 + a1;
        (a0 / sum, a1 / sum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn averages_of(f: impl Fn(f64) -> f64, n: usize) -> (Vec<f64>, f64) {
        // f is an antiderivative; averages over uniform cells of [0, 1]
        let h = 1.0 / n as f64;
        ((0..n).map(|i| (f((i + 1) as f64 * h) - f(i as f64 * h)) / h).collect(), h)
    }

    #[test]
    fn constants_are_exact() {
        for weights in [WenoWeights::JiangShu, WenoWeights::Z, WenoWeights::Linear] {
            let w = Weno3 { weights, ..Weno3::default() };
            for boundary in [BoundaryTreatment::Periodic, BoundaryTreatment::Extrapolate] {
                let faces = w.reconstruct(&[5.0; 7], boundary, 1.0).unwrap();
                assert!(faces.left.iter().chain(&faces.right).all(|&v| v == 5.0));
            }
        }
    }

    #[test]
    fn linear_data_is_exact_everywhere() {
        let (avg, h) = averages_of(|x| 0.5 * x * x, 9);
        let faces = Weno3::default().reconstruct(&avg, BoundaryTreatment::Extrapolate, 1.0).unwrap();
        for i in 0..avg.len() {
            assert!((faces.left[i] - i as f64 * h).abs() < 1e-12);
            assert!((faces.right[i] - (i + 1) as f64 * h).abs() < 1e-12);
        }
    }

    #[test]
    fn quadratic_exact_with_optimal_weights() {
        let (avg, h) = averages_of(|x| x * x * x / 3.0, 8);
        let w = Weno3 { weights: WenoWeights::Linear, ..Weno3::default() };
        let faces = w.reconstruct(&avg, BoundaryTreatment::Extrapolate, 1.0).unwrap();
        for j in 2..avg.len() - 1 {
            let x = j as f64 * h;
            let (l, r) = faces.interface(j);
            assert!((l - x * x).abs() < 1e-15, "{j}: {l}");
            assert!((r - x * x).abs() < 1e-15, "{j}: {r}");
        }
    }

    // Nonlinear weights lose an order next to critical points, which only
    // affects O(1) interfaces; the L1 error stays third order.
    #[test]
    fn quadratic_converges_at_third_order_with_nonlinear_weights() {
        let err = |n: usize| {
            let (avg, h) = averages_of(|x| x * x * x / 3.0, n);
            let faces = Weno3::default().reconstruct(&avg, BoundaryTreatment::Extrapolate, 1.0).unwrap();
            (2..n - 1)
                .map(|j| {
                    let x = j as f64 * h;
                    let (l, r) = faces.interface(j);
                    (l - x * x).abs() + (r - x * x).abs()
                })
                .sum::<f64>()
                * h
        };
        let rate = (err(32) / err(64)).log2();
        assert!(rate > 2.8, "rate {rate}");
    }

    #[test]
    fn smooth_periodic_third_order() {
        use std::f64::consts::PI;
        let err = |n: usize| {
            let (avg, h) = averages_of(|x| -(2.0 * PI * x).cos() / (2.0 * PI), n);
            let faces = Weno3::default().reconstruct(&avg, BoundaryTreatment::Periodic, 1.0).unwrap();
            (0..n)
                .map(|i| (faces.right[i] - (2.0 * PI * (i + 1) as f64 * h).sin()).abs())
                .sum::<f64>()
                * h
        };
        let rate = (err(64) / err(128)).log2();
        assert!(rate > 2.8, "rate {rate}");
    }

    #[test]
    fn monotone_data_creates_no_new_extrema() {
        let data = [0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0];
        for weights in [WenoWeights::JiangShu, WenoWeights::Z] {
            let w = Weno3 { weights, ..Weno3::default() };
            let faces = w.reconstruct(&data, BoundaryTreatment::Extrapolate, 1.0).unwrap();
            for v in faces.left.iter().chain(&faces.right) {
                assert!(*v >= -1e-12 && *v <= 1.0 + 1e-12, "{v}");
            }
        }
    }

    #[test]
    fn too_few_cells() {
        assert!(matches!(
            Weno3::default().reconstruct(&[1.0, 2.0], BoundaryTreatment::Periodic, 1.0),
            Err(Error::Config(_))
        ));
    }
}
