//! Monotone piecewise-cubic Hermite interpolation (Fritsch-Carlson slopes).

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Pchip {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
    period: Option<f64>,
}

impl Pchip {
    /// Interpolant through `(x, y)`; `x` must be strictly increasing.
    pub fn new(x: &[f64], y: &[f64]) -> Result<Self> {
        check(x, y)?;
        let n = x.len();
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
        let mut d = vec![0.0; n];
        if n == 2 {
            d.fill(delta[0]);
        } else {
            for k in 1..n - 1 {
                d[k] = interior_slope(h[k - 1], h[k], delta[k - 1], delta[k]);
            }
            d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
            d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        Ok(Pchip { x: x.to_vec(), y: y.to_vec(), d, period: None })
    }

    /// Periodic interpolant: samples span exactly one period, with the last
    /// sample at `x[0] + period` repeating the first value.
    pub fn periodic(x: &[f64], y: &[f64]) -> Result<Self> {
        check(x, y)?;
        let n = x.len();
        if n < 3 {
            return Err(Error::InvalidParameter("periodic interpolation needs at least 3 samples".into()));
        }
        let period = x[n - 1] - x[0];
        let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        if (y[n - 1] - y[0]).abs() > 1e-9 * scale {
            return Err(Error::InvalidParameter(format!(
                "periodic samples must wrap continuously: y(first) = {}, y(last) = {}",
                y[0],
                y[n - 1]
            )));
        }
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
        let mut d = vec![0.0; n];
        for k in 1..n - 1 {
            d[k] = interior_slope(h[k - 1], h[k], delta[k - 1], delta[k]);
        }
        d[0] = interior_slope(h[n - 2], h[0], delta[n - 2], delta[0]);
        d[n - 1] = d[0];
        Ok(Pchip { x: x.to_vec(), y: y.to_vec(), d, period: Some(period) })
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        let t = match self.period {
            Some(p) => self.x[0] + (t - self.x[0]).rem_euclid(p),
            None => t.clamp(self.x[0], self.x[n - 1]),
        };
        let k = match self.x.partition_point(|&v| v <= t) {
            0 => 0,
            i => (i - 1).min(n - 2),
        };
        let h = self.x[k + 1] - self.x[k];
        let s = (t - self.x[k]) / h;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.y[k] + h10 * h * self.d[k] + h01 * self.y[k + 1] + h11 * h * self.d[k + 1]
    }
}

fn check(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::InvalidParameter("interpolation needs at least 2 matching samples".into()));
    }
    if x.windows(2).any(|w| !(w[1] > w[0])) || x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("abscissae must be finite and strictly increasing".into()));
    }
    Ok(())
}

fn interior_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    if d0 * d1 <= 0.0 {
        return 0.0;
    }
    let w1 = 2.0 * h1 + h0;
    let w2 = h1 + 2.0 * h0;
    (w1 + w2) / (w1 / d0 + w2 / d1)
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_nodes_and_lines() {
        let x: Vec<f64> = (0..7).map(|i| i as f64 * 0.3).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v - 1.0).collect();
        let p = Pchip::new(&x, &y).unwrap();
        for (xi, yi) in x.iter().zip(&y) {
            assert_eq!(p.eval(*xi), *yi);
        }
        for k in 0..50 {
            let t = 1.8 * k as f64 / 49.0;
            assert!((p.eval(t) - (2.0 * t - 1.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn no_overshoot_on_step() {
        let x = [0.0, 1.0, 2.0, 3.0, 4.0];
        let y = [0.0, 0.0, 1.0, 1.0, 1.0];
        let p = Pchip::new(&x, &y).unwrap();
        for k in 0..=400 {
            let v = p.eval(k as f64 / 100.0);
            assert!((0.0..=1.0).contains(&v), "{v}");
        }
    }

    #[test]
    fn periodic_wraps() {
        let x = [0.0, 0.25, 0.5, 0.75, 1.0];
        let y = [1.0, 2.0, 1.0, 0.0, 1.0];
        let p = Pchip::periodic(&x, &y).unwrap();
        assert!((p.eval(1.25) - 2.0).abs() < 1e-15);
        assert!((p.eval(-0.25) - 0.0).abs() < 1e-15);
        assert!(Pchip::periodic(&x, &[1.0, 2.0, 1.0, 0.0, 1.5]).is_err());
    }
}
