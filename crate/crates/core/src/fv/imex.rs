//! Butcher tableaux for implicit-explicit Runge-Kutta schemes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A pair of Butcher tableaux sharing the abscissae `c`.
///
/// The explicit part is strictly lower triangular, the implicit part lower
/// triangular. Only globally stiffly accurate pairs are accepted, so the
/// step result is the last stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImexTableau {
    pub name: String,
    pub order: u32,
    pub explicit: Vec<Vec<f64>>,
    pub explicit_b: Vec<f64>,
    pub implicit: Vec<Vec<f64>>,
    pub implicit_b: Vec<f64>,
    pub c: Vec<f64>,
}

impl ImexTableau {
    /// Ascher-Ruuth-Spiteri (4,4,3): four implicit and four explicit stages
    /// (plus the trivial first stage), third order, L-stable implicit part.
    pub fn ars443() -> Self {
        let implicit = vec![
            vec![0.0, 0.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.5, 0.0, 0.0, 0.0],
            vec![0.0, 1.0 / 6.0, 0.5, 0.0, 0.0],
            vec![0.0, -0.5, 0.5, 0.5, 0.0],
            vec![0.0, 1.5, -1.5, 0.5, 0.5],
        ];
        let explicit = vec![
            vec![0.0, 0.0, 0.0, 0.0, 0.0],
            vec![0.5, 0.0, 0.0, 0.0, 0.0],
            vec![11.0 / 18.0, 1.0 / 18.0, 0.0, 0.0, 0.0],
            vec![5.0 / 6.0, -5.0 / 6.0, 0.5, 0.0, 0.0],
            vec![0.25, 1.75, 0.75, -1.75, 0.0],
        ];
        ImexTableau {
            name: "ARS(4,4,3)".into(),
            order: 3,
            explicit_b: explicit[4].clone(),
            implicit_b: implicit[4].clone(),
            explicit,
            implicit,
            c: vec![0.0, 0.5, 2.0 / 3.0, 0.5, 1.0],
        }
    }

    /// First-order forward/backward Euler pair; handy as a baseline.
    pub fn euler() -> Self {
        ImexTableau {
            name: "IMEX Euler".into(),
            order: 1,
            explicit: vec![vec![0.0, 0.0], vec![1.0, 0.0]],
            explicit_b: vec![1.0, 0.0],
            implicit: vec![vec![0.0, 0.0], vec![0.0, 1.0]],
            implicit_b: vec![0.0, 1.0],
            c: vec![0.0, 1.0],
        }
    }

    pub fn stages(&self) -> usize {
        self.c.len()
    }

    pub fn validate(&self) -> Result<()> {
        let s = self.stages();
        let bad = |msg: String| Err(Error::Config(format!("tableau {}: {msg}", self.name)));
        if s == 0 {
            return bad("no stages".into());
        }
        let square = |m: &Vec<Vec<f64>>| m.len() == s && m.iter().all(|row| row.len() == s);
        if !square(&self.explicit) || !square(&self.implicit) || self.explicit_b.len() != s || self.implicit_b.len() != s {
            return bad(format!("inconsistent dimensions for {s} stages"));
        }
        let all = self
            .explicit
            .iter()
            .chain(&self.implicit)
            .flatten()
            .chain(&self.explicit_b)
            .chain(&self.implicit_b)
            .chain(&self.c);
        if all.into_iter().any(|v| !v.is_finite()) {
            return bad("non-finite coefficient".into());
        }
        for i in 0..s {
            if self.explicit[i][i..].iter().any(|&v| v != 0.0) {
                return bad(format!("explicit row {i} is not strictly lower triangular"));
            }
            if self.implicit[i][i + 1..].iter().any(|&v| v != 0.0) {
                return bad(format!("implicit row {i} is not lower triangular"));
            }
            if i > 0 && self.implicit[i][i] <= 0.0 {
                return bad(format!("implicit diagonal at stage {i} must be positive"));
            }
            let row_sum: f64 = self.explicit[i].iter().sum();
            if (row_sum - self.c[i]).abs() > 1e-12 {
                return bad(format!("explicit row {i} does not sum to c"));
            }
            let row_sum: f64 = self.implicit[i].iter().sum();
            if (row_sum - self.c[i]).abs() > 1e-12 {
                return bad(format!("implicit row {i} does not sum to c"));
            }
        }
        if self.explicit_b != self.explicit[s - 1] || self.implicit_b != self.implicit[s - 1] {
            return bad("pair is not globally stiffly accurate".into());
        }
        Ok(())
    }
}

impl Default for ImexTableau {
    fn default() -> Self {
        Self::ars443()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    fn matvec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
        m.iter().map(|row| dot(row, v)).collect()
    }

    #[test]
    fn ars443_satisfies_third_order_conditions() {
        let t = ImexTableau::ars443();
        t.validate().unwrap();
        let c = &t.c;
        let c2: Vec<f64> = c.iter().map(|x| x * x).collect();
        let ones = vec![1.0; c.len()];
        for (b, a) in [(&t.explicit_b, &t.explicit), (&t.implicit_b, &t.implicit)] {
            assert!((dot(b, &ones) - 1.0).abs() < 1e-14);
            assert!((dot(b, c) - 0.5).abs() < 1e-14);
            assert!((dot(b, &c2) - 1.0 / 3.0).abs() < 1e-14);
            assert!((dot(b, &matvec(a, c)) - 1.0 / 6.0).abs() < 1e-14);
        }
        // coupling conditions between the two parts
        let (be, bi) = (&t.explicit_b, &t.implicit_b);
        for v in [
            dot(be, &matvec(&t.implicit, c)),
            dot(bi, &matvec(&t.explicit, c)),
        ] {
            assert!((v - 1.0 / 6.0).abs() < 1e-14, "{v}");
        }
    }

    #[test]
    fn rejects_explicit_diagonal() {
        let mut t = ImexTableau::ars443();
        t.explicit[2][2] = 0.1;
        assert!(t.validate().is_err());
        let mut t = ImexTableau::ars443();
        t.implicit_b[1] += 0.1;
        assert!(t.validate().is_err());
        ImexTableau::euler().validate().unwrap();
    }

    #[test]
    fn scalar_test_equation_converges_at_third_order() {
        // y' = -y + y^2 split as explicit y^2 and implicit -y
        let t = ImexTableau::ars443();
        let solve = |n: usize| {
            let h = 1.0 / n as f64;
            let mut y: f64 = 0.5;
            for _ in 0..n {
                let s = t.stages();
                let mut ke = vec![0.0; s];
                let mut ki = vec![0.0; s];
                let mut yk = 0.0;
                for k in 0..s {
                    let star = y + h * (0..k).map(|j| t.explicit[k][j] * ke[j] + t.implicit[k][j] * ki[j]).sum::<f64>();
                    yk = star / (1.0 + h * t.implicit[k][k]);
                    ke[k] = yk * yk;
                    ki[k] = -yk;
                }
                y = yk;
            }
            y
        };
        // exact: y = 1 / (1 + e^t) with y(0) = 1/2
        let exact = 1.0 / (1.0 + 1f64.exp());
        let e1 = (solve(20) - exact).abs();
        let e2 = (solve(40) - exact).abs();
        let rate = (e1 / e2).log2();
        assert!(rate > 2.8, "rate {rate}");
    }
}
