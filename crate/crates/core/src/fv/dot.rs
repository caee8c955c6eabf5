//! Path-conservative Dumbser-Osher-Toro fluxes for the viscoelastic system.
//!
//! The system is `Q_t + f(Q)_x + B(Q) Q_x = S(Q)` with `Q = (A, Au, p)`,
//! `f = (Au, Au^2, 0)` and a non-conservative matrix `B` whose only entries
//! are `B[1][2] = A / rho` and `B[2][1] = E0 G(A)`. Paths between states are
//! straight segments in `Q`.

use crate::error::{Error, Result};
use crate::vessel::TubeLaw;

/// Conserved state `(A, A u, p)`.
pub type Conserved = [f64; 3];

#[inline]
pub fn physical_flux(q: &Conserved) -> Conserved {
    let u = q[1] / q[0];
    [q[1], q[1] * u, 0.0]
}

/// `B(Q) dq`.
#[inline]
pub fn nonconservative_product(q: &Conserved, law: &TubeLaw, dq: &Conserved) -> Conserved {
    [0.0, q[0] / law.rho * dq[2], law.e0 * law.g(q[0]) * dq[1]]
}

/// Extended Jacobian `df/dQ + B(Q)`.
pub fn jacobian(q: &Conserved, law: &TubeLaw) -> [[f64; 3]; 3] {
    let u = q[1] / q[0];
    [
        [0.0, 1.0, 0.0],
        [-u * u, 2.0 * u, q[0] / law.rho],
        [0.0, law.e0 * law.g(q[0]), 0.0],
    ]
}

/// Closed-form eigenvalues `(u - c, 0, u + c)` and right eigenvectors (columns).
pub fn eigensystem(q: &Conserved, law: &TubeLaw) -> ([f64; 3], [[f64; 3]; 3]) {
    let a = q[0];
    let u = q[1] / a;
    let c = law.wave_speed(a);
    let eg = law.e0 * law.g(a);
    let (l1, l3) = (u - c, u + c);
    // columns r1 = (1, u-c, E0 G), r2 = (A, 0, rho u^2), r3 = (1, u+c, E0 G)
    let r = [[1.0, a, 1.0], [l1, 0.0, l3], [eg, law.rho * u * u, eg]];
    ([l1, 0.0, l3], r)
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// `|J(Q)| dq = R |Lambda| R^{-1} dq`.
pub fn abs_jacobian_product(q: &Conserved, law: &TubeLaw, dq: &Conserved, interface: usize) -> Result<Conserved> {
    let a = q[0];
    let c2 = a * law.e0 * law.g(a) / law.rho;
    if !(a > 0.0) || !(c2 > 0.0) || !c2.is_finite() || !q[1].is_finite() {
        return Err(Error::Hyperbolicity {
            interface,
            detail: format!("invalid state {q:?} (c^2 = {c2})"),
        });
    }
    let (lambda, r) = eigensystem(q, law);
    let det = det3(&r);
    // det(R) = -2 c A (c^2 - u^2) E0 G ... vanishes when |u| = c
    let u = q[1] / a;
    let scale = 2.0 * c2.sqrt() * a * (c2 + u * u) * (law.e0 * law.g(a)).abs();
    if !(det.abs() > 1e-10 * scale) {
        return Err(Error::Hyperbolicity {
            interface,
            detail: format!("eigenvectors degenerate at state {q:?} (|u| = {}, c = {})", u.abs(), c2.sqrt()),
        });
    }
    // Cramer's rule for R w = dq
    let mut w = [0.0; 3];
    for (k, wk) in w.iter_mut().enumerate() {
        let mut m = r;
        for row in 0..3 {
            m[row][k] = dq[row];
        }
        *wk = det3(&m) / det;
    }
    let mut out = [0.0; 3];
    for row in 0..3 {
        out[row] = (0..3).map(|k| r[row][k] * lambda[k].abs() * w[k]).sum();
    }
    Ok(out)
}

/// Interface contribution of the DOT scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceFlux {
    /// `1/2 (f(QL) + f(QR)) - 1/2 int |J(Psi)| dPsi`.
    pub flux: Conserved,
    /// `int B(Psi) dPsi`; split evenly between the two neighbouring cells.
    pub jump: Conserved,
}

/// Gauss-Legendre quadrature mapped to `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathQuadrature {
    pub nodes: Vec<(f64, f64)>,
}

impl PathQuadrature {
    pub fn gauss_legendre(n: usize) -> Self {
        let nodes = gauss_legendre(n).into_iter().map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w)).collect();
        PathQuadrature { nodes }
    }
}

impl Default for PathQuadrature {
    fn default() -> Self {
        Self::gauss_legendre(3)
    }
}

/// Nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pn1 = if n == 0 { 0.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let step = pn / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out.reverse();
    out
}

impl PathQuadrature {
    /// DOT flux and non-conservative jump between `ql` and `qr`.
    pub fn dot_flux(&self, ql: &Conserved, qr: &Conserved, law: &TubeLaw, interface: usize) -> Result<InterfaceFlux> {
        let dq = [qr[0] - ql[0], qr[1] - ql[1], qr[2] - ql[2]];
        let fl = physical_flux(ql);
        let fr = physical_flux(qr);
        let mut dissipation = [0.0; 3];
        let mut jump = [0.0; 3];
        for &(s, w) in &self.nodes {
            let psi = [ql[0] + s * dq[0], ql[1] + s * dq[1], ql[2] + s * dq[2]];
            let d = abs_jacobian_product(&psi, law, &dq, interface)?;
            let b = nonconservative_product(&psi, law, &dq);
            for k in 0..3 {
                dissipation[k] += w * d[k];
                jump[k] += w * b[k];
            }
        }
        let mut flux = [0.0; 3];
        for k in 0..3 {
            flux[k] = 0.5 * (fl[k] + fr[k]) - 0.5 * dissipation[k];
        }
        Ok(InterfaceFlux { flux, jump })
    }

    /// Fully upwinded contribution used at boundaries: flux `f(q_boundary)` and
    /// the complete path integral of `B` from `from` to `to`.
    pub fn path_jump(&self, from: &Conserved, to: &Conserved, law: &TubeLaw) -> Conserved {
        let dq = [to[0] - from[0], to[1] - from[1], to[2] - from[2]];
        let mut jump = [0.0; 3];
        for &(s, w) in &self.nodes {
            let psi = [from[0] + s * dq[0], from[1] + s * dq[1], from[2] + s * dq[2]];
            let b = nonconservative_product(&psi, law, &dq);
            for k in 0..3 {
                jump[k] += w * b[k];
            }
        }
        jump
    }
}
