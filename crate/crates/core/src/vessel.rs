//! Constitutive relations of the viscoelastic vessel wall.
//!
//! The wall follows a standard-linear-solid law: an instantaneous modulus
//! `E0`, an asymptotic modulus `E_inf` and a relaxation time `tau_r`. The
//! power-law tube law
//!
//! ```text
//! G(A) = (m a^m - n a^n) / (W A)          a = A / A0
//! F(A) = p0 + E_inf / W * (a^m - a^n)
//! c(A) = sqrt(A E0 G(A) / rho)
//! ```
//!
//! closes the system. `W`, `m` and `n` depend on whether the segment is an
//! artery or a vein. Note that `dF/dA = E_inf G(A)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VesselKind {
    Artery,
    Vein,
}

impl VesselKind {
    /// Tube-law exponents `(m, n)`.
    pub fn exponents(self) -> (f64, f64) {
        match self {
            VesselKind::Artery => (0.5, 0.0),
            VesselKind::Vein => (10.0, -1.5),
        }
    }

    /// Geometry coefficient `W` for an equilibrium radius and wall thickness.
    pub fn geometry_coefficient(self, r0: f64, h0: f64) -> f64 {
        match self {
            VesselKind::Artery => r0 / h0,
            VesselKind::Vein => 12.0 * r0.powi(3) / h0.powi(3),
        }
    }
}

/// Tapered vessel segment with a radius varying linearly along its axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VesselGeometry {
    /// Length `L0` in m.
    pub length: f64,
    /// Inlet equilibrium radius in m.
    pub radius_in: f64,
    /// Outlet equilibrium radius in m.
    pub radius_out: f64,
    /// Wall thickness `h0` in m.
    pub wall_thickness: f64,
    /// Equilibrium (diastolic) pressure `p0` in Pa.
    pub p0: f64,
    /// External / outflow pressure in Pa.
    pub p_out: f64,
}

impl VesselGeometry {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("length", self.length),
            ("radius_in", self.radius_in),
            ("radius_out", self.radius_out),
            ("wall_thickness", self.wall_thickness),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if !self.p0.is_finite() || !self.p_out.is_finite() {
            return Err(Error::InvalidParameter("pressures must be finite".into()));
        }
        Ok(())
    }

    pub fn radius_at(&self, x: f64) -> f64 {
        let s = x / self.length;
        self.radius_in + (self.radius_out - self.radius_in) * s
    }

    pub fn area_at(&self, x: f64) -> f64 {
        std::f64::consts::PI * self.radius_at(x).powi(2)
    }

    /// Exact average of `A0(x)` over `[xa, xb]`.
    pub fn mean_area(&self, xa: f64, xb: f64) -> f64 {
        let (ra, rb) = (self.radius_at(xa), self.radius_at(xb));
        std::f64::consts::PI * (ra * ra + ra * rb + rb * rb) / 3.0
    }

    pub fn mean_radius(&self) -> f64 {
        0.5 * (self.radius_in + self.radius_out)
    }

    pub fn is_uniform(&self) -> bool {
        self.radius_in == self.radius_out
    }
}

/// Viscoelastic wall parameters together with the blood density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WallModel {
    pub kind: VesselKind,
    /// Instantaneous Young modulus in Pa.
    pub e0: f64,
    /// Asymptotic Young modulus in Pa.
    pub e_inf: f64,
    /// Wall viscosity in Pa s.
    pub eta: f64,
    /// Relaxation time in s, always `eta (E0 - E_inf) / E0^2`.
    pub tau_r: f64,
    /// Blood density in kg/m^3.
    pub rho: f64,
}

impl WallModel {
    pub fn from_viscosity(kind: VesselKind, e0: f64, e_inf: f64, eta: f64, rho: f64) -> Result<Self> {
        let tau_r = calibrate_tau_r(eta, e0, e_inf)?;
        let wall = WallModel { kind, e0, e_inf, eta, tau_r, rho };
        wall.validate()?;
        Ok(wall)
    }

    pub fn from_relaxation_time(kind: VesselKind, e0: f64, e_inf: f64, tau_r: f64, rho: f64) -> Result<Self> {
        check_moduli(e0, e_inf)?;
        if !(tau_r.is_finite() && tau_r >= 0.0) {
            return Err(Error::InvalidParameter(format!("tau_r must be non-negative, got {tau_r}")));
        }
        let eta = viscosity_for_relaxation_time(tau_r, e0, e_inf);
        let wall = WallModel { kind, e0, e_inf, eta, tau_r, rho };
        wall.validate()?;
        Ok(wall)
    }

    /// Same moduli with a different relaxation time (viscosity rescaled accordingly).
    pub fn with_relaxation_time(&self, tau_r: f64) -> Result<Self> {
        Self::from_relaxation_time(self.kind, self.e0, self.e_inf, tau_r, self.rho)
    }

    pub fn validate(&self) -> Result<()> {
        check_moduli(self.e0, self.e_inf)?;
        if !(self.eta.is_finite() && self.eta >= 0.0) {
            return Err(Error::InvalidParameter(format!("eta must be non-negative, got {}", self.eta)));
        }
        if !(self.tau_r.is_finite() && self.tau_r >= 0.0) {
            return Err(Error::InvalidParameter(format!("tau_r must be non-negative, got {}", self.tau_r)));
        }
        if !(self.rho.is_finite() && self.rho > 0.0) {
            return Err(Error::InvalidParameter(format!("rho must be positive, got {}", self.rho)));
        }
        Ok(())
    }

    /// Local tube law for an equilibrium radius `r0`.
    pub fn tube_law(&self, r0: f64, h0: f64, p0: f64) -> TubeLaw {
        let (m, n) = self.kind.exponents();
        TubeLaw {
            a0: std::f64::consts::PI * r0 * r0,
            p0,
            w: self.kind.geometry_coefficient(r0, h0),
            m,
            n,
            e0: self.e0,
            e_inf: self.e_inf,
            rho: self.rho,
        }
    }
}

fn check_moduli(e0: f64, e_inf: f64) -> Result<()> {
    if !(e_inf.is_finite() && e0.is_finite() && e_inf > 0.0 && e0 > e_inf) {
        return Err(Error::InvalidParameter(format!(
            "moduli must satisfy E0 > E_inf > 0, got E0 = {e0}, E_inf = {e_inf}"
        )));
    }
    Ok(())
}

/// Tube law frozen at one axial location.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TubeLaw {
    pub a0: f64,
    pub p0: f64,
    pub w: f64,
    pub m: f64,
    pub n: f64,
    pub e0: f64,
    pub e_inf: f64,
    pub rho: f64,
}

impl TubeLaw {
    #[inline]
    fn powers(&self, a: f64) -> (f64, f64) {
        let alpha = a / self.a0;
        // Artery fast path: m = 1/2, n = 0.
        if self.m == 0.5 && self.n == 0.0 {
            (alpha.sqrt(), 1.0)
        } else {
            (alpha.powf(self.m), alpha.powf(self.n))
        }
    }

    /// `G(A)`; `a` must be positive.
    #[inline]
    pub fn g(&self, a: f64) -> f64 {
        let (am, an) = self.powers(a);
        (self.m * am - self.n * an) / (self.w * a)
    }

    /// Elastic equilibrium pressure `F(A)`.
    #[inline]
    pub fn f(&self, a: f64) -> f64 {
        let (am, an) = self.powers(a);
        self.p0 + self.e_inf / self.w * (am - an)
    }

    /// The invariant of the zero-speed family, `p - E0/W (a^m - a^n)`.
    #[inline]
    pub fn instantaneous_invariant(&self, a: f64, p: f64) -> f64 {
        let (am, an) = self.powers(a);
        p - self.e0 / self.w * (am - an)
    }

    /// Frozen (instantaneous) wave speed using `E0`.
    #[inline]
    pub fn wave_speed(&self, a: f64) -> f64 {
        (a * self.e0 * self.g(a) / self.rho).sqrt()
    }

    /// Elastic-limit wave speed using `E_inf`.
    #[inline]
    pub fn elastic_wave_speed(&self, a: f64) -> f64 {
        (a * self.e_inf * self.g(a) / self.rho).sqrt()
    }

    /// `int_{A0}^{A} c(s)/s ds` with the instantaneous wave speed.
    pub fn riemann_integral(&self, a: f64) -> f64 {
        if self.n == 0.0 {
            return 2.0 / self.m * (self.wave_speed(a) - self.wave_speed(self.a0));
        }
        // ds/s = d(ln s); integrate in log-area with Gauss-Legendre.
        let upper = (a / self.a0).ln();
        let half = 0.5 * upper;
        GAUSS8
            .iter()
            .map(|&(node, weight)| weight * self.wave_speed(self.a0 * (half * (node + 1.0)).exp()))
            .sum::<f64>()
            * half
    }
}

const GAUSS8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (-0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
];

fn check_areas(a: f64, a0: f64) -> Result<()> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::Domain(format!("area must be positive, got {a}")));
    }
    if !(a0.is_finite() && a0 > 0.0) {
        return Err(Error::Domain(format!("equilibrium area must be positive, got {a0}")));
    }
    Ok(())
}

fn law_with(law: &TubeLaw, a0: f64) -> TubeLaw {
    TubeLaw { a0, ..*law }
}

/// `G(A)` with domain checks.
pub fn tube_law_g(a: f64, a0: f64, law: &TubeLaw) -> Result<f64> {
    check_areas(a, a0)?;
    Ok(law_with(law, a0).g(a))
}

/// `F(A)` with domain checks; `p0` overrides the law's equilibrium pressure.
pub fn tube_law_f(a: f64, a0: f64, p0: f64, law: &TubeLaw) -> Result<f64> {
    check_areas(a, a0)?;
    Ok(TubeLaw { p0, ..law_with(law, a0) }.f(a))
}

/// Instantaneous wave speed `sqrt(A E0 G(A) / rho)`.
///
/// `A = 0` is accepted for arteries, where the speed vanishes in the limit.
pub fn wave_speed(a: f64, a0: f64, law: &TubeLaw) -> Result<f64> {
    if a == 0.0 && law.n == 0.0 {
        return Ok(0.0);
    }
    check_areas(a, a0)?;
    let law = law_with(law, a0);
    let radicand = a * law.e0 * law.g(a) / law.rho;
    if !(radicand >= 0.0) || !radicand.is_finite() {
        return Err(Error::Domain(format!("negative wave-speed radicand {radicand} at A = {a}")));
    }
    Ok(radicand.sqrt())
}

/// Relaxation function of the standard linear solid.
///
/// With `tau_r = 0` the pointwise limit is returned: `E0` at `t = 0`,
/// `E_inf` afterwards.
pub fn relaxation_modulus(t: f64, wall: &WallModel) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("time must be non-negative, got {t}")));
    }
    if wall.tau_r == 0.0 {
        return Ok(if t == 0.0 { wall.e0 } else { wall.e_inf });
    }
    let decay = (-t / wall.tau_r).exp();
    Ok(wall.e0 * decay + wall.e_inf * (1.0 - decay))
}

/// `tau_r = eta (E0 - E_inf) / E0^2`.
pub fn calibrate_tau_r(eta: f64, e0: f64, e_inf: f64) -> Result<f64> {
    check_moduli(e0, e_inf)?;
    if !(eta.is_finite() && eta >= 0.0) {
        return Err(Error::InvalidParameter(format!("eta must be non-negative, got {eta}")));
    }
    Ok(eta * (e0 - e_inf) / (e0 * e0))
}

/// Inverse of [`calibrate_tau_r`] for the viscosity.
pub fn viscosity_for_relaxation_time(tau_r: f64, e0: f64, e_inf: f64) -> f64 {
    tau_r * e0 * e0 / (e0 - e_inf)
}

/// Asymptotic modulus from a reference wave speed at diastolic equilibrium.
///
/// Uses the mean radius `(R0_in + R0_out) / 2` of a tapered segment.
pub fn calibrate_e_inf(geom: &VesselGeometry, rho: f64, c_ref: f64, kind: VesselKind) -> Result<f64> {
    geom.validate()?;
    if !(c_ref.is_finite() && c_ref > 0.0) {
        return Err(Error::InvalidParameter(format!("reference wave speed must be positive, got {c_ref}")));
    }
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::InvalidParameter(format!("rho must be positive, got {rho}")));
    }
    let r0 = geom.mean_radius();
    let h0 = geom.wall_thickness;
    Ok(match kind {
        VesselKind::Artery => 2.0 * r0 * rho * c_ref * c_ref / h0,
        VesselKind::Vein => 24.0 * r0.powi(3) * rho * c_ref * c_ref / (23.0 * h0.powi(3)),
    })
}

/// Physical quantity classes that carry a characteristic scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Length,
    Time,
    Area,
    Velocity,
    Pressure,
}

/// Characteristic scales used to make every variable dimensionless.
///
/// By default `T_c = L_c / U_c`. When the time axis is rescaled to one
/// cardiac cycle, `T_c` becomes the cycle length and the residuals pick up
/// the factor [`NonDimScales::strouhal`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonDimScales {
    pub length: f64,
    pub area: f64,
    pub velocity: f64,
    pub time: f64,
    pub pressure: f64,
}

impl NonDimScales {
    pub fn new(length: f64, area: f64, velocity: f64, rho: f64) -> Result<Self> {
        let scales = NonDimScales {
            length,
            area,
            velocity,
            time: length / velocity,
            pressure: rho * velocity * velocity,
        };
        scales.validate()?;
        Ok(scales)
    }

    /// Scales whose time unit is one cardiac cycle.
    pub fn with_cycle(self, period: f64) -> Result<Self> {
        let scales = NonDimScales { time: period, ..self };
        scales.validate()?;
        Ok(scales)
    }

    pub fn validate(&self) -> Result<()> {
        for v in [self.length, self.area, self.velocity, self.time, self.pressure] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("scales must be positive, got {self:?}")));
            }
        }
        Ok(())
    }

    /// `L_c / (U_c T_c)`; equal to one when `T_c = L_c / U_c`.
    pub fn strouhal(&self) -> f64 {
        self.length / (self.velocity * self.time)
    }

    pub fn unit(&self, q: Quantity) -> f64 {
        match q {
            Quantity::Length => self.length,
            Quantity::Time => self.time,
            Quantity::Area => self.area,
            Quantity::Velocity => self.velocity,
            Quantity::Pressure => self.pressure,
        }
    }

    #[inline]
    pub fn scale(&self, q: Quantity, value: f64) -> f64 {
        value / self.unit(q)
    }

    #[inline]
    pub fn unscale(&self, q: Quantity, value: f64) -> f64 {
        value * self.unit(q)
    }
}

/// Objects that have a dimensionless counterpart under a set of scales.
pub trait NonDimensional: Sized {
    fn nondimensionalize(&self, scales: &NonDimScales) -> Self;
    fn redimensionalize(&self, scales: &NonDimScales) -> Self;
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn artery(r0: f64, h0: f64, p0: f64) -> TubeLaw {
        let wall = WallModel::from_relaxation_time(VesselKind::Artery, 0.727e6, 0.533e6, 0.009, 1060.0).unwrap();
        wall.tube_law(r0, h0, p0)
    }

    fn vein(r0: f64, h0: f64) -> TubeLaw {
        let wall = WallModel::from_relaxation_time(VesselKind::Vein, 0.727e6, 0.533e6, 0.009, 1060.0).unwrap();
        wall.tube_law(r0, h0, 0.0)
    }

    #[test]
    fn coefficient_table() {
        assert_eq!(VesselKind::Artery.exponents(), (0.5, 0.0));
        assert_eq!(VesselKind::Vein.exponents(), (10.0, -1.5));
        assert_relative_eq!(VesselKind::Artery.geometry_coefficient(0.015, 0.001), 15.0, max_relative = 1e-15);
        assert_relative_eq!(VesselKind::Vein.geometry_coefficient(0.002, 0.001), 96.0, max_relative = 1e-15);
    }

    #[test]
    fn g_at_equilibrium_and_four_times() {
        let law = artery(0.015, 0.001, 0.0);
        assert_relative_eq!(tube_law_g(law.a0, law.a0, &law).unwrap(), 0.5 / (15.0 * law.a0), max_relative = 1e-14);
        assert_relative_eq!(
            tube_law_g(4.0 * law.a0, law.a0, &law).unwrap(),
            1.0 / (4.0 * 15.0 * law.a0),
            max_relative = 1e-14
        );
        let v = vein(0.002, 0.001);
        assert_relative_eq!(tube_law_g(v.a0, v.a0, &v).unwrap(), 11.5 / (v.w * v.a0), max_relative = 1e-14);
    }

    #[test]
    fn g_rejects_non_positive_area() {
        let law = artery(0.015, 0.001, 0.0);
        assert!(matches!(tube_law_g(0.0, law.a0, &law), Err(Error::Domain(_))));
        assert!(matches!(tube_law_g(1e-4, -1.0, &law), Err(Error::Domain(_))));
        assert!(tube_law_f(-1.0, law.a0, 0.0, &law).is_err());
    }

    #[test]
    fn f_values() {
        let law = artery(0.0125, 0.001, 9467.0);
        assert_eq!(tube_law_f(law.a0, law.a0, 9467.0, &law).unwrap(), 9467.0);
        // high-precision evaluation: 9467 + 42640 (sqrt(1.05) - 1)
        assert_relative_eq!(
            tube_law_f(1.05 * law.a0, law.a0, 9467.0, &law).unwrap(),
            10_519.998_066_051_727,
            max_relative = 1e-13
        );
        let v = vein(0.002, 0.001);
        assert_eq!(tube_law_f(v.a0, v.a0, 1234.0, &v).unwrap(), 1234.0);
    }

    #[test]
    fn f_derivative_is_e_inf_g() {
        let law = artery(0.012, 0.001, 9467.0);
        for alpha in [0.6, 1.0, 1.4] {
            let a = alpha * law.a0;
            let h = 1e-6 * a;
            let fd = (law.f(a + h) - law.f(a - h)) / (2.0 * h);
            assert_relative_eq!(fd, law.e_inf * law.g(a), max_relative = 1e-8);
        }
    }

    #[test]
    fn wave_speed_values() {
        let rho = 1060.0;
        let (r0, h0, c_ref) = (0.0125, 0.001, 5.494);
        let e0 = 2.0 * r0 * rho * c_ref * c_ref / h0;
        let wall = WallModel::from_relaxation_time(VesselKind::Artery, e0, 0.5 * e0, 0.009, rho).unwrap();
        let law = wall.tube_law(r0, h0, 0.0);
        assert_relative_eq!(wave_speed(law.a0, law.a0, &law).unwrap(), c_ref, max_relative = 1e-14);

        let law = artery(0.0125, 0.001, 0.0);
        assert_eq!(wave_speed(0.0, law.a0, &law).unwrap(), 0.0);
        assert_relative_eq!(wave_speed(law.a0, law.a0, &law).unwrap(), 5.237_744_005_213_594, max_relative = 1e-14);
    }

    #[test]
    fn relaxation_modulus_limits() {
        let wall = WallModel::from_relaxation_time(VesselKind::Artery, 0.727e6, 0.533e6, 0.009, 1060.0).unwrap();
        assert_eq!(relaxation_modulus(0.0, &wall).unwrap(), 0.727e6);
        assert_relative_eq!(relaxation_modulus(1e3, &wall).unwrap(), 0.533e6, max_relative = 1e-15);
        assert_relative_eq!(relaxation_modulus(0.009, &wall).unwrap(), 604_368.611_587_259_8, max_relative = 1e-14);
        let elastic = wall.with_relaxation_time(0.0).unwrap();
        assert_eq!(relaxation_modulus(0.0, &elastic).unwrap(), 0.727e6);
        assert_eq!(relaxation_modulus(1e-12, &elastic).unwrap(), 0.533e6);
        assert!(relaxation_modulus(-1.0, &wall).is_err());
    }

    #[test]
    fn relaxation_time_calibration() {
        let tau = calibrate_tau_r(23_884.0, 0.727e6, 0.533e6).unwrap();
        assert_relative_eq!(tau, 0.008_766_777_225_090_771, max_relative = 1e-14);
        assert!((tau - 0.009).abs() < 5e-4);
        assert_eq!(calibrate_tau_r(0.0, 0.727e6, 0.533e6).unwrap(), 0.0);
        assert!(calibrate_tau_r(1.0, 0.533e6, 0.533e6).is_err());
        assert!(calibrate_tau_r(1.0, 0.5e6, 0.6e6).is_err());
        assert!(calibrate_tau_r(1.0, 0.727e6, 0.727e6 * (1.0 - 1e-12)).unwrap() < 1e-12);
    }

    fn cca(r_in: f64, r_out: f64) -> VesselGeometry {
        VesselGeometry {
            length: 0.109,
            radius_in: r_in * 1e-3,
            radius_out: r_out * 1e-3,
            wall_thickness: 0.3e-3,
            p0: 0.0,
            p_out: 0.0,
        }
    }

    #[test]
    fn asymptotic_modulus_calibration() {
        let a = calibrate_e_inf(&cca(3.267, 2.809), 1060.0, 5.92, VesselKind::Artery).unwrap();
        let b = calibrate_e_inf(&cca(3.514, 2.899), 1060.0, 5.92, VesselKind::Artery).unwrap();
        assert!((a / 0.752e6 - 1.0).abs() < 1e-3, "{a}");
        assert!((b / 0.794e6 - 1.0).abs() < 1e-3, "{b}");
        let doubled = calibrate_e_inf(&cca(3.267, 2.809), 1060.0, 11.84, VesselKind::Artery).unwrap();
        assert_relative_eq!(doubled, 4.0 * a, max_relative = 1e-14);
        assert!(calibrate_e_inf(&cca(3.267, 2.809), 1060.0, 0.0, VesselKind::Artery).is_err());
    }

    #[test]
    fn vein_calibration_is_consistent_with_wave_speed() {
        // E_inf calibrated for a vein reproduces c_ref through the E_inf wave speed.
        let geom = VesselGeometry { radius_out: 0.004, ..cca(4.0, 4.0) };
        let e_inf = calibrate_e_inf(&geom, 1060.0, 2.0, VesselKind::Vein).unwrap();
        let wall = WallModel::from_relaxation_time(VesselKind::Vein, 2.0 * e_inf, e_inf, 0.01, 1060.0).unwrap();
        let law = wall.tube_law(0.004, geom.wall_thickness, 0.0);
        assert_relative_eq!(law.elastic_wave_speed(law.a0), 2.0, max_relative = 1e-12);
    }

    #[test]
    fn riemann_integral_quadrature_matches_closed_form() {
        let law = artery(0.012, 0.001, 0.0);
        let general = TubeLaw { n: 1e-300, ..law };
        for alpha in [0.7, 1.0, 1.3] {
            let a = alpha * law.a0;
            assert_relative_eq!(general.riemann_integral(a), law.riemann_integral(a), epsilon = 1e-10);
        }
    }

    #[test]
    fn scaled_pressure() {
        let s = NonDimScales::new(0.24137, 4.9e-4, 1.0, 1060.0).unwrap();
        assert_relative_eq!(s.scale(Quantity::Pressure, 9467.0), 8.931_132_075_471_698, max_relative = 1e-15);
        assert_relative_eq!(s.time, 0.24137, max_relative = 1e-15);
        assert_eq!(s.strouhal(), 1.0);
        let c = s.with_cycle(20.0 / 21.0).unwrap();
        assert_relative_eq!(c.strouhal(), 0.24137 * 21.0 / 20.0, max_relative = 1e-15);
        assert!(NonDimScales::new(0.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn equilibrium_area_scales_to_one() {
        let geom = VesselGeometry {
            length: 0.24137,
            radius_in: 0.015,
            radius_out: 0.010,
            wall_thickness: 0.001,
            p0: 9467.0,
            p_out: 0.0,
        };
        let a_mid = geom.area_at(0.5 * geom.length);
        let s = NonDimScales::new(geom.length, a_mid, 1.0, 1060.0).unwrap();
        assert_relative_eq!(s.scale(Quantity::Area, geom.area_at(0.5 * geom.length)), 1.0, max_relative = 1e-15);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn artery_f_strictly_increasing(a1 in 0.1f64..3.0, da in 1e-6f64..2.0) {
                let law = artery(0.012, 0.001, 9467.0);
                prop_assert!(law.f(a1 * law.a0) < law.f((a1 + da) * law.a0));
            }

            #[test]
            fn wave_speed_finite_on_physiological_range(alpha in 0.5f64..2.0, vein_kind in any::<bool>()) {
                let law = if vein_kind { vein(0.003, 0.001) } else { artery(0.012, 0.001, 0.0) };
                let a = alpha * law.a0;
                prop_assert!(a * law.e0 * law.g(a) >= 0.0);
                let c = wave_speed(a, law.a0, &law).unwrap();
                prop_assert!(c.is_finite() && c > 0.0);
            }

            #[test]
            fn tau_viscosity_round_trip(tau in 1e-6f64..1.0, e0 in 0.2e6f64..2e6, frac in 0.05f64..0.95) {
                let e_inf = frac * e0;
                let eta = viscosity_for_relaxation_time(tau, e0, e_inf);
                let back = calibrate_tau_r(eta, e0, e_inf).unwrap();
                prop_assert!((back / tau - 1.0).abs() < 1e-12);
            }

            #[test]
            fn scale_round_trip(v in -1e6f64..1e6, q in 0usize..5) {
                let q = [Quantity::Length, Quantity::Time, Quantity::Area, Quantity::Velocity, Quantity::Pressure][q];
                let s = NonDimScales::new(0.24137, 4.9e-4, 1.0, 1060.0).unwrap().with_cycle(0.952).unwrap();
                let back = s.unscale(q, s.scale(q, v));
                prop_assert!((back - v).abs() <= 1e-14 * v.abs().max(1e-300));
            }
        }
    }
}
