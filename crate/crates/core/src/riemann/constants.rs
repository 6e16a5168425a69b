//! `a(ε)` and the generalized Riemann constant `κ(ε) = (κ1, κ2(ε))`.

use num_complex::Complex64;

use crate::abel_jacobi::PeriodMap;
use crate::error::Result;
use crate::quadrature;
use crate::theta::e_real;

/// `a(ε) = ∫_0^1 φ2(p2 + ε·e(u)) du`, continued from the default-path
/// value at `u = 0`.
pub fn a_eps(map: &PeriodMap, eps: f64, quad_tol: f64) -> Result<Complex64> {
    a_eps_from(map, eps, 0.0, quad_tol)
}

/// Same integral with the continuation started at `u = u0` and run once
/// around the circle, `∫_{u0}^{u0+1}`.
pub fn a_eps_from(map: &PeriodMap, eps: f64, u0: f64, quad_tol: f64) -> Result<Complex64> {
    let p2 = map.curve().p2();
    let curve = move |u: f64| p2 + eps * e_real(u);
    let start = map.phi_default(curve(u0))?.phi2;
    let cont = map.continue_phi2(curve, u0, u0 + 1.0, start)?;
    quadrature::integrate(|u| cont.value(u), u0, u0 + 1.0, quad_tol)
}

/// `∫_α φ1 dz = ½ + q0 - z0`.
pub fn alpha_integral_phi1(map: &PeriodMap) -> Complex64 {
    let curve = map.curve();
    curve.q0() + 0.5 - curve.z0()
}

/// `∫_α φ2 dz` with `φ2` continued along `α` from its default value at `q0`.
pub fn alpha_integral_phi2(map: &PeriodMap, quad_tol: f64) -> Result<Complex64> {
    let q0 = map.curve().q0();
    let curve = move |s: f64| q0 + s;
    let start = map.phi_default(q0)?.phi2;
    let cont = map.continue_phi2(curve, 0.0, 1.0, start)?;
    quadrature::integrate(|s| cont.value(s), 0.0, 1.0, quad_tol)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannConstants {
    /// `κ1 = -½τ - φ1(q0) + φ1(p2) + ∫_α φ1`.
    pub kappa1: Complex64,
    /// `κ1` with `-τ` in place of `-½τ`.
    pub kappa1_full_tau: Complex64,
    /// `κ2(ε) = (-½τ - φ1(q0))·r1 + a(ε) + ∫_α φ2`.
    pub kappa2: Complex64,
    pub a_eps: Complex64,
    pub eps: f64,
}

impl RiemannConstants {
    pub fn new(map: &PeriodMap, eps: f64, quad_tol: f64) -> Result<Self> {
        let curve = map.curve();
        let tau = curve.tau().value();
        let r1 = curve.periods().r1;
        let phi1_q0 = map.phi1(curve.q0());
        let kappa1 = -0.5 * tau - phi1_q0 + map.phi1(curve.p2()) + alpha_integral_phi1(map);
        let a = a_eps(map, eps, quad_tol)?;
        let kappa2 = (-0.5 * tau - phi1_q0) * r1 + a + alpha_integral_phi2(map, quad_tol)?;
        Ok(Self { kappa1, kappa1_full_tau: kappa1 - 0.5 * tau, kappa2, a_eps: a, eps })
    }
}
