//! The holomorphic differential `dz` and the normalized differential of
//! the third kind with simple poles at `p1` (residue `1/2π√-1`) and `p2`
//! (residue `-1/2π√-1`):
//!
//! `η = (1/2π√-1)·[ℓ(z-p1) - ℓ(z-p2)] dz + kappa_coeff·dz`,  `ℓ = θ[½;½]'/θ[½;½]`.
//!
//! `ℓ` is 1-periodic and drops by `2π√-1` under `z ↦ z+τ`, so `η` is
//! doubly periodic; `kappa_coeff` makes its `α`- and `β`-periods real.

use num_complex::Complex64;

use crate::curve::{lattice_distance, NodalCurve};
use crate::error::{Error, Result};
use crate::quadrature;
use crate::theta::{ModularParameter, OddTheta, TWO_PI_I};

const POLE_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Contour {
    /// `q0 → q0 + 1`.
    Alpha,
    /// `q0 → q0 + τ`.
    Beta,
    /// Anticlockwise circle around `p1`.
    Gamma1,
    /// Anticlockwise circle around `p2`.
    Gamma2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThirdKindDifferential {
    tau: ModularParameter,
    p1: Complex64,
    p2: Complex64,
    kappa_coeff: f64,
    odd: OddTheta,
}

impl ThirdKindDifferential {
    pub fn new(curve: &NodalCurve) -> Self {
        Self {
            tau: curve.tau(),
            p1: curve.p1(),
            p2: curve.p2(),
            kappa_coeff: curve.periods().kappa_coeff,
            odd: OddTheta::new(curve.tau(), curve.policy()),
        }
    }

    pub fn kappa_coeff(&self) -> f64 {
        self.kappa_coeff
    }

    pub fn odd_theta(&self) -> &OddTheta {
        &self.odd
    }

    fn pole_check(&self, z: Complex64) -> Result<()> {
        let t = self.tau.value();
        if lattice_distance(z, self.p1, t) < POLE_GUARD || lattice_distance(z, self.p2, t) < POLE_GUARD {
            return Err(Error::PoleAt(z));
        }
        Ok(())
    }

    /// `θ[½;½](z-p1) / θ[½;½](z-p2)`; `η - kappa_coeff·dz` is
    /// `(1/2π√-1)·d log` of this quotient.
    pub fn quotient(&self, z: Complex64) -> Result<Complex64> {
        let den = self.odd.value(z - self.p2)?;
        if den.norm() == 0.0 {
            return Err(Error::PoleAt(z));
        }
        Ok(self.odd.value(z - self.p1)? / den)
    }

    /// Coefficient of `η` against `dz`.
    pub fn eta_coeff(&self, z: Complex64) -> Result<Complex64> {
        self.pole_check(z)?;
        let l1 = self.odd.log_derivative(z - self.p1)?;
        let l2 = self.odd.log_derivative(z - self.p2)?;
        Ok((l1 - l2) / TWO_PI_I + self.kappa_coeff)
    }

    /// `h(t) = eta_coeff(p1+t) - (1/2π√-1)/t`, holomorphic at `t = 0`.
    pub fn h_at_p1(&self, t: Complex64) -> Result<Complex64> {
        let reg = self.odd.log_derivative_regular(t)?;
        let other = self.odd.log_derivative(t + self.p1 - self.p2)?;
        Ok((reg - other) / TWO_PI_I + self.kappa_coeff)
    }

    /// `h1(t) = eta_coeff(p2+t) + (1/2π√-1)/t`, holomorphic at `t = 0`.
    pub fn h1_at_p2(&self, t: Complex64) -> Result<Complex64> {
        let reg = self.odd.log_derivative_regular(t)?;
        let other = self.odd.log_derivative(t + self.p2 - self.p1)?;
        Ok((other - reg) / TWO_PI_I + self.kappa_coeff)
    }

    /// Quadrature of `η` over one of the four period contours.
    pub fn period_integral(&self, curve: &NodalCurve, contour: Contour, quad_tol: f64) -> Result<Complex64> {
        let f = |z| self.eta_coeff(z);
        match contour {
            Contour::Alpha => quadrature::integrate_segment(f, curve.q0(), curve.q0() + 1.0, quad_tol),
            Contour::Beta => quadrature::integrate_segment(f, curve.q0(), curve.q0() + curve.tau().value(), quad_tol),
            Contour::Gamma1 => quadrature::integrate_circle(f, curve.p1(), 0.5 * curve.delta(), quad_tol),
            Contour::Gamma2 => quadrature::integrate_circle(f, curve.p2(), 0.5 * curve.eps(), quad_tol),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::NodalCurveSpec;
    use crate::theta::SeriesPolicy;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn curve() -> NodalCurve {
        NodalCurveSpec {
            tau: c(0.0, 1.0),
            p1: c(0.62, 0.55),
            p2: c(0.31, 0.38),
            z0: c(0.15, 0.8),
            q0: c(0.0, 0.0),
            delta: 0.05,
            eps: 0.05,
            policy: SeriesPolicy::default(),
            quad_tol: 1e-10,
        }
        .validate()
        .unwrap()
    }

    #[test]
    fn pole_structure() {
        let cv = curve();
        let eta = ThirdKindDifferential::new(&cv);
        let pole = 1.0 / TWO_PI_I;
        for k in 1..6 {
            let t = c(10f64.powi(-k), 0.0);
            let near1 = eta.eta_coeff(cv.p1() + t).unwrap() - pole / t;
            let near2 = eta.eta_coeff(cv.p2() + t).unwrap() + pole / t;
            assert!(near1.norm() < 10.0 && near2.norm() < 10.0);
        }
        assert!(matches!(eta.eta_coeff(cv.p1()), Err(Error::PoleAt(_))));
        assert!(matches!(eta.eta_coeff(cv.p2() + 1.0), Err(Error::PoleAt(_))));
    }

    #[test]
    fn residue_modulus_along_rays() {
        let cv = curve();
        let eta = ThirdKindDifferential::new(&cv);
        for k in 0..8 {
            let t = Complex64::from_polar(1e-4, 2.0 * PI * k as f64 / 8.0);
            let v = (t * eta.eta_coeff(cv.p1() + t).unwrap()).norm();
            assert!((v - 1.0 / (2.0 * PI)).abs() < 1e-4);
        }
    }

    #[test]
    fn doubly_periodic() {
        let cv = curve();
        let eta = ThirdKindDifferential::new(&cv);
        for z in [c(0.2, 0.1), c(0.7, 0.9), c(0.45, 0.3)] {
            let v = eta.eta_coeff(z).unwrap();
            assert!((eta.eta_coeff(z + 1.0).unwrap() - v).norm() < 1e-10);
            assert!((eta.eta_coeff(z + cv.tau().value()).unwrap() - v).norm() < 1e-10);
        }
    }

    #[test]
    fn local_parts_are_continuous_at_zero() {
        let cv = curve();
        let eta = ThirdKindDifferential::new(&cv);
        let pole = 1.0 / TWO_PI_I;
        for (h, centre, sign) in [
            (Box::new(|t| eta.h_at_p1(t)) as Box<dyn Fn(Complex64) -> Result<Complex64>>, cv.p1(), -1.0),
            (Box::new(|t| eta.h1_at_p2(t)), cv.p2(), 1.0),
        ] {
            let h0 = h(c(0.0, 0.0)).unwrap();
            assert!(h0.re.is_finite() && h0.im.is_finite());
            // Richardson-style oracle: h(10^-k) converges linearly to h(0)
            let mut prev = f64::INFINITY;
            for k in 3..7 {
                let d = (h(c(10f64.powi(-k), 0.0)).unwrap() - h0).norm();
                assert!(d < prev);
                prev = d;
            }
            assert!((h(c(1e-3, 0.0)).unwrap() - h0).norm() < 1e-2 * h0.norm() + 1e-6);
            // definition at |t| = δ/2
            let t = Complex64::from_polar(0.025, 0.7);
            let direct = eta.eta_coeff(centre + t).unwrap() + sign * pole / t;
            assert!((h(t).unwrap() - direct).norm() < 1e-12);
        }
    }
}
