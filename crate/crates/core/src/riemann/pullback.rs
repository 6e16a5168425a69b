use num_complex::Complex64;

use crate::abel_jacobi::{BranchedPath, PeriodMap};
use crate::curve::Pair;
use crate::error::{Error, Result};
use crate::theta::{e_func, theta_char, theta_char_with_dz, Characteristic, GeneralizedTheta, TWO_PI_I};

/// Relative threshold below which a theta value counts as vanishing.
pub const GENERICITY_TOL: f64 = 1e-3;

/// `𝔗_c(P) = Θ(φ1(P) - c1, φ2(P) - c2)`.
///
/// Because `Θ` is invariant under `w ↦ w + 1`, `𝔗_c` only sees `e(φ2)`,
/// which is single-valued in `z`; [`ThetaPullback::value`] uses that and
/// needs no path. [`ThetaPullback::frak_t`] evaluates the definition along
/// an explicit path instead.
#[derive(Debug, Clone)]
pub struct ThetaPullback<'a> {
    map: &'a PeriodMap,
    theta: GeneralizedTheta,
    c: Pair,
    e_minus_c2: Complex64,
}

impl<'a> ThetaPullback<'a> {
    pub fn new(map: &'a PeriodMap, c: Pair) -> Self {
        let curve = map.curve();
        let periods = curve.periods();
        let theta = GeneralizedTheta::new(curve.tau(), periods.r1, periods.r2, curve.policy());
        Self { map, theta, c, e_minus_c2: e_func(-c.1) }
    }

    pub fn map(&self) -> &'a PeriodMap {
        self.map
    }

    pub fn theta(&self) -> &GeneralizedTheta {
        &self.theta
    }

    pub fn c(&self) -> Pair {
        self.c
    }

    /// `e(-c2)`.
    pub fn e_minus_c2(&self) -> Complex64 {
        self.e_minus_c2
    }

    /// `φ1(z) - c1`, the argument of both theta factors.
    pub fn shifted(&self, z: Complex64) -> Complex64 {
        self.map.phi1(z) - self.c.0
    }

    /// Largest `|θ[a;b](x)|` over an 8×8 grid of shifts `c1` in the
    /// fundamental box, with `x = φ1(p) - c1`.
    fn grid_scale(&self, ch: Characteristic, p: Complex64) -> Result<f64> {
        let curve = self.map.curve();
        let tau = curve.tau();
        let mut scale = 0.0f64;
        for i in 0..8 {
            for j in 0..8 {
                let c1 = (i as f64 + 0.5) / 8.0 + tau.value() * ((j as f64 + 0.5) / 8.0);
                let x = self.map.phi1(p) - c1;
                scale = scale.max(theta_char(ch, x, tau, &curve.policy())?.norm());
            }
        }
        Ok(scale)
    }

    /// `|θ[0;0](φ1(p1) - c1)|` relative to its grid scale must exceed
    /// [`GENERICITY_TOL`]; otherwise `𝔗_c` may vanish at the node.
    pub fn check_generic(&self) -> Result<()> {
        let curve = self.map.curve();
        let p1 = curve.p1();
        let v = theta_char(Characteristic::ZERO, self.shifted(p1), curve.tau(), &curve.policy())?.norm();
        let scale = self.grid_scale(Characteristic::ZERO, p1)?;
        if v <= GENERICITY_TOL * scale {
            return Err(Error::DegenerateC(format!("theta[0;0](phi1(p1)-c1) = {v:.3e}")));
        }
        Ok(())
    }

    /// `|θ[-r1;r2](φ1(p2) - c1)|` above threshold, so that `c₋₁ ≠ 0`.
    pub fn check_pole_generic(&self) -> Result<()> {
        let curve = self.map.curve();
        let p2 = curve.p2();
        let v = theta_char(self.theta.twisted(), self.shifted(p2), curve.tau(), &curve.policy())?.norm();
        let scale = self.grid_scale(self.theta.twisted(), p2)?;
        if v <= GENERICITY_TOL * scale {
            return Err(Error::DegenerateC(format!("theta[-r1;r2](phi1(p2)-c1) = {v:.3e}")));
        }
        Ok(())
    }

    /// Single-valued evaluation at the point `z` of the plane.
    pub fn value(&self, z: Complex64) -> Result<Complex64> {
        let curve = self.map.curve();
        let x = self.shifted(z);
        let even = theta_char(Characteristic::ZERO, x, curve.tau(), &curve.policy())?;
        let tw = theta_char(self.theta.twisted(), x, curve.tau(), &curve.policy())?;
        Ok(even + tw * self.map.e_phi2(z)? * self.e_minus_c2)
    }

    /// Value and `d/dz`, the latter through `dφ1 = dz`, `dφ2 = η`.
    pub fn value_and_dz(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let curve = self.map.curve();
        let x = self.shifted(z);
        let (even, even_dz) = theta_char_with_dz(Characteristic::ZERO, x, curve.tau(), &curve.policy())?;
        let (tw, tw_dz) = theta_char_with_dz(self.theta.twisted(), x, curve.tau(), &curve.policy())?;
        let e = self.map.e_phi2(z)? * self.e_minus_c2;
        let eta = self.map.eta().eta_coeff(z)?;
        Ok((even + tw * e, even_dz + (tw_dz + tw * TWO_PI_I * eta) * e))
    }

    /// `Θ(φ(P) - c)` with `φ` evaluated along `path`.
    pub fn frak_t(&self, path: &BranchedPath) -> Result<Complex64> {
        let v = self.map.phi(path)?;
        self.theta.value(v.phi1 - self.c.0, v.phi2 - self.c.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::riemann::fixtures::{c, map, SHIFTS};

    #[test]
    fn single_valued_form_matches_definition() {
        let m = map();
        for s in SHIFTS {
            let tp = ThetaPullback::new(&m, s);
            for z in [c(0.2, 0.1), c(0.8, 0.9), c(0.5, 0.5), c(0.05, 0.45)] {
                let path = m.default_path(z).unwrap();
                let a = tp.frak_t(&path).unwrap();
                let b = tp.value(z).unwrap();
                assert!((a - b).norm() < 1e-10 * (1.0 + b.norm()), "{a} {b}");
            }
        }
    }

    #[test]
    fn derivative_matches_central_difference() {
        let m = map();
        let tp = ThetaPullback::new(&m, SHIFTS[0]);
        let h = 1e-5;
        for z in [c(0.2, 0.1), c(0.8, 0.9)] {
            let fd = (tp.value(z + h).unwrap() - tp.value(z - h).unwrap()) / (2.0 * h);
            let an = tp.value_and_dz(z).unwrap().1;
            assert!((fd - an).norm() < 1e-7 * (1.0 + an.norm()));
        }
    }

    #[test]
    fn cut_automorphy() {
        let m = map();
        let tau = m.curve().tau().value();
        for s in SHIFTS {
            let tp = ThetaPullback::new(&m, s);
            for k in 1..10 {
                let p = c(k as f64 / 10.0, 0.0);
                let expected = e_func(-0.5 * tau - tp.shifted(p)) * tp.value(p).unwrap();
                assert!((tp.value(p + tau).unwrap() - expected).norm() < 1e-10 * (1.0 + expected.norm()));
                let q = tau * (k as f64 / 10.0);
                assert!((tp.value(q + 1.0).unwrap() - tp.value(q).unwrap()).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn genericity_guard() {
        let m = map();
        let tau = m.curve().tau().value();
        // θ[0;0] vanishes at ½ + ½τ
        let c1 = m.phi1(m.curve().p1()) - (0.5 + 0.5 * tau);
        let tp = ThetaPullback::new(&m, (c1, c(0.0, 0.0)));
        assert!(matches!(tp.check_generic(), Err(Error::DegenerateC(_))));
        assert!(ThetaPullback::new(&m, SHIFTS[0]).check_generic().is_ok());
    }

    #[test]
    fn simple_pole_at_p2() {
        let m = map();
        let tp = ThetaPullback::new(&m, SHIFTS[1]);
        let p2 = m.curve().p2();
        let r: Vec<f64> = [1e-4, 1e-5, 1e-6].iter().map(|&t| (tp.value(p2 + t).unwrap() * t).norm()).collect();
        assert!((r[0] - r[2]).abs() < 1e-3 * r[2] && r[2] > 1e-3);
    }
}
