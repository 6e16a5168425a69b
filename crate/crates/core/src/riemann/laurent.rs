//! Local data of `𝔗_c` in the coordinate `t = z - p2`.
//!
//! With `x = e(-c2)`, `w(t) = φ1(p2+t) - c1` and `G(t) = θ[-r1;r2](w(t))·g(t)`
//! we have `t·𝔗_c(p2+t) = t·θ[0;0](w(t)) + G(t)·x`, so that
//! `c₋₁ = G(0)·x`, `h2 = α1 + α2·x` with `α1 = θ[0;0](w)`,
//! `α2 = (G(t) - G(0))/t`, and `h3 = (t𝔗)'/(t𝔗) = (A + Bx)/(C + Dx)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature;
use crate::theta::{e_func, theta_char_with_dz, Characteristic, TWO_PI_I};

use super::pullback::ThetaPullback;

/// `g(t) = t·e(φ2(p2+t))`, holomorphic and nonzero at `t = 0`.
pub fn g_closed(tp: &ThetaPullback, t: Complex64) -> Result<Complex64> {
    let map = tp.map();
    let curve = map.curve();
    let odd = map.eta().odd_theta();
    let (p1, p2, z0) = (curve.p1(), curve.p2(), curve.z0());
    let base = map.eta().quotient(z0)?;
    let num = odd.value(t + p2 - p1)?;
    let den = odd.value_over_z(t)?;
    Ok(num / den / base * e_func(map.eta().kappa_coeff() * (p2 + t - z0)))
}

/// `g(t) = t0·e(φ2(p2+t0) + ∫_{t0}^t h1)` with `t0 = ε` and `φ2(p2+t0)`
/// from the default path.
pub fn g_func(tp: &ThetaPullback, t: Complex64, quad_tol: f64) -> Result<Complex64> {
    let map = tp.map();
    let curve = map.curve();
    let t0 = Complex64::new(curve.eps(), 0.0);
    let phi_t0 = map.phi_default(curve.p2() + t0)?.phi2;
    let eta = map.eta();
    let integral = quadrature::integrate_segment(|s| eta.h1_at_p2(s), t0, t, quad_tol)?;
    Ok(t0 * e_func(phi_t0 + integral))
}

/// Coefficients of `h3 = (A + Bx)/(C + Dx)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mobius {
    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, x: Complex64) -> Complex64 {
        (self.a + self.b * x) / (self.c + self.d * x)
    }
}

pub struct LaurentData<'a, 'b> {
    tp: &'b ThetaPullback<'a>,
    beta: Complex64,
    g0: Complex64,
    quad_tol: f64,
}

impl<'a, 'b> LaurentData<'a, 'b> {
    pub fn new(tp: &'b ThetaPullback<'a>, quad_tol: f64) -> Result<Self> {
        tp.check_pole_generic()?;
        let g0 = g_closed(tp, Complex64::new(0.0, 0.0))?;
        let (beta, _) = Self::big_g_with(tp, Complex64::new(0.0, 0.0), g0)?;
        if beta.norm() == 0.0 {
            return Err(Error::DegenerateC("c_-1 vanishes".into()));
        }
        Ok(Self { tp, beta, g0, quad_tol })
    }

    fn w(tp: &ThetaPullback, t: Complex64) -> Complex64 {
        tp.shifted(tp.map().curve().p2() + t)
    }

    fn big_g_with(tp: &ThetaPullback, t: Complex64, g: Complex64) -> Result<(Complex64, Complex64)> {
        let curve = tp.map().curve();
        let (tw, tw_dz) = theta_char_with_dz(tp.theta().twisted(), Self::w(tp, t), curve.tau(), &curve.policy())?;
        let h1 = tp.map().eta().h1_at_p2(t)?;
        Ok((tw * g, (tw_dz + tw * TWO_PI_I * h1) * g))
    }

    pub fn pullback(&self) -> &ThetaPullback<'a> {
        self.tp
    }

    /// `e(-c2)`.
    pub fn x(&self) -> Complex64 {
        self.tp.e_minus_c2()
    }

    pub fn g0(&self) -> Complex64 {
        self.g0
    }

    /// `β = θ[-r1;r2](φ1(p2) - c1)·g(0)`, so that `c₋₁ = β·e(-c2)`.
    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn c_minus1(&self) -> Complex64 {
        self.beta * self.x()
    }

    /// `(G(t), G'(t))`.
    pub fn big_g(&self, t: Complex64) -> Result<(Complex64, Complex64)> {
        Self::big_g_with(self.tp, t, g_closed(self.tp, t)?)
    }

    fn even(&self, t: Complex64) -> Result<(Complex64, Complex64)> {
        let curve = self.tp.map().curve();
        theta_char_with_dz(Characteristic::ZERO, Self::w(self.tp, t), curve.tau(), &curve.policy())
    }

    pub fn alpha1(&self, t: Complex64) -> Result<Complex64> {
        Ok(self.even(t)?.0)
    }

    /// `α2(t) = ∫_0^1 G'(tu) du`, the difference quotient of `G` at 0.
    pub fn alpha2(&self, t: Complex64) -> Result<Complex64> {
        let mut f = |u: f64| Ok(self.big_g(t * u)?.1);
        quadrature::gauss_panel(&mut f, 0.0, 1.0)
    }

    /// `h2(t) = 𝔗_c(p2+t) - c₋₁/t`.
    pub fn h2(&self, t: Complex64) -> Result<Complex64> {
        Ok(self.alpha1(t)? + self.alpha2(t)? * self.x())
    }

    /// The printed form `θ[0;0](w) + {G(t) - G(0)}·e(-c2)`, which lacks
    /// the factor `1/t` on the bracket.
    pub fn h2_as_printed(&self, t: Complex64) -> Result<Complex64> {
        Ok(self.alpha1(t)? + (self.big_g(t)?.0 - self.beta) * self.x())
    }

    pub fn mobius(&self, t: Complex64) -> Result<Mobius> {
        let (th, th_dz) = self.even(t)?;
        let (g, g_dz) = self.big_g(t)?;
        Ok(Mobius { a: th + t * th_dz, b: g_dz, c: t * th, d: g })
    }

    pub fn h3(&self, t: Complex64) -> Result<Complex64> {
        Ok(self.mobius(t)?.apply(self.x()))
    }

    /// `∂h3/∂c2 = -2π√-1·x·(BC - AD)/(C + Dx)²`.
    pub fn dh3_dc2(&self, t: Complex64) -> Result<Complex64> {
        let m = self.mobius(t)?;
        let x = self.x();
        let den = m.c + m.d * x;
        Ok(-TWO_PI_I * x * (m.b * m.c - m.a * m.d) / (den * den))
    }

    /// `𝔗_c'/𝔗_c + 1/t` from the global evaluator, for `t ≠ 0`.
    pub fn h3_direct(&self, t: Complex64) -> Result<Complex64> {
        let (v, dv) = self.tp.value_and_dz(self.tp.map().curve().p2() + t)?;
        Ok(dv / v + 1.0 / t)
    }

    /// `lim_{t→0} (𝔗_c'/𝔗_c + 1/t)` as the mean of [`LaurentData::h3_direct`]
    /// over the circle `|t| = radius` (mean-value property, 64 nodes).
    pub fn h3_limit(&self, radius: f64) -> Result<Complex64> {
        let n = 64;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            acc += self.h3_direct(radius * crate::theta::e_real(k as f64 / n as f64))?;
        }
        Ok(acc / n as f64)
    }

    /// `θ[0;0](φ1(p2) - c1)·e(c2) / (θ[-r1;r2](φ1(p2) - c1)·g(0))`.
    pub fn h3_at_zero_as_printed(&self) -> Result<Complex64> {
        Ok(self.alpha1(Complex64::new(0.0, 0.0))? / self.c_minus1())
    }

    /// `h3(0) = θ[0;0](φ1(p2) - c1)/c₋₁ + G'(0)/G(0)`.
    pub fn h3_at_zero(&self) -> Result<Complex64> {
        self.h3(Complex64::new(0.0, 0.0))
    }

    /// `min |C + Dx| / |Dx|` over 65 points of the segment `[0, t]`; small
    /// values mean `t𝔗_c` nearly vanishes on it and `h3` has a pole nearby.
    pub fn segment_margin(&self, t: Complex64) -> Result<f64> {
        let x = self.x();
        let mut worst = f64::INFINITY;
        for k in 0..=64 {
            let m = self.mobius(t * (k as f64 / 64.0))?;
            worst = worst.min((m.c + m.d * x).norm() / (m.d * x).norm());
        }
        Ok(worst)
    }

    /// `H3(t) = ∫_0^t h3` along the segment.
    pub fn big_h3(&self, t: Complex64) -> Result<Complex64> {
        quadrature::integrate(|u| Ok(self.h3(t * u)? * t), 0.0, 1.0, self.quad_tol)
    }

    /// `∂H3(t)/∂c2` by quadrature of [`LaurentData::dh3_dc2`].
    pub fn big_h3_dc2(&self, t: Complex64) -> Result<Complex64> {
        quadrature::integrate(|u| Ok(self.dh3_dc2(t * u)? * t), 0.0, 1.0, self.quad_tol)
    }

    /// `(H3(t), ∂H3(t)/∂c2)` from `H3 = log M(t) - log M(0)` with
    /// `M = C + Dx = t𝔗_c`, continued along `[0, t]`, and
    /// `∂H3/∂c2 = -2π√-1·(Dx/M - 1)`.
    pub fn big_h3_by_mobius(&self, t: Complex64) -> Result<(Complex64, Complex64)> {
        let x = self.x();
        let m = |u: f64| -> Result<Complex64> {
            let mb = self.mobius(t * u)?;
            Ok(mb.c + mb.d * x)
        };
        let log = crate::branch::ContinuousLog::build(m, 0.0, 1.0)?;
        let end = self.mobius(t)?;
        let dx = end.d * x;
        Ok((log.log_increment(), -TWO_PI_I * (dx / (end.c + dx) - 1.0)))
    }

    /// `H3(t)` as the continuous logarithm of `(t𝔗_c)/c₋₁` along `[0, t]`.
    pub fn big_h3_by_log(&self, t: Complex64) -> Result<Complex64> {
        let p2 = self.tp.map().curve().p2();
        let c = self.c_minus1();
        let m = |u: f64| -> Result<Complex64> {
            if u == 0.0 {
                return Ok(c);
            }
            Ok(t * u * self.tp.value(p2 + t * u)?)
        };
        let log = crate::branch::ContinuousLog::build(m, 0.0, 1.0)?;
        Ok(log.log_increment())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::riemann::fixtures::{c, map, SHIFTS};
    use crate::theta::e_real;

    #[test]
    fn g_route_matches_closed_form() {
        let m = map();
        let tp = ThetaPullback::new(&m, SHIFTS[0]);
        let eps = m.curve().eps();
        for k in 0..8 {
            let t = 0.5 * eps * e_real(k as f64 / 8.0);
            let a = g_func(&tp, t, 1e-12).unwrap();
            let b = g_closed(&tp, t).unwrap();
            assert!((a - b).norm() < 1e-10);
            let e = m.e_phi2(m.curve().p2() + t).unwrap();
            assert!((a / t - e).norm() < 1e-8 * e.norm());
        }
        let g0 = g_closed(&tp, c(0.0, 0.0)).unwrap();
        assert!(g0.norm() > 1e-6 && g0.norm().is_finite());
    }

    #[test]
    fn residue_matches_limit() {
        let m = map();
        let p2 = m.curve().p2();
        for s in SHIFTS {
            let tp = ThetaPullback::new(&m, s);
            let ld = LaurentData::new(&tp, 1e-12).unwrap();
            // t·𝔗(p2+t) is holomorphic at 0: its circle mean is c₋₁
            let n = 64;
            let lim = (0..n)
                .map(|k| {
                    let t = 0.025 * e_real(k as f64 / n as f64);
                    t * tp.value(p2 + t).unwrap()
                })
                .sum::<Complex64>()
                / n as f64;
            assert!((lim - ld.c_minus1()).norm() < 1e-10 * ld.c_minus1().norm());
            // and the radial limit
            let t = c(1e-6, 0.0);
            let first = ld.c_minus1() + t * ld.h2(c(0.0, 0.0)).unwrap();
            assert!((tp.value(p2 + t).unwrap() * t - first).norm() < 1e-8 * ld.c_minus1().norm());
        }
    }

    #[test]
    fn h2_and_h3_match_global_evaluator() {
        let m = map();
        let p2 = m.curve().p2();
        let eps = m.curve().eps();
        for s in SHIFTS {
            let tp = ThetaPullback::new(&m, s);
            let ld = LaurentData::new(&tp, 1e-12).unwrap();
            for k in 0..8 {
                let t = 0.5 * eps * e_real(k as f64 / 8.0);
                let h2 = tp.value(p2 + t).unwrap() - ld.c_minus1() / t;
                assert!((ld.h2(t).unwrap() - h2).norm() < 1e-8 * (1.0 + h2.norm()));
                let direct = ld.h3_direct(t).unwrap();
                assert!((ld.h3(t).unwrap() - direct).norm() < 1e-8 * (1.0 + direct.norm()));
            }
        }
    }

    #[test]
    fn h3_at_zero_closed_forms() {
        let m = map();
        let tp = ThetaPullback::new(&m, SHIFTS[0]);
        let ld = LaurentData::new(&tp, 1e-12).unwrap();
        let h0 = ld.h3_at_zero().unwrap();
        assert!((ld.h3_limit(0.025).unwrap() - h0).norm() < 1e-10 * h0.norm());
        let (g, dg) = ld.big_g(c(0.0, 0.0)).unwrap();
        let corrected = ld.alpha1(c(0.0, 0.0)).unwrap() / ld.c_minus1() + dg / g;
        assert!((corrected - h0).norm() < 1e-12 * h0.norm());
        // the printed value omits G'(0)/G(0)
        let printed = ld.h3_at_zero_as_printed().unwrap();
        assert!(((printed - h0) + dg / g).norm() < 1e-12 * h0.norm());
        assert!((dg / g).norm() > 1e-3);
    }

    #[test]
    fn mobius_structure() {
        let m = map();
        let tp = ThetaPullback::new(&m, SHIFTS[1]);
        let ld = LaurentData::new(&tp, 1e-12).unwrap();
        let m0 = ld.mobius(c(0.0, 0.0)).unwrap();
        assert_eq!(m0.c, c(0.0, 0.0));
        assert!((m0.d - ld.beta()).norm() < 1e-15 * ld.beta().norm());
        assert!((m0.a - ld.alpha1(c(0.0, 0.0)).unwrap()).norm() < 1e-15);
        // B(t) = (t·α2)'
        let t = c(0.01, 0.02);
        let h = 1e-6;
        let ta2 = |t: Complex64| t * ld.alpha2(t).unwrap();
        let fd = (ta2(t + h) - ta2(t - h)) / (2.0 * h);
        assert!((ld.mobius(t).unwrap().b - fd).norm() < 1e-7 * fd.norm());
        for k in 0..5 {
            let x = e_func(-c(0.1 * k as f64, 0.05 * k as f64 - 0.1));
            let mb = ld.mobius(t).unwrap();
            let tp2 = ThetaPullback::new(&m, (SHIFTS[1].0, c(0.1 * k as f64, 0.05 * k as f64 - 0.1)));
            let ld2 = LaurentData::new(&tp2, 1e-12).unwrap();
            assert!((mb.apply(x) - ld2.h3(t).unwrap()).norm() < 1e-10 * (1.0 + mb.apply(x).norm()));
        }
    }

    #[test]
    fn big_h3_three_ways() {
        let m = map();
        for s in SHIFTS {
            let tp = ThetaPullback::new(&m, s);
            let ld = LaurentData::new(&tp, 1e-12).unwrap();
            let t = c(0.05, 0.0);
            let q = ld.big_h3(t).unwrap();
            assert!((ld.big_h3_by_log(t).unwrap() - q).norm() < 1e-10);
            let (lg, dlg) = ld.big_h3_by_mobius(t).unwrap();
            assert!((lg - q).norm() < 1e-10);
            assert!((dlg - ld.big_h3_dc2(t).unwrap()).norm() < 1e-10 * (1.0 + dlg.norm()));
            assert_eq!(ld.big_h3(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        }
    }

    #[test]
    fn big_h3_periodic_in_c2() {
        let m = map();
        let t = c(0.05, 0.0);
        for s in SHIFTS {
            let h = |c2: Complex64| {
                let tp = ThetaPullback::new(&m, (s.0, c2));
                LaurentData::new(&tp, 1e-12).unwrap().big_h3(t).unwrap()
            };
            let base = h(s.1);
            assert!((h(s.1 + 1.0) - base).norm() < 1e-10);
            assert!((h(s.1 + 0.5) - base).norm() > 1e-3);
        }
    }

    #[test]
    fn dh3_dc2_matches_central_difference() {
        let m = map();
        let s = SHIFTS[2];
        let t = c(0.05, 0.0);
        let h = |c2: Complex64| {
            let tp = ThetaPullback::new(&m, (s.0, c2));
            LaurentData::new(&tp, 1e-13).unwrap().big_h3(t).unwrap()
        };
        let step = 1e-5;
        let fd = (h(s.1 + step) - h(s.1 - step)) / (2.0 * step);
        let tp = ThetaPullback::new(&m, s);
        let an = LaurentData::new(&tp, 1e-13).unwrap().big_h3_dc2(t).unwrap();
        assert!((fd - an).norm() < 1e-6 * an.norm());
    }
}
