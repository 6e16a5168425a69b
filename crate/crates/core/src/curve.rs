//! The problem instance: an elliptic curve `ℂ/Λ`, two points `p1`, `p2`
//! glued into a node, the cut corner `q0`, base point `z0` and the radii
//! of the excised disks. Also the rank-3 period group `Γ ⊂ ℂ²` and
//! congruence tests modulo `Γ`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::theta::{ModularParameter, SeriesPolicy};

/// Raw, unvalidated problem instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodalCurveSpec {
    pub tau: Complex64,
    pub p1: Complex64,
    pub p2: Complex64,
    /// Base point of the period map.
    pub z0: Complex64,
    /// Common corner of the cuts `α = [q0, q0+1]` and `β = [q0, q0+τ]`.
    pub q0: Complex64,
    /// Radius of the disk around `p1`.
    pub delta: f64,
    /// Radius of the disk around `p2`.
    pub eps: f64,
    pub policy: SeriesPolicy,
    pub quad_tol: f64,
}

impl NodalCurveSpec {
    pub fn validate(&self) -> Result<NodalCurve> {
        NodalCurve::new(*self)
    }
}

/// Real coordinates `(s, t)` of `z - q0 = s + tτ`.
pub fn lattice_coords(z: Complex64, q0: Complex64, tau: Complex64) -> (f64, f64) {
    let d = z - q0;
    let t = d.im / tau.im;
    let s = d.re - t * tau.re;
    (s, t)
}

/// Representative of `z` in `{q0 + s + tτ : 0 ≤ s, t < 1}`.
pub fn canonical_rep(z: Complex64, q0: Complex64, tau: Complex64) -> Complex64 {
    let (s, t) = lattice_coords(z, q0, tau);
    let s = s - s.floor();
    let t = t - t.floor();
    q0 + s + tau * t
}

/// Euclidean distance from `z` to the nearest point of `w + Λ`.
pub fn lattice_distance(z: Complex64, w: Complex64, tau: Complex64) -> f64 {
    let base = canonical_rep(z - w, Complex64::new(0.0, 0.0), tau);
    let mut best = f64::INFINITY;
    for p in -1..=1 {
        for q in -1..=1 {
            let d = (base + p as f64 + tau * q as f64).norm();
            best = best.min(d);
        }
    }
    best
}

/// Closed-form periods of the normalized third-kind differential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedPeriods {
    pub r1: f64,
    pub r2: f64,
    pub kappa_coeff: f64,
}

/// `kappa_coeff = -Im(p1-p2)/Im τ`, `r1 = kappa_coeff`,
/// `r2 = Re(p1-p2) + kappa_coeff·Re τ`.
pub fn derive_periods(p1: Complex64, p2: Complex64, tau: Complex64) -> DerivedPeriods {
    let d = p1 - p2;
    let kappa_coeff = -d.im / tau.im;
    DerivedPeriods { r1: kappa_coeff, r2: d.re + kappa_coeff * tau.re, kappa_coeff }
}

/// A point of `ℂ²` in the coordinates `(z, w)`.
pub type Pair = (Complex64, Complex64);

/// `Γ = ℤ(0,1) + ℤ(1,r1) + ℤ(τ,r2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodGroup {
    pub r1: f64,
    pub r2: f64,
    pub tau: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaDecomposition {
    pub m: i64,
    pub p: i64,
    pub q: i64,
    pub residual: Pair,
    /// Largest distance of a pre-rounding coefficient to its integer.
    pub rounding_offset: f64,
}

impl GammaDecomposition {
    pub fn residual_norm(&self) -> f64 {
        (self.residual.0.norm_sqr() + self.residual.1.norm_sqr()).sqrt()
    }

    /// Small residual reached only through a large rounding step: the
    /// lattice is close to degenerate for this input.
    pub fn near_degenerate(&self, tol: f64) -> bool {
        self.residual_norm() < tol && self.rounding_offset > 0.25
    }
}

impl PeriodGroup {
    pub fn new(r1: f64, r2: f64, tau: Complex64) -> Result<Self> {
        #[allow(clippy::neg_cmp_op_on_partial_ord)] // rejects NaN too
        if !(tau.im > 0.0) {
            return Err(Error::InvalidParameter("tau must lie in the upper half plane".into()));
        }
        Ok(Self { r1, r2, tau })
    }

    pub fn generators(&self) -> [Pair; 3] {
        let c = |x: f64| Complex64::new(x, 0.0);
        [(c(0.0), c(1.0)), (c(1.0), c(self.r1)), (self.tau, c(self.r2))]
    }

    pub fn element(&self, m: i64, p: i64, q: i64) -> Pair {
        let (m, p, q) = (m as f64, p as f64, q as f64);
        (Complex64::new(p, 0.0) + self.tau * q, Complex64::new(m + p * self.r1 + q * self.r2, 0.0))
    }

    /// Nearest element of `Γ` to `v`, found by rounding the `z`-coordinate
    /// in the basis `{1, τ}` and then the remaining real part of `w`.
    pub fn decompose(&self, v: Pair) -> GammaDecomposition {
        let (pf, qf) = {
            let (s, t) = lattice_coords(v.0, Complex64::new(0.0, 0.0), self.tau);
            (s, t)
        };
        let p = pf.round();
        let q = qf.round();
        let mf = v.1.re - p * self.r1 - q * self.r2;
        let m = mf.round();
        let g = self.element(m as i64, p as i64, q as i64);
        let offset = (pf - p).abs().max((qf - q).abs()).max((mf - m).abs());
        GammaDecomposition {
            m: m as i64,
            p: p as i64,
            q: q as i64,
            residual: (v.0 - g.0, v.1 - g.1),
            rounding_offset: offset,
        }
    }

    pub fn congruent(&self, v: Pair, w: Pair, tol: f64) -> bool {
        self.decompose((v.0 - w.0, v.1 - w.1)).residual_norm() < tol
    }
}

pub fn mod_gamma_decompose(v: Pair, pg: &PeriodGroup) -> GammaDecomposition {
    pg.decompose(v)
}

pub fn congruent_mod_gamma(v: Pair, w: Pair, pg: &PeriodGroup, tol: f64) -> bool {
    pg.congruent(v, w, tol)
}

/// Bounded search for a rational relation `p·r1 + q·r2 ∈ ℤ`; `true` means
/// none was found with `|p|, |q| ≤ bound`, i.e. `ℂ²/Γ` looks toroidal.
pub fn is_toroidal(r1: f64, r2: f64, bound: i64, tol: f64) -> bool {
    for p in -bound..=bound {
        for q in -bound..=bound {
            if p == 0 && q == 0 {
                continue;
            }
            let x = p as f64 * r1 + q as f64 * r2;
            if (x - x.round()).abs() < tol {
                return false;
            }
        }
    }
    true
}

/// A validated instance with representatives reduced into the
/// fundamental parallelogram at `q0`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalCurve {
    tau: ModularParameter,
    p1: Complex64,
    p2: Complex64,
    z0: Complex64,
    q0: Complex64,
    delta: f64,
    eps: f64,
    policy: SeriesPolicy,
    quad_tol: f64,
    periods: DerivedPeriods,
}

impl NodalCurve {
    pub fn new(spec: NodalCurveSpec) -> Result<Self> {
        let tau = ModularParameter::new(spec.tau)?;
        let t = spec.tau;
        if !(spec.delta > 0.0 && spec.eps > 0.0 && spec.quad_tol > 0.0) {
            return Err(Error::InvalidParameter("delta, eps and quad_tol must be positive".into()));
        }
        let q0 = spec.q0;
        let p1 = canonical_rep(spec.p1, q0, t);
        let p2 = canonical_rep(spec.p2, q0, t);
        let z0 = canonical_rep(spec.z0, q0, t);
        if lattice_distance(p1, p2, t) <= spec.delta + spec.eps {
            return Err(Error::InvalidParameter("disks around p1 and p2 overlap".into()));
        }
        for (name, p, r) in [("p1", p1, spec.delta), ("p2", p2, spec.eps)] {
            let (s, u) = lattice_coords(p, q0, t);
            let to_alpha = u.min(1.0 - u) * t.im;
            let to_beta = s.min(1.0 - s) * t.im / t.norm();
            if to_alpha <= r || to_beta <= r {
                return Err(Error::InvalidParameter(format!("disk around {name} meets the cuts")));
            }
            if lattice_distance(z0, p, t) <= r {
                return Err(Error::InvalidParameter(format!("base point lies in the disk around {name}")));
            }
        }
        let periods = derive_periods(p1, p2, t);
        Ok(Self {
            tau,
            p1,
            p2,
            z0,
            q0,
            delta: spec.delta,
            eps: spec.eps,
            policy: spec.policy,
            quad_tol: spec.quad_tol,
            periods,
        })
    }

    pub fn tau(&self) -> ModularParameter {
        self.tau
    }
    pub fn p1(&self) -> Complex64 {
        self.p1
    }
    pub fn p2(&self) -> Complex64 {
        self.p2
    }
    pub fn z0(&self) -> Complex64 {
        self.z0
    }
    pub fn q0(&self) -> Complex64 {
        self.q0
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn eps(&self) -> f64 {
        self.eps
    }
    pub fn policy(&self) -> SeriesPolicy {
        self.policy
    }
    pub fn quad_tol(&self) -> f64 {
        self.quad_tol
    }
    pub fn periods(&self) -> DerivedPeriods {
        self.periods
    }

    pub fn period_group(&self) -> PeriodGroup {
        PeriodGroup { r1: self.periods.r1, r2: self.periods.r2, tau: self.tau.value() }
    }

    /// Same instance with another radius around `p2`.
    pub fn with_eps(&self, eps: f64) -> Result<Self> {
        let mut spec = self.spec();
        spec.eps = eps;
        Self::new(spec)
    }

    pub fn with_quad_tol(&self, quad_tol: f64) -> Result<Self> {
        let mut spec = self.spec();
        spec.quad_tol = quad_tol;
        Self::new(spec)
    }

    pub fn spec(&self) -> NodalCurveSpec {
        NodalCurveSpec {
            tau: self.tau.value(),
            p1: self.p1,
            p2: self.p2,
            z0: self.z0,
            q0: self.q0,
            delta: self.delta,
            eps: self.eps,
            policy: self.policy,
            quad_tol: self.quad_tol,
        }
    }

    /// Centre of the fundamental parallelogram.
    pub fn center(&self) -> Complex64 {
        self.q0 + (1.0 + self.tau.value()) * 0.5
    }

    pub fn point(&self, s: f64, t: f64) -> Complex64 {
        self.q0 + s + self.tau.value() * t
    }

    pub fn coords(&self, z: Complex64) -> (f64, f64) {
        lattice_coords(z, self.q0, self.tau.value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn spec() -> NodalCurveSpec {
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
    }

    #[test]
    fn derive_periods_examples() {
        let d = derive_periods(c(0.8, 0.5), c(0.3, 0.5), c(0.0, 1.0));
        assert_eq!(d.kappa_coeff, 0.0);
        assert_eq!(d.r1, 0.0);
        assert!((d.r2 - 0.5).abs() < 1e-15);
        let d = derive_periods(c(0.6, 0.5), c(0.3, 0.3), c(0.0, 1.0));
        assert!((d.kappa_coeff + 0.2).abs() < 1e-15);
        assert!((d.r1 + 0.2).abs() < 1e-15);
        assert!((d.r2 - 0.3).abs() < 1e-15);
    }

    #[test]
    fn decompose_generators() {
        let pg = PeriodGroup::new(-0.17, 0.31, c(0.3, 0.8)).unwrap();
        let d = pg.decompose((c(0.0, 0.0), c(1.0, 0.0)));
        assert_eq!((d.m, d.p, d.q), (1, 0, 0));
        assert!(d.residual_norm() < 1e-15);
        let d = pg.decompose((pg.tau, c(pg.r2, 0.0)));
        assert_eq!((d.m, d.p, d.q), (0, 0, 1));
        let d = pg.decompose((1.0 + pg.tau, c(pg.r1 + pg.r2 + 1.0, 0.0)));
        assert_eq!((d.m, d.p, d.q), (1, 1, 1));
        assert!(d.residual_norm() < 1e-14);
    }

    #[test]
    fn congruence_examples() {
        let pg = PeriodGroup::new(0.1234, 0.5678, c(0.0, 1.0)).unwrap();
        let v = (c(0.3, 0.2), c(-0.1, 0.4));
        assert!(pg.congruent(v, v, 1e-6));
        assert!(!pg.congruent((v.0, v.1 + 0.5), v, 1e-6));
        assert!(pg.congruent((v.0 + 1.0, v.1 + pg.r1), v, 1e-6));
    }

    #[test]
    fn toroidal_examples() {
        assert!(!is_toroidal(0.0, 0.3, 10, 1e-9));
        assert!(!is_toroidal(1.0 / 3.0, 1.0 / 7.0, 10, 1e-9));
        let r1 = 2f64.sqrt() - 1.0;
        let r2 = 3f64.sqrt() - 1.0;
        // exhaustive oracle: smallest distance to ℤ over the box
        let mut best = f64::INFINITY;
        for p in -50i64..=50 {
            for q in -50i64..=50 {
                if (p, q) != (0, 0) {
                    let x = p as f64 * r1 + q as f64 * r2;
                    best = best.min((x - x.round()).abs());
                }
            }
        }
        assert!(best > 1e-9);
        assert!(is_toroidal(r1, r2, 50, 1e-9));
    }

    #[test]
    fn validation_rejects_bad_instances() {
        assert!(spec().validate().is_ok());
        let mut s = spec();
        s.p2 = s.p1 + 0.05;
        assert!(s.validate().is_err());
        let mut s = spec();
        s.p1 = c(0.62, 0.03);
        assert!(s.validate().is_err());
        let mut s = spec();
        s.z0 = s.p2 + 0.01;
        assert!(s.validate().is_err());
        let mut s = spec();
        s.tau = c(1.0, 0.0);
        assert!(s.validate().is_err());
    }

    #[test]
    fn canonicalization_reduces_into_parallelogram() {
        let mut s = spec();
        s.p1 = s.p1 + 2.0 - c(0.0, 1.0);
        let curve = s.validate().unwrap();
        assert!((curve.p1() - c(0.62, 0.55)).norm() < 1e-14);
    }
}
