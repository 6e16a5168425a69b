//! Choice of `ε`, the local inverses `β_k` of `d(ε)` and the zero-set test
//! `Θ(u - β_k(u)) = 0` on the image of the curve.

use num_complex::Complex64;
use rand::RngExt;

use crate::abel_jacobi::PeriodMap;
use crate::curve::Pair;
use crate::error::{Error, Result};
use crate::riemann::{corrected_d2, d_map, LaurentData, RiemannConstants, ThetaPullback};
use crate::sampling::random_shift;
use crate::theta::{e_func, e_real, TWO_PI_I};

/// Non-integer shifts `s` tested as potential periods `(0, s)` of `d(ε)`.
pub const FRACTIONS: [f64; 11] =
    [1.0 / 2.0, 1.0 / 3.0, 2.0 / 3.0, 1.0 / 4.0, 3.0 / 4.0, 1.0 / 5.0, 2.0 / 5.0, 3.0 / 5.0, 4.0 / 5.0, 1.0 / 6.0, 5.0 / 6.0];
pub const PERIOD_DEVIATION: f64 = 1e-4;
pub const DETERMINANT_FLOOR: f64 = 1e-6;
pub const SINGULAR_JACOBIAN: f64 = 1e-10;
/// Newton iterates with `t𝔗_c` this close to zero on `[0, ε]` are rejected.
const SEGMENT_MARGIN: f64 = 1e-3;
const MAX_DRAWS: usize = 200;

fn pair_dist(a: Pair, b: Pair) -> f64 {
    ((a.0 - b.0).norm_sqr() + (a.1 - b.1).norm_sqr()).sqrt()
}

/// Draw a shift `c` for which the Laurent data exist.
pub fn generic_shift<R: RngExt>(map: &PeriodMap, rng: &mut R) -> Result<Pair> {
    for _ in 0..MAX_DRAWS {
        let c = random_shift(rng, map.curve());
        let tp = ThetaPullback::new(map, c);
        if tp.check_generic().is_ok() && tp.check_pole_generic().is_ok() {
            return Ok(c);
        }
    }
    Err(Error::DegenerateC("no generic shift found".into()))
}

/// Smallest `|AD - BC|` over `|t| ≤ eps` (centre, two circles of 16
/// points), relative to `|A(0)D(0)|`.
pub fn determinant_margin(ld: &LaurentData, eps: f64) -> Result<f64> {
    let m0 = ld.mobius(Complex64::new(0.0, 0.0))?;
    let scale = (m0.a * m0.d).norm();
    let mut worst = m0.det().norm();
    for r in [0.5 * eps, eps] {
        for k in 0..16 {
            let t = r * e_real(k as f64 / 16.0);
            worst = worst.min(ld.mobius(t)?.det().norm());
        }
    }
    Ok(worst / scale)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonTrial {
    pub eps: f64,
    /// Smallest `|d(c + (0, s)) - d(c)|` over the sampled `c` and `s`.
    pub min_fraction_shift: f64,
    /// Largest `|d(c + (0, 1)) - d(c)|`.
    pub max_integer_shift: f64,
    pub min_determinant: f64,
    pub accepted: bool,
}

/// Evaluate one candidate on `n_c` random shifts.
pub fn trial_epsilon<R: RngExt>(map: &PeriodMap, eps: f64, n_c: usize, quad_tol: f64, rng: &mut R) -> Result<EpsilonTrial> {
    if !(eps > 0.0 && eps <= map.curve().eps()) {
        return Err(Error::InvalidParameter(format!("epsilon candidate {eps} outside (0, {}]", map.curve().eps())));
    }
    let mut min_fraction_shift = f64::INFINITY;
    let mut max_integer_shift = 0.0f64;
    let mut min_determinant = f64::INFINITY;
    for _ in 0..n_c {
        let c = generic_shift(map, rng)?;
        let tp = ThetaPullback::new(map, c);
        let ld = LaurentData::new(&tp, quad_tol)?;
        let d0 = d_map(&ld, eps)?;
        min_determinant = min_determinant.min(determinant_margin(&ld, eps)?);
        let shifted = |s: f64| -> Result<Pair> {
            let tp = ThetaPullback::new(map, (c.0, c.1 + s));
            d_map(&LaurentData::new(&tp, quad_tol)?, eps)
        };
        max_integer_shift = max_integer_shift.max(pair_dist(shifted(1.0)?, d0));
        for s in FRACTIONS {
            min_fraction_shift = min_fraction_shift.min(pair_dist(shifted(s)?, d0));
        }
    }
    let accepted = min_fraction_shift > PERIOD_DEVIATION && min_determinant > DETERMINANT_FLOOR;
    Ok(EpsilonTrial { eps, min_fraction_shift, max_integer_shift, min_determinant, accepted })
}

/// First candidate whose sampled `d(ε)` shows no rational period.
pub fn select_epsilon<R: RngExt>(map: &PeriodMap, candidates: &[f64], n_c: usize, quad_tol: f64, rng: &mut R) -> Result<(f64, Vec<EpsilonTrial>)> {
    let mut trials = Vec::new();
    for &eps in candidates {
        let trial = trial_epsilon(map, eps, n_c, quad_tol, rng)?;
        let ok = trial.accepted;
        trials.push(trial);
        if ok {
            return Ok((eps, trials));
        }
    }
    Err(Error::NoValidEpsilon)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetaSolution {
    pub c: Pair,
    pub k: i64,
    /// `d(ε)(c) = u - κ(ε) + (0, sheet)`.
    pub sheet: i64,
    pub iterations: usize,
    /// `|F|` after each iterate, starting with the initial guess.
    pub history: Vec<f64>,
}

impl BetaSolution {
    pub fn residual(&self) -> f64 {
        *self.history.last().expect("history")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchInverse<'m> {
    map: &'m PeriodMap,
    constants: RiemannConstants,
    pub newton_tol: f64,
    pub max_iters: usize,
    pub quad_tol: f64,
}

impl<'m> BranchInverse<'m> {
    pub fn new(map: &'m PeriodMap, constants: RiemannConstants, newton_tol: f64, max_iters: usize, quad_tol: f64) -> Self {
        Self { map, constants, newton_tol, max_iters, quad_tol }
    }

    pub fn eps(&self) -> f64 {
        self.constants.eps
    }

    pub fn constants(&self) -> &RiemannConstants {
        &self.constants
    }

    /// `u - κ(ε)`.
    pub fn target(&self, u: Pair) -> Pair {
        (u.0 - self.constants.kappa1, u.1 - self.constants.kappa2)
    }

    /// `F` and `dF/dc2`; the quadrature form of `H3` is left to [`d_map`]
    /// so that round trips check the two against each other.
    fn residual_and_slope(&self, c: Pair, t2: Complex64) -> Result<(Complex64, Complex64)> {
        let tp = ThetaPullback::new(self.map, c);
        let ld = LaurentData::new(&tp, self.quad_tol)?;
        let eps = Complex64::new(self.eps(), 0.0);
        let margin = ld.segment_margin(eps)?;
        if margin < SEGMENT_MARGIN {
            return Err(Error::ContourThroughZero { winding: margin });
        }
        let r1 = self.map.curve().periods().r1;
        let (h3, dh3) = ld.big_h3_by_mobius(eps)?;
        Ok((c.0 * r1 + h3 / TWO_PI_I - t2, dh3 / TWO_PI_I))
    }

    /// Solution of `e(c1·r1 + H3(ε; c)/2π√-1) = e(t2)`. With `x = e(-c2)`,
    /// `exp H3(ε) = M(ε)/M(0)` and `M(t) = C(t) + D(t)x`, so `x` solves a
    /// linear equation.
    fn solve_c2(&self, c1: Complex64, t2: Complex64) -> Result<Complex64> {
        let tp = ThetaPullback::new(self.map, (c1, Complex64::new(0.0, 0.0)));
        let ld = LaurentData::new(&tp, self.quad_tol)?;
        let m0 = ld.mobius(Complex64::new(0.0, 0.0))?;
        let me = ld.mobius(Complex64::new(self.eps(), 0.0))?;
        let r1 = self.map.curve().periods().r1;
        let rho = e_func(t2 - c1 * r1);
        let x = (me.c - rho * m0.c) / (rho * m0.d - me.d);
        if x.norm() == 0.0 || !x.re.is_finite() || !x.im.is_finite() {
            return Err(Error::JacobianSingular(x.norm()));
        }
        Ok(-x.ln() / TWO_PI_I)
    }

    /// `β_k(u)`: `c1 = u1 - κ1`, `c2` from [`Self::solve_c2`] plus `k`,
    /// polished by Newton on `F(c2) = c1·r1 + H3(ε; c)/2π√-1 - (u2 - κ2)`.
    ///
    /// `d(ε)` depends on `c2` only through `e(-c2)`, and the continued
    /// logarithm in `H3` confines `d2` to one strip of width 1, so `F` is
    /// solved modulo 1; the integer is returned as `sheet`.
    pub fn beta_k(&self, u: Pair, k: i64) -> Result<BetaSolution> {
        let (c1, t2) = self.target(u);
        let mut c2 = self.solve_c2(c1, t2)? + k as f64;
        let (f, mut df) = self.residual_and_slope((c1, c2), t2)?;
        let sheet = f.re.round();
        let mut f = f - sheet;
        let mut history = vec![f.norm()];
        for it in 0..=self.max_iters {
            if f.norm() < self.newton_tol {
                return Ok(BetaSolution { c: (c1, c2), k, sheet: sheet as i64, iterations: it, history });
            }
            if it == self.max_iters {
                break;
            }
            if df.norm() < SINGULAR_JACOBIAN {
                return Err(Error::JacobianSingular(df.norm()));
            }
            c2 -= f / df;
            let (fn_, dfn) = self.residual_and_slope((c1, c2), t2)?;
            f = fn_ - sheet;
            df = dfn;
            history.push(f.norm());
        }
        Err(Error::NewtonDivergence { iterations: self.max_iters, residual: f.norm() })
    }

    /// Inverse of the slit-corrected map, whose second coordinate is
    /// `c2` plus a function of `c1`; closed form.
    pub fn beta_k_corrected(&self, u: Pair, k: i64) -> Result<Pair> {
        let (c1, t2) = self.target(u);
        let tp = ThetaPullback::new(self.map, (c1, Complex64::new(0.0, 0.0)));
        let ld = LaurentData::new(&tp, self.quad_tol)?;
        let offset = corrected_d2(&ld, self.eps())?;
        Ok((c1, t2 - offset + k as f64))
    }

    /// `|Θ(u - c)|`.
    pub fn theta_residual(&self, u: Pair, c: Pair) -> Result<f64> {
        let tp = ThetaPullback::new(self.map, c);
        Ok(tp.theta().value(u.0 - c.0, u.1 - c.1)?.norm())
    }

    /// `|Θ(φ(P) - β_k(φ(P)))|` with `φ` along the default path.
    pub fn zero_set_residual(&self, p: Complex64, k: i64) -> Result<ZeroSetSample> {
        let u = self.map.phi_default(p)?.pair();
        let sol = self.beta_k(u, k)?;
        Ok(ZeroSetSample { p, u, c: sol.c, residual: self.theta_residual(u, sol.c)? })
    }

    /// Same with the slit-corrected inverse.
    pub fn zero_set_residual_corrected(&self, p: Complex64, k: i64) -> Result<ZeroSetSample> {
        let u = self.map.phi_default(p)?.pair();
        let c = self.beta_k_corrected(u, k)?;
        Ok(ZeroSetSample { p, u, c, residual: self.theta_residual(u, c)? })
    }

    /// Retry at `p + 1e-3` once when the Jacobian is singular.
    pub fn zero_set_residual_with_retry(&self, p: Complex64, k: i64) -> Result<ZeroSetSample> {
        match self.zero_set_residual(p, k) {
            Err(Error::JacobianSingular(_)) => self.zero_set_residual(p + 1e-3, k),
            other => other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroSetSample {
    pub p: Complex64,
    pub u: Pair,
    pub c: Pair,
    pub residual: f64,
}
