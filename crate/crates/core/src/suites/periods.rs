//! Periods of the third-kind differential and the relations across the
//! cuts, for `φ` and for `𝔗_c`.

use std::collections::BTreeSet;

use num_complex::Complex64;

use crate::abel_jacobi::PeriodMap;
use crate::config::RunConfig;
use crate::curve::is_toroidal;
use crate::differentials::Contour;
use crate::error::{Error, Result};
use crate::riemann::ThetaPullback;
use crate::sampling::{random_shift, stream};
use crate::theta::e_func;

use super::{frac_dist, max_of, Check, Report, Table};

pub const PERIOD_TOL: f64 = 1e-8;
pub const CUT_TOL: f64 = 1e-8;
const TOROIDAL_BOUND: i64 = 50;
const TOROIDAL_TOL: f64 = 1e-9;
const MAX_DRAWS: usize = 50;

/// Errors of the relations across `α` and `β` at `n` points per cut.
#[derive(Debug, Clone, PartialEq)]
pub struct CutErrors {
    /// `φ(P + τ) - φ(P) - (τ, r2)` on `α`, slit domain.
    pub alpha_phi: f64,
    /// `φ(P - 1) - φ(P) + (1, r1)` on `β`, slit domain.
    pub beta_phi: f64,
    /// The same two with straight default paths, modulo `(0, ℤ)`.
    pub alpha_phi_mod1: f64,
    pub beta_phi_mod1: f64,
    /// Integer offsets seen with straight default paths.
    pub offsets: BTreeSet<i64>,
    /// Relative error of `𝔗_c(P + τ) = e(-½τ - (φ1(P) - c1))·𝔗_c(P)`.
    pub alpha_frak_t: f64,
    /// Relative error of `𝔗_c(P - 1) = 𝔗_c(P)`.
    pub beta_frak_t: f64,
}

pub fn cut_errors(map: &PeriodMap, c: (Complex64, Complex64), n: usize) -> Result<CutErrors> {
    let curve = map.curve();
    let tau = curve.tau().value();
    let r = curve.periods();
    let tp = ThetaPullback::new(map, c);
    let mut e = CutErrors {
        alpha_phi: 0.0,
        beta_phi: 0.0,
        alpha_phi_mod1: 0.0,
        beta_phi_mod1: 0.0,
        offsets: BTreeSet::new(),
        alpha_frak_t: 0.0,
        beta_frak_t: 0.0,
    };
    for k in 0..n {
        let s = (k as f64 + 0.5) / n as f64;

        let p = curve.point(s, 0.0);
        let (a, b) = (map.phi_slit(p)?, map.phi_slit(p + tau)?);
        e.alpha_phi = max_of([e.alpha_phi, (b.phi1 - a.phi1 - tau).norm(), (b.phi2 - a.phi2 - r.r2).norm()]);
        let d = map.phi_default(p + tau)?.phi2 - map.phi_default(p)?.phi2 - r.r2;
        e.alpha_phi_mod1 = max_of([e.alpha_phi_mod1, frac_dist(d)]);
        e.offsets.insert(d.re.round() as i64);
        let lhs = tp.value(p + tau)?;
        let rhs = e_func(-0.5 * tau - tp.shifted(p)) * tp.value(p)?;
        e.alpha_frak_t = max_of([e.alpha_frak_t, (lhs - rhs).norm() / rhs.norm()]);

        let p = curve.point(1.0, s);
        let (a, b) = (map.phi_slit(p)?, map.phi_slit(p - 1.0)?);
        e.beta_phi = max_of([e.beta_phi, (b.phi1 - a.phi1 + 1.0).norm(), (b.phi2 - a.phi2 + r.r1).norm()]);
        let d = map.phi_default(p - 1.0)?.phi2 - map.phi_default(p)?.phi2 + r.r1;
        e.beta_phi_mod1 = max_of([e.beta_phi_mod1, frac_dist(d)]);
        e.offsets.insert(d.re.round() as i64);
        let (lhs, rhs) = (tp.value(p - 1.0)?, tp.value(p)?);
        e.beta_frak_t = max_of([e.beta_frak_t, (lhs - rhs).norm() / rhs.norm()]);
    }
    Ok(e)
}

/// First shift from stream `index` passing the genericity guard.
pub fn generic_draw(map: &PeriodMap, seed: u64, index: u64) -> Result<(Complex64, Complex64)> {
    let mut rng = stream(seed, index);
    for _ in 0..MAX_DRAWS {
        let c = random_shift(&mut rng, map.curve());
        if ThetaPullback::new(map, c).check_generic().is_ok() {
            return Ok(c);
        }
    }
    Err(Error::DegenerateC("no generic shift drawn".into()))
}

pub fn run(cfg: &RunConfig) -> Result<Report> {
    let map = cfg.period_map()?;
    let curve = map.curve();
    let r = curve.periods();
    let eta = map.eta();
    let one = Complex64::new(1.0, 0.0);
    let mut t = Table::new(
        "periods",
        &["quantity", "value_re", "value_im", "expected_re", "expected_im", "error", "tolerance", "pass"],
    );
    let mut checks = Vec::new();
    for (name, contour, expected) in [
        ("eta_gamma1", Contour::Gamma1, one),
        ("eta_gamma2", Contour::Gamma2, -one),
        ("eta_alpha", Contour::Alpha, one * r.r1),
        ("eta_beta", Contour::Beta, one * r.r2),
    ] {
        let v = eta.period_integral(curve, contour, cfg.quad_tol)?;
        let c = Check::below(name, (v - expected).norm(), PERIOD_TOL);
        t.push(vec![
            name.into(),
            v.re.into(),
            v.im.into(),
            expected.re.into(),
            expected.im.into(),
            c.value.into(),
            c.tolerance.into(),
            c.pass().into(),
        ]);
        checks.push(c);
    }

    let toroidal = is_toroidal(r.r1, r.r2, TOROIDAL_BOUND, TOROIDAL_TOL);
    let c = Check::above("toroidal", toroidal as i64 as f64, 0.5).diagnostic();
    t.push(vec![
        "toroidal".into(),
        c.value.into(),
        0.0.into(),
        f64::NAN.into(),
        f64::NAN.into(),
        f64::NAN.into(),
        f64::NAN.into(),
        c.pass().into(),
    ]);
    checks.push(c);

    let shift = generic_draw(&map, cfg.seed, 0)?;
    let e = cut_errors(&map, shift, cfg.cut_points)?;
    let rows = [
        Check::below("cut_alpha_phi", e.alpha_phi, CUT_TOL),
        Check::below("cut_beta_phi", e.beta_phi, CUT_TOL),
        Check::below("cut_alpha_phi_straight_mod1", e.alpha_phi_mod1, CUT_TOL).diagnostic(),
        Check::below("cut_beta_phi_straight_mod1", e.beta_phi_mod1, CUT_TOL).diagnostic(),
        Check::below("cut_alpha_frak_t", e.alpha_frak_t, CUT_TOL),
        Check::below("cut_beta_frak_t", e.beta_frak_t, CUT_TOL),
    ];
    for c in rows {
        t.push(vec![
            c.name.as_str().into(),
            c.value.into(),
            0.0.into(),
            0.0.into(),
            0.0.into(),
            c.value.into(),
            c.tolerance.into(),
            c.pass().into(),
        ]);
        checks.push(c);
    }
    let log = vec![
        format!("r1 = {:.17e}, r2 = {:.17e}, toroidal: {toroidal}", r.r1, r.r2),
        format!("straight-path cut offsets of phi2: {:?}", e.offsets),
    ];
    Ok(Report { tables: vec![t], checks, log, ..Default::default() })
}
