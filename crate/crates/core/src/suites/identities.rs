//! Quasi-periodicity and translation relations of the theta series.

use num_complex::Complex64;
use rand::RngExt;

use crate::config::RunConfig;
use crate::error::Result;
use crate::sampling::stream;
use crate::theta::{
    rho0_factor, theta_char, translation_factor, Characteristic, GeneralizedTheta, LatticeGenerator, ModularParameter,
    SeriesPolicy,
};

use super::{max_of, Check, Report, Table};

pub const IDENTITY_TOL: f64 = 1e-10;
pub const ODD_ZERO_TOL: f64 = 1e-12;

fn rel(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

fn random_z<R: RngExt>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Largest relative error of each identity over `n` random draws; stream
/// `row` of `seed` feeds row `row`.
pub fn identity_errors(tau: ModularParameter, r1: f64, r2: f64, policy: SeriesPolicy, n: usize, seed: u64) -> Result<Vec<(&'static str, f64)>> {
    let t = tau.value();
    let th = |ch, z| theta_char(ch, z, tau, &policy);
    let big = GeneralizedTheta::new(tau, r1, r2, policy);
    let mut out = Vec::new();

    let mut rng = stream(seed, 0);
    let mut errs = Vec::with_capacity(n);
    for _ in 0..n {
        let z = random_z(&mut rng);
        errs.push(rel(th(Characteristic::ZERO, z + 1.0)?, th(Characteristic::ZERO, z)?));
    }
    out.push(("theta_period_one", max_of(errs.drain(..))));

    let mut rng = stream(seed, 1);
    for _ in 0..n {
        let z = random_z(&mut rng);
        let rhs = rho0_factor(LatticeGenerator::Tau, z, tau) * th(Characteristic::ZERO, z)?;
        errs.push(rel(th(Characteristic::ZERO, z + t)?, rhs));
    }
    out.push(("theta_period_tau", max_of(errs.drain(..))));

    let mut rng = stream(seed, 2);
    for _ in 0..n {
        let z = random_z(&mut rng);
        let ch = Characteristic::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let p: i64 = rng.random_range(-3..=3);
        let q: i64 = rng.random_range(-3..=3);
        let lhs = th(ch, z + p as f64 + t * q as f64)?;
        errs.push(rel(lhs, translation_factor(ch, p, q, z, tau) * th(ch, z)?));
    }
    out.push(("translation_relation", max_of(errs.drain(..))));

    let mut rng = stream(seed, 3);
    for _ in 0..n {
        let z = random_z(&mut rng);
        let w = random_z(&mut rng) * 0.5;
        errs.push(rel(big.value(z + 1.0, w + r1)?, big.value(z, w)?));
    }
    out.push(("big_theta_period_one", max_of(errs.drain(..))));

    let mut rng = stream(seed, 4);
    for _ in 0..n {
        let z = random_z(&mut rng);
        let w = random_z(&mut rng) * 0.5;
        let rhs = rho0_factor(LatticeGenerator::Tau, z, tau) * big.value(z, w)?;
        errs.push(rel(big.value(z + t, w + r2)?, rhs));
    }
    out.push(("big_theta_period_tau", max_of(errs.drain(..))));

    let mut rng = stream(seed, 5);
    for _ in 0..n {
        let z = random_z(&mut rng);
        errs.push(rel(th(Characteristic::ZERO, -z)?, th(Characteristic::ZERO, z)?));
    }
    out.push(("theta_even", max_of(errs.drain(..))));

    out.push(("odd_theta_at_origin", th(Characteristic::ODD, Complex64::new(0.0, 0.0))?.norm()));
    Ok(out)
}

pub fn run(cfg: &RunConfig) -> Result<Report> {
    let curve = cfg.curve()?;
    let p = curve.periods();
    let errs = identity_errors(curve.tau(), p.r1, p.r2, curve.policy(), cfg.identity_samples, cfg.seed)?;
    let checks: Vec<Check> = errs
        .iter()
        .map(|&(name, e)| Check::below(name, e, if name == "odd_theta_at_origin" { ODD_ZERO_TOL } else { IDENTITY_TOL }))
        .collect();
    let mut t = Table::new("identities", &["test", "tau_re", "tau_im", "samples", "max_error", "tolerance", "pass"]);
    let tau = curve.tau().value();
    for c in &checks {
        let n = if c.name == "odd_theta_at_origin" { 1 } else { cfg.identity_samples };
        t.push(vec![c.name.as_str().into(), tau.re.into(), tau.im.into(), n.into(), c.value.into(), c.tolerance.into(), c.pass().into()]);
    }
    Ok(Report { tables: vec![t], checks, ..Default::default() })
}
