//! Zero counts of `𝔗_c` and the congruence between the image of its zero
//! divisor and `d(ε)(c) + κ(ε)`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::abel_jacobi::PeriodMap;
use crate::config::RunConfig;
use crate::curve::Pair;
use crate::error::{Error, Result};
use crate::riemann::{boundary_log_integrals, count_zeros, verify_thm51, Kappa1Variant, RiemannConstants, Thm51Report, ThetaPullback, ZeroCount};
use crate::sampling::{random_shift, stream};

use super::{checks_table, complex_cells, frac_dist, max_of, Cell, Check, Report, Table};

/// Stream offset of the congruence samples.
pub const STREAM_BASE: u64 = 10_000;
pub const LOG_INTEGRAL_TOL: f64 = 1e-8;
const MAX_DRAWS: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct Thm51Sample {
    pub index: usize,
    /// Draws rejected by the genericity guard or for zeros too close to a
    /// contour or to each other.
    pub resamples: usize,
    pub count: ZeroCount,
    pub report: Thm51Report,
    /// `(1/2π√-1)·∫_α d log 𝔗_c`.
    pub alpha_integral: Complex64,
    /// `(1/2π√-1)·∫_β d log 𝔗_c - (-½τ - (φ1(q0) - c1))`.
    pub beta_error: Complex64,
}

/// Draw shifts from stream `STREAM_BASE + index` until one is generic.
pub fn sample(map: &PeriodMap, constants: &RiemannConstants, seed: u64, index: usize, quad_tol: f64) -> Result<Thm51Sample> {
    let mut rng = stream(seed, STREAM_BASE + index as u64);
    let tau = map.curve().tau().value();
    let mut last = Error::DegenerateC("no draws".into());
    for resamples in 0..MAX_DRAWS {
        let c: Pair = random_shift(&mut rng, map.curve());
        let attempt = (|| -> Result<Thm51Sample> {
            let tp = ThetaPullback::new(map, c);
            let count = count_zeros(&tp)?;
            let report = verify_thm51(map, constants, c, quad_tol)?;
            let (alpha_integral, beta) = boundary_log_integrals(&tp)?;
            let beta_error = beta - (-0.5 * tau - (map.phi1(map.curve().q0()) - c.0));
            Ok(Thm51Sample { index, resamples, count, report, alpha_integral, beta_error })
        })();
        match attempt {
            Err(e) if e.is_resample() => last = e,
            other => return other,
        }
    }
    Err(last)
}

fn variant_name(v: Option<Kappa1Variant>) -> &'static str {
    match v {
        Some(Kappa1Variant::HalfTau) => "half_tau",
        Some(Kappa1Variant::FullTau) => "full_tau",
        None => "none",
    }
}

pub fn samples(map: &PeriodMap, constants: &RiemannConstants, seed: u64, n: usize, quad_tol: f64) -> Vec<Result<Thm51Sample>> {
    (0..n).into_par_iter().map(|i| sample(map, constants, seed, i, quad_tol)).collect()
}

pub fn run(cfg: &RunConfig) -> Result<Report> {
    let map = cfg.period_map()?;
    let constants = RiemannConstants::new(&map, map.curve().eps(), cfg.quad_tol)?;
    let results = samples(&map, &constants, cfg.seed, cfg.samples, cfg.quad_tol);
    let tol = cfg.congruence_tol;

    let mut header = vec!["index", "status", "resamples", "c1_re", "c1_im", "c2_re", "c2_im", "n_zeros"];
    header.extend([
        "boundary_winding",
        "gamma1_winding",
        "gamma2_winding",
        "q1_re",
        "q1_im",
        "q2_re",
        "q2_im",
        "alpha_log_integral_re",
        "alpha_log_integral_im",
        "beta_log_error_re",
        "beta_log_error_im",
        "residual_half_tau",
        "residual_full_tau",
        "first_coordinate_half_tau",
        "first_coordinate_full_tau",
        "closing_variant",
        "residual_corrected",
        "slit_consistency",
    ]);
    let mut table = Table::new("thm51", &header);
    let mut log = Vec::new();
    let mut ok = Vec::new();
    let mut errors = 0usize;
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(s) => {
                let rep = &s.report;
                let mut row: Vec<Cell> = vec![i.into(), "ok".into(), s.resamples.into()];
                row.extend(complex_cells(rep.c.0));
                row.extend(complex_cells(rep.c.1));
                row.push(s.count.n.into());
                row.extend([s.count.boundary_winding.into(), s.count.gamma1_winding.into(), s.count.gamma2_winding.into()]);
                row.extend(complex_cells(rep.zeros[0]));
                row.extend(complex_cells(rep.zeros[1]));
                row.extend(complex_cells(s.alpha_integral));
                row.extend(complex_cells(s.beta_error));
                row.extend([
                    rep.half.residual_norm().into(),
                    rep.full.residual_norm().into(),
                    rep.first_coordinate_residual(Kappa1Variant::HalfTau).into(),
                    rep.first_coordinate_residual(Kappa1Variant::FullTau).into(),
                    variant_name(rep.closing_variant(tol)).into(),
                    rep.corrected.residual_norm().into(),
                    rep.slit_consistency.into(),
                ]);
                table.push(row);
                ok.push(s);
            }
            Err(e) => {
                errors += 1;
                log.push(format!("sample {i}: {e}"));
                let mut row: Vec<Cell> = vec![i.into(), format!("error: {e}").into()];
                row.resize(header.len(), Cell::Real(f64::NAN));
                table.push(row);
            }
        }
    }

    let m = |f: &dyn Fn(&Thm51Sample) -> f64| max_of(ok.iter().map(f));
    let half = m(&|s| s.report.half.residual_norm());
    let full = m(&|s| s.report.full.residual_norm());
    let closing = if half <= full { Kappa1Variant::HalfTau } else { Kappa1Variant::FullTau };
    let closes = half.min(full) < tol;
    let checks = vec![
        Check::below("sample_errors", errors as f64, 0.5),
        Check::below("zero_count_not_two", ok.iter().filter(|s| s.count.n != 2).count() as f64, 0.5),
        Check::below("alpha_log_integral", m(&|s| s.alpha_integral.norm()), LOG_INTEGRAL_TOL),
        Check::below("alpha_log_integral_mod1", m(&|s| frac_dist(s.alpha_integral)), LOG_INTEGRAL_TOL).diagnostic(),
        Check::below("beta_log_integral", m(&|s| s.beta_error.norm()), LOG_INTEGRAL_TOL),
        Check::below("beta_log_integral_mod1", m(&|s| frac_dist(s.beta_error)), LOG_INTEGRAL_TOL).diagnostic(),
        Check::below("congruence_closing_variant", half.min(full), tol),
        Check::below("congruence_half_tau", half, tol).diagnostic(),
        Check::below("congruence_full_tau", full, tol).diagnostic(),
        Check::below("first_coordinate_half_tau", m(&|s| s.report.first_coordinate_residual(Kappa1Variant::HalfTau)), tol)
            .diagnostic(),
        Check::below("first_coordinate_full_tau", m(&|s| s.report.first_coordinate_residual(Kappa1Variant::FullTau)), tol)
            .diagnostic(),
        Check::below("congruence_corrected", m(&|s| s.report.corrected.residual_norm()), tol).diagnostic(),
        Check::below("slit_consistency", m(&|s| s.report.slit_consistency), tol).diagnostic(),
    ];
    let windings: std::collections::BTreeSet<i64> = ok.iter().map(|s| s.alpha_integral.re.round() as i64).collect();
    log.push(format!(
        "closing kappa1 variant: {} (max residual {half:.3e} half, {full:.3e} full; tolerance {tol:.1e})",
        if closes { variant_name(Some(closing)) } else { "none" }
    ));
    log.push(format!("alpha log-integral windings seen: {windings:?}"));
    let beta_offsets: std::collections::BTreeSet<i64> = ok.iter().map(|s| s.beta_error.re.round() as i64).collect();
    log.push(format!("beta log-integral integer offsets seen: {beta_offsets:?}"));
    log.push(format!("resamples: {}", ok.iter().map(|s| s.resamples).sum::<usize>()));
    Ok(Report { tables: vec![table, checks_table("thm51_summary", &checks)], checks, log, ..Default::default() })
}
