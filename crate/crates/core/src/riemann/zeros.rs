//! Argument-principle counting and location of the zeros of `𝔗_c`.

use num_complex::Complex64;

use crate::branch::ContinuousLog;
use crate::curve::lattice_distance;
use crate::error::{Error, Result};
use crate::theta::{e_real, TWO_PI_I};

use super::pullback::ThetaPullback;

const SNAP_TOL: f64 = 0.1;
/// Zeros closer than this to a counting contour force a resample.
pub const CONTOUR_CLEARANCE: f64 = 1e-4;
const NEWTON_ITERS: usize = 60;
const ZERO_RESIDUAL: f64 = 1e-9;
const MIN_CELL: f64 = 1e-6;
const NEWTON_CELL: f64 = 0.125;
/// Relative distance kept between a cell edge and the pole.
const POLE_MARGIN: f64 = 0.05;

fn map_err(e: Error) -> Error {
    match e {
        Error::BranchStepTooLarge(w) => Error::ContourThroughZero { winding: w },
        other => other,
    }
}

/// Continuous log of `𝔗_c` along the closed or open polyline `vertices`.
fn polyline_log(tp: &ThetaPullback, vertices: &[Complex64]) -> Result<ContinuousLog> {
    let n = vertices.len() - 1;
    let at = |s: f64| {
        let k = (s.floor() as usize).min(n - 1);
        vertices[k] + (vertices[k + 1] - vertices[k]) * (s - k as f64)
    };
    ContinuousLog::build(|s| tp.value(at(s)), 0.0, n as f64).map_err(map_err)
}

fn snap(w: f64) -> Result<i64> {
    let r = w.round();
    if (w - r).abs() > SNAP_TOL {
        return Err(Error::ContourThroughZero { winding: w });
    }
    Ok(r as i64)
}

fn circle_winding(tp: &ThetaPullback, center: Complex64, radius: f64) -> Result<f64> {
    let log = ContinuousLog::build(|u| tp.value(center + radius * e_real(u)), 0.0, 1.0).map_err(map_err)?;
    Ok(log.winding())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroCount {
    /// Zeros of `𝔗_c` in the parallelogram, counted with multiplicity.
    pub n: i64,
    /// Raw winding of `𝔗_c` along the parallelogram boundary.
    pub boundary_winding: f64,
    /// Winding along the circle of radius `δ` about `p1`.
    pub gamma1_winding: f64,
    /// Winding along the circle of radius `ε` about `p2`.
    pub gamma2_winding: f64,
}

impl ZeroCount {
    /// Winding along the boundary of the parallelogram with both disks
    /// removed; equals `n` when no zero lies in a disk.
    pub fn punctured_winding(&self) -> f64 {
        self.boundary_winding - self.gamma1_winding - self.gamma2_winding
    }
}

fn boundary(tp: &ThetaPullback) -> [Complex64; 5] {
    let curve = tp.map().curve();
    [curve.point(0.0, 0.0), curve.point(1.0, 0.0), curve.point(1.0, 1.0), curve.point(0.0, 1.0), curve.point(0.0, 0.0)]
}

/// `n(𝔗_c)` as the boundary winding plus one for the simple pole at `p2`.
pub fn count_zeros(tp: &ThetaPullback) -> Result<ZeroCount> {
    tp.check_generic()?;
    let curve = tp.map().curve();
    let boundary_winding = polyline_log(tp, &boundary(tp))?.winding();
    let n = snap(boundary_winding)? + 1;
    let gamma1_winding = circle_winding(tp, curve.p1(), curve.delta())?;
    let gamma2_winding = circle_winding(tp, curve.p2(), curve.eps())?;
    snap(gamma1_winding)?;
    snap(gamma2_winding)?;
    Ok(ZeroCount { n, boundary_winding, gamma1_winding, gamma2_winding })
}

/// `(1/2π√-1)·∫ d log 𝔗_c` along `α` and along `β`, both from `q0`.
pub fn boundary_log_integrals(tp: &ThetaPullback) -> Result<(Complex64, Complex64)> {
    let curve = tp.map().curve();
    let q0 = curve.q0();
    let alpha = polyline_log(tp, &[q0, q0 + 1.0])?.log_increment() / TWO_PI_I;
    let beta = polyline_log(tp, &[q0, q0 + curve.tau().value()])?.log_increment() / TWO_PI_I;
    Ok((alpha, beta))
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    s0: f64,
    t0: f64,
    ws: f64,
    wt: f64,
}

/// Split point of `[lo, lo + w]` kept away from the pole coordinate `x`.
fn split(lo: f64, w: f64, x: f64) -> f64 {
    let mid = lo + 0.5 * w;
    if (x - mid).abs() > POLE_MARGIN * w {
        mid
    } else if x > mid {
        mid - 2.0 * POLE_MARGIN * w
    } else {
        mid + 2.0 * POLE_MARGIN * w
    }
}

/// Cut `[0, 1]` into `pieces` intervals with no breakpoint near `x`.
fn breakpoints(pieces: usize, x: f64) -> Vec<f64> {
    let h = 1.0 / pieces as f64;
    let mut b: Vec<f64> = (0..=pieces).map(|k| k as f64 * h).collect();
    for v in b.iter_mut().take(pieces).skip(1) {
        if (*v - x).abs() < POLE_MARGIN * h {
            *v += if x > *v { -2.0 } else { 2.0 } * POLE_MARGIN * h;
        }
    }
    b
}

fn cell_count(tp: &ThetaPullback, cell: Cell) -> Result<i64> {
    let curve = tp.map().curve();
    let Cell { s0, t0, ws, wt } = cell;
    let v = [
        curve.point(s0, t0),
        curve.point(s0 + ws, t0),
        curve.point(s0 + ws, t0 + wt),
        curve.point(s0, t0 + wt),
        curve.point(s0, t0),
    ];
    let winding = snap(polyline_log(tp, &v)?.winding())?;
    let (ps, pt) = curve.coords(curve.p2());
    let pole = (s0..s0 + ws).contains(&ps) && (t0..t0 + wt).contains(&pt);
    Ok(winding + pole as i64)
}

/// Newton iteration on `𝔗_c` with the analytic derivative.
pub fn newton_polish(tp: &ThetaPullback, start: Complex64) -> Option<Complex64> {
    let mut z = start;
    for _ in 0..NEWTON_ITERS {
        let (f, df) = tp.value_and_dz(z).ok()?;
        if df.norm() == 0.0 {
            return None;
        }
        let step = f / df;
        z -= step;
        if !z.re.is_finite() || !z.im.is_finite() {
            return None;
        }
        if step.norm() < 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    (tp.value(z).ok()?.norm() < ZERO_RESIDUAL).then_some(z)
}

fn inside(tp: &ThetaPullback, cell: Cell, z: Complex64) -> bool {
    let (s, t) = tp.map().curve().coords(z);
    let slack = 1e-9;
    s >= cell.s0 - slack && s <= cell.s0 + cell.ws + slack && t >= cell.t0 - slack && t <= cell.t0 + cell.wt + slack
}

/// The two zeros of `𝔗_c` in the parallelogram, by subdivision until each
/// cell holds one zero and Newton polishing inside that cell.
pub fn locate_zeros(tp: &ThetaPullback) -> Result<[Complex64; 2]> {
    let count = count_zeros(tp)?;
    if count.n != 2 {
        return Err(Error::ZeroCollision(format!("expected 2 zeros, counted {}", count.n)));
    }
    let (ps, pt) = tp.map().curve().coords(tp.map().curve().p2());
    let (bs, bt) = (breakpoints(4, ps), breakpoints(4, pt));
    let mut stack = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            stack.push(Cell { s0: bs[i], t0: bt[j], ws: bs[i + 1] - bs[i], wt: bt[j + 1] - bt[j] });
        }
    }
    let mut found: Vec<Complex64> = Vec::new();
    while let Some(cell) = stack.pop() {
        let k = cell_count(tp, cell)?;
        if k < 0 {
            return Err(Error::ContourThroughZero { winding: k as f64 });
        }
        if k == 0 {
            continue;
        }
        if k == 1 && cell.ws.max(cell.wt) <= NEWTON_CELL {
            let centre = tp.map().curve().point(cell.s0 + 0.5 * cell.ws, cell.t0 + 0.5 * cell.wt);
            if let Some(z) = newton_polish(tp, centre).filter(|&z| inside(tp, cell, z)) {
                found.push(z);
                continue;
            }
        }
        if cell.ws.min(cell.wt) < MIN_CELL {
            return Err(Error::ZeroCollision(format!("cannot isolate zeros near cell ({}, {})", cell.s0, cell.t0)));
        }
        let (ms, mt) = (split(cell.s0, cell.ws, ps), split(cell.t0, cell.wt, pt));
        let s_parts = [(cell.s0, ms - cell.s0), (ms, cell.s0 + cell.ws - ms)];
        let t_parts = [(cell.t0, mt - cell.t0), (mt, cell.t0 + cell.wt - mt)];
        for (s0, ws) in s_parts {
            for (t0, wt) in t_parts {
                stack.push(Cell { s0, t0, ws, wt });
            }
        }
    }
    if found.len() != 2 {
        return Err(Error::ZeroCollision(format!("isolated {} zeros", found.len())));
    }
    found.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    if (found[0] - found[1]).norm() < 1e-8 {
        return Err(Error::ZeroCollision("double zero".into()));
    }
    let curve = tp.map().curve();
    let tau = curve.tau().value();
    for &z in &found {
        if lattice_distance(z, curve.p1(), tau) <= curve.delta() || lattice_distance(z, curve.p2(), tau) <= curve.eps() {
            return Err(Error::ZeroCollision("zero inside an excised disk".into()));
        }
        let (s, t) = curve.coords(z);
        let edge = s.min(1.0 - s).min(t.min(1.0 - t));
        if edge * tau.im / tau.norm().max(1.0) < CONTOUR_CLEARANCE {
            return Err(Error::ContourThroughZero { winding: edge });
        }
    }
    Ok([found[0], found[1]])
}
