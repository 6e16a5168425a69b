//! Adaptive composite Gauss–Legendre quadrature for complex integrands on
//! real intervals and on polylines / circles in the plane.

use std::f64::consts::PI;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;

use crate::error::{Error, Result};

const ORDER: usize = 20;
const MAX_PANELS: usize = 4096;
const MIN_PANEL: f64 = 1e-12;
/// Relative floor against `Σ|f|·w`: evaluation noise of integrands with
/// cancelling denominators stops paying for bisection below it.
const ROUNDOFF: f64 = 1e-13;

fn rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let gl = GaussLegendre::new(ORDER.try_into().expect("nonzero order"));
        let mut pairs: Vec<(f64, f64)> = gl.as_node_weight_pairs().to_vec();
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        pairs
    })
}

/// Fixed-order Gauss–Legendre estimate on one panel.
pub fn gauss_panel<F>(f: &mut F, a: f64, b: f64) -> Result<Complex64>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    Ok(panel(f, a, b)?.0)
}

/// Panel estimate and `Σ|f|·w`, the scale of its rounding error.
fn panel<F>(f: &mut F, a: f64, b: f64) -> Result<(Complex64, f64)>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut mag = 0.0;
    for &(x, w) in rule() {
        let v = f(mid + half * x)?;
        acc += v * w;
        mag += v.norm() * w;
    }
    Ok((acc * half, mag * half.abs()))
}

/// Integrate `f` over `[a, b]` to absolute accuracy `tol`.
///
/// Each panel is bisected until the two-halves estimate agrees with the
/// whole-panel estimate to within the panel's share of `tol`.
pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<Complex64>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let length = (b - a).abs();
    let whole = gauss_panel(&mut f, a, b)?;
    let mut stack = vec![(a, b, whole)];
    let mut total = Complex64::new(0.0, 0.0);
    let mut panels = 0usize;
    let mut worst = 0.0f64;
    while let Some((lo, hi, est)) = stack.pop() {
        panels += 1;
        let mid = 0.5 * (lo + hi);
        let (left, lmag) = panel(&mut f, lo, mid)?;
        let (right, rmag) = panel(&mut f, mid, hi)?;
        let refined = left + right;
        let err = (refined - est).norm();
        let budget = tol * (hi - lo).abs() / length;
        if err <= budget || err <= ROUNDOFF * (lmag + rmag) || (hi - lo).abs() < MIN_PANEL {
            total += refined;
            continue;
        }
        worst = worst.max(err);
        if panels > MAX_PANELS {
            return Err(Error::QuadratureFailure { estimate: worst });
        }
        stack.push((mid, hi, right));
        stack.push((lo, mid, left));
    }
    Ok(total)
}

/// `∫ f(z) dz` along the straight segment from `za` to `zb`.
pub fn integrate_segment<F>(mut f: F, za: Complex64, zb: Complex64, tol: f64) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let dz = zb - za;
    integrate(|s| Ok(f(za + dz * s)? * dz), 0.0, 1.0, tol)
}

/// `∫ f(z) dz` along a polyline, splitting `tol` evenly across segments.
pub fn integrate_polyline<F>(mut f: F, vertices: &[Complex64], tol: f64) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let segments = vertices.len().saturating_sub(1).max(1) as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for pair in vertices.windows(2) {
        acc += integrate_segment(&mut f, pair[0], pair[1], tol / segments)?;
    }
    Ok(acc)
}

/// `∮ f(z) dz` over the anticlockwise circle `center + radius·e(u)`.
pub fn integrate_circle<F>(mut f: F, center: Complex64, radius: f64, tol: f64) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    integrate(
        |u| {
            let w = Complex64::cis(2.0 * PI * u) * radius;
            let dz = Complex64::new(0.0, 2.0 * PI) * w;
            Ok(f(center + w)? * dz)
        },
        0.0,
        1.0,
        tol,
    )
}
