//! Continuous logarithms of nonvanishing functions along a real parameter.
//!
//! A [`ContinuousLog`] samples `q(s)` on an adaptive set of knots such that
//! the principal argument of `q(s_{k+1}) / q(s_k)` stays below `π/4` and is
//! confirmed by the midpoint; between knots the argument is recovered from
//! the nearest knot. This is the only place where a branch is chosen.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_STEP_ARG: f64 = PI / 4.0;
const CONSISTENCY: f64 = 1e-9;
const MIN_WIDTH: f64 = 1e-13;
/// Uniform pre-split so that exact periodicities cannot alias the first
/// midpoint test.
const INITIAL_PIECES: usize = 16;

#[derive(Debug, Clone)]
struct Knot {
    s: f64,
    value: Complex64,
    arg: f64,
}

#[derive(Debug, Clone)]
pub struct ContinuousLog {
    knots: Vec<Knot>,
}

fn checked(q: Complex64, s: f64) -> Result<Complex64> {
    if q.norm() == 0.0 || !q.re.is_finite() || !q.im.is_finite() {
        return Err(Error::BranchStepTooLarge(s.abs().max(MIN_WIDTH)));
    }
    Ok(q)
}

impl ContinuousLog {
    /// Track `arg q(s)` for `s` in `[a, b]`, starting from the principal
    /// argument of `q(a)`.
    pub fn build<F>(mut q: F, a: f64, b: f64) -> Result<Self>
    where
        F: FnMut(f64) -> Result<Complex64>,
    {
        let qa = checked(q(a)?, a)?;
        let qb = checked(q(b)?, b)?;
        let mut knots = vec![Knot { s: a, value: qa, arg: qa.arg() }];
        let mut nodes = vec![(a, qa)];
        for k in 1..INITIAL_PIECES {
            let s = a + (b - a) * k as f64 / INITIAL_PIECES as f64;
            nodes.push((s, checked(q(s)?, s)?));
        }
        nodes.push((b, qb));
        // depth-first over [lo, hi] keeps knots ordered
        let mut stack: Vec<_> = nodes.windows(2).rev().map(|w| (w[0].0, w[0].1, w[1].0, w[1].1)).collect();
        while let Some((lo, qlo, hi, qhi)) = stack.pop() {
            let mid = 0.5 * (lo + hi);
            let qmid = checked(q(mid)?, mid)?;
            let whole = (qhi / qlo).arg();
            let first = (qmid / qlo).arg();
            let second = (qhi / qmid).arg();
            let ok = whole.abs() < MAX_STEP_ARG
                && first.abs() < MAX_STEP_ARG
                && second.abs() < MAX_STEP_ARG
                && (first + second - whole).abs() < CONSISTENCY;
            if ok {
                let base = knots.last().expect("knot").arg;
                knots.push(Knot { s: mid, value: qmid, arg: base + first });
                knots.push(Knot { s: hi, value: qhi, arg: base + first + second });
                continue;
            }
            if (hi - lo).abs() < MIN_WIDTH {
                return Err(Error::BranchStepTooLarge(hi - lo));
            }
            stack.push((mid, qmid, hi, qhi));
            stack.push((lo, qlo, mid, qmid));
        }
        Ok(Self { knots })
    }

    /// Net change of the continuous argument from `a` to `b`.
    pub fn arg_change(&self) -> f64 {
        self.knots.last().expect("knot").arg - self.knots[0].arg
    }

    /// `arg_change / 2π`; an integer for closed contours.
    pub fn winding(&self) -> f64 {
        self.arg_change() / (2.0 * PI)
    }

    /// `log q(b) - log q(a)` along the tracked branch.
    pub fn log_increment(&self) -> Complex64 {
        let first = &self.knots[0];
        let last = self.knots.last().expect("knot");
        Complex64::new((last.value.norm() / first.value.norm()).ln(), last.arg - first.arg)
    }

    /// Continuous `log q(s)` for `s` inside the tracked range, given the
    /// already computed value `q(s)`; the branch at `s = a` is principal.
    pub fn log_at(&self, s: f64, value: Complex64) -> Complex64 {
        let idx = self.knots.partition_point(|k| k.s <= s);
        let j = match idx {
            0 => 0,
            i if i >= self.knots.len() => self.knots.len() - 1,
            i => {
                if (self.knots[i].s - s).abs() < (s - self.knots[i - 1].s).abs() {
                    i
                } else {
                    i - 1
                }
            }
        };
        let k = &self.knots[j];
        Complex64::new(value.norm().ln(), k.arg + (value / k.value).arg())
    }

    pub fn len(&self) -> usize {
        self.knots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.knots.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::e_real;

    #[test]
    fn winding_of_power_map() {
        for k in [-3i32, -1, 0, 2, 5] {
            let log = ContinuousLog::build(|u| Ok(e_real(u).powi(k) * 2.0), 0.0, 1.0).unwrap();
            assert!((log.winding() - k as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn log_at_interpolates_continuously() {
        // log of z along the unit circle is i·2πu
        let log = ContinuousLog::build(|u| Ok(e_real(u)), 0.0, 1.0).unwrap();
        for u in [0.1, 0.49, 0.51, 0.93, 1.0] {
            let v = log.log_at(u, e_real(u));
            assert!((v - Complex64::new(0.0, 2.0 * PI * u)).norm() < 1e-12, "{u} {v}");
        }
    }

    #[test]
    fn zero_on_path_is_an_error() {
        let r = ContinuousLog::build(|s| Ok(Complex64::new(s - 0.5, 0.0)), 0.0, 1.0);
        assert!(r.is_err());
    }
}
