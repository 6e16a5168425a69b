//! The period map `φ = (φ1, φ2)` from the base point `z0`, with `φ2`
//! continued along explicit polylines.
//!
//! `φ1(P) = z(P) - z0`. For `φ2` we use the closed form
//! `φ2 = (1/2π√-1)·log[θ[½;½](z-p1)/θ[½;½](z-p2)] + kappa_coeff·(z - z0)`
//! with the logarithm continued along the path. Only `e(φ2)` is
//! single-valued; it is exposed separately as [`PeriodMap::e_phi2`].

use num_complex::Complex64;

use crate::branch::ContinuousLog;
use crate::curve::{NodalCurve, Pair};
use crate::differentials::ThirdKindDifferential;
use crate::error::{Error, Result};
use crate::theta::{e_func, TWO_PI_I};

/// A polyline in the `z`-plane together with the value of `φ2` at its
/// first vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchedPath {
    pub vertices: Vec<Complex64>,
    pub start_value: Complex64,
}

impl BranchedPath {
    pub fn from_base(vertices: Vec<Complex64>) -> Self {
        Self { vertices, start_value: Complex64::new(0.0, 0.0) }
    }

    pub fn end(&self) -> Complex64 {
        *self.vertices.last().expect("nonempty path")
    }

    /// Append the anticlockwise `n`-gon inscribed in the circle of radius
    /// `radius` about `center`, starting and ending at the current end.
    pub fn with_loop(mut self, center: Complex64, n: usize) -> Self {
        let start = self.end() - center;
        for k in 1..=n {
            let rot = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64);
            self.vertices.push(center + start * rot);
        }
        self
    }

    fn point_at(&self, s: f64) -> Complex64 {
        let n = self.vertices.len() - 1;
        if n == 0 {
            return self.vertices[0];
        }
        let k = (s.floor() as usize).min(n - 1);
        let frac = s - k as f64;
        self.vertices[k] + (self.vertices[k + 1] - self.vertices[k]) * frac
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbelJacobiValue {
    pub phi1: Complex64,
    pub phi2: Complex64,
}

impl AbelJacobiValue {
    pub fn pair(&self) -> Pair {
        (self.phi1, self.phi2)
    }
}

fn segment_distance(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let s = ((p - a) * d.conj()).re / len2;
    (a + d * s.clamp(0.0, 1.0) - p).norm()
}

/// `φ2` continued along a parametrized curve `z(s)`, `s ∈ [a, b]`.
pub struct Phi2Continuation<'a, F> {
    map: &'a PeriodMap,
    curve: F,
    log: ContinuousLog,
    start_z: Complex64,
    start_log: Complex64,
    start_value: Complex64,
}

impl<'a, F> Phi2Continuation<'a, F>
where
    F: Fn(f64) -> Complex64,
{
    pub fn value(&self, s: f64) -> Result<Complex64> {
        let z = (self.curve)(s);
        let q = self.map.eta.quotient(z)?;
        let lg = self.log.log_at(s, q);
        Ok(self.start_value + (lg - self.start_log) / TWO_PI_I + self.map.eta.kappa_coeff() * (z - self.start_z))
    }
}

/// The period map of a validated curve.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodMap {
    curve: NodalCurve,
    eta: ThirdKindDifferential,
    quotient_at_base: Complex64,
}

impl PeriodMap {
    pub fn new(curve: NodalCurve) -> Result<Self> {
        let eta = ThirdKindDifferential::new(&curve);
        let quotient_at_base = eta.quotient(curve.z0())?;
        Ok(Self { curve, eta, quotient_at_base })
    }

    pub fn curve(&self) -> &NodalCurve {
        &self.curve
    }

    pub fn eta(&self) -> &ThirdKindDifferential {
        &self.eta
    }

    pub fn phi1(&self, z: Complex64) -> Complex64 {
        z - self.curve.z0()
    }

    /// `e(φ2(z)) = Q(z)/Q(z0) · e(kappa_coeff·(z - z0))`, single-valued
    /// and meromorphic with a simple zero at `p1` and a simple pole at `p2`.
    pub fn e_phi2(&self, z: Complex64) -> Result<Complex64> {
        let q = self.eta.quotient(z)?;
        Ok(q / self.quotient_at_base * e_func(self.eta.kappa_coeff() * (z - self.curve.z0())))
    }

    /// Minimal clearance from the poles required of any path.
    pub fn clearance(&self) -> f64 {
        0.25 * self.curve.delta().min(self.curve.eps())
    }

    fn pole_images(&self) -> Vec<Complex64> {
        let tau = self.curve.tau().value();
        let mut out = Vec::with_capacity(18);
        for p in [self.curve.p1(), self.curve.p2()] {
            for i in -1..=1 {
                for j in -1..=1 {
                    out.push(p + i as f64 + tau * j as f64);
                }
            }
        }
        out
    }

    /// Distance from the polyline to the nearest pole image.
    pub fn path_clearance(&self, vertices: &[Complex64]) -> f64 {
        let poles = self.pole_images();
        let mut best = f64::INFINITY;
        for seg in vertices.windows(2) {
            for &p in &poles {
                best = best.min(segment_distance(seg[0], seg[1], p));
            }
        }
        if vertices.len() == 1 {
            for &p in &poles {
                best = best.min((vertices[0] - p).norm());
            }
        }
        best
    }

    /// The default path from `z0`: the straight segment when it keeps
    /// clear of the poles, else a two-segment detour through the centre of
    /// the parallelogram or, failing that, through one of a fixed list of
    /// interior waypoints.
    pub fn default_path(&self, target: Complex64) -> Result<BranchedPath> {
        let z0 = self.curve.z0();
        let min = self.clearance();
        let straight = vec![z0, target];
        let d = self.path_clearance(&straight);
        if d >= min {
            return Ok(BranchedPath::from_base(straight));
        }
        let mut waypoints = vec![self.curve.center()];
        for (s, t) in [(0.25, 0.25), (0.75, 0.25), (0.25, 0.75), (0.75, 0.75), (0.5, 0.1), (0.5, 0.9), (0.1, 0.5), (0.9, 0.5)] {
            waypoints.push(self.curve.point(s, t));
        }
        for w in waypoints {
            let path = vec![z0, w, target];
            if self.path_clearance(&path) >= min {
                return Ok(BranchedPath::from_base(path));
            }
        }
        Err(Error::PoleProximity { distance: d, minimum: min })
    }

    /// Continue `φ2` along the curve `z(s)`, `s ∈ [a, b]`, from the value
    /// `start_value` at `z(a)`.
    pub fn continue_phi2<F>(&self, curve: F, a: f64, b: f64, start_value: Complex64) -> Result<Phi2Continuation<'_, F>>
    where
        F: Fn(f64) -> Complex64,
    {
        let log = ContinuousLog::build(|s| self.eta.quotient(curve(s)), a, b)?;
        let start_z = curve(a);
        let start_log = log.log_at(a, self.eta.quotient(start_z)?);
        Ok(Phi2Continuation { map: self, curve, log, start_z, start_log, start_value })
    }

    /// `φ2` at the end of `path`.
    pub fn phi2(&self, path: &BranchedPath) -> Result<Complex64> {
        let min = self.clearance();
        let d = self.path_clearance(&path.vertices);
        if d < min {
            return Err(Error::PoleProximity { distance: d, minimum: min });
        }
        self.phi2_unchecked(path)
    }

    /// `φ2` along a path that may come closer to the poles than the
    /// default clearance (e.g. small loops around them).
    pub fn phi2_unchecked(&self, path: &BranchedPath) -> Result<Complex64> {
        if path.vertices.len() < 2 {
            return Ok(path.start_value);
        }
        let n = (path.vertices.len() - 1) as f64;
        let cont = self.continue_phi2(|s| path.point_at(s), 0.0, n, path.start_value)?;
        cont.value(n)
    }

    pub fn phi(&self, path: &BranchedPath) -> Result<AbelJacobiValue> {
        Ok(AbelJacobiValue { phi1: self.phi1(path.end()), phi2: self.phi2(path)? })
    }

    /// `φ(P)` along the default path.
    pub fn phi_default(&self, p: Complex64) -> Result<AbelJacobiValue> {
        self.phi(&self.default_path(p)?)
    }

    /// Signed number of times the polyline crosses the slit `[p1, p2]`,
    /// counted `+1` when the crossing turns anticlockwise about `p1`.
    pub fn slit_crossings(&self, vertices: &[Complex64]) -> i64 {
        let (p1, p2) = (self.curve.p1(), self.curve.p2());
        let v = p2 - p1;
        let cross = |a: Complex64, b: Complex64| (a.conj() * b).im;
        let mut n = 0;
        for w in vertices.windows(2) {
            let d = w[1] - w[0];
            let den = cross(v, d);
            if den == 0.0 {
                continue;
            }
            // w0 + s·d = p1 + u·v
            let r = w[0] - p1;
            let s = cross(r, v) / den;
            let u = cross(r, d) / den;
            if (0.0..1.0).contains(&s) && u > 0.0 && u < 1.0 {
                n += den.signum() as i64;
            }
        }
        n
    }

    /// `φ` on the parallelogram slit along `[p1, p2]`, where `φ2` is
    /// single-valued: the default-path value with one unit removed per
    /// anticlockwise crossing of the slit.
    pub fn phi_slit(&self, p: Complex64) -> Result<AbelJacobiValue> {
        let path = self.default_path(p)?;
        let mut v = self.phi(&path)?;
        v.phi2 -= self.slit_crossings(&path.vertices) as f64;
        Ok(v)
    }

    /// Componentwise sum of `φ` over the points of a divisor.
    pub fn divisor_image(&self, points: &[(Complex64, BranchedPath)]) -> Result<Pair> {
        let mut acc = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for (p, path) in points {
            if (path.end() - p).norm() > 1e-12 {
                return Err(Error::InvalidParameter("path does not end at the divisor point".into()));
            }
            let v = self.phi(path)?;
            acc.0 += v.phi1;
            acc.1 += v.phi2;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::NodalCurveSpec;
    use crate::quadrature;
    use crate::theta::SeriesPolicy;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn map() -> PeriodMap {
        let curve = NodalCurveSpec {
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
        .validate()
        .unwrap();
        PeriodMap::new(curve).unwrap()
    }

    #[test]
    fn base_point_maps_to_origin() {
        let m = map();
        let v = m.phi_default(m.curve().z0()).unwrap();
        assert_eq!(v.phi1, c(0.0, 0.0));
        assert!(v.phi2.norm() < 1e-15);
        let shifted = m.phi_default(m.curve().z0() + 0.25).unwrap();
        assert!((shifted.phi1 - 0.25).norm() < 1e-15);
    }

    #[test]
    fn closed_form_matches_quadrature() {
        let m = map();
        for p in [c(0.9, 0.1), c(0.05, 0.05), c(0.5, 0.95), c(0.4, 0.5)] {
            let path = m.default_path(p).unwrap();
            let closed = m.phi2(&path).unwrap();
            let quad = quadrature::integrate_polyline(|z| m.eta().eta_coeff(z), &path.vertices, 1e-11).unwrap();
            assert!((closed - quad).norm() < 1e-9, "{p}: {closed} vs {quad}");
            // e(φ2) is single-valued
            let e = m.e_phi2(p).unwrap();
            assert!((e_func(closed) - e).norm() < 1e-10 * e.norm());
        }
    }

    #[test]
    fn loop_monodromy_around_poles() {
        let m = map();
        let p1 = m.curve().p1();
        let p2 = m.curve().p2();
        let base = m.default_path(p1 + 0.05).unwrap();
        let before = m.phi2_unchecked(&base).unwrap();
        let after = m.phi2_unchecked(&base.clone().with_loop(p1, 64)).unwrap();
        assert!((after - before - 1.0).norm() < 1e-10);
        let base = m.default_path(p2 + 0.05).unwrap();
        let before = m.phi2_unchecked(&base).unwrap();
        let after = m.phi2_unchecked(&base.clone().with_loop(p2, 64)).unwrap();
        assert!((after - before + 1.0).norm() < 1e-10);
    }

    #[test]
    fn detour_when_straight_path_hits_a_pole() {
        let m = map();
        let z0 = m.curve().z0();
        let p2 = m.curve().p2();
        let beyond = z0 + (p2 - z0) * 1.5;
        let path = m.default_path(beyond).unwrap();
        assert_eq!(path.vertices.len(), 3);
        assert!(m.path_clearance(&path.vertices) >= m.clearance());
        assert!(m.phi2(&BranchedPath::from_base(vec![z0, beyond])).is_err());
    }

    #[test]
    fn e_phi2_vanishes_at_p1() {
        let m = map();
        let p1 = m.curve().p1();
        let mut prev = f64::INFINITY;
        for k in 2..7 {
            let v = m.e_phi2(p1 + c(10f64.powi(-k), 0.0)).unwrap().norm();
            assert!(v < prev);
            assert!(v < 100.0 * 10f64.powi(-k));
            prev = v;
        }
    }

    #[test]
    fn divisor_image_is_symmetric() {
        let m = map();
        let a = c(0.3, 0.7);
        let b = c(0.8, 0.2);
        let pa = (a, m.default_path(a).unwrap());
        let pb = (b, m.default_path(b).unwrap());
        let ab = m.divisor_image(&[pa.clone(), pb.clone()]).unwrap();
        let ba = m.divisor_image(&[pb, pa]).unwrap();
        assert_eq!(ab, ba);
        let z0 = m.curve().z0();
        let twice = m.divisor_image(&[(z0, m.default_path(z0).unwrap()), (z0, m.default_path(z0).unwrap())]).unwrap();
        assert!(twice.0.norm() < 1e-15 && twice.1.norm() < 1e-15);
    }

    #[test]
    fn cut_jumps_on_slit_domain() {
        let m = map();
        let tau = m.curve().tau().value();
        let r = m.curve().periods();
        let mut offsets = std::collections::BTreeSet::new();
        for k in 0..20 {
            let s = (k as f64 + 0.5) / 20.0;
            let (a, b) = (m.phi_slit(c(s, 0.0)).unwrap(), m.phi_slit(c(s, 0.0) + tau).unwrap());
            assert!((b.phi1 - a.phi1 - tau).norm() < 1e-12);
            assert!((b.phi2 - a.phi2 - r.r2).norm() < 1e-10);
            let (l, rt) = (m.phi_slit(tau * s).unwrap(), m.phi_slit(tau * s + 1.0).unwrap());
            assert!((l.phi1 - rt.phi1 + 1.0).norm() < 1e-12);
            assert!((l.phi2 - rt.phi2 + r.r1).norm() < 1e-10);
            // the straight-path value differs by whole units only
            let d = m.phi_default(c(s, 0.0) + tau).unwrap().phi2 - m.phi_default(c(s, 0.0)).unwrap().phi2 - r.r2;
            assert!((d - d.re.round()).norm() < 1e-10);
            offsets.insert(d.re.round() as i64);
        }
        assert_eq!(offsets.into_iter().collect::<Vec<_>>(), vec![-1, 0]);
    }

    #[test]
    fn slit_crossing_sign() {
        let m = map();
        let (p1, p2) = (m.curve().p1(), m.curve().p2());
        let mid = 0.5 * (p1 + p2);
        let n = (p2 - p1) * c(0.0, 1.0);
        assert_eq!(m.slit_crossings(&[mid - n, mid + n]), 1);
        assert_eq!(m.slit_crossings(&[mid + n, mid - n]), -1);
        assert_eq!(m.slit_crossings(&[mid + n, mid + 2.0 * n]), 0);
        // a loop about p1 alone crosses once, anticlockwise
        let lp = BranchedPath::from_base(vec![p1 + 0.03]).with_loop(p1, 16);
        let v = m.phi2_unchecked(&lp).unwrap();
        assert!((v - 1.0).norm() < 1e-10);
        assert_eq!(m.slit_crossings(&lp.vertices), 1);
    }
}
