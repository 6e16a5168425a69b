//! Riemann-type inversion: the pullback `𝔗_c` of the generalized theta
//! function, its zeros, its Laurent data at `p2` and the congruence relating
//! the image of its divisor to `d(ε)(c) + κ(ε)`.

pub mod constants;
pub mod laurent;
pub mod pullback;
pub mod theorem;
pub mod zeros;

pub use constants::{a_eps, RiemannConstants};
pub use laurent::{g_closed, g_func, LaurentData, Mobius};
pub use pullback::{ThetaPullback, GENERICITY_TOL};
pub use theorem::{corrected_d2, d_map, slit_term, verify_thm51, Kappa1Variant, Thm51Report};
pub use zeros::{boundary_log_integrals, count_zeros, locate_zeros, ZeroCount};

#[cfg(test)]
pub(crate) mod fixtures {
    use num_complex::Complex64;

    use crate::abel_jacobi::PeriodMap;
    use crate::curve::{NodalCurveSpec, Pair};
    use crate::theta::SeriesPolicy;

    pub fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub fn map() -> PeriodMap {
        let spec = NodalCurveSpec {
            tau: c(0.0, 1.0),
            p1: c(0.62, 0.55),
            p2: c(0.31, 0.38),
            z0: c(0.15, 0.8),
            q0: c(0.0, 0.0),
            delta: 0.05,
            eps: 0.05,
            policy: SeriesPolicy::default(),
            quad_tol: 1e-12,
        };
        PeriodMap::new(spec.validate().unwrap()).unwrap()
    }

    /// Oblique lattice whose `p2` sits on the line `t = 1/4`.
    pub fn oblique_map() -> PeriodMap {
        let spec = NodalCurveSpec {
            tau: c(0.3, 0.8),
            p1: c(0.7, 0.5),
            p2: c(0.35, 0.2),
            z0: c(0.2, 0.6),
            q0: c(0.0, 0.0),
            delta: 0.05,
            eps: 0.05,
            policy: SeriesPolicy::default(),
            quad_tol: 1e-12,
        };
        PeriodMap::new(spec.validate().unwrap()).unwrap()
    }

    pub const SHIFTS: [Pair; 3] = [
        (Complex64::new(0.37, 0.21), Complex64::new(0.13, -0.05)),
        (Complex64::new(0.7, 0.4), Complex64::new(0.5, 0.2)),
        (Complex64::new(0.1, 0.9), Complex64::new(-0.3, 0.1)),
    ];
}
