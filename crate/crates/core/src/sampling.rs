//! Reproducible random draws. Every sample index gets its own ChaCha8
//! stream under the run seed, so results do not depend on scheduling.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::{NodalCurve, Pair};

/// Half-height of the strip from which `Im c2` is drawn.
pub const C2_IM_HALF_WIDTH: f64 = 0.25;

pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `c1 = s + tτ` with `s, t` uniform in `[0, 1)`; `c2` uniform in
/// `[0, 1) × [-C2_IM_HALF_WIDTH, C2_IM_HALF_WIDTH]`.
pub fn random_shift<R: RngExt>(rng: &mut R, curve: &NodalCurve) -> Pair {
    let s: f64 = rng.random();
    let t: f64 = rng.random();
    let re: f64 = rng.random();
    let im = rng.random_range(-C2_IM_HALF_WIDTH..=C2_IM_HALF_WIDTH);
    (s + curve.tau().value() * t, Complex64::new(re, im))
}

/// A uniform point of the parallelogram at `q0`.
pub fn random_point<R: RngExt>(rng: &mut R, curve: &NodalCurve) -> Complex64 {
    let s: f64 = rng.random();
    let t: f64 = rng.random();
    curve.point(s, t)
}
