//! Theta functions of one variable with real characteristics, their
//! translation factors, and the two-variable theta function
//! `Θ(z, w) = θ[0;0](z) + θ[-r1; r2](z)·e(w)` that is automorphic for the
//! rank-3 period group.
//!
//! All series are truncated around their dominant term: with
//! `m* = -Im z / Im τ` the terms decay like `exp(-π Im τ (m - m*)²)` relative
//! to the largest one, so the index window is fixed by `abs_tol` alone.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const I: Complex64 = Complex64::new(0.0, 1.0);
pub const TWO_PI_I: Complex64 = Complex64::new(0.0, 2.0 * PI);

/// `e(x) = exp(2π√-1·x)`.
#[inline]
pub fn e_func(x: Complex64) -> Complex64 {
    (TWO_PI_I * x).exp()
}

/// `e(x)` for real `x`, exactly on the unit circle.
#[inline]
pub fn e_real(x: f64) -> Complex64 {
    Complex64::cis(2.0 * PI * x)
}

/// The modulus `τ` of the elliptic curve `ℂ / (ℤ + τℤ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModularParameter(Complex64);

impl ModularParameter {
    pub fn new(tau: Complex64) -> Result<Self> {
        #[allow(clippy::neg_cmp_op_on_partial_ord)] // rejects NaN too
        if !(tau.im > 0.0) || !tau.re.is_finite() || !tau.im.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "tau must have positive imaginary part, got {tau}"
            )));
        }
        Ok(Self(tau))
    }

    #[inline]
    pub fn value(self) -> Complex64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Characteristic {
    pub a: f64,
    pub b: f64,
}

impl Characteristic {
    pub const ZERO: Characteristic = Characteristic { a: 0.0, b: 0.0 };
    pub const ODD: Characteristic = Characteristic { a: 0.5, b: 0.5 };

    pub const fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }
}

/// Truncation policy shared by every theta series in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPolicy {
    abs_tol: f64,
    max_index: usize,
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        Self { abs_tol: 1e-14, max_index: 64 }
    }
}

impl SeriesPolicy {
    pub fn new(abs_tol: f64, max_index: usize) -> Result<Self> {
        if !(abs_tol > 0.0 && abs_tol < 1.0) {
            return Err(Error::InvalidParameter(format!("abs_tol must lie in (0,1), got {abs_tol}")));
        }
        if max_index < 1 {
            return Err(Error::InvalidParameter("max_index must be at least 1".into()));
        }
        Ok(Self { abs_tol, max_index })
    }

    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    /// Half-width `N` of the summation window: the smallest `N` with
    /// `exp(-π Im τ (N - 1)²) < abs_tol / 4`, plus one index of slack for
    /// the rounding of the window centre.
    pub fn half_width(&self, tau: ModularParameter) -> Result<usize> {
        let target = (4.0 / self.abs_tol).ln() / (PI * tau.value().im);
        let needed = 2 + target.sqrt().ceil() as usize;
        if needed > self.max_index {
            return Err(Error::NonConvergent { needed, max_index: self.max_index });
        }
        Ok(needed)
    }
}

/// Visit every retained term `(n + a, e(½(n+a)²τ + (n+a)(z+b)))`.
fn for_each_term(
    ch: Characteristic,
    z: Complex64,
    tau: ModularParameter,
    policy: &SeriesPolicy,
    mut visit: impl FnMut(f64, Complex64),
) -> Result<()> {
    let t = tau.value();
    let half = policy.half_width(tau)? as i64;
    // centre on the dominant term; `a` is only used to shift the window
    let centre = (-z.im / t.im - ch.a).round() as i64;
    let zb = z + ch.b;
    for n in (centre - half)..=(centre + half) {
        let m = n as f64 + ch.a;
        let x = 0.5 * m * m * t + m * zb;
        visit(m, e_func(x));
    }
    Ok(())
}

/// `θ[a;b](z, τ) = Σ_n e(½(n+a)²τ + (n+a)(z+b))`.
pub fn theta_char(
    ch: Characteristic,
    z: Complex64,
    tau: ModularParameter,
    policy: &SeriesPolicy,
) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for_each_term(ch, z, tau, policy, |_, term| acc += term)?;
    Ok(acc)
}

/// `∂θ[a;b]/∂z`, summed term by term.
pub fn theta_char_dz(
    ch: Characteristic,
    z: Complex64,
    tau: ModularParameter,
    policy: &SeriesPolicy,
) -> Result<Complex64> {
    Ok(theta_char_with_dz(ch, z, tau, policy)?.1)
}

/// Value and first z-derivative in one pass.
pub fn theta_char_with_dz(
    ch: Characteristic,
    z: Complex64,
    tau: ModularParameter,
    policy: &SeriesPolicy,
) -> Result<(Complex64, Complex64)> {
    let mut value = Complex64::new(0.0, 0.0);
    let mut deriv = Complex64::new(0.0, 0.0);
    for_each_term(ch, z, tau, policy, |m, term| {
        value += term;
        deriv += TWO_PI_I * m * term;
    })?;
    Ok((value, deriv))
}

/// Factor in `θ[a;b](z + p + qτ) = factor · θ[a;b](z)`.
pub fn translation_factor(ch: Characteristic, p: i64, q: i64, z: Complex64, tau: ModularParameter) -> Complex64 {
    let (p, q) = (p as f64, q as f64);
    e_func(-0.5 * q * q * tau.value() - q * (z + ch.b) + ch.a * p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeGenerator {
    One,
    Tau,
}

/// The theta factor of `θ[0;0]` on the generators of `Λ`.
pub fn rho0_factor(gen: LatticeGenerator, z: Complex64, tau: ModularParameter) -> Complex64 {
    match gen {
        LatticeGenerator::One => Complex64::new(1.0, 0.0),
        LatticeGenerator::Tau => e_func(-0.5 * tau.value() - z),
    }
}

/// The unitary character `ψ(p + qτ) = e(p·r1 + q·r2)`.
pub fn psi(p: i64, q: i64, r1: f64, r2: f64) -> Complex64 {
    e_real(p as f64 * r1 + q as f64 * r2)
}

/// `Θ(z, w) = θ[0;0](z) + θ[-r1; r2](z)·e(w)`.
pub fn big_theta(
    z: Complex64,
    w: Complex64,
    tau: ModularParameter,
    r1: f64,
    r2: f64,
    policy: &SeriesPolicy,
) -> Result<Complex64> {
    GeneralizedTheta::new(tau, r1, r2, *policy).value(z, w)
}

/// `Θ` bundled with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedTheta {
    pub tau: ModularParameter,
    pub r1: f64,
    pub r2: f64,
    pub policy: SeriesPolicy,
}

/// Value of `Θ` and its two partial derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaJet {
    pub value: Complex64,
    pub dz: Complex64,
    pub dw: Complex64,
}

impl GeneralizedTheta {
    pub fn new(tau: ModularParameter, r1: f64, r2: f64, policy: SeriesPolicy) -> Self {
        Self { tau, r1, r2, policy }
    }

    /// The characteristic `[-r1; r2]` of the `e(w)` coefficient.
    pub fn twisted(&self) -> Characteristic {
        Characteristic::new(-self.r1, self.r2)
    }

    pub fn value(&self, z: Complex64, w: Complex64) -> Result<Complex64> {
        let even = theta_char(Characteristic::ZERO, z, self.tau, &self.policy)?;
        let twisted = theta_char(self.twisted(), z, self.tau, &self.policy)?;
        Ok(even + twisted * e_func(w))
    }

    pub fn jet(&self, z: Complex64, w: Complex64) -> Result<ThetaJet> {
        let (even, even_dz) = theta_char_with_dz(Characteristic::ZERO, z, self.tau, &self.policy)?;
        let (tw, tw_dz) = theta_char_with_dz(self.twisted(), z, self.tau, &self.policy)?;
        let ew = e_func(w);
        Ok(ThetaJet {
            value: even + tw * ew,
            dz: even_dz + tw_dz * ew,
            dw: TWO_PI_I * tw * ew,
        })
    }
}

/// Cancellation-free evaluation of the odd theta function `θ[½;½]` near
/// its zero at the origin.
///
/// Pairing the terms `n` and `-n-1` gives
/// `θ[½;½](z) = Σ_{m ∈ ½+ℕ} c_m sin(2πmz)` with `c_m = -2 e(½m²τ) sin(πm)`,
/// from which `θ/z` and `θ'/θ - 1/z` follow through `sin(x)/x` and
/// `(x cos x - sin x)/x²`, both evaluated by Taylor series for small `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct OddTheta {
    tau: ModularParameter,
    policy: SeriesPolicy,
}

fn sinc(x: Complex64) -> Complex64 {
    if x.norm() < 0.25 {
        // 1 - x²/6 + x⁴/120 - ...
        let x2 = x * x;
        let mut term = Complex64::new(1.0, 0.0);
        let mut acc = term;
        for k in 1..12 {
            term *= -x2 / ((2 * k) as f64 * (2 * k + 1) as f64);
            acc += term;
        }
        acc
    } else {
        x.sin() / x
    }
}

/// `(x cos x - sin x) / x²`, odd in `x` with leading term `-x/3`.
fn kfun(x: Complex64) -> Complex64 {
    if x.norm() < 0.25 {
        // Σ_{j≥1} (-1)^j 2j x^{2j-1} / (2j+1)!
        let x2 = x * x;
        let mut power = x; // x^{2j-1}
        let mut fact = 6.0; // (2j+1)!
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..12 {
            let sign = if j % 2 == 1 { -1.0 } else { 1.0 };
            acc += power * (sign * 2.0 * j as f64 / fact);
            power *= x2;
            fact *= ((2 * j + 2) * (2 * j + 3)) as f64;
        }
        acc
    } else {
        (x * x.cos() - x.sin()) / (x * x)
    }
}

impl OddTheta {
    pub fn new(tau: ModularParameter, policy: SeriesPolicy) -> Self {
        Self { tau, policy }
    }

    fn for_each_mode(&self, z: Complex64, mut visit: impl FnMut(f64, Complex64)) -> Result<()> {
        let t = self.tau.value();
        let half = self.policy.half_width(self.tau)? as f64;
        let mmax = (z.im.abs() / t.im + half).ceil() as usize;
        for k in 0..=mmax {
            let m = k as f64 + 0.5;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 }; // sin(πm)
            let c = -2.0 * sign * e_func(0.5 * m * m * t);
            visit(m, c);
        }
        Ok(())
    }

    pub fn value(&self, z: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        self.for_each_mode(z, |m, c| acc += c * (2.0 * PI * m * z).sin())?;
        Ok(acc)
    }

    pub fn value_with_dz(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        self.for_each_mode(z, |m, c| {
            let x = 2.0 * PI * m * z;
            v += c * x.sin();
            d += c * 2.0 * PI * m * x.cos();
        })?;
        Ok((v, d))
    }

    /// `θ[½;½](z) / z`, finite and nonzero at `z = 0`.
    pub fn value_over_z(&self, z: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        self.for_each_mode(z, |m, c| {
            let k = 2.0 * PI * m;
            acc += c * k * sinc(k * z);
        })?;
        Ok(acc)
    }

    /// Logarithmic derivative `ℓ(z) = θ'(z)/θ(z)`.
    pub fn log_derivative(&self, z: Complex64) -> Result<Complex64> {
        let (v, d) = self.value_with_dz(z)?;
        if v.norm() == 0.0 {
            return Err(Error::PoleAt(z));
        }
        Ok(d / v)
    }

    /// `ℓ(z) - 1/z`, holomorphic at the origin where it vanishes.
    pub fn log_derivative_regular(&self, z: Complex64) -> Result<Complex64> {
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = Complex64::new(0.0, 0.0);
        self.for_each_mode(z, |m, c| {
            let k = 2.0 * PI * m;
            num += c * k * k * kfun(k * z);
            den += c * k * sinc(k * z);
        })?;
        Ok(num / den)
    }
}
