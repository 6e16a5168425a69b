//! Run configuration: a flat `key = value` file with `#` comments.
//!
//! Keys are namespaced `curve.*`, `tol.*` and `run.*`; complex values are
//! written `re,im` and lists are whitespace separated.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::abel_jacobi::PeriodMap;
use crate::curve::{NodalCurve, NodalCurveSpec};
use crate::error::{Error, Result};
use crate::theta::SeriesPolicy;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub tau: Complex64,
    pub p1: Complex64,
    pub p2: Complex64,
    pub z0: Complex64,
    pub q0: Complex64,
    pub delta: f64,
    /// Radius of the disk around `p2`; every candidate must be at most this.
    pub eps: f64,
    pub eps_candidates: Vec<f64>,
    pub series_tol: f64,
    pub series_max_index: usize,
    pub quad_tol: f64,
    /// Threshold on mod-Γ residuals of the congruence.
    pub congruence_tol: f64,
    pub newton_tol: f64,
    pub newton_max_iters: usize,
    /// Threshold on `|Θ(u - β_k(u))|`.
    pub zero_set_tol: f64,
    pub seed: u64,
    /// Shifts `c` for the congruence suite.
    pub samples: usize,
    /// Random draws per row of the identity suite.
    pub identity_samples: usize,
    /// Shifts `c` per candidate in the epsilon selection.
    pub epsilon_shifts: usize,
    /// Points per cut in the cut-relation checks.
    pub cut_points: usize,
    /// Side of the `(s, t)` grid of curve points for the zero-set suite.
    pub grid: usize,
    /// Cells per side of the plotted grid.
    pub plot_resolution: usize,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        let c = Complex64::new;
        Self {
            tau: c(0.0, 1.0),
            p1: c(0.62, 0.55),
            p2: c(0.31, 0.38),
            z0: c(0.15, 0.8),
            q0: c(0.0, 0.0),
            delta: 0.05,
            eps: 0.05,
            eps_candidates: vec![0.05, 0.04, 0.03],
            series_tol: 1e-14,
            series_max_index: 64,
            quad_tol: 1e-12,
            congruence_tol: 1e-6,
            newton_tol: 1e-12,
            newton_max_iters: 40,
            zero_set_tol: 1e-6,
            seed: 20240601,
            samples: 20,
            identity_samples: 100,
            epsilon_shifts: 10,
            cut_points: 20,
            grid: 6,
            plot_resolution: 64,
            out: PathBuf::from("out"),
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    let x: f64 = v.trim().parse().map_err(|_| Error::Config(format!("{key}: not a number: {v:?}")))?;
    if !x.is_finite() {
        return Err(Error::Config(format!("{key}: not finite")));
    }
    Ok(x)
}

fn parse_complex(key: &str, v: &str) -> Result<Complex64> {
    let (re, im) = v.split_once(',').ok_or_else(|| Error::Config(format!("{key}: expected re,im, got {v:?}")))?;
    Ok(Complex64::new(parse_f64(key, re)?, parse_f64(key, im)?))
}

fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.trim().parse().map_err(|_| Error::Config(format!("{key}: not a non-negative integer: {v:?}")))
}

fn positive(key: &str, x: f64) -> Result<f64> {
    if x > 0.0 {
        Ok(x)
    } else {
        Err(Error::Config(format!("{key} must be positive")))
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        text.parse()
    }

    fn apply(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "curve.tau" => self.tau = parse_complex(key, v)?,
            "curve.p1" => self.p1 = parse_complex(key, v)?,
            "curve.p2" => self.p2 = parse_complex(key, v)?,
            "curve.z0" => self.z0 = parse_complex(key, v)?,
            "curve.q0" => self.q0 = parse_complex(key, v)?,
            "curve.delta" => self.delta = positive(key, parse_f64(key, v)?)?,
            "curve.eps" => self.eps = positive(key, parse_f64(key, v)?)?,
            "curve.eps_candidates" => {
                self.eps_candidates =
                    v.split_whitespace().map(|x| positive(key, parse_f64(key, x)?)).collect::<Result<_>>()?;
            }
            "tol.series" => self.series_tol = positive(key, parse_f64(key, v)?)?,
            "tol.series_max_index" => self.series_max_index = parse_usize(key, v)?,
            "tol.quad" => self.quad_tol = positive(key, parse_f64(key, v)?)?,
            "tol.congruence" => self.congruence_tol = positive(key, parse_f64(key, v)?)?,
            "tol.newton" => self.newton_tol = positive(key, parse_f64(key, v)?)?,
            "tol.zero_set" => self.zero_set_tol = positive(key, parse_f64(key, v)?)?,
            "run.newton_max_iters" => self.newton_max_iters = parse_usize(key, v)?,
            "run.seed" => self.seed = v.trim().parse().map_err(|_| Error::Config(format!("{key}: bad seed {v:?}")))?,
            "run.samples" => self.samples = parse_usize(key, v)?,
            "run.identity_samples" => self.identity_samples = parse_usize(key, v)?,
            "run.epsilon_shifts" => self.epsilon_shifts = parse_usize(key, v)?,
            "run.cut_points" => self.cut_points = parse_usize(key, v)?,
            "run.grid" => self.grid = parse_usize(key, v)?,
            "run.plot_resolution" => self.plot_resolution = parse_usize(key, v)?,
            "run.out" => self.out = PathBuf::from(v.trim()),
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    fn check(&self) -> Result<()> {
        if self.eps_candidates.is_empty() {
            return Err(Error::Config("curve.eps_candidates is empty".into()));
        }
        if let Some(e) = self.eps_candidates.iter().find(|&&e| e > self.eps) {
            return Err(Error::Config(format!("epsilon candidate {e} exceeds curve.eps = {}", self.eps)));
        }
        if self.grid == 0 || self.plot_resolution < 2 || self.cut_points == 0 {
            return Err(Error::Config("run.grid, run.cut_points and run.plot_resolution must be positive".into()));
        }
        self.curve().map(|_| ())
    }

    pub fn policy(&self) -> Result<SeriesPolicy> {
        SeriesPolicy::new(self.series_tol, self.series_max_index).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn curve_spec(&self) -> Result<NodalCurveSpec> {
        Ok(NodalCurveSpec {
            tau: self.tau,
            p1: self.p1,
            p2: self.p2,
            z0: self.z0,
            q0: self.q0,
            delta: self.delta,
            eps: self.eps,
            policy: self.policy()?,
            quad_tol: self.quad_tol,
        })
    }

    /// The validated curve; validation failures are configuration errors.
    pub fn curve(&self) -> Result<NodalCurve> {
        self.curve_spec()?.validate().map_err(|e| Error::Config(e.to_string()))
    }

    pub fn period_map(&self) -> Result<PeriodMap> {
        PeriodMap::new(self.curve()?).map_err(|e| Error::Config(e.to_string()))
    }
}

impl std::str::FromStr for RunConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut seen = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            let k = k.trim();
            if seen.insert(k.to_string(), lineno).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key {k:?}", lineno + 1)));
            }
            cfg.apply(k, v)?;
        }
        cfg.check()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let cfg: RunConfig = "# config\ncurve.tau = 0.3,0.8  # modulus\ncurve.p1 = 0.7,0.5\ncurve.p2=0.35,0.2\n\
                              curve.z0 = 0.2,0.6\ncurve.eps_candidates = 0.05 0.03\nrun.seed = 9\n"
            .parse()
            .unwrap();
        assert_eq!(cfg.tau, Complex64::new(0.3, 0.8));
        assert_eq!(cfg.eps_candidates, vec![0.05, 0.03]);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.samples, RunConfig::default().samples);
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            "curve.tau = 1",
            "curve.tau = 0,-1",
            "nope = 3",
            "run.seed = -1",
            "curve.eps_candidates = 0.1",
            "tol.quad = 0",
            "curve.delta = 0.05\ncurve.delta = 0.04",
            "just text",
        ] {
            assert!(matches!(text.parse::<RunConfig>(), Err(Error::Config(_))), "{text}");
        }
    }
}
