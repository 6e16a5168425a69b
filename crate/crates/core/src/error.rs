use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("theta series did not reach tolerance within {max_index} terms (needed {needed})")]
    NonConvergent { needed: usize, max_index: usize },

    #[error("evaluation at a pole: z = {0}")]
    PoleAt(Complex64),

    #[error("path comes within {distance:.3e} of a pole (minimum {minimum:.3e})")]
    PoleProximity { distance: f64, minimum: f64 },

    #[error("branch continuation failed: step below {0:.3e} without resolving the argument")]
    BranchStepTooLarge(f64),

    #[error("adaptive quadrature exceeded its budget (estimated error {estimate:.3e})")]
    QuadratureFailure { estimate: f64 },

    #[error("contour passes through or too near a zero (winding {winding:.4})")]
    ContourThroughZero { winding: f64 },

    #[error("could not isolate simple zeros: {0}")]
    ZeroCollision(String),

    #[error("non-generic shift c: {0}")]
    DegenerateC(String),

    #[error("newton iteration diverged after {iterations} steps (residual {residual:.3e})")]
    NewtonDivergence { iterations: usize, residual: f64 },

    #[error("jacobian singular: |dF| = {0:.3e}")]
    JacobianSingular(f64),

    #[error("no epsilon candidate passed the period test")]
    NoValidEpsilon,

    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    /// Errors after which a fresh random shift `c` is worth trying.
    pub fn is_resample(&self) -> bool {
        matches!(
            self,
            Error::ContourThroughZero { .. }
                | Error::ZeroCollision(_)
                | Error::DegenerateC(_)
                | Error::BranchStepTooLarge(_)
        )
    }
}
