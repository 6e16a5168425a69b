//! Generalized theta functions, the Abel–Jacobi map and generalized Riemann
//! constants for the nodal curve obtained from an elliptic curve `ℂ/(ℤ+τℤ)`
//! by identifying two points `p1`, `p2`.

pub mod abel_jacobi;
pub mod branch;
pub mod branches;
pub mod config;
pub mod curve;
pub mod differentials;
pub mod error;
pub mod quadrature;
pub mod riemann;
pub mod sampling;
pub mod suites;
pub mod theta;

pub use error::{Error, Result};
pub use num_complex::Complex64;
