//! Numerical toolkit for generalized fractional operators.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: uniform grids with sampled functions, quadrature, special
//!   functions and a Jacobi eigensolver;
//! * [`operators`]: the kernel operators `K_P`, `A_P`, `B_P` and their
//!   classical special cases;
//! * [`variational`]: functionals `∫ F(y, K_P y, y', B_P y, t) dt` and the
//!   residuals of their optimality conditions;
//! * [`sturm_liouville`]: a Ritz solver for fractional Sturm-Liouville
//!   problems and direct minimization over Ritz coefficients.

pub mod error;
pub mod numerics;
pub mod operators;
pub mod sturm_liouville;
pub mod variational;

pub use error::{Error, Result};
pub use numerics::{Grid, SampledFunction, SymmetricMatrix};
pub use operators::{Kernel, OperatorBinding, ParameterSet, Variant};
