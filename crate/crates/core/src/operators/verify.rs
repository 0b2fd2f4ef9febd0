//! Numerical checks of integration by parts and of the semigroup law.

use super::apply::{classical, k_apply, ClassicalOp};
use super::kernel::{Kernel, OperatorBinding, ParameterSet};
use crate::error::{Error, Result};
use crate::numerics::{trapezoid, SampledFunction};

/// Both sides of `∫ f K_P[g] = ∫ g K_{P*}[f]` and their difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IbpReport {
    /// `∫ f K_P[g]`.
    pub lhs: f64,
    /// `∫ g K_{P*}[f]`.
    pub rhs: f64,
    /// `|lhs - rhs|`.
    pub residual: f64,
}

/// Evaluates both sides of the generalized integration-by-parts formula.
/// The two sides are computed independently, each with its own operator
/// application, so a failure of Fubini's theorem shows up as a residual.
pub fn verify_ibp(p: ParameterSet, kernel: Kernel, f: &SampledFunction, g: &SampledFunction) -> Result<IbpReport> {
    f.check_same_grid(g)?;
    let binding = OperatorBinding::new(p, kernel)?;
    let kg = k_apply(&binding, g)?;
    let kf = k_apply(&binding.dual(), f)?;
    let lhs = trapezoid(&f.mul(&kg)?);
    let rhs = trapezoid(&g.mul(&kf)?);
    Ok(IbpReport { lhs, rhs, residual: (lhs - rhs).abs() })
}

/// Sup-norm over interior nodes of `I^α I^β f - I^{α+β} f` (left-sided).
pub fn verify_semigroup(alpha: f64, beta: f64, f: &SampledFunction) -> Result<f64> {
    for (name, v) in [("alpha", alpha), ("beta", beta), ("alpha + beta", alpha + beta)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::Domain(format!("{name} must lie in (0,1), got {v}")));
        }
    }
    let lhs = classical(ClassicalOp::RLIntLeft, alpha, &classical(ClassicalOp::RLIntLeft, beta, f)?)?;
    let rhs = classical(ClassicalOp::RLIntLeft, alpha + beta, f)?;
    let diff = lhs.combine(1.0, &rhs, -1.0)?;
    Ok(diff.sup_over(1..=f.grid().n() - 1))
}
