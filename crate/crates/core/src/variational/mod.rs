//! Functionals built on the generalized operators and the residuals of their
//! optimality conditions.

mod conditions;
mod lagrangian;
mod problem;

pub use conditions::{
    dissipative_parameter, el_residual, interior_nodes, interior_sup, isoperimetric_residual, natural_bc_residual,
    noether_drift, IsoperimetricReport, NoetherGenerator, NoetherReport,
};
pub use lagrangian::{Fn5, Lagrangian, PARTIAL_CHECK_POINTS};
pub use problem::{evaluate_functional, VariationalProblem, BOUNDARY_TOL, PARTIAL_CHECK_SEED};
