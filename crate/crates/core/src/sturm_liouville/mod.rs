//! Ritz solver for fractional Sturm-Liouville problems and direct
//! minimization of functionals over Ritz coefficients.

mod direct;
mod problem;
mod spectrum;

pub use direct::{
    coercivity_probe, direct_minimize, CoercivityReport, MinimizeOptions, MinimizeResult, RayProbe, PROBE_MAGNITUDES,
};
pub use problem::{RitzBasis, SLProblem, RESOLUTION_FACTOR};
pub use spectrum::{
    assemble, assemble_basis, converge, rayleigh_quotient, right_trace, sl_residual, solve_spectrum, ConvergenceTable,
    Spectrum, CONVERGENCE_RTOL, MONOTONE_TOL,
};
