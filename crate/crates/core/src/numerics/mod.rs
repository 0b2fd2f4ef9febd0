//! Low-level numerics shared by every other module.

mod eigen;
mod grid;
mod quadrature;
mod special;

pub use eigen::{symmetric_eigen, EigenDecomposition, SymmetricMatrix, MAX_EIGEN_DIM};
pub use grid::{Grid, SampledFunction};
pub use quadrature::{cumulative_trapezoid, singular_weights, trapezoid};
pub use special::{erfc, gamma, mittag_leffler, ML_ABS_TOL, ML_MAX_TERMS};

pub(crate) use grid::fd_derivative;
pub(crate) use quadrature::{power_moment_table, trapezoid_values, GAUSS8};
