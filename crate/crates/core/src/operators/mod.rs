//! Generalized kernel operators `K_P`, `A_P`, `B_P`, their dual parameter
//! sets, the classical fractional operators they specialize to, and
//! numerical checks of the associated identities.

mod apply;
mod engine;
mod kernel;
mod verify;

pub use apply::{a_apply, b_apply, boundedness_constant, classical, classical_binding, k_apply, ClassicalOp, Order};
pub use kernel::{dual, Fn1, Fn2, Kernel, KernelKind, OperatorBinding, ParameterSet, Variant};
pub use verify::{verify_ibp, verify_semigroup, IbpReport};
