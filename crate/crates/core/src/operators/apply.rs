//! The generalized operators `K_P`, `A_P = d/dt ∘ K_P`, `B_P = K_P ∘ d/dt`
//! and the classical operators obtained by specializing `P` and the kernel.

use std::sync::Arc;

use super::engine::{side_integral, Cells, Side};
use super::kernel::{Fn2, Kernel, OperatorBinding, ParameterSet, Variant};
use crate::error::{Error, Result};
use crate::numerics::{fd_derivative, gamma, Grid, SampledFunction};

fn check_grid(binding: &OperatorBinding, grid: &Grid) -> Result<()> {
    if grid.matches(binding.p.a, binding.p.b) {
        Ok(())
    } else {
        Err(Error::Input(format!(
            "grid [{}, {}] does not match the operator interval [{}, {}]",
            grid.a(),
            grid.b(),
            binding.p.a,
            binding.p.b
        )))
    }
}

/// `K_P[f](t_j) = λ ∫_a^{t_j} k(t_j, τ) f dτ + μ ∫_{t_j}^b k(τ, t_j) f dτ`.
///
/// For kernels flagged with a corner singularity the first node is filled by
/// linear extrapolation and listed in [`SampledFunction::extrapolated`].
pub fn k_apply(binding: &OperatorBinding, f: &SampledFunction) -> Result<SampledFunction> {
    integrate(binding, f.grid(), &Cells::nodal(f.values()))
}

fn integrate(binding: &OperatorBinding, grid: Grid, f: &Cells) -> Result<SampledFunction> {
    check_grid(binding, &grid)?;
    let ParameterSet { lambda, mu, .. } = binding.p;
    let mut out = vec![0.0; grid.len()];
    for (w, side) in [(lambda, Side::Left), (mu, Side::Right)] {
        if w != 0.0 {
            let part = side_integral(&binding.kernel, &grid, f, side)?;
            out.iter_mut().zip(part).for_each(|(o, v)| *o += w * v);
        }
    }
    let mut flagged = Vec::new();
    if binding.kernel.corner_singular() {
        out[0] = 2.0 * out[1] - out[2];
        flagged.push(0);
    }
    if let Some(j) = out.iter().position(|v| !v.is_finite()) {
        return Err(Error::Numeric(format!("kernel integral is not finite at node {j} (t = {})", grid.node(j))));
    }
    SampledFunction::from_parts(grid, out, flagged)
}

/// `A_P[f] = d/dt K_P[f]` by second-order finite differences.
///
/// For singular kernels the derivative blows up where the integration
/// starts, so the first node (left term present) and the last node (right
/// term present) are extrapolated and flagged.
pub fn a_apply(binding: &OperatorBinding, f: &SampledFunction) -> Result<SampledFunction> {
    let k = k_apply(binding, f)?;
    let grid = k.grid();
    let mut d = SampledFunction::new(grid, fd_derivative(k.values(), grid.h()))?;
    let singular = !binding.kernel.is_bounded();
    if (singular && binding.p.lambda != 0.0) || binding.kernel.corner_singular() {
        d.extrapolate_endpoint(0);
    }
    if singular && binding.p.mu != 0.0 {
        d.extrapolate_endpoint(grid.n());
    }
    Ok(d)
}

/// `B_P[f] = K_P[f']`, where `f'` is the derivative of the piecewise-linear
/// interpolant of `f`: constant on each cell and equal to the difference
/// quotient there. Each cell then carries exactly the increment of `f`,
/// which keeps the result accurate when `f'` is singular at an endpoint.
pub fn b_apply(binding: &OperatorBinding, f: &SampledFunction) -> Result<SampledFunction> {
    let grid = f.grid();
    let h = grid.h();
    let slopes = f.values().windows(2).map(|w| (w[1] - w[0]) / h).collect();
    integrate(binding, grid, &Cells::constant(slopes))
}

/// Order of a classical operator: a constant or a function `α(t, τ)`.
#[derive(Clone)]
pub enum Order {
    /// Fixed order in (0,1).
    Constant(f64),
    /// Variable order with values in (0,1).
    Variable(Fn2),
}

impl From<f64> for Order {
    fn from(v: f64) -> Self {
        Order::Constant(v)
    }
}

/// The classical fractional operators expressible through `K_P`, `A_P`, `B_P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassicalOp {
    /// Left Riemann-Liouville integral.
    RLIntLeft,
    /// Right Riemann-Liouville integral.
    RLIntRight,
    /// Left Riemann-Liouville derivative.
    RLDerLeft,
    /// Right Riemann-Liouville derivative.
    RLDerRight,
    /// Left Caputo derivative.
    CaputoLeft,
    /// Right Caputo derivative.
    CaputoRight,
    /// Left Hadamard integral.
    HadamardLeft,
    /// Left variable-order integral.
    VarOrderIntLeft,
    /// Left variable-order Caputo derivative.
    VarOrderCaputoLeft,
}

/// Binding that realizes a classical operator on `[a, b]`, with the sign the
/// result of the underlying generalized operator must be multiplied by.
pub fn classical_binding(op: ClassicalOp, order: &Order, a: f64, b: f64) -> Result<(OperatorBinding, f64)> {
    use ClassicalOp::*;
    let constant = |o: &Order| match o {
        Order::Constant(v) => Ok(*v),
        Order::Variable(_) => Err(Error::Config(format!("{op:?} needs a constant order"))),
    };
    let variable = |o: &Order| -> Fn2 {
        match o {
            Order::Constant(v) => {
                let v = *v;
                Arc::new(move |_, _| v)
            }
            Order::Variable(f) => f.clone(),
        }
    };
    let left = ParameterSet::left(a, b)?;
    let right = ParameterSet::right(a, b)?;
    let (p, kernel, sign) = match op {
        RLIntLeft => (left, Kernel::power_law(constant(order)?, Variant::Integral)?, 1.0),
        RLIntRight => (right, Kernel::power_law(constant(order)?, Variant::Integral)?, 1.0),
        RLDerLeft | CaputoLeft => (left, Kernel::power_law(constant(order)?, Variant::Derivative)?, 1.0),
        RLDerRight | CaputoRight => (right, Kernel::power_law(constant(order)?, Variant::Derivative)?, -1.0),
        HadamardLeft => (left, Kernel::hadamard(constant(order)?)?, 1.0),
        VarOrderIntLeft => {
            let al = variable(order);
            (left, Kernel::variable_order(move |t, s| al(t, s), Variant::Integral), 1.0)
        }
        VarOrderCaputoLeft => {
            let al = variable(order);
            (left, Kernel::variable_order(move |t, s| al(t, s), Variant::Derivative), 1.0)
        }
    };
    Ok((OperatorBinding::new(p, kernel)?, sign))
}

/// Applies a classical operator to `f` on the grid of `f`.
pub fn classical(op: ClassicalOp, order: impl Into<Order>, f: &SampledFunction) -> Result<SampledFunction> {
    use ClassicalOp::*;
    let order = order.into();
    let grid = f.grid();
    if let Order::Variable(al) = &order {
        let nodes = grid.nodes();
        let bad = nodes.iter().any(|&t| nodes.iter().any(|&s| s <= t && !(al(t, s) > 0.0 && al(t, s) < 1.0)));
        if bad {
            return Err(Error::Domain("variable order must take values in (0,1)".into()));
        }
    }
    let (binding, sign) = classical_binding(op, &order, grid.a(), grid.b())?;
    let out = match op {
        RLIntLeft | RLIntRight | HadamardLeft | VarOrderIntLeft => k_apply(&binding, f)?,
        RLDerLeft | RLDerRight => a_apply(&binding, f)?,
        CaputoLeft | CaputoRight | VarOrderCaputoLeft => b_apply(&binding, f)?,
    };
    if sign == 1.0 {
        Ok(out)
    } else {
        let flagged = out.extrapolated().to_vec();
        let v = out.into_values().into_iter().map(|x| sign * x).collect();
        SampledFunction::from_parts(grid, v, flagged)
    }
}

/// `K_α = (b - a)^α / Γ(α + 1)`, the operator-norm bound of `I^α` on `[a, b]`.
pub fn boundedness_constant(order: f64, a: f64, b: f64) -> Result<f64> {
    if !(order > 0.0 && order < 1.0) {
        return Err(Error::Domain(format!("order must lie in (0,1), got {order}")));
    }
    if b <= a {
        return Err(Error::Input(format!("interval requires b > a, got [{a}, {b}]")));
    }
    Ok((b - a).powf(order) / gamma(order + 1.0)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_grid(n: usize) -> Grid {
        Grid::new(0.0, 1.0, n).unwrap()
    }

    #[test]
    fn zero_in_zero_out() {
        let g = unit_grid(32);
        let b = OperatorBinding::new(
            ParameterSet::new(0.0, 1.0, 0.7, -0.2).unwrap(),
            Kernel::power_law(0.4, Variant::Integral).unwrap(),
        )
        .unwrap();
        let z = SampledFunction::zeros(g);
        assert_eq!(k_apply(&b, &z).unwrap().sup_norm(), 0.0);
        assert_eq!(a_apply(&b, &z).unwrap().sup_norm(), 0.0);
        assert_eq!(b_apply(&b, &z).unwrap().sup_norm(), 0.0);
    }

    #[test]
    fn volterra_example() {
        let g = unit_grid(512);
        let b =
            OperatorBinding::new(ParameterSet::left(0.0, 1.0).unwrap(), Kernel::difference(|s| (-s).exp())).unwrap();
        let y = SampledFunction::from_fn(g, |t| -1.0 - t).unwrap();
        let k = k_apply(&b, &y).unwrap();
        for (t, v) in g.nodes().iter().zip(k.values()) {
            assert!((v + t).abs() < 1e-6);
        }
    }

    #[test]
    fn half_integral_of_one() {
        let g = unit_grid(256);
        let one = SampledFunction::from_fn(g, |_| 1.0).unwrap();
        let v = classical(ClassicalOp::RLIntLeft, 0.5, &one).unwrap();
        // I^{1/2}[1](1) = 1 / Γ(3/2) = 2 / √π.
        assert!((v.values()[256] - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-6);
    }

    #[test]
    fn caputo_of_constant_is_zero() {
        let g = unit_grid(128);
        let five = SampledFunction::from_fn(g, |_| 5.0).unwrap();
        let b = OperatorBinding::new(
            ParameterSet::new(0.0, 1.0, 0.3, 0.8).unwrap(),
            Kernel::power_law(0.6, Variant::Derivative).unwrap(),
        )
        .unwrap();
        assert!(b_apply(&b, &five).unwrap().sup_norm() < 1e-12);
    }

    #[test]
    fn mismatched_grid_is_rejected() {
        let g = Grid::new(0.0, 2.0, 16).unwrap();
        let b = OperatorBinding::new(ParameterSet::left(0.0, 1.0).unwrap(), Kernel::difference(|_| 1.0)).unwrap();
        assert!(matches!(k_apply(&b, &SampledFunction::zeros(g)), Err(Error::Input(_))));
    }

    #[test]
    fn non_finite_kernel_names_the_node() {
        let g = unit_grid(8);
        let k = Kernel::general(|t, _| if t > 0.5 { f64::NAN } else { 1.0 }, 0.0).unwrap();
        let b = OperatorBinding::new(ParameterSet::left(0.0, 1.0).unwrap(), k).unwrap();
        let one = SampledFunction::from_fn(g, |_| 1.0).unwrap();
        match k_apply(&b, &one) {
            Err(Error::Numeric(msg)) => assert!(msg.contains("node 5"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn order_type_mismatch_is_a_configuration_error() {
        let g = unit_grid(8);
        let f = SampledFunction::zeros(g);
        let var = Order::Variable(Arc::new(|_, _| 0.5));
        assert!(matches!(classical(ClassicalOp::RLIntLeft, var, &f), Err(Error::Config(_))));
    }

    #[test]
    fn boundedness_constant_examples() {
        let pi = std::f64::consts::PI;
        assert!((boundedness_constant(0.5, 0.0, pi).unwrap() - 2.0).abs() < 1e-12);
        assert!((boundedness_constant(0.25, 0.0, pi).unwrap() - 1.4688).abs() < 1e-3);
        assert!((boundedness_constant(1.0 - 1e-9, 0.0, 1.0).unwrap() - 1.0).abs() < 1e-8);
        assert!(boundedness_constant(1.0, 0.0, 1.0).is_err());
    }
}
