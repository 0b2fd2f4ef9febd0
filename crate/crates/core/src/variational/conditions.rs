//! Residuals of first-order optimality conditions for functionals built on
//! `K_P` and `B_P`, plus the Noether quantity of a symmetry generator.

use super::lagrangian::Lagrangian;
use super::problem::{evaluate_functional, states, States, VariationalProblem};
use crate::error::{Error, Result};
use crate::numerics::{cumulative_trapezoid, fd_derivative, Grid, SampledFunction};
use crate::operators::{a_apply, b_apply, k_apply, OperatorBinding};

/// Indices entering residual sup-norms: the endpoints and the two nodes next
/// to each endpoint are excluded.
pub fn interior_nodes(grid: &Grid) -> std::ops::RangeInclusive<usize> {
    3..=grid.n().saturating_sub(3)
}

/// Sup-norm of `r` over [`interior_nodes`].
pub fn interior_sup(r: &SampledFunction) -> f64 {
    r.sup_over(interior_nodes(&r.grid()))
}

fn binding_of(problem: &VariationalProblem) -> Result<&OperatorBinding> {
    problem.binding.as_ref().ok_or_else(|| Error::Config("the problem has no operator binding".into()))
}

/// Weighted partials `k ∂_i F` at every node.
fn weighted_partials(l: &Lagrangian, s: &States, w: &[f64]) -> [Vec<f64>; 4] {
    let n = s.t.len();
    let mut d: [Vec<f64>; 4] = Default::default();
    for (i, di) in d.iter_mut().enumerate() {
        *di = (0..n).map(|j| w[j] * l.partial(i + 1, s.at(j))).collect();
    }
    d
}

fn sampled(grid: Grid, v: Vec<f64>) -> Result<SampledFunction> {
    SampledFunction::new(grid, v)
}

fn is_zero(v: &[f64]) -> bool {
    v.iter().all(|&x| x == 0.0)
}

/// Applies a dual operator, skipping the quadrature when the input is zero.
fn dual_apply(
    op: fn(&OperatorBinding, &SampledFunction) -> Result<SampledFunction>,
    dual: &OperatorBinding,
    grid: Grid,
    v: Vec<f64>,
) -> Result<SampledFunction> {
    if is_zero(&v) {
        return Ok(SampledFunction::zeros(grid));
    }
    op(dual, &sampled(grid, v)?)
}

/// Pointwise Euler-Lagrange residual
/// `d/dt[k ∂₃F] + A_{P*}[k ∂₄F] - k ∂₁F - K_{P*}[k ∂₂F]`,
/// with `k ≡ 1` for unweighted problems. Values near the endpoints are
/// returned but should be read through [`interior_sup`].
pub fn el_residual(problem: &VariationalProblem, y: &SampledFunction) -> Result<SampledFunction> {
    let binding = binding_of(problem)?;
    problem.check_boundary(y)?;
    let grid = y.grid();
    let s = states(problem, y)?;
    let w = problem.weight_values(&grid)?;
    let [d1, d2, d3, d4] = weighted_partials(&problem.lagrangian, &s, &w);
    let dual = binding.dual();
    let a4 = dual_apply(a_apply, &dual, grid, d4)?;
    let k2 = dual_apply(k_apply, &dual, grid, d2)?;
    let dd3 = fd_derivative(&d3, grid.h());
    let r = (0..grid.len()).map(|i| dd3[i] + a4.values()[i] - d1[i] - k2.values()[i]).collect();
    SampledFunction::from_parts(grid, r, a4.extrapolated().to_vec())
}

/// `|k ∂₃F + K_{P*}[k ∂₄F]|` at `t = a`, the one-sided value being
/// extrapolated linearly from the first two interior nodes.
pub fn natural_bc_residual(problem: &VariationalProblem, y: &SampledFunction) -> Result<f64> {
    if problem.ya.is_some() {
        return Err(Error::Precondition("the natural boundary condition applies only when y(a) is free".into()));
    }
    let binding = binding_of(problem)?;
    problem.check_boundary(y)?;
    let grid = y.grid();
    let s = states(problem, y)?;
    let w = problem.weight_values(&grid)?;
    let [_, _, d3, d4] = weighted_partials(&problem.lagrangian, &s, &w);
    let k4 = dual_apply(k_apply, &binding.dual(), grid, d4)?;
    let e: Vec<f64> = d3.iter().zip(k4.values()).map(|(a, b)| a + b).collect();
    Ok((2.0 * e[1] - e[2]).abs())
}

/// Outcome of [`isoperimetric_residual`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsoperimetricReport {
    /// Least-squares multiplier.
    pub lambda0: f64,
    /// Interior sup-norm of the Euler-Lagrange residual of `F - λ₀ G`.
    pub residual_sup: f64,
}

/// Recovers the multiplier `λ₀` of an isoperimetric problem by least squares
/// over interior nodes and reports the residual of `H = F - λ₀ G`.
pub fn isoperimetric_residual(
    problem: &VariationalProblem,
    constraint: &Lagrangian,
    xi_value: f64,
    y: &SampledFunction,
) -> Result<IsoperimetricReport> {
    let gproblem = problem.with_lagrangian(constraint.clone());
    let j = evaluate_functional(&gproblem, y)?;
    if (j - xi_value).abs() > 1e-6 {
        return Err(Error::Input(format!("constraint not met: J(y) = {j}, required {xi_value}")));
    }
    let ef = el_residual(problem, y)?;
    let eg = el_residual(&gproblem, y)?;
    let range = interior_nodes(&y.grid());
    if eg.sup_over(range.clone()) <= 1e-10 {
        return Err(Error::Degenerate("the constraint's Euler-Lagrange expression vanishes along y".into()));
    }
    let (mut fg, mut gg) = (0.0, 0.0);
    for i in range.clone() {
        fg += ef.values()[i] * eg.values()[i];
        gg += eg.values()[i] * eg.values()[i];
    }
    let lambda0 = fg / gg;
    let residual_sup = range.map(|i| (ef.values()[i] - lambda0 * eg.values()[i]).abs()).fold(0.0, f64::max);
    Ok(IsoperimetricReport { lambda0, residual_sup })
}

/// Generator `ξ(t, y)` of a one-parameter family `y ↦ y + ε ξ(t, y)`.
#[derive(Clone)]
pub struct NoetherGenerator {
    xi: std::sync::Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
}

impl NoetherGenerator {
    /// General generator.
    pub fn new(xi: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { xi: std::sync::Arc::new(xi) }
    }

    /// Constant shift `ξ ≡ c`.
    pub fn constant(c: f64) -> Self {
        Self::new(move |_, _| c)
    }

    /// `ξ(t, y)`.
    pub fn eval(&self, t: f64, y: f64) -> f64 {
        (self.xi)(t, y)
    }
}

/// Outcome of [`noether_drift`].
#[derive(Debug, Clone)]
pub struct NoetherReport {
    /// The quantity expected to be conserved, at every node.
    pub values: SampledFunction,
    /// `(max - min) / (1 + mean |C|)` over interior nodes.
    pub drift: f64,
    /// Set when `y` is not an accurate extremal.
    pub warning: Option<String>,
}

/// Evaluates the Noether conserved quantity along `y` and its drift.
///
/// When `ξ` is constant and `F` depends on the fourth slot only (detected
/// from vanishing partials along `y`), the quantity is `K_{P*}[∂₄F]`.
/// Otherwise it is `ξ ∂₃F` plus the running integral of
/// `D[ξ, ∂₄F] + I[ξ, ∂₂F]` with
/// `D[f, g] = f A_{P*}[g] + g B_P[f]` and `I[f, g] = -f K_{P*}[g] + g K_P[f]`.
pub fn noether_drift(
    problem: &VariationalProblem,
    y: &SampledFunction,
    gen: &NoetherGenerator,
) -> Result<NoetherReport> {
    let binding = binding_of(problem)?;
    let grid = y.grid();
    let el = el_residual(problem, y)?;
    let el_sup = interior_sup(&el);
    let warning = (el_sup >= 1e-2).then(|| format!("y is not an extremal: Euler-Lagrange residual {el_sup:.3e}"));
    let s = states(problem, y)?;
    let w = problem.weight_values(&grid)?;
    let [d1, d2, d3, d4] = weighted_partials(&problem.lagrangian, &s, &w);
    let xi: Vec<f64> = grid.nodes().iter().zip(y.values()).map(|(&t, &v)| gen.eval(t, v)).collect();
    let dual = binding.dual();
    let scale = 1.0 + d4.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let negligible = |v: &[f64]| v.iter().all(|x| x.abs() <= 1e-14 * scale);
    let constant_xi = xi.iter().all(|&x| x == xi[0]);
    let values = if constant_xi && negligible(&d1) && negligible(&d2) && negligible(&d3) {
        dual_apply(k_apply, &dual, grid, d4)?
    } else {
        let xi_f = sampled(grid, xi.clone())?;
        let a4 = dual_apply(a_apply, &dual, grid, d4.clone())?;
        let k2 = dual_apply(k_apply, &dual, grid, d2.clone())?;
        let bxi = b_apply(binding, &xi_f)?;
        let kxi = k_apply(binding, &xi_f)?;
        let bilinear: Vec<f64> = (0..grid.len())
            .map(|i| {
                let dterm = xi[i] * a4.values()[i] + d4[i] * bxi.values()[i];
                let iterm = -xi[i] * k2.values()[i] + d2[i] * kxi.values()[i];
                dterm + iterm
            })
            .collect();
        let cum = cumulative_trapezoid(&sampled(grid, bilinear)?);
        let v = (0..grid.len()).map(|i| xi[i] * d3[i] + cum.values()[i]).collect();
        sampled(grid, v)?
    };
    let range = interior_nodes(&grid);
    let slice = &values.values()[range];
    let max = slice.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = slice.iter().copied().fold(f64::INFINITY, f64::min);
    let mean_abs = slice.iter().map(|v| v.abs()).sum::<f64>() / slice.len() as f64;
    Ok(NoetherReport { values, drift: (max - min) / (1.0 + mean_abs), warning })
}

/// `δ(t) = (d/dt k(b, t)) / k(b, t)` by finite differences.
pub fn dissipative_parameter(weight: &SampledFunction) -> Result<SampledFunction> {
    if let Some(i) = weight.values().iter().position(|&v| v <= 0.0) {
        return Err(Error::Domain(format!("weight must be positive, found {} at node {i}", weight.values()[i])));
    }
    let d = weight.derivative();
    let v = d.values().iter().zip(weight.values()).map(|(a, b)| a / b).collect();
    SampledFunction::new(weight.grid(), v)
}
