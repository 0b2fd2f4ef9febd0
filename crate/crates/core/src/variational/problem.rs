//! Variational problems and evaluation of their functionals.

use super::lagrangian::Lagrangian;
use crate::error::{Error, Result};
use crate::numerics::{fd_derivative, trapezoid_values, Grid, SampledFunction};
use crate::operators::{b_apply, k_apply, OperatorBinding};

/// Tolerance on declared boundary values.
pub const BOUNDARY_TOL: f64 = 1e-10;

/// Seed of the partial-derivative self-check performed by
/// [`VariationalProblem::new`].
pub const PARTIAL_CHECK_SEED: u64 = 0x5eed;

/// `∫ F(y, K_P y, y', B_P y, t) dt`, optionally weighted by `k(b, t)`, with
/// optional boundary values.
#[derive(Debug, Clone)]
pub struct VariationalProblem {
    /// The integrand.
    pub lagrangian: Lagrangian,
    /// Operators feeding the second and fourth slots.
    pub binding: Option<OperatorBinding>,
    /// Prescribed `y(a)`.
    pub ya: Option<f64>,
    /// Prescribed `y(b)`.
    pub yb: Option<f64>,
    /// Samples of `k(b, t)` multiplying the integrand.
    pub weight: Option<SampledFunction>,
}

impl VariationalProblem {
    /// Builds an unconstrained, unweighted problem. Analytic partials of the
    /// Lagrangian are cross-checked against finite differences on the
    /// binding interval (or `[0, 1]` without a binding).
    pub fn new(lagrangian: Lagrangian, binding: Option<OperatorBinding>) -> Result<Self> {
        let (a, b) = binding.as_ref().map_or((0.0, 1.0), |bd| (bd.p.a, bd.p.b));
        lagrangian.check_partials(a, b, PARTIAL_CHECK_SEED)?;
        Ok(Self { lagrangian, binding, ya: None, yb: None, weight: None })
    }

    /// Prescribes boundary values; `None` leaves that end free.
    pub fn with_boundary(mut self, ya: Option<f64>, yb: Option<f64>) -> Self {
        self.ya = ya;
        self.yb = yb;
        self
    }

    /// Multiplies the integrand by the samples of `k(b, t)`.
    pub fn with_weight(mut self, weight: SampledFunction) -> Self {
        self.weight = Some(weight);
        self
    }

    /// Copy of this problem with `lagrangian` in place of the current one.
    pub fn with_lagrangian(&self, lagrangian: Lagrangian) -> Self {
        Self { lagrangian, ..self.clone() }
    }

    /// Weight samples, or ones when unweighted.
    pub(crate) fn weight_values(&self, grid: &Grid) -> Result<Vec<f64>> {
        match &self.weight {
            Some(w) if w.grid() == *grid => Ok(w.values().to_vec()),
            Some(_) => Err(Error::Input("weight is sampled on a different grid".into())),
            None => Ok(vec![1.0; grid.len()]),
        }
    }

    pub(crate) fn check_boundary(&self, y: &SampledFunction) -> Result<()> {
        let v = y.values();
        for (name, want, got) in [("left", self.ya, v[0]), ("right", self.yb, v[v.len() - 1])] {
            if let Some(want) = want {
                if (want - got).abs() > BOUNDARY_TOL {
                    return Err(Error::Input(format!(
                        "{name} boundary condition violated: expected {want}, got {got}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The four argument slots `(y, K_P y, y', B_P y)` along a trajectory.
#[derive(Debug, Clone)]
pub(crate) struct States {
    pub x: [Vec<f64>; 4],
    pub t: Vec<f64>,
}

impl States {
    pub fn at(&self, i: usize) -> [f64; 5] {
        [self.x[0][i], self.x[1][i], self.x[2][i], self.x[3][i], self.t[i]]
    }
}

/// Computes the argument slots of `F` along `y`.
pub(crate) fn states(problem: &VariationalProblem, y: &SampledFunction) -> Result<States> {
    let grid = y.grid();
    let (x2, x4) = match &problem.binding {
        Some(b) => (k_apply(b, y)?.into_values(), b_apply(b, y)?.into_values()),
        None => (vec![0.0; grid.len()], vec![0.0; grid.len()]),
    };
    let x3 = fd_derivative(y.values(), grid.h());
    Ok(States { x: [y.values().to_vec(), x2, x3, x4], t: grid.nodes() })
}

pub(crate) fn functional_on_states(lagrangian: &Lagrangian, s: &States, weight: &[f64], h: f64) -> f64 {
    let integrand: Vec<f64> = (0..s.t.len()).map(|i| weight[i] * lagrangian.value(s.at(i))).collect();
    trapezoid_values(&integrand, h)
}

/// Trapezoid value of the (weighted) functional along `y`.
pub fn evaluate_functional(problem: &VariationalProblem, y: &SampledFunction) -> Result<f64> {
    problem.check_boundary(y)?;
    let grid = y.grid();
    let s = states(problem, y)?;
    let w = problem.weight_values(&grid)?;
    let v = functional_on_states(&problem.lagrangian, &s, &w, grid.h());
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Numeric("functional value is not finite".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{Kernel, ParameterSet};

    #[test]
    fn dirichlet_energy_of_identity() {
        let g = Grid::new(0.0, 1.0, 64).unwrap();
        let p = VariationalProblem::new(Lagrangian::new(|_, _, x3, _, _| x3 * x3), None).unwrap();
        let y = SampledFunction::from_fn(g, |t| t).unwrap();
        assert!((evaluate_functional(&p, &y).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn volterra_integrand_vanishes() {
        let g = Grid::new(0.0, 1.0, 256).unwrap();
        let b =
            OperatorBinding::new(ParameterSet::left(0.0, 1.0).unwrap(), Kernel::difference(|s| (-s).exp())).unwrap();
        let l = Lagrangian::new(|_, x2, _, _, t| (x2 + t).powi(2));
        let p = VariationalProblem::new(l, Some(b)).unwrap();
        let y = SampledFunction::from_fn(g, |t| -1.0 - t).unwrap();
        assert!(evaluate_functional(&p, &y).unwrap().abs() < 1e-10);
    }

    #[test]
    fn oscillator_action_vanishes_on_half_period() {
        let g = Grid::new(0.0, std::f64::consts::PI, 2048).unwrap();
        let l = Lagrangian::new(|x1, _, x3, _, _| -0.5 * x3 * x3 + 0.5 * x1 * x1);
        let p = VariationalProblem::new(l, None).unwrap();
        let y = SampledFunction::from_fn(g, f64::sin).unwrap();
        assert!(evaluate_functional(&p, &y).unwrap().abs() < 1e-6);
    }

    #[test]
    fn boundary_violation_names_the_end() {
        let g = Grid::new(0.0, 1.0, 16).unwrap();
        let p = VariationalProblem::new(Lagrangian::new(|_, _, x3, _, _| x3 * x3), None)
            .unwrap()
            .with_boundary(Some(0.0), Some(2.0));
        let y = SampledFunction::from_fn(g, |t| t).unwrap();
        match evaluate_functional(&p, &y) {
            Err(Error::Input(m)) => assert!(m.contains("right")),
            other => panic!("unexpected {other:?}"),
        }
    }
}
