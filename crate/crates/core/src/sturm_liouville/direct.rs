//! Direct minimization of variational functionals over Ritz coefficients.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::problem::RitzBasis;
use crate::error::{Error, Result};
use crate::numerics::{fd_derivative, Grid, SampledFunction};
use crate::operators::{b_apply, k_apply};
use crate::variational::{evaluate_functional, Lagrangian, VariationalProblem};

/// Stopping and line-search parameters for [`direct_minimize`].
#[derive(Debug, Clone)]
pub struct MinimizeOptions {
    /// Stop once the sup-norm of the coefficient gradient is below this.
    pub grad_tol: f64,
    /// Iteration cap.
    pub max_iter: usize,
    /// Armijo slope parameter.
    pub armijo_c: f64,
    /// Step reduction factor of the backtracking search.
    pub backtrack: f64,
    /// Consecutive value increases that are treated as divergence.
    pub divergence_window: usize,
    /// Starting coefficients; zeros when absent.
    pub initial: Option<Vec<f64>>,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self { grad_tol: 1e-8, max_iter: 10_000, armijo_c: 1e-4, backtrack: 0.5, divergence_window: 50, initial: None }
    }
}

/// Outcome of [`direct_minimize`].
#[derive(Debug, Clone)]
pub struct MinimizeResult {
    /// The synthesized minimizer.
    pub y: SampledFunction,
    /// Functional value at `y`.
    pub value: f64,
    /// Sup-norm of the coefficient gradient at the final iterate.
    pub gradient_norm: f64,
    /// Final coefficients: sine coefficients first, then one coefficient per
    /// free endpoint (left before right).
    pub coefficients: Vec<f64>,
    /// Iterations performed.
    pub iterations: usize,
    /// Whether the gradient tolerance was met.
    pub converged: bool,
}

const MAX_HALVINGS: usize = 60;
const COEFFICIENT_LIMIT: f64 = 1e12;
const VALUE_FLOOR: f64 = -1e100;

/// The functional restricted to `y_bc + Σ β_k ψ_k`, with the four argument
/// slots of every trial function precomputed (all operators are linear).
struct Discretized<'a> {
    lagrangian: &'a Lagrangian,
    grid: Grid,
    /// Trapezoid weights times the problem weight.
    qw: Vec<f64>,
    t: Vec<f64>,
    base: [Vec<f64>; 4],
    images: Vec<[Vec<f64>; 4]>,
    functions: Vec<SampledFunction>,
    y_bc: SampledFunction,
}

fn slots(problem: &VariationalProblem, f: &SampledFunction) -> Result<[Vec<f64>; 4]> {
    let n = f.grid().len();
    let (x2, x4) = match &problem.binding {
        Some(b) => (k_apply(b, f)?.into_values(), b_apply(b, f)?.into_values()),
        None => (vec![0.0; n], vec![0.0; n]),
    };
    Ok([f.values().to_vec(), x2, fd_derivative(f.values(), f.grid().h()), x4])
}

impl<'a> Discretized<'a> {
    fn new(problem: &'a VariationalProblem, basis: &RitzBasis) -> Result<Self> {
        let grid = basis.grid();
        if let Some(b) = &problem.binding {
            if !grid.matches(b.p.a, b.p.b) {
                return Err(Error::Input("basis grid and operator interval differ".into()));
            }
        }
        let (a, len) = (grid.a(), grid.b() - grid.a());
        let left = SampledFunction::from_fn(grid, |t| (grid.b() - t) / len)?;
        let right = SampledFunction::from_fn(grid, |t| (t - a) / len)?;
        let y_bc = left.combine(problem.ya.unwrap_or(0.0), &right, problem.yb.unwrap_or(0.0))?;
        let mut functions: Vec<SampledFunction> = basis.phi().to_vec();
        if problem.ya.is_none() {
            functions.push(left);
        }
        if problem.yb.is_none() {
            functions.push(right);
        }
        let images = functions.iter().map(|f| slots(problem, f)).collect::<Result<Vec<_>>>()?;
        let base = slots(problem, &y_bc)?;
        let w = problem.weight_values(&grid)?;
        let h = grid.h();
        let n = grid.n();
        let qw = (0..=n).map(|i| w[i] * if i == 0 || i == n { 0.5 * h } else { h }).collect();
        Ok(Self { lagrangian: &problem.lagrangian, grid, qw, t: grid.nodes(), base, images, functions, y_bc })
    }

    fn dim(&self) -> usize {
        self.functions.len()
    }

    fn states(&self, beta: &[f64]) -> [Vec<f64>; 4] {
        let mut x = self.base.clone();
        for (b, img) in beta.iter().zip(&self.images) {
            if *b == 0.0 {
                continue;
            }
            for s in 0..4 {
                for (xi, v) in x[s].iter_mut().zip(&img[s]) {
                    *xi += b * v;
                }
            }
        }
        x
    }

    fn value(&self, beta: &[f64]) -> f64 {
        let x = self.states(beta);
        (0..self.t.len())
            .map(|i| self.qw[i] * self.lagrangian.value([x[0][i], x[1][i], x[2][i], x[3][i], self.t[i]]))
            .sum()
    }

    fn gradient(&self, beta: &[f64]) -> Vec<f64> {
        let x = self.states(beta);
        let mut d =
            [vec![0.0; self.t.len()], vec![0.0; self.t.len()], vec![0.0; self.t.len()], vec![0.0; self.t.len()]];
        for i in 0..self.t.len() {
            let p = [x[0][i], x[1][i], x[2][i], x[3][i], self.t[i]];
            for (s, ds) in d.iter_mut().enumerate() {
                ds[i] = self.qw[i] * self.lagrangian.partial(s + 1, p);
            }
        }
        self.images
            .iter()
            .map(|img| (0..4).map(|s| d[s].iter().zip(&img[s]).map(|(a, b)| a * b).sum::<f64>()).sum())
            .collect()
    }

    fn synthesize(&self, beta: &[f64]) -> Result<SampledFunction> {
        let mut v = self.y_bc.values().to_vec();
        for (b, f) in beta.iter().zip(&self.functions) {
            for (vi, fi) in v.iter_mut().zip(f.values()) {
                *vi += b * fi;
            }
        }
        SampledFunction::new(self.grid, v)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sup(a: &[f64]) -> f64 {
    a.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Minimizes `problem` over `y_bc + Σ β_k φ_k` by BFGS with an Armijo
/// backtracking search, where `y_bc` interpolates the declared boundary
/// values affinely. A free endpoint adds the matching affine hat to the
/// trial space.
///
/// Returns [`Error::Coercivity`] when the iteration runs away: the value
/// rises over `divergence_window` consecutive accepted steps, a coefficient
/// exceeds `1e12` in size, or the value drops below `-1e100`.
pub fn direct_minimize(
    problem: &VariationalProblem,
    basis: &RitzBasis,
    options: &MinimizeOptions,
) -> Result<MinimizeResult> {
    let disc = Discretized::new(problem, basis)?;
    let dim = disc.dim();
    let mut beta = match &options.initial {
        Some(b) if b.len() == dim => b.clone(),
        Some(b) => return Err(Error::Input(format!("initial guess has {} coefficients, expected {dim}", b.len()))),
        None => vec![0.0; dim],
    };
    let mut f = disc.value(&beta);
    let mut g = disc.gradient(&beta);
    if !f.is_finite() {
        return Err(Error::Numeric("functional is not finite at the initial guess".into()));
    }
    let identity = |scale: f64| -> Vec<f64> {
        let mut h = vec![0.0; dim * dim];
        for i in 0..dim {
            h[i * dim + i] = scale;
        }
        h
    };
    let mut hinv = identity(1.0);
    let mut fresh = true;
    let mut increases = 0;
    let mut iterations = 0;
    let mut converged = sup(&g) < options.grad_tol;
    while !converged && iterations < options.max_iter {
        iterations += 1;
        let mut dir: Vec<f64> = (0..dim).map(|i| -dot(&hinv[i * dim..(i + 1) * dim], &g)).collect();
        let mut slope = dot(&g, &dir);
        if slope.is_nan() || slope >= 0.0 {
            hinv = identity(1.0);
            fresh = true;
            dir = g.iter().map(|v| -v).collect();
            slope = -dot(&g, &g);
        }
        let slack = 4.0 * f64::EPSILON * f.abs();
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let trial: Vec<f64> = beta.iter().zip(&dir).map(|(b, d)| b + step * d).collect();
            let ft = disc.value(&trial);
            if ft.is_finite() && ft <= f + options.armijo_c * step * slope + slack {
                accepted = Some((trial, ft));
                break;
            }
            step *= options.backtrack;
        }
        let Some((trial, ft)) = accepted else {
            if fresh {
                break;
            }
            hinv = identity(1.0);
            fresh = true;
            continue;
        };
        let gt = disc.gradient(&trial);
        let s: Vec<f64> = trial.iter().zip(&beta).map(|(a, b)| a - b).collect();
        let yv: Vec<f64> = gt.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &yv);
        if sy > 1e-300 {
            if fresh {
                hinv = identity(sy / dot(&yv, &yv));
            }
            let rho = 1.0 / sy;
            let hy: Vec<f64> = (0..dim).map(|i| dot(&hinv[i * dim..(i + 1) * dim], &yv)).collect();
            let yhy = dot(&yv, &hy);
            for i in 0..dim {
                for j in 0..dim {
                    hinv[i * dim + j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
                }
            }
            fresh = false;
        }
        increases = if ft > f { increases + 1 } else { 0 };
        beta = trial;
        f = ft;
        g = gt;
        if increases >= options.divergence_window || sup(&beta) > COEFFICIENT_LIMIT || f < VALUE_FLOOR {
            return Err(Error::Coercivity(format!(
                "minimization diverged after {iterations} iterations (value {f:.3e}, largest coefficient {:.3e})",
                sup(&beta)
            )));
        }
        converged = sup(&g) < options.grad_tol;
    }
    let y = disc.synthesize(&beta)?;
    let value = evaluate_functional(problem, &y)?;
    Ok(MinimizeResult { y, value, gradient_norm: sup(&g), coefficients: beta, iterations, converged })
}

/// Values of the functional along one random coefficient ray.
#[derive(Debug, Clone, PartialEq)]
pub struct RayProbe {
    /// Unit direction in sine-coefficient space.
    pub direction: Vec<f64>,
    /// Values at [`PROBE_MAGNITUDES`].
    pub values: [f64; 3],
    /// Whether the values strictly increase with the magnitude.
    pub increasing: bool,
}

/// Outcome of [`coercivity_probe`].
#[derive(Debug, Clone, PartialEq)]
pub struct CoercivityReport {
    pub rays: Vec<RayProbe>,
    /// Every ray increasing.
    pub coercive: bool,
}

/// Magnitudes sampled along each ray.
pub const PROBE_MAGNITUDES: [f64; 3] = [1.0, 10.0, 100.0];

/// Samples the functional along `directions` seeded random rays
/// `y_bc + s Σ d_k φ_k`. Growth on every ray is necessary, though not
/// sufficient, for coercivity.
pub fn coercivity_probe(
    problem: &VariationalProblem,
    basis: &RitzBasis,
    directions: usize,
    seed: u64,
) -> Result<CoercivityReport> {
    let disc = Discretized::new(problem, basis)?;
    let (m, dim) = (basis.m(), disc.dim());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rays = Vec::with_capacity(directions);
    for _ in 0..directions {
        let mut d: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = dot(&d, &d).sqrt();
        if norm == 0.0 {
            d[0] = 1.0;
        } else {
            d.iter_mut().for_each(|v| *v /= norm);
        }
        let mut values = [0.0; 3];
        for (v, s) in values.iter_mut().zip(PROBE_MAGNITUDES) {
            let mut beta: Vec<f64> = d.iter().map(|x| s * x).collect();
            beta.resize(dim, 0.0);
            *v = disc.value(&beta);
        }
        let increasing = values[0] < values[1] && values[1] < values[2];
        rays.push(RayProbe { direction: d, values, increasing });
    }
    let coercive = rays.iter().all(|r| r.increasing);
    Ok(CoercivityReport { rays, coercive })
}
