//! Problem data and the sine basis used by the Ritz method.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::{Grid, SampledFunction, MAX_EIGEN_DIM};
use crate::operators::{b_apply, Fn1, Kernel, OperatorBinding, ParameterSet, Variant};

/// Grid intervals required per basis function.
pub const RESOLUTION_FACTOR: usize = 32;

/// `C D^α_right[p · C D^α_left y] + q y = λ w y` on `(a, b)` with
/// `y(a) = y(b) = 0`.
///
/// `alpha = 1.0` selects the classical problem `-(p y')' + q y = λ w y`.
#[derive(Clone)]
pub struct SLProblem {
    alpha: f64,
    p: Fn1,
    q: Fn1,
    w: Fn1,
    a: f64,
    b: f64,
}

impl fmt::Debug for SLProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SLProblem")
            .field("alpha", &self.alpha)
            .field("interval", &(self.a, self.b))
            .finish_non_exhaustive()
    }
}

impl SLProblem {
    /// Unit coefficients on `(0, π)`.
    pub fn new(alpha: f64) -> Result<Self> {
        if !((alpha > 0.5 && alpha < 1.0) || alpha == 1.0) {
            return Err(Error::Domain(format!("alpha must lie in (0.5,1), got {alpha}")));
        }
        Ok(Self { alpha, p: Arc::new(|_| 1.0), q: Arc::new(|_| 0.0), w: Arc::new(|_| 1.0), a: 0.0, b: PI })
    }

    /// The classical limit `alpha = 1`.
    pub fn classical() -> Self {
        Self::new(1.0).expect("alpha = 1 is valid")
    }

    /// Replaces `p`, `q` and `w`.
    pub fn with_coefficients(
        mut self,
        p: impl Fn(f64) -> f64 + Send + Sync + 'static,
        q: impl Fn(f64) -> f64 + Send + Sync + 'static,
        w: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.p = Arc::new(p);
        self.q = Arc::new(q);
        self.w = Arc::new(w);
        self
    }

    /// Replaces the interval.
    pub fn with_interval(mut self, a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::Input(format!("interval requires finite a < b, got ({a}, {b})")));
        }
        self.a = a;
        self.b = b;
        Ok(self)
    }

    /// Fractional order.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Whether this is the classical problem.
    pub fn is_classical(&self) -> bool {
        self.alpha == 1.0
    }

    /// `(a, b)`.
    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    /// Half the interval length, the scale of `∫ w y²` for unit coefficients.
    pub fn constraint_scale(&self) -> f64 {
        0.5 * (self.b - self.a)
    }

    pub fn p(&self, t: f64) -> f64 {
        (self.p)(t)
    }

    pub fn q(&self, t: f64) -> f64 {
        (self.q)(t)
    }

    pub fn w(&self, t: f64) -> f64 {
        (self.w)(t)
    }

    /// Grid on the problem interval with `n` cells.
    pub fn grid(&self, n: usize) -> Result<Grid> {
        Grid::new(self.a, self.b, n)
    }

    pub(crate) fn check_grid(&self, grid: &Grid) -> Result<()> {
        if !grid.matches(self.a, self.b) {
            return Err(Error::Input(format!(
                "grid spans [{}, {}] but the problem lives on [{}, {}]",
                grid.a(),
                grid.b(),
                self.a,
                self.b
            )));
        }
        Ok(())
    }

    /// Checks `p > 0` and `w > 0` at every node and that all coefficients
    /// are finite there.
    pub fn validate_on(&self, grid: &Grid) -> Result<()> {
        self.check_grid(grid)?;
        for (i, t) in grid.nodes().into_iter().enumerate() {
            let (p, q, w) = (self.p(t), self.q(t), self.w(t));
            if !(p > 0.0 && w > 0.0 && p.is_finite() && w.is_finite() && q.is_finite()) {
                return Err(Error::Domain(format!(
                    "coefficients must satisfy p > 0, w > 0 and be finite; node {i} (t = {t}) has p = {p}, q = {q}, w = {w}"
                )));
            }
        }
        Ok(())
    }

    /// `C D^α_left f`, or `f'` in the classical case.
    pub fn left_derivative(&self, f: &SampledFunction) -> Result<SampledFunction> {
        if self.is_classical() {
            return Ok(f.derivative());
        }
        let binding = OperatorBinding::new(
            ParameterSet::left(self.a, self.b)?,
            Kernel::power_law(self.alpha, Variant::Derivative)?,
        )?;
        b_apply(&binding, f)
    }
}

/// Trial functions `φ_k = sin(k s(t)) / √w(t)`, `k = 1..=m`, where `s` maps
/// `[a, b]` affinely onto `[0, π]`, together with `C D^α_left φ_k`.
#[derive(Debug, Clone)]
pub struct RitzBasis {
    grid: Grid,
    phi: Vec<SampledFunction>,
    dphi: Vec<SampledFunction>,
}

impl RitzBasis {
    /// Sine basis with unit weight and classical derivatives on `grid`.
    pub fn sine(grid: Grid, m: usize) -> Result<Self> {
        Self::build(grid, m, |_| 1.0, |f| Ok(f.derivative()))
    }

    /// Basis adapted to `problem`: weighted by `1/√w` and carrying the
    /// problem's left Caputo derivatives.
    pub fn for_problem(problem: &SLProblem, m: usize, grid: Grid) -> Result<Self> {
        problem.validate_on(&grid)?;
        Self::build(grid, m, |t| problem.w(t), |f| problem.left_derivative(f))
    }

    fn build(
        grid: Grid,
        m: usize,
        w: impl Fn(f64) -> f64,
        derivative: impl Fn(&SampledFunction) -> Result<SampledFunction>,
    ) -> Result<Self> {
        if m == 0 || m > MAX_EIGEN_DIM {
            return Err(Error::Config(format!("basis size must lie in 1..={MAX_EIGEN_DIM}, got {m}")));
        }
        if grid.n() < RESOLUTION_FACTOR * m {
            return Err(Error::Config(format!(
                "basis of size {m} needs at least {} grid intervals, got {}",
                RESOLUTION_FACTOR * m,
                grid.n()
            )));
        }
        let (a, len, n) = (grid.a(), grid.b() - grid.a(), grid.n());
        let mut phi = Vec::with_capacity(m);
        let mut dphi = Vec::with_capacity(m);
        for k in 1..=m {
            let mut v: Vec<f64> =
                grid.nodes().into_iter().map(|t| (k as f64 * PI * (t - a) / len).sin() / w(t).sqrt()).collect();
            v[0] = 0.0;
            v[n] = 0.0;
            let f = SampledFunction::new(grid, v)?;
            dphi.push(derivative(&f)?);
            phi.push(f);
        }
        Ok(Self { grid, phi, dphi })
    }

    /// Number of trial functions.
    pub fn m(&self) -> usize {
        self.phi.len()
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    /// Trial functions.
    pub fn phi(&self) -> &[SampledFunction] {
        &self.phi
    }

    /// Their left Caputo derivatives (classical derivatives for `alpha = 1`).
    pub fn dphi_frac(&self) -> &[SampledFunction] {
        &self.dphi
    }

    /// The first `m` trial functions.
    pub fn truncate(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.m() {
            return Err(Error::Input(format!("cannot truncate a basis of size {} to {m}", self.m())));
        }
        Ok(Self { grid: self.grid, phi: self.phi[..m].to_vec(), dphi: self.dphi[..m].to_vec() })
    }

    /// `Σ β_k φ_k`.
    pub fn synthesize(&self, beta: &[f64]) -> Result<SampledFunction> {
        if beta.len() > self.m() {
            return Err(Error::Input(format!("{} coefficients for a basis of size {}", beta.len(), self.m())));
        }
        let mut v = vec![0.0; self.grid.len()];
        for (b, f) in beta.iter().zip(&self.phi) {
            for (vi, fi) in v.iter_mut().zip(f.values()) {
                *vi += b * fi;
            }
        }
        SampledFunction::new(self.grid, v)
    }
}
