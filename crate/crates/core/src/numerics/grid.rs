//! Uniform grids and functions sampled on them.

use crate::error::{Error, Result};

/// Uniform partition of `[a, b]` into `n` equal intervals.
///
/// Nodes are `t_i = a + i (b - a) / n` for `i = 0..=n`; the last node is
/// pinned to `b` exactly so that endpoint evaluations never drift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    a: f64,
    b: f64,
    n: usize,
}

impl Grid {
    /// Builds a grid on `[a, b]`; requires `a < b` and `n >= 2`.
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::Input(format!("grid endpoints must be finite, got [{a}, {b}]")));
        }
        if b <= a {
            return Err(Error::Input(format!("grid requires b > a, got [{a}, {b}]")));
        }
        if n < 2 {
            return Err(Error::Input(format!("grid requires n >= 2 intervals, got {n}")));
        }
        Ok(Self { a, b, n })
    }

    /// Left endpoint.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Right endpoint.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Number of intervals.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of nodes, `n + 1`.
    pub fn len(&self) -> usize {
        self.n + 1
    }

    /// Always false; a grid has at least three nodes.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Spacing `(b - a) / n`.
    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.n as f64
    }

    /// Node `t_i`.
    pub fn node(&self, i: usize) -> f64 {
        if i == self.n {
            self.b
        } else {
            self.a + i as f64 * (self.b - self.a) / self.n as f64
        }
    }

    /// All nodes in increasing order.
    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n).map(|i| self.node(i)).collect()
    }

    /// Whether two grids describe the same partition up to rounding.
    pub fn matches(&self, a: f64, b: f64) -> bool {
        let scale = 1.0 + a.abs().max(b.abs());
        (self.a - a).abs() <= 1e-12 * scale && (self.b - b).abs() <= 1e-12 * scale
    }

    /// Index range of the nodes lying in the window
    /// `[a + lo (b - a), a + hi (b - a)]`, given as fractions of the interval.
    pub fn window(&self, lo: f64, hi: f64) -> std::ops::RangeInclusive<usize> {
        let n = self.n as f64;
        let first = (lo * n - 1e-9).ceil().max(0.0) as usize;
        let last = (hi * n + 1e-9).floor().min(n) as usize;
        first..=last
    }
}

/// Values of a function at the nodes of a [`Grid`].
///
/// The `extrapolated` list records node indices whose value was not computed
/// directly but filled in by linear extrapolation from interior neighbours.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Grid,
    values: Vec<f64>,
    extrapolated: Vec<usize>,
}

impl SampledFunction {
    /// Wraps samples, checking length and finiteness.
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Input(format!("expected {} samples for the grid, got {}", grid.len(), values.len())));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!("sample at node {i} is not finite")));
        }
        Ok(Self { grid, values, extrapolated: Vec::new() })
    }

    /// Samples `f` at every node.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.nodes().into_iter().map(f).collect())
    }

    /// The zero function.
    pub fn zeros(grid: Grid) -> Self {
        Self { grid, values: vec![0.0; grid.len()], extrapolated: Vec::new() }
    }

    /// Underlying grid.
    pub fn grid(&self) -> Grid {
        self.grid
    }

    /// Sample values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Consumes the function and returns its samples.
    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Node indices whose values were extrapolated rather than computed.
    pub fn extrapolated(&self) -> &[usize] {
        &self.extrapolated
    }

    /// Replaces the value at `i` (0 or n) by linear extrapolation from the
    /// two nearest interior nodes and records the index.
    pub fn extrapolate_endpoint(&mut self, i: usize) {
        let n = self.grid.n();
        if n < 3 {
            return;
        }
        let v = &mut self.values;
        if i == 0 {
            v[0] = 2.0 * v[1] - v[2];
        } else if i == n {
            v[n] = 2.0 * v[n - 1] - v[n - 2];
        } else {
            return;
        }
        if !self.extrapolated.contains(&i) {
            self.extrapolated.push(i);
            self.extrapolated.sort_unstable();
        }
    }

    /// Pointwise map producing a new sampled function.
    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let values = self.grid.nodes().into_iter().zip(&self.values).map(|(t, &v)| f(t, v)).collect();
        Self::new(self.grid, values)
    }

    /// Linear combination `c1 * self + c2 * other`.
    pub fn combine(&self, c1: f64, other: &Self, c2: f64) -> Result<Self> {
        self.check_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(x, y)| c1 * x + c2 * y).collect();
        Self::new(self.grid, values)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(x, y)| x * y).collect();
        Self::new(self.grid, values)
    }

    /// Second-order finite-difference derivative: central differences inside,
    /// one-sided three-point formulas at both ends.
    pub fn derivative(&self) -> Self {
        let values = fd_derivative(&self.values, self.grid.h());
        Self { grid: self.grid, values, extrapolated: Vec::new() }
    }

    /// Largest absolute value over the node indices in `range`.
    pub fn sup_over(&self, range: std::ops::RangeInclusive<usize>) -> f64 {
        self.values[range].iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Largest absolute value over all nodes.
    pub fn sup_norm(&self) -> f64 {
        self.sup_over(0..=self.grid.n())
    }

    pub(crate) fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Input("sampled functions live on different grids".into()));
        }
        Ok(())
    }

    pub(crate) fn from_parts(grid: Grid, values: Vec<f64>, extrapolated: Vec<usize>) -> Result<Self> {
        let mut f = Self::new(grid, values)?;
        f.extrapolated = extrapolated;
        Ok(f)
    }
}

/// Second-order finite differences of uniformly spaced samples.
pub(crate) fn fd_derivative(v: &[f64], h: f64) -> Vec<f64> {
    let n = v.len() - 1;
    let mut d = vec![0.0; n + 1];
    for i in 1..n {
        d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    }
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    d[n] = (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * h);
    d
}
