//! One-sided kernel integrals at every grid node.
//!
//! The left integral at node `j` is `∫_a^{t_j} k(t_j, τ) f(τ) dτ` and the
//! right integral is `∫_{t_j}^b k(τ, t_j) f(τ) dτ`. The right integral is
//! computed as a left integral on the reflected grid `t ↦ a + b - t`, so
//! only one quadrature path exists.
//!
//! The integrand is described cell by cell through its values at the two
//! ends of every cell and is taken to be linear in between. Nodal samples
//! give the continuous piecewise-linear interpolant; equal end values give a
//! piecewise-constant function, which is how derivatives of sampled data are
//! passed in.
//!
//! Three quadrature families are used, each exact when the integrand (or its
//! product with the kernel cofactor) is linear on every cell:
//!
//! * difference-structured kernels (`Difference`, `PowerLaw`) depend on
//!   `t_j - τ` only, so one table of cell moments serves every node;
//! * bounded general kernels are integrated against the hat functions with
//!   an eight-point Gauss rule per cell;
//! * singular pointwise kernels are split as `c(t, τ) (t - τ)^{-s}`, the
//!   power factor being integrated exactly and the cofactor sampled.

use super::kernel::{Kernel, KernelKind, Variant};
use crate::error::Result;
use crate::numerics::{gamma, power_moment_table, Grid, GAUSS8};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    Left,
    Right,
}

/// Integrand values at the left (`lo`) and right (`hi`) end of each of the
/// `n` cells.
#[derive(Debug, Clone)]
pub(crate) struct Cells {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Cells {
    /// Piecewise-linear interpolant of nodal samples.
    pub fn nodal(f: &[f64]) -> Self {
        let n = f.len() - 1;
        Self { lo: f[..n].to_vec(), hi: f[1..].to_vec() }
    }

    /// Piecewise-constant function with one value per cell.
    pub fn constant(c: Vec<f64>) -> Self {
        Self { lo: c.clone(), hi: c }
    }

    /// The same function seen on the reflected grid.
    fn reflected(&self) -> Self {
        Self { lo: self.hi.iter().rev().copied().collect(), hi: self.lo.iter().rev().copied().collect() }
    }
}

/// One-sided integral at every node. Entries may be non-finite where the
/// kernel is not integrable; callers decide how to report that.
pub(crate) fn side_integral(kernel: &Kernel, grid: &Grid, f: &Cells, side: Side) -> Result<Vec<f64>> {
    match side {
        Side::Left => left_integral(kernel, grid, f, side),
        Side::Right => {
            let mut out = left_integral(kernel, grid, &f.reflected(), side)?;
            out.reverse();
            Ok(out)
        }
    }
}

/// Kernel seen from the reflected coordinates when integrating to the right.
struct Oriented<'a> {
    kernel: &'a Kernel,
    side: Side,
    sum: f64,
}

impl Oriented<'_> {
    fn eval(&self, t: f64, tau: f64) -> f64 {
        match self.side {
            Side::Left => self.kernel.eval(t, tau),
            Side::Right => self.kernel.eval(self.sum - tau, self.sum - t),
        }
    }

    fn physical(&self, t: f64) -> f64 {
        match self.side {
            Side::Left => t,
            Side::Right => self.sum - t,
        }
    }
}

fn left_integral(kernel: &Kernel, grid: &Grid, f: &Cells, side: Side) -> Result<Vec<f64>> {
    let n = grid.n();
    let h = grid.h();
    let k = Oriented { kernel, side, sum: grid.a() + grid.b() };
    match kernel.kind() {
        KernelKind::Difference(hf) => {
            let mut p = Vec::with_capacity(n);
            let mut q = Vec::with_capacity(n);
            for m in 0..n {
                let (mut pm, mut qm) = (0.0, 0.0);
                for &(xi, w) in &GAUSS8 {
                    let v = hf((m as f64 + xi) * h);
                    pm += w * v * (1.0 - xi);
                    qm += w * v * xi;
                }
                p.push(h * pm);
                q.push(h * qm);
            }
            Ok(toeplitz_apply(&p, &q, f))
        }
        KernelKind::PowerLaw { order, variant } => {
            let (mu, g) = match variant {
                Variant::Integral => (*order, gamma(*order)?),
                Variant::Derivative => (1.0 - order, gamma(1.0 - order)?),
            };
            let (mut p, mut q) = power_moment_table(mu, h, n);
            p.iter_mut().chain(q.iter_mut()).for_each(|v| *v /= g);
            Ok(toeplitz_apply(&p, &q, f))
        }
        _ if kernel.is_bounded() => Ok(bounded_pointwise(&k, grid, f)),
        _ => singular_pointwise(&k, grid, f),
    }
}

/// `out_j = Σ_{d<j} p_d hi_{j-d-1} + q_d lo_{j-d-1}`: the cell `d` steps
/// back from node `j` weighs its right end by `p_d` and its left end by `q_d`.
fn toeplitz_apply(p: &[f64], q: &[f64], f: &Cells) -> Vec<f64> {
    let n = f.lo.len();
    let mut out = vec![0.0; n + 1];
    for (j, o) in out.iter_mut().enumerate().skip(1) {
        let mut s = 0.0;
        for d in 0..j {
            let c = j - d - 1;
            s += p[d] * f.hi[c] + q[d] * f.lo[c];
        }
        *o = s;
    }
    out
}

fn bounded_pointwise(k: &Oriented<'_>, grid: &Grid, f: &Cells) -> Vec<f64> {
    let n = grid.n();
    let h = grid.h();
    let mut out = vec![0.0; n + 1];
    for (j, o) in out.iter_mut().enumerate().skip(1) {
        let t = grid.node(j);
        let mut s = 0.0;
        for m in 0..j {
            let (mut pm, mut qm) = (0.0, 0.0);
            for &(xi, w) in &GAUSS8 {
                let v = k.eval(t, t - (m as f64 + xi) * h);
                pm += w * v * (1.0 - xi);
                qm += w * v * xi;
            }
            s += pm * f.hi[j - m - 1] + qm * f.lo[j - m - 1];
        }
        *o = h * s;
    }
    out
}

fn singular_pointwise(k: &Oriented<'_>, grid: &Grid, f: &Cells) -> Result<Vec<f64>> {
    let n = grid.n();
    let h = grid.h();
    let constant_exponent = !matches!(k.kernel.kind(), KernelKind::VariableOrder { .. });
    let shared = if constant_exponent {
        let s = k.kernel.singularity_exponent(grid.a());
        Some(power_moment_table(1.0 - s, h, n))
    } else {
        None
    };
    let mut out = vec![0.0; n + 1];
    let mut cof = vec![0.0; n + 1];
    for j in 1..=n {
        let t = grid.node(j);
        let s = k.kernel.singularity_exponent(k.physical(t));
        let local;
        let (p, q) = match &shared {
            Some((p, q)) => (p, q),
            None => {
                local = power_moment_table(1.0 - s, h, j);
                (&local.0, &local.1)
            }
        };
        for (i, c) in cof.iter_mut().enumerate().take(j) {
            let tau = grid.node(i);
            *c = k.eval(t, tau) * (t - tau).powf(s);
        }
        cof[j] = diagonal_cofactor(k, t, &cof[..j])?;
        let mut acc = 0.0;
        for d in 0..j {
            acc += p[d] * cof[j - d] * f.hi[j - d - 1] + q[d] * cof[j - d - 1] * f.lo[j - d - 1];
        }
        out[j] = acc;
    }
    Ok(out)
}

/// Limit of `k(t, τ) (t - τ)^s` as `τ → t`.
fn diagonal_cofactor(k: &Oriented<'_>, t: f64, previous: &[f64]) -> Result<f64> {
    let x = k.physical(t);
    Ok(match k.kernel.kind() {
        KernelKind::Hadamard { order } => x.powf(-order) / gamma(*order)?,
        KernelKind::VariableOrder { alpha, variant } => {
            let a = alpha(x, x);
            match variant {
                Variant::Integral => 1.0 / gamma(a)?,
                Variant::Derivative => 1.0 / gamma(1.0 - a)?,
            }
        }
        _ => match previous.len() {
            0 => f64::NAN,
            1 => previous[0],
            j => 2.0 * previous[j - 1] - previous[j - 2],
        },
    })
}
