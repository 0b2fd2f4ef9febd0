//! Ritz eigenpairs and the checks applied to them afterwards.

use super::problem::{RitzBasis, SLProblem};
use crate::error::{Error, Result};
use crate::numerics::{symmetric_eigen, trapezoid_values, Grid, SampledFunction, SymmetricMatrix};
use crate::operators::{classical, ClassicalOp};

/// Relative Cauchy tolerance used by [`converge`].
pub const CONVERGENCE_RTOL: f64 = 1e-6;

/// Increase of `λ_m^(j)` in `m` tolerated as quadrature noise by [`converge`].
pub const MONOTONE_TOL: f64 = 1e-10;

/// Stiffness matrix `A[k][j] = ∫ p D_k D_j + q φ_k φ_j` of `basis` and the
/// scale `c` with `∫ w (Σ β_k φ_k)² = c Σ β_k²`.
pub fn assemble_basis(problem: &SLProblem, basis: &RitzBasis) -> Result<(SymmetricMatrix, f64)> {
    let grid = basis.grid();
    problem.validate_on(&grid)?;
    let nodes = grid.nodes();
    let p: Vec<f64> = nodes.iter().map(|&t| problem.p(t)).collect();
    let q: Vec<f64> = nodes.iter().map(|&t| problem.q(t)).collect();
    let m = basis.m();
    let (phi, d) = (basis.phi(), basis.dphi_frac());
    let mut raw = vec![0.0; m * m];
    let mut buf = vec![0.0; grid.len()];
    for k in 0..m {
        for j in k..m {
            let (dk, dj) = (d[k].values(), d[j].values());
            let (fk, fj) = (phi[k].values(), phi[j].values());
            for i in 0..buf.len() {
                buf[i] = p[i] * dk[i] * dj[i] + q[i] * fk[i] * fj[i];
            }
            raw[k * m + j] = trapezoid_values(&buf, grid.h());
        }
    }
    for k in 0..m {
        for j in 0..k {
            raw[k * m + j] = raw[j * m + k];
        }
    }
    Ok((SymmetricMatrix::new(m, raw)?, problem.constraint_scale()))
}

/// Builds the basis of size `m` on `grid` and assembles it.
pub fn assemble(problem: &SLProblem, m: usize, grid: Grid) -> Result<(SymmetricMatrix, f64)> {
    assemble_basis(problem, &RitzBasis::for_problem(problem, m, grid)?)
}

/// The lowest `r` Ritz eigenpairs.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Ascending eigenvalue approximations.
    pub lambdas: Vec<f64>,
    /// Coefficient vectors normalised to `c Σ β_k² = 1`.
    pub coefficients: Vec<Vec<f64>>,
    /// `Σ β_k φ_k` for each coefficient vector.
    pub eigenfunctions: Vec<SampledFunction>,
    /// Basis size.
    pub m: usize,
}

fn spectrum_from_matrix(basis: &RitzBasis, a: &SymmetricMatrix, c: f64, r: usize) -> Result<Spectrum> {
    let m = a.dim();
    if r == 0 || r > m {
        return Err(Error::Input(format!("requested {r} eigenpairs from a basis of size {m}")));
    }
    let eig = symmetric_eigen(a)?;
    let scale = c.sqrt();
    let mut lambdas = Vec::with_capacity(r);
    let mut coefficients = Vec::with_capacity(r);
    let mut eigenfunctions = Vec::with_capacity(r);
    for j in 0..r {
        let beta: Vec<f64> = eig.vectors[j].iter().map(|v| v / scale).collect();
        lambdas.push(eig.values[j] / c);
        eigenfunctions.push(basis.synthesize(&beta)?);
        coefficients.push(beta);
    }
    Ok(Spectrum { lambdas, coefficients, eigenfunctions, m })
}

/// Eigen-decomposes the assembled matrix of `basis` and returns the lowest
/// `r` pairs.
pub fn solve_spectrum(problem: &SLProblem, basis: &RitzBasis, r: usize) -> Result<Spectrum> {
    let (a, c) = assemble_basis(problem, basis)?;
    spectrum_from_matrix(basis, &a, c, r)
}

/// Ritz eigenvalues over a schedule of nested basis sizes.
#[derive(Debug, Clone)]
pub struct ConvergenceTable {
    /// Basis sizes.
    pub m_schedule: Vec<usize>,
    /// `lambdas[i]` holds the lowest `min(r, m_i)` eigenvalues at `m_schedule[i]`.
    pub lambdas: Vec<Vec<f64>>,
    /// Per eigenvalue index: no increase beyond [`MONOTONE_TOL`] along the schedule.
    pub monotone: Vec<bool>,
    /// Per eigenvalue index: the largest increase observed (0 if none).
    pub max_increase: Vec<f64>,
    /// Per eigenvalue index: the last two values agree to [`CONVERGENCE_RTOL`].
    pub converged: Vec<bool>,
}

/// Solves with every basis size in `m_schedule` using leading blocks of one
/// matrix assembled on `grid`, so the trial spaces are exactly nested.
pub fn converge(problem: &SLProblem, m_schedule: &[usize], r: usize, grid: Grid) -> Result<ConvergenceTable> {
    if m_schedule.is_empty() || m_schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Input("m schedule must be nonempty and strictly ascending".into()));
    }
    if r == 0 {
        return Err(Error::Input("at least one eigenpair is required".into()));
    }
    let m_max = *m_schedule.last().expect("nonempty");
    let basis = RitzBasis::for_problem(problem, m_max, grid)?;
    let (a, c) = assemble_basis(problem, &basis)?;
    let mut lambdas = Vec::with_capacity(m_schedule.len());
    for &m in m_schedule {
        let eig = symmetric_eigen(&a.leading(m)?)?;
        lambdas.push(eig.values.iter().take(r).map(|v| v / c).collect::<Vec<_>>());
    }
    let mut monotone = vec![true; r];
    let mut max_increase = vec![0.0_f64; r];
    let mut converged = vec![false; r];
    for j in 0..r {
        let column: Vec<f64> = lambdas.iter().filter_map(|row| row.get(j).copied()).collect();
        for w in column.windows(2) {
            let inc = w[1] - w[0];
            max_increase[j] = max_increase[j].max(inc);
            if inc > MONOTONE_TOL {
                monotone[j] = false;
            }
        }
        if let [.., x, y] = column[..] {
            converged[j] = (y - x).abs() < CONVERGENCE_RTOL * y.abs().max(f64::MIN_POSITIVE);
        }
    }
    Ok(ConvergenceTable { m_schedule: m_schedule.to_vec(), lambdas, monotone, max_increase, converged })
}

fn check_dirichlet(y: &SampledFunction) -> Result<()> {
    let v = y.values();
    if v[0].abs() > 1e-12 || v[v.len() - 1].abs() > 1e-12 {
        return Err(Error::Input(format!(
            "y must vanish at both ends, got y(a) = {}, y(b) = {}",
            v[0],
            v[v.len() - 1]
        )));
    }
    Ok(())
}

/// `∫ [p (C D^α y)² + q y²] / ∫ w y²`, with the derivative taken by the
/// same product integration as the basis.
pub fn rayleigh_quotient(problem: &SLProblem, y: &SampledFunction) -> Result<f64> {
    let grid = y.grid();
    problem.validate_on(&grid)?;
    check_dirichlet(y)?;
    let d = problem.left_derivative(y)?;
    let nodes = grid.nodes();
    let (mut num, mut den) = (Vec::with_capacity(grid.len()), Vec::with_capacity(grid.len()));
    for (i, &t) in nodes.iter().enumerate() {
        let (yi, di) = (y.values()[i], d.values()[i]);
        num.push(problem.p(t) * di * di + problem.q(t) * yi * yi);
        den.push(problem.w(t) * yi * yi);
    }
    let den = trapezoid_values(&den, grid.h());
    if den <= 0.0 {
        return Err(Error::Input("Rayleigh quotient of a function with zero weighted norm".into()));
    }
    Ok(trapezoid_values(&num, grid.h()) / den)
}

/// `p · C D^α_left y` sampled on the grid of `y`.
fn flux(problem: &SLProblem, y: &SampledFunction) -> Result<SampledFunction> {
    let d = problem.left_derivative(y)?;
    d.map(|t, v| problem.p(t) * v)
}

/// Sup over the middle 80% of the interval of
/// `|C D^α_right[p C D^α_left y] + q y - λ w y|`.
///
/// In the classical case the operator is `-(p y')'`.
pub fn sl_residual(problem: &SLProblem, lambda: f64, y: &SampledFunction) -> Result<f64> {
    let grid = y.grid();
    problem.validate_on(&grid)?;
    check_dirichlet(y)?;
    let g = flux(problem, y)?;
    let outer = if problem.is_classical() {
        g.derivative().map(|_, v| -v)?
    } else {
        classical(ClassicalOp::CaputoRight, problem.alpha(), &g)?
    };
    let residual: Vec<f64> = grid
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, &t)| outer.values()[i] + (problem.q(t) - lambda * problem.w(t)) * y.values()[i])
        .collect();
    let range = grid.window(0.1, 0.9);
    Ok(residual[range].iter().fold(0.0, |m, v| m.max(v.abs())))
}

/// `p · C D^α_left y` at `t = b`. Passing from the right Riemann-Liouville
/// to the right Caputo form of the equation assumes this trace vanishes;
/// it is reported for inspection only.
pub fn right_trace(problem: &SLProblem, y: &SampledFunction) -> Result<f64> {
    let g = flux(problem, y)?;
    Ok(g.values()[g.values().len() - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn classical_assembly_is_diagonal() {
        let p = SLProblem::classical();
        let (a, c) = assemble(&p, 4, p.grid(1024).unwrap()).unwrap();
        assert!((c - PI / 2.0).abs() < 1e-15);
        for k in 0..4 {
            for j in 0..4 {
                let want = if k == j { PI * ((k + 1) * (k + 1)) as f64 / 2.0 } else { 0.0 };
                assert!((a.get(k, j) - want).abs() < 1e-4 * (1.0 + want), "{k} {j}");
            }
        }
    }

    #[test]
    fn classical_spectrum_and_shift() {
        let p = SLProblem::classical();
        let g = p.grid(1024).unwrap();
        let s = solve_spectrum(&p, &RitzBasis::for_problem(&p, 10, g).unwrap(), 3).unwrap();
        for (j, l) in s.lambdas.iter().enumerate() {
            let want = ((j + 1) * (j + 1)) as f64;
            assert!((l - want).abs() < 1e-2 * want);
        }
        let shifted = SLProblem::classical().with_coefficients(|_| 1.0, |_| 5.0, |_| 1.0);
        let s2 = solve_spectrum(&shifted, &RitzBasis::for_problem(&shifted, 10, g).unwrap(), 3).unwrap();
        for (a, b) in s.lambdas.iter().zip(&s2.lambdas) {
            assert!((b - a - 5.0).abs() < 1e-10);
        }
    }

    #[test]
    fn rayleigh_examples() {
        let p = SLProblem::classical();
        let g = p.grid(2048).unwrap();
        let mut y = SampledFunction::from_fn(g, f64::sin).unwrap();
        let mut v = y.clone().into_values();
        v[2048] = 0.0;
        y = SampledFunction::new(g, v).unwrap();
        assert!((rayleigh_quotient(&p, &y).unwrap() - 1.0).abs() < 1e-5);
        assert!(matches!(rayleigh_quotient(&p, &SampledFunction::zeros(g)), Err(Error::Input(_))));
        let res = sl_residual(&p, 1.0, &y).unwrap();
        assert!(res < 1e-4, "{res}");
        assert_eq!(sl_residual(&p, 3.0, &SampledFunction::zeros(g)).unwrap(), 0.0);
    }

    #[test]
    fn schedule_must_ascend() {
        let p = SLProblem::classical();
        assert!(converge(&p, &[4, 2], 1, p.grid(256).unwrap()).is_err());
    }

    #[test]
    fn classical_convergence_is_flat() {
        let p = SLProblem::classical();
        let t = converge(&p, &[2, 4, 8], 1, p.grid(512).unwrap()).unwrap();
        for row in &t.lambdas {
            assert!((row[0] - 1.0).abs() < 1e-2);
        }
        assert!(t.monotone[0]);
        assert!(t.converged[0]);
    }
}
