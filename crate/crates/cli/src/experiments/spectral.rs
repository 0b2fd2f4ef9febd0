use std::f64::consts::PI;

use anyhow::Result;
use fracvar_core::numerics::{gamma, trapezoid, SampledFunction};
use fracvar_core::operators::{Kernel, OperatorBinding, ParameterSet, Variant};
use fracvar_core::sturm_liouville::{
    coercivity_probe, converge, direct_minimize, rayleigh_quotient, right_trace, solve_spectrum, MinimizeOptions,
    RitzBasis, SLProblem,
};
use fracvar_core::variational::{el_residual, interior_sup, Lagrangian, VariationalProblem};

use super::unit_grid;
use crate::config::{DirectProblem, ExperimentConfig};
use crate::record::{Cell, Report};

const PROBE_DIRECTIONS: usize = 8;

type Exact = Box<dyn Fn(f64) -> f64>;

fn problem(config: &ExperimentConfig) -> Result<SLProblem> {
    let (a, b) = config.interval;
    Ok(SLProblem::new(config.single_alpha())?.with_interval(a, b)?)
}

/// `(jπ / L)²`, the classical eigenvalues with unit coefficients.
fn classical_eigenvalue(config: &ExperimentConfig, j: usize) -> f64 {
    let len = config.interval.1 - config.interval.0;
    (j as f64 * PI / len).powi(2)
}

pub fn sl_solve(config: &ExperimentConfig, report: &mut Report) -> Result<()> {
    let p = problem(config)?;
    let grid = p.grid(config.n)?;
    let basis = RitzBasis::for_problem(&p, config.m.expect("resolved"), grid)?;
    let s = solve_spectrum(&p, &basis, config.r.expect("resolved"))?;
    let mut rows = Vec::new();
    let mut gram = 0.0_f64;
    for (i, (lambda, y)) in s.lambdas.iter().zip(&s.eigenfunctions).enumerate() {
        let j = i + 1;
        let rq = rayleigh_quotient(&p, y)?;
        let trace = right_trace(&p, y)?;
        for (k, z) in s.eigenfunctions.iter().enumerate() {
            let g = trapezoid(&y.mul(z)?.map(|t, v| p.w(t) * v)?);
            gram = gram.max((g - if k == i { 1.0 } else { 0.0 }).abs());
        }
        report.at_most(format!("rayleigh[{j}]"), "criterion 9", (rq - lambda).abs(), config.tol("rayleigh"));
        let mut row: Vec<Cell> = vec![j.into(), (*lambda).into(), rq.into(), trace.into()];
        if p.is_classical() {
            let want = classical_eigenvalue(config, j);
            let rel = (lambda - want).abs() / want;
            report.at_most(format!("classical_relerr[{j}]"), "criterion 8", rel, config.tol("classical_relerr"));
            row.push(rel.into());
        }
        rows.push(row);
        report.scalar(format!("lambda_{j}"), *lambda);
        report.series(format!("eigenfunction_{j}"), grid.nodes(), y.values().to_vec());
    }
    let sorted = s.lambdas.windows(2).all(|w| w[0] < w[1]) && s.lambdas[0] > 0.0;
    report.at_least("ordered_positive", "sturm-liouville-ritz spectrum", if sorted { 1.0 } else { 0.0 }, 1.0);
    report.at_most("orthonormality", "criterion 9", gram, config.tol("orthonormality"));
    let mut header = vec!["index", "lambda", "rayleigh", "right_trace"];
    if p.is_classical() {
        header.push("classical_relerr");
    }
    report.table("spectrum", &header, rows);
    Ok(())
}

pub fn sl_converge(config: &ExperimentConfig, report: &mut Report) -> Result<()> {
    let p = problem(config)?;
    let r = config.r.expect("resolved");
    let table = converge(&p, &config.m_schedule, r, p.grid(config.n)?)?;
    let mut rows = Vec::new();
    for (m, lambdas) in table.m_schedule.iter().zip(&table.lambdas) {
        let mut row: Vec<Cell> = vec![(*m).into()];
        row.extend(lambdas.iter().map(|&l| Cell::from(l)));
        if p.is_classical() {
            for (i, l) in lambdas.iter().enumerate() {
                let want = classical_eigenvalue(config, i + 1);
                let rel = (l - want).abs() / want;
                report.at_most(
                    format!("classical_relerr[m={m},{}]", i + 1),
                    "criterion 8",
                    rel,
                    config.tol("classical_relerr"),
                );
            }
        }
        rows.push(row);
    }
    for (i, inc) in table.max_increase.iter().enumerate() {
        report.at_most(format!("monotone[{}]", i + 1), "criterion 9", inc.max(0.0), config.tol("monotone"));
        report.scalar(format!("converged_{}", i + 1), if table.converged[i] { 1.0 } else { 0.0 });
    }
    let names: Vec<String> = (1..=r).map(|j| format!("lambda_{j}")).collect();
    let mut header = vec!["m"];
    header.extend(names.iter().map(String::as_str));
    report.table("convergence", &header, rows);
    Ok(())
}

fn caputo_half() -> Result<OperatorBinding> {
    Ok(OperatorBinding::new(ParameterSet::left(0.0, 1.0)?, Kernel::power_law(0.5, Variant::Derivative)?)?)
}

/// The model problem and its exact minimizer.
fn direct_problem(kind: DirectProblem) -> Result<(VariationalProblem, Exact)> {
    Ok(match kind {
        DirectProblem::Quadratic => {
            let l = Lagrangian::new(|x1, x2, x3, x4, _| 0.5 * (x1 * x1 + x2 * x2 + x3 * x3 + x4 * x4));
            let p = VariationalProblem::new(l, Some(caputo_half()?))?.with_boundary(Some(0.0), Some(0.0));
            (p, Box::new(|_| 0.0))
        }
        DirectProblem::QuasiLinear => {
            // f1 is chosen so that sin(πt) is the exact extremal.
            let g15 = gamma(1.5)?;
            let f1 = move |t: f64| -PI * PI * (PI * t).sin() + 1.0 - (1.0 - t).sqrt() / g15;
            let l = Lagrangian::new(move |x1, x2, x3, _, t| 0.5 * x3 * x3 + f1(t) * x1 + x2 + t * x3)
                .with_partial(1, move |_, _, _, _, t| f1(t))?
                .with_partial(2, |_, _, _, _, _| 1.0)?
                .with_partial(3, |_, _, x3, _, t| x3 + t)?
                .with_partial(4, |_, _, _, _, _| 0.0)?;
            let p = VariationalProblem::new(l, Some(caputo_half()?))?.with_boundary(Some(0.0), Some(0.0));
            (p, Box::new(|t| (PI * t).sin()))
        }
        DirectProblem::Volterra => {
            let binding = OperatorBinding::new(ParameterSet::left(0.0, 1.0)?, Kernel::difference(|s| (-s).exp()))?;
            let l =
                Lagrangian::new(|_, x2, _, _, t| (x2 + t).powi(2)).with_partial(2, |_, x2, _, _, t| 2.0 * (x2 + t))?;
            let p = VariationalProblem::new(l, Some(binding))?.with_boundary(Some(-1.0), Some(-2.0));
            (p, Box::new(|t| -1.0 - t))
        }
    })
}

pub fn direct_min(config: &ExperimentConfig, report: &mut Report) -> Result<()> {
    let kind = config.problem.expect("resolved");
    let grid = unit_grid(config.n)?;
    let (p, exact) = direct_problem(kind)?;
    let basis = RitzBasis::sine(grid, config.m.expect("resolved"))?;
    let probe = coercivity_probe(&p, &basis, PROBE_DIRECTIONS, config.seed)?;
    let increasing = probe.rays.iter().filter(|r| r.increasing).count() as f64 / probe.rays.len() as f64;
    report.at_least("coercive_rays", "criterion 10", increasing, 1.0);
    let r = direct_minimize(&p, &basis, &MinimizeOptions::default())?;
    let el = interior_sup(&el_residual(&p, &r.y)?);
    let exact_y = SampledFunction::from_fn(grid, exact)?;
    let err = r.y.combine(1.0, &exact_y, -1.0)?.sup_norm();
    report.at_most("gradient", "criterion 10", r.gradient_norm, config.tol("gradient"));
    report.at_most("el_residual", "criterion 10", el, config.tol("el_residual"));
    report.at_most("solution_error", "criterion 10", err, config.tol("solution_error"));
    if kind == DirectProblem::Volterra {
        report.at_most("value", "criterion 5", r.value, config.tol("value"));
    }
    report.scalar("value", r.value);
    report.scalar("iterations", r.iterations as f64);
    let row: Vec<Cell> = vec![
        config.m.expect("resolved").into(),
        r.value.into(),
        r.gradient_norm.into(),
        el.into(),
        err.into(),
        r.iterations.into(),
        r.converged.into(),
    ];
    report.table(
        "minimizer",
        &["m", "value", "gradient_norm", "el_residual", "solution_error", "iterations", "converged"],
        vec![row],
    );
    let probe_rows = probe
        .rays
        .iter()
        .enumerate()
        .map(|(i, ray)| {
            vec![i.into(), ray.values[0].into(), ray.values[1].into(), ray.values[2].into(), ray.increasing.into()]
        })
        .collect();
    report.table("coercivity", &["ray", "value_1", "value_10", "value_100", "increasing"], probe_rows);
    report.series("minimizer", grid.nodes(), r.y.into_values());
    Ok(())
}
