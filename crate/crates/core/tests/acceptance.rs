//! Acceptance suite. Runs every criterion sequentially inside one test so the
//! wall-clock budgets are not distorted by other tests sharing the CPU, and
//! prints one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p fracvar-core --test acceptance -- --nocapture`.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use fracvar_core::numerics::{
    cumulative_trapezoid, erfc, gamma, mittag_leffler, symmetric_eigen, trapezoid, Grid, SampledFunction,
    SymmetricMatrix,
};
use fracvar_core::operators::{
    boundedness_constant, classical, k_apply, verify_ibp, verify_semigroup, ClassicalOp, Kernel, OperatorBinding,
    ParameterSet, Variant,
};
use fracvar_core::sturm_liouville::{
    converge, direct_minimize, rayleigh_quotient, solve_spectrum, MinimizeOptions, RitzBasis, SLProblem,
};
use fracvar_core::variational::{
    el_residual, interior_sup, isoperimetric_residual, noether_drift, Lagrangian, NoetherGenerator, VariationalProblem,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Check {
    ok: bool,
    detail: String,
}

impl Check {
    fn new() -> Self {
        Self { ok: true, detail: String::new() }
    }

    /// Records `value < bound` (or `<=` when `inclusive`).
    fn below(&mut self, label: &str, value: f64, bound: f64) {
        let pass = value < bound;
        self.ok &= pass;
        if !pass || self.detail.len() < 400 {
            self.detail.push_str(&format!("{}{label}={value:.3e}<{bound:.1e}", if pass { " " } else { " !" }));
        }
    }

    fn holds(&mut self, label: &str, pass: bool) {
        self.ok &= pass;
        if !pass {
            self.detail.push_str(&format!(" !{label}"));
        }
    }
}

fn unit(n: usize) -> Grid {
    Grid::new(0.0, 1.0, n).unwrap()
}

fn middle(f: &SampledFunction) -> f64 {
    f.sup_over(f.grid().window(0.1, 0.9))
}

fn diff(a: &SampledFunction, b: &SampledFunction) -> SampledFunction {
    a.combine(1.0, b, -1.0).unwrap()
}

fn caputo_left(a: f64, b: f64, alpha: f64) -> OperatorBinding {
    OperatorBinding::new(ParameterSet::left(a, b).unwrap(), Kernel::power_law(alpha, Variant::Derivative).unwrap())
        .unwrap()
}

// Power functions and their closed-form images under the four operators.
fn identity_errors(alpha: f64, beta: f64, n: usize) -> [f64; 4] {
    let g = unit(n);
    let ga = |x: f64| gamma(x).unwrap();
    let left = SampledFunction::from_fn(g, |t| t.powf(beta - 1.0)).unwrap();
    let right = SampledFunction::from_fn(g, |t| (1.0 - t).powf(beta - 1.0)).unwrap();
    let int_coef = ga(beta) / ga(beta + alpha);
    let der_coef = ga(beta) / ga(beta - alpha);
    // Endpoint singularities lie outside the compared window.
    let finite = |v: f64| if v.is_finite() { v } else { 0.0 };
    let want = [
        SampledFunction::from_fn(g, |t| int_coef * t.powf(beta + alpha - 1.0)).unwrap(),
        SampledFunction::from_fn(g, |t| int_coef * (1.0 - t).powf(beta + alpha - 1.0)).unwrap(),
        SampledFunction::from_fn(g, |t| finite(der_coef * t.powf(beta - alpha - 1.0))).unwrap(),
        SampledFunction::from_fn(g, |t| finite(der_coef * (1.0 - t).powf(beta - alpha - 1.0))).unwrap(),
    ];
    let got = [
        classical(ClassicalOp::RLIntLeft, alpha, &left).unwrap(),
        classical(ClassicalOp::RLIntRight, alpha, &right).unwrap(),
        classical(ClassicalOp::RLDerLeft, alpha, &left).unwrap(),
        classical(ClassicalOp::RLDerRight, alpha, &right).unwrap(),
    ];
    [0, 1, 2, 3].map(|i| middle(&diff(&got[i], &want[i])))
}

fn criterion_1() -> Check {
    let mut c = Check::new();
    let mut worst = 0.0_f64;
    let mut worst_order = f64::INFINITY;
    for alpha in [0.3, 0.5, 0.7] {
        for beta in [1.0, 1.5, 2.0] {
            let coarse = identity_errors(alpha, beta, 2048);
            let fine = identity_errors(alpha, beta, 4096);
            for i in 0..4 {
                worst = worst.max(fine[i]);
                // Identities reproduced to rounding on both grids have no
                // measurable order; they count as converged.
                if coarse[i] > 1e-10 || fine[i] > 1e-10 {
                    let order = (coarse[i] / fine[i]).log2();
                    worst_order = worst_order.min(order);
                    c.holds(&format!("order(a={alpha},b={beta},id={i})={order:.2}"), order >= 1.0);
                }
            }
        }
    }
    c.below("max_err", worst, 5e-3);
    c.detail.push_str(&format!(" min_order={worst_order:.2}"));
    c
}

fn criterion_2() -> Check {
    let mut c = Check::new();
    let g = unit(2048);
    let fs: [fn(f64) -> f64; 4] = [|_| 1.0, |t| t, |t| t * t, f64::sin];
    let (mut semi, mut rl_inv, mut cap_inv) = (0.0_f64, 0.0_f64, 0.0_f64);
    for f in fs {
        let f = SampledFunction::from_fn(g, f).unwrap();
        for (a, b) in [(0.3, 0.4), (0.5, 0.25), (0.2, 0.7)] {
            semi = semi.max(verify_semigroup(a, b, &f).unwrap());
        }
        for alpha in [0.3, 0.5, 0.7] {
            let i = classical(ClassicalOp::RLIntLeft, alpha, &f).unwrap();
            let d = classical(ClassicalOp::RLDerLeft, alpha, &i).unwrap();
            let cd = classical(ClassicalOp::CaputoLeft, alpha, &i).unwrap();
            rl_inv = rl_inv.max(middle(&diff(&d, &f)));
            cap_inv = cap_inv.max(middle(&diff(&cd, &f)));
        }
    }
    c.below("semigroup", semi, 5e-3);
    c.below("rl_inverse", rl_inv, 5e-3);
    c.below("caputo_inverse", cap_inv, 5e-3);
    c
}

fn random_poly(rng: &mut ChaCha8Rng) -> [f64; 5] {
    let degree = rng.gen_range(0..=4);
    let mut p = [0.0; 5];
    for coef in p.iter_mut().take(degree + 1) {
        *coef = rng.gen_range(-1.0..1.0);
    }
    p
}

fn criterion_3() -> Check {
    let mut c = Check::new();
    let g = unit(4096);
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut worst = 0.0_f64;
    for pair in 0..20 {
        let (pf, pg) = (random_poly(&mut rng), random_poly(&mut rng));
        let eval = |p: [f64; 5]| move |t: f64| p.iter().rev().fold(0.0, |acc, c| acc * t + c);
        let f = SampledFunction::from_fn(g, eval(pf)).unwrap();
        let h = SampledFunction::from_fn(g, eval(pg)).unwrap();
        // Alternate between one-sided and two-sided parameter sets.
        let p = if pair % 2 == 0 {
            ParameterSet::left(0.0, 1.0).unwrap()
        } else {
            ParameterSet::new(0.0, 1.0, 0.7, -1.3).unwrap()
        };
        let r = verify_ibp(p, Kernel::difference(|s| (-s).exp()), &f, &h).unwrap();
        worst = worst.max(r.residual);
    }
    c.below("smooth_ibp", worst, 1e-6);
    let kernel =
        Kernel::general(|t, s| (t * t - s * s) / (t * t + s * s).powi(2), 0.0).unwrap().with_corner_singularity();
    let one = SampledFunction::from_fn(g, |_| 1.0).unwrap();
    let r = verify_ibp(ParameterSet::new(0.0, 1.0, 1.0, -1.0).unwrap(), kernel, &one, &one).unwrap();
    c.below("|lhs-pi/4|", (r.lhs - PI / 4.0).abs(), 2e-3);
    c.below("|rhs+pi/4|", (r.rhs + PI / 4.0).abs(), 2e-3);
    c.holds(&format!("residual={:.4}>1.5", r.residual), r.residual > 1.5);
    c.detail.push_str(&format!(" counterexample_residual={:.4}", r.residual));
    c
}

fn criterion_4() -> Check {
    let mut c = Check::new();
    let alpha = 0.4;
    let n = 4096;
    let g = unit(n);
    // y(t) = ∫_0^t E_{1-α}(-s^{1-α}) ds, integrated on a 16x finer grid.
    let fine = unit(16 * n);
    let e = SampledFunction::from_fn(fine, |s| mittag_leffler(1.0 - alpha, -s.powf(1.0 - alpha)).unwrap()).unwrap();
    let cum = cumulative_trapezoid(&e);
    let y = SampledFunction::new(g, (0..=n).map(|i| cum.values()[16 * i]).collect()).unwrap();
    let cd = classical(ClassicalOp::CaputoLeft, alpha, &y).unwrap();
    let r = y.derivative().combine(1.0, &cd, 1.0).unwrap().map(|_, v| v - 1.0).unwrap();
    c.below("sup|y'+CD^a y-1|", middle(&r), 1e-2);

    // The same trajectory is an extremal of sqrt(1 + (x3 + x4 - 1)^2). Its
    // second derivative is singular at t = 0, where the pointwise residual
    // grows under refinement, so it is read on the same middle window.
    let l = Lagrangian::new(|_, _, x3, x4, _| (1.0 + (x3 + x4 - 1.0).powi(2)).sqrt());
    let p = VariationalProblem::new(l, Some(caputo_left(0.0, 1.0, alpha))).unwrap();
    c.below("el_residual_mid", middle(&el_residual(&p, &y).unwrap()), 1e-2);
    c
}

fn volterra_binding() -> OperatorBinding {
    OperatorBinding::new(ParameterSet::left(0.0, 1.0).unwrap(), Kernel::difference(|s| (-s).exp())).unwrap()
}

fn volterra_problem() -> VariationalProblem {
    let l =
        Lagrangian::new(|_, x2, _, _, t| (x2 + t).powi(2)).with_partial(2, |_, x2, _, _, t| 2.0 * (x2 + t)).unwrap();
    VariationalProblem::new(l, Some(volterra_binding())).unwrap().with_boundary(Some(-1.0), Some(-2.0))
}

fn criterion_5() -> Check {
    let mut c = Check::new();
    let g = unit(1024);
    let y = SampledFunction::from_fn(g, |t| -1.0 - t).unwrap();
    let ky = k_apply(&volterra_binding(), &y).unwrap();
    let t = SampledFunction::from_fn(g, |t| t).unwrap();
    c.below("sup|K[y]+t|", ky.combine(1.0, &t, 1.0).unwrap().sup_norm(), 1e-6);
    let basis = RitzBasis::sine(g, 16).unwrap();
    let r = direct_minimize(&volterra_problem(), &basis, &MinimizeOptions::default()).unwrap();
    c.below("sup|y_min-y|", diff(&r.y, &y).sup_norm(), 5e-3);
    c.below("value", r.value, 1e-6);
    c
}

fn criterion_6() -> Check {
    let mut c = Check::new();
    let (alpha, xi) = (0.3, 2.0);
    let g = unit(2048);
    let binding =
        OperatorBinding::new(ParameterSet::left(0.0, 1.0).unwrap(), Kernel::difference(move |s| (alpha * s).exp()))
            .unwrap();
    let f = Lagrangian::new(|_, x2, _, _, t| (x2 + t).powi(2));
    let constraint = Lagrangian::new(|_, x2, _, _, t| t * x2);
    let p = VariationalProblem::new(f, Some(binding)).unwrap();
    let y = SampledFunction::from_fn(g, |t| (xi - 1.0) * (1.0 - alpha * t)).unwrap();
    // K[y] = (ξ - 1) t exactly, so J(y) = (ξ - 1) / 3.
    let r = isoperimetric_residual(&p, &constraint, (xi - 1.0) / 3.0, &y).unwrap();
    c.below("|lambda0-2xi|", (r.lambda0 - 2.0 * xi).abs(), 1e-2);
    c.below("residual", r.residual_sup, 1e-2);
    c.detail.push_str(&format!(" lambda0={:.6}", r.lambda0));
    c
}

fn criterion_7() -> Check {
    let mut c = Check::new();
    let alpha = 0.5;
    let g = unit(2048);
    // Tracking Lagrangian F(B_P y, t): its minimizer under y(0)=0, y(1)=1 is
    // t², whose Caputo derivative is the tracked profile.
    let target = move |t: f64| 2.0 * t.powf(2.0 - alpha) / gamma(3.0 - alpha).unwrap();
    let l = Lagrangian::new(move |_, _, _, x4, t| (x4 - target(t)).powi(2))
        .with_partial(4, move |_, _, _, x4, t| 2.0 * (x4 - target(t)))
        .unwrap();
    let p = VariationalProblem::new(l, Some(caputo_left(0.0, 1.0, alpha))).unwrap().with_boundary(Some(0.0), Some(1.0));
    let basis = RitzBasis::sine(g, 48).unwrap();
    let r = direct_minimize(&p, &basis, &MinimizeOptions::default()).unwrap();
    let rep = noether_drift(&p, &r.y, &NoetherGenerator::constant(1.0)).unwrap();
    c.below("fractional_drift", rep.drift, 1e-3);
    c.holds("no_warning", rep.warning.is_none());

    let l = Lagrangian::new(|_, _, x3, _, _| x3 * x3).with_partial(3, |_, _, x3, _, _| 2.0 * x3).unwrap();
    let p = VariationalProblem::new(l, Some(caputo_left(0.0, 1.0, alpha))).unwrap();
    let y = SampledFunction::from_fn(g, |t| t).unwrap();
    let rep = noether_drift(&p, &y, &NoetherGenerator::constant(1.0)).unwrap();
    c.below("classical_drift", rep.drift, 1e-12);
    c
}

fn criterion_8() -> Check {
    let mut c = Check::new();
    let p = SLProblem::classical();
    let basis = RitzBasis::for_problem(&p, 10, p.grid(1024).unwrap()).unwrap();
    let s = solve_spectrum(&p, &basis, 3).unwrap();
    for (j, l) in s.lambdas.iter().enumerate() {
        let want = ((j + 1) * (j + 1)) as f64;
        c.below(&format!("relerr_{}", j + 1), (l - want).abs() / want, 1e-2);
    }
    c
}

fn criterion_9() -> Check {
    let mut c = Check::new();
    let n = 8192;
    let schedule = [4, 8, 16, 32];
    let classical = SLProblem::classical();
    let classical_l1 = converge(&classical, &schedule, 1, classical.grid(n).unwrap()).unwrap().lambdas[3][0];
    for alpha in [0.75, 0.9] {
        let p = SLProblem::new(alpha).unwrap();
        let grid = p.grid(n).unwrap();
        let table = converge(&p, &schedule, 3, grid).unwrap();
        c.below(&format!("a={alpha}:max_increase"), table.max_increase[0].max(0.0), 1e-8);
        let strict = table.lambdas.iter().all(|row| row.windows(2).all(|w| w[0] < w[1]));
        c.holds(&format!("a={alpha}:strict_order"), strict);

        let basis = RitzBasis::for_problem(&p, 32, grid).unwrap();
        let s = solve_spectrum(&p, &basis, 3).unwrap();
        let mut gram_off = 0.0_f64;
        let mut rq = 0.0_f64;
        for i in 0..3 {
            let yi = &s.eigenfunctions[i];
            for j in 0..3 {
                let yj = &s.eigenfunctions[j];
                let gij = trapezoid(&yi.mul(yj).unwrap().map(|t, v| p.w(t) * v).unwrap());
                let want = if i == j { 1.0 } else { 0.0 };
                gram_off = gram_off.max((gij - want).abs());
            }
            rq = rq.max((rayleigh_quotient(&p, yi).unwrap() - s.lambdas[i]).abs());
        }
        c.below(&format!("a={alpha}:gram"), gram_off, 2e-3);
        c.below(&format!("a={alpha}:rayleigh"), rq, 1e-8);
        let k = boundedness_constant(1.0 - alpha, 0.0, PI).unwrap();
        let bound = k * k * classical_l1;
        c.holds(&format!("a={alpha}:l1={:.4}<=K^2 l1(1)={bound:.4}", s.lambdas[0]), s.lambdas[0] <= bound);
        c.detail.push_str(&format!(" a={alpha}:l1..3={:.4},{:.4},{:.4}", s.lambdas[0], s.lambdas[1], s.lambdas[2]));
    }
    c
}

fn criterion_10() -> Check {
    let mut c = Check::new();
    let g = unit(2048);
    let alpha = 0.5;
    let opts = MinimizeOptions::default();
    let mut run = |name: &str, p: &VariationalProblem, m: usize| {
        let basis = RitzBasis::sine(g, m).unwrap();
        let r = direct_minimize(p, &basis, &opts).unwrap();
        c.below(&format!("{name}:grad"), r.gradient_norm, 1e-8);
        c.below(&format!("{name}:el"), interior_sup(&el_residual(p, &r.y).unwrap()), 1e-2);
    };

    let quad = Lagrangian::new(|x1, x2, x3, x4, _| 0.5 * (x1 * x1 + x2 * x2 + x3 * x3 + x4 * x4));
    let p1 =
        VariationalProblem::new(quad, Some(caputo_left(0.0, 1.0, alpha))).unwrap().with_boundary(Some(0.0), Some(0.0));
    run("quadratic", &p1, 16);

    // Quasi-linear Lagrangian whose data are chosen so that sin(πt) is the
    // exact extremal.
    let g15 = gamma(1.5).unwrap();
    let f1 = move |t: f64| -PI * PI * (PI * t).sin() + 1.0 - (1.0 - t).sqrt() / g15;
    let quasi = Lagrangian::new(move |x1, x2, x3, _, t| 0.5 * x3 * x3 + f1(t) * x1 + x2 + t * x3)
        .with_partial(1, move |_, _, _, _, t| f1(t))
        .unwrap()
        .with_partial(2, |_, _, _, _, _| 1.0)
        .unwrap()
        .with_partial(3, |_, _, x3, _, t| x3 + t)
        .unwrap()
        .with_partial(4, |_, _, _, _, _| 0.0)
        .unwrap();
    let p3 =
        VariationalProblem::new(quasi, Some(caputo_left(0.0, 1.0, alpha))).unwrap().with_boundary(Some(0.0), Some(0.0));
    run("quasi_linear", &p3, 16);

    run("volterra", &volterra_problem(), 16);
    c
}

fn criterion_11() -> Check {
    let mut c = Check::new();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let dim = rng.gen_range(1..=50);
        let mut e = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..=i {
                let v: f64 = rng.gen_range(-1.0..1.0);
                e[i * dim + j] = v;
                e[j * dim + i] = v;
            }
        }
        let a = SymmetricMatrix::new(dim, e).unwrap();
        let d = symmetric_eigen(&a).unwrap();
        let mut err = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                let r: f64 = (0..dim).map(|k| d.vectors[k][i] * d.values[k] * d.vectors[k][j]).sum();
                err += (r - a.get(i, j)).powi(2);
            }
        }
        worst = worst.max(err.sqrt() / a.frobenius_norm());
    }
    c.below("eigen_reconstruction", worst, 1e-10);
    let mut ml = 0.0_f64;
    for i in 0..100 {
        let z = -20.0 + 25.0 * i as f64 / 99.0;
        ml = ml.max((mittag_leffler(1.0, z).unwrap() - z.exp()).abs());
    }
    c.below("ml_vs_exp", ml, 1e-10);
    c
}

/// The Caputo isoperimetric example with its erfc closed form; not a
/// numbered criterion, run here because it shares criterion 6's machinery.
fn caputo_isoperimetric() -> Check {
    let mut c = Check::new();
    let (alpha, xi) = (0.5, 1.0);
    let g = unit(4096);
    let y = SampledFunction::from_fn(g, |t| xi * (t.exp() * erfc(t.sqrt()) + 2.0 * (t / PI).sqrt() - 1.0)).unwrap();
    let f = Lagrangian::new(|_, _, x3, x4, _| (x3 + x4).powi(2));
    let constraint = Lagrangian::new(|_, _, x3, x4, _| x3 + x4);
    let p = VariationalProblem::new(f, Some(caputo_left(0.0, 1.0, alpha))).unwrap();
    let r = isoperimetric_residual(&p, &constraint, xi, &y).unwrap();
    c.below("|lambda0-2xi|", (r.lambda0 - 2.0 * xi).abs(), 5e-2);
    // y'' is singular at t = 0, so the residual of H is read on the middle
    // window; the interior value next to t = 0 grows under refinement.
    let ef = el_residual(&p, &y).unwrap();
    let eg = el_residual(&p.with_lagrangian(constraint), &y).unwrap();
    c.below("residual_mid", middle(&ef.combine(1.0, &eg, -r.lambda0).unwrap()), 5e-2);
    c.detail.push_str(&format!(" residual_interior={:.3e}", r.residual_sup));
    c
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, fn() -> Check, Duration);
    let secs = Duration::from_secs;
    let criteria: [Criterion; 12] = [
        ("1 power-law identities", criterion_1, secs(10)),
        ("2 semigroup and inverse laws", criterion_2, secs(10)),
        ("3 generalized integration by parts", criterion_3, secs(30)),
        ("4 Mittag-Leffler extremal", criterion_4, secs(20)),
        ("5 Volterra example", criterion_5, secs(30)),
        ("6 isoperimetric multiplier", criterion_6, secs(20)),
        ("7 Noether drift", criterion_7, secs(20)),
        ("8 Sturm-Liouville classical limit", criterion_8, secs(5)),
        ("9 fractional Sturm-Liouville properties", criterion_9, secs(180)),
        ("10 direct-method optimality", criterion_10, secs(120)),
        ("11 foundation properties", criterion_11, secs(5)),
        ("extra Caputo isoperimetric", caputo_isoperimetric, secs(20)),
    ];
    let mut failed = Vec::new();
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let mut check = run();
        let elapsed = start.elapsed();
        check.holds(&format!("runtime {:.1}s > {}s", elapsed.as_secs_f64(), budget.as_secs()), elapsed < budget);
        let tag = if check.ok { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {name} ({:.2}s):{}", elapsed.as_secs_f64(), check.detail);
        if !check.ok {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
