//! Quadrature rules, including product-integration weights for the weakly
//! singular factor `(t_j - τ)^{μ-1}`.

use super::grid::{Grid, SampledFunction};
use crate::error::{Error, Result};

/// Composite trapezoid rule over the whole grid.
pub fn trapezoid(f: &SampledFunction) -> f64 {
    trapezoid_values(f.values(), f.grid().h())
}

pub(crate) fn trapezoid_values(v: &[f64], h: f64) -> f64 {
    let n = v.len() - 1;
    let inner: f64 = v[1..n].iter().sum();
    h * (inner + 0.5 * (v[0] + v[n]))
}

/// Running trapezoid integral `∫_a^{t_j} f`, one value per node.
pub fn cumulative_trapezoid(f: &SampledFunction) -> SampledFunction {
    let h = f.grid().h();
    let v = f.values();
    let mut out = vec![0.0; v.len()];
    for j in 1..v.len() {
        out[j] = out[j - 1] + 0.5 * h * (v[j - 1] + v[j]);
    }
    SampledFunction::new(f.grid(), out).expect("partial sums of finite samples are finite")
}

/// Eight-point Gauss-Legendre rule mapped to `[0, 1]`: (abscissa, weight).
pub(crate) const GAUSS8: [(f64, f64); 8] = {
    const X: [f64; 4] =
        [0.183_434_642_495_649_8, 0.525_532_409_916_329, 0.796_666_477_413_626_7, 0.960_289_856_497_536_3];
    const W: [f64; 4] =
        [0.362_683_783_378_362, 0.313_706_645_877_887_3, 0.222_381_034_453_374_5, 0.101_228_536_290_376_3];
    [
        (0.5 - 0.5 * X[3], 0.5 * W[3]),
        (0.5 - 0.5 * X[2], 0.5 * W[2]),
        (0.5 - 0.5 * X[1], 0.5 * W[1]),
        (0.5 - 0.5 * X[0], 0.5 * W[0]),
        (0.5 + 0.5 * X[0], 0.5 * W[0]),
        (0.5 + 0.5 * X[1], 0.5 * W[1]),
        (0.5 + 0.5 * X[2], 0.5 * W[2]),
        (0.5 + 0.5 * X[3], 0.5 * W[3]),
    ]
};

/// Moments of `x^{μ-1}` on the unit cell `[m, m+1]` against the two linear
/// shape functions: `p = ∫ x^{μ-1} (m+1-x) dx`, `q = ∫ x^{μ-1} (x-m) dx`.
///
/// For `m >= 8` the binomial expansion of `(1 + y/m)^{μ-1}` is summed
/// directly, which avoids the cancellation of the closed-form differences.
pub(crate) fn power_cell_moments(mu: f64, m: usize) -> (f64, f64) {
    if m == 0 {
        return (1.0 / (mu * (mu + 1.0)), 1.0 / (mu + 1.0));
    }
    let mf = m as f64;
    if m < 8 {
        let lr = (1.0 / mf).ln_1p();
        let i0 = mf.powf(mu) * (mu * lr).exp_m1() / mu;
        let i1 = mf.powf(mu + 1.0) * ((mu + 1.0) * lr).exp_m1() / (mu + 1.0);
        return ((mf + 1.0) * i0 - i1, i1 - mf * i0);
    }
    let inv = 1.0 / mf;
    let mut c = 1.0;
    let mut scale = 1.0;
    let (mut p, mut q) = (0.0, 0.0);
    for k in 0..80 {
        let kf = k as f64;
        let tp = c * scale / ((kf + 1.0) * (kf + 2.0));
        let tq = c * scale / (kf + 2.0);
        p += tp;
        q += tq;
        if tq.abs() < 1e-18 * q.abs() {
            break;
        }
        c *= (mu - 1.0 - kf) / (kf + 1.0);
        scale *= inv;
    }
    let lead = mf.powf(mu - 1.0);
    (lead * p, lead * q)
}

/// Cell moments for every distance `0..len`, scaled by `h^μ`.
pub(crate) fn power_moment_table(mu: f64, h: f64, len: usize) -> (Vec<f64>, Vec<f64>) {
    let s = h.powf(mu);
    let mut p = Vec::with_capacity(len);
    let mut q = Vec::with_capacity(len);
    for m in 0..len {
        let (pm, qm) = power_cell_moments(mu, m);
        p.push(s * pm);
        q.push(s * qm);
    }
    (p, q)
}

/// Product-integration weights for `∫_a^{t_j} (t_j - τ)^{μ-1} f(τ) dτ`.
///
/// The returned `w_0..w_j` integrate the piecewise-linear interpolant of `f`
/// exactly, the moments against each hat function being evaluated in
/// closed form.
pub fn singular_weights(mu: f64, grid: &Grid, j: usize) -> Result<Vec<f64>> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::Domain(format!("singular exponent mu must lie in (0,1), got {mu}")));
    }
    if j > grid.n() {
        return Err(Error::Input(format!("node index {j} exceeds grid size {}", grid.n())));
    }
    if j == 0 {
        return Ok(Vec::new());
    }
    let (p, q) = power_moment_table(mu, grid.h(), j);
    let mut w = vec![0.0; j + 1];
    for d in 0..j {
        w[j - d] += p[d];
        w[j - d - 1] += q[d];
    }
    Ok(w)
}
