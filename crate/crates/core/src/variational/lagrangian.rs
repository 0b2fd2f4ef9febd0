//! Lagrangians `F(x1, x2, x3, x4, t)` with analytic or finite-difference
//! partial derivatives.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Real function of the four state slots and time.
pub type Fn5 = Arc<dyn Fn(f64, f64, f64, f64, f64) -> f64 + Send + Sync>;

/// Number of random points used by [`Lagrangian::check_partials`].
pub const PARTIAL_CHECK_POINTS: usize = 100;

/// A Lagrangian evaluated on `(y, K_P y, y', B_P y, t)`.
///
/// Missing partials are replaced by central differences with step
/// `1e-6 (1 + |x_i|)`.
#[derive(Clone)]
pub struct Lagrangian {
    f: Fn5,
    partials: [Option<Fn5>; 4],
}

impl fmt::Debug for Lagrangian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let analytic: Vec<usize> = (0..4).filter(|&i| self.partials[i].is_some()).map(|i| i + 1).collect();
        f.debug_struct("Lagrangian").field("analytic_partials", &analytic).finish()
    }
}

impl Lagrangian {
    /// Wraps `F` with no analytic partials.
    pub fn new(f: impl Fn(f64, f64, f64, f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f), partials: [None, None, None, None] }
    }

    /// Supplies the analytic partial `∂_i F` for `i` in `1..=4`.
    pub fn with_partial(
        mut self,
        i: usize,
        d: impl Fn(f64, f64, f64, f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(1..=4).contains(&i) {
            return Err(Error::Input(format!("partial index must be 1..=4, got {i}")));
        }
        self.partials[i - 1] = Some(Arc::new(d));
        Ok(self)
    }

    /// `F(x1, x2, x3, x4, t)`.
    pub fn value(&self, x: [f64; 5]) -> f64 {
        (self.f)(x[0], x[1], x[2], x[3], x[4])
    }

    /// Whether an analytic `∂_i F` was supplied.
    pub fn has_analytic(&self, i: usize) -> bool {
        (1..=4).contains(&i) && self.partials[i - 1].is_some()
    }

    /// `∂_i F`, analytic when available.
    pub fn partial(&self, i: usize, x: [f64; 5]) -> f64 {
        match &self.partials[i - 1] {
            Some(d) => d(x[0], x[1], x[2], x[3], x[4]),
            None => self.fd_partial(i, x),
        }
    }

    /// Central-difference approximation of `∂_i F`.
    pub fn fd_partial(&self, i: usize, x: [f64; 5]) -> f64 {
        let k = i - 1;
        let step = 1e-6 * (1.0 + x[k].abs());
        let mut hi = x;
        let mut lo = x;
        hi[k] += step;
        lo[k] -= step;
        (self.value(hi) - self.value(lo)) / (hi[k] - lo[k])
    }

    /// Compares every analytic partial with its finite-difference estimate at
    /// seeded random points with state slots in `[-2, 2]` and `t` in `[a, b]`.
    /// Agreement is required to `1e-4` relative (absolute near zero).
    pub fn check_partials(&self, a: f64, b: f64, seed: u64) -> Result<()> {
        if self.partials.iter().all(Option::is_none) {
            return Ok(());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..PARTIAL_CHECK_POINTS {
            let x = [
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(a..=b),
            ];
            for i in 1..=4 {
                if !self.has_analytic(i) {
                    continue;
                }
                let an = self.partial(i, x);
                let fd = self.fd_partial(i, x);
                if (an - fd).abs() > 1e-4 * an.abs().max(1.0) || !an.is_finite() {
                    return Err(Error::Input(format!(
                        "analytic partial {i} disagrees with finite differences at {x:?}: {an} vs {fd}"
                    )));
                }
            }
        }
        Ok(())
    }
}
