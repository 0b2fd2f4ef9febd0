//! Parameter sets, kernels and their bindings.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::gamma;

/// Real function of one variable shared across threads.
pub type Fn1 = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
/// Real function of two variables shared across threads.
pub type Fn2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// The tuple `⟨a, b, λ, μ⟩`; the evaluation point is supplied at apply time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterSet {
    /// Left endpoint.
    pub a: f64,
    /// Right endpoint.
    pub b: f64,
    /// Weight of the left (`∫_a^t`) term.
    pub lambda: f64,
    /// Weight of the right (`∫_t^b`) term.
    pub mu: f64,
}

impl ParameterSet {
    /// Creates a parameter set. Both weights zero is allowed but yields the
    /// zero operator; [`ParameterSet::is_trivial`] reports that case.
    pub fn new(a: f64, b: f64, lambda: f64, mu: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && lambda.is_finite() && mu.is_finite()) {
            return Err(Error::Input("parameter set entries must be finite".into()));
        }
        if b <= a {
            return Err(Error::Input(format!("parameter set requires b > a, got [{a}, {b}]")));
        }
        Ok(Self { a, b, lambda, mu })
    }

    /// Purely left-sided set `⟨a, b, 1, 0⟩`.
    pub fn left(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, 1.0, 0.0)
    }

    /// Purely right-sided set `⟨a, b, 0, 1⟩`.
    pub fn right(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, 0.0, 1.0)
    }

    /// True when both weights vanish.
    pub fn is_trivial(&self) -> bool {
        self.lambda == 0.0 && self.mu == 0.0
    }
}

/// Swaps the left and right weights. Applying it twice is the identity.
pub fn dual(p: ParameterSet) -> ParameterSet {
    ParameterSet { lambda: p.mu, mu: p.lambda, ..p }
}

/// Whether a power-law or variable-order kernel carries the integral
/// exponent `α - 1` or the derivative exponent `-α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// `(t-τ)^{α-1} / Γ(α)`.
    Integral,
    /// `(t-τ)^{-α} / Γ(1-α)`, whose integral operator is `I^{1-α}`.
    Derivative,
}

/// The shape of a kernel `k(t, τ)`.
#[derive(Clone)]
pub enum KernelKind {
    /// `k(t, τ) = h(t - τ)` with bounded `h`.
    Difference(Fn1),
    /// Arbitrary `k(t, τ)`.
    General(Fn2),
    /// Riemann-Liouville power kernel of a fixed order in (0,1).
    PowerLaw {
        /// Order α.
        order: f64,
        /// Integral or derivative exponent.
        variant: Variant,
    },
    /// Power kernel whose order `α(t, τ)` varies with both arguments.
    VariableOrder {
        /// Order function with values in (0,1).
        alpha: Fn2,
        /// Integral or derivative exponent.
        variant: Variant,
    },
    /// Hadamard kernel `(log(t/τ))^{α-1} / (Γ(α) τ)`, defined for `a > 0`.
    Hadamard {
        /// Order α.
        order: f64,
    },
}

/// A kernel together with its declared behaviour near the diagonal.
#[derive(Clone)]
pub struct Kernel {
    kind: KernelKind,
    singularity_exponent: f64,
    corner_singular: bool,
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            KernelKind::Difference(_) => "Difference".to_string(),
            KernelKind::General(_) => "General".to_string(),
            KernelKind::PowerLaw { order, variant } => format!("PowerLaw({order}, {variant:?})"),
            KernelKind::VariableOrder { variant, .. } => format!("VariableOrder({variant:?})"),
            KernelKind::Hadamard { order } => format!("Hadamard({order})"),
        };
        f.debug_struct("Kernel")
            .field("kind", &kind)
            .field("singularity_exponent", &self.singularity_exponent)
            .field("corner_singular", &self.corner_singular)
            .finish()
    }
}

fn check_order(order: f64) -> Result<()> {
    if order > 0.0 && order < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("kernel order must lie in (0,1), got {order}")))
    }
}

impl Kernel {
    /// Bounded difference kernel `h(t - τ)`.
    pub fn difference(h: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { kind: KernelKind::Difference(Arc::new(h)), singularity_exponent: 0.0, corner_singular: false }
    }

    /// General kernel with an explicitly declared singularity exponent `s`,
    /// meaning `k(t, τ) ~ c(t) (t - τ)^{-s}` as `τ → t`.
    pub fn general(k: impl Fn(f64, f64) -> f64 + Send + Sync + 'static, singularity_exponent: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&singularity_exponent) {
            return Err(Error::Domain(format!("singularity exponent must lie in [0,1), got {singularity_exponent}")));
        }
        Ok(Self { kind: KernelKind::General(Arc::new(k)), singularity_exponent, corner_singular: false })
    }

    /// Riemann-Liouville power kernel.
    pub fn power_law(order: f64, variant: Variant) -> Result<Self> {
        check_order(order)?;
        let s = match variant {
            Variant::Integral => 1.0 - order,
            Variant::Derivative => order,
        };
        Ok(Self { kind: KernelKind::PowerLaw { order, variant }, singularity_exponent: s, corner_singular: false })
    }

    /// Variable-order power kernel. The singularity exponent is resolved per
    /// evaluation node from `α(t, t)`.
    pub fn variable_order(alpha: impl Fn(f64, f64) -> f64 + Send + Sync + 'static, variant: Variant) -> Self {
        Self {
            kind: KernelKind::VariableOrder { alpha: Arc::new(alpha), variant },
            singularity_exponent: f64::NAN,
            corner_singular: false,
        }
    }

    /// Hadamard kernel of the given order.
    pub fn hadamard(order: f64) -> Result<Self> {
        check_order(order)?;
        Ok(Self { kind: KernelKind::Hadamard { order }, singularity_exponent: 1.0 - order, corner_singular: false })
    }

    /// Declares that `k` blows up at the corner `(a, a)` so that the
    /// operator value at the first node is extrapolated instead of computed.
    pub fn with_corner_singularity(mut self) -> Self {
        self.corner_singular = true;
        self
    }

    /// Kernel shape.
    pub fn kind(&self) -> &KernelKind {
        &self.kind
    }

    /// Whether the corner `(a, a)` is singular.
    pub fn corner_singular(&self) -> bool {
        self.corner_singular
    }

    /// Singularity exponent at evaluation point `t`.
    pub fn singularity_exponent(&self, t: f64) -> f64 {
        match &self.kind {
            KernelKind::VariableOrder { alpha, variant } => {
                let a = alpha(t, t);
                match variant {
                    Variant::Integral => 1.0 - a,
                    Variant::Derivative => a,
                }
            }
            _ => self.singularity_exponent,
        }
    }

    /// True when the kernel is bounded near the diagonal.
    pub fn is_bounded(&self) -> bool {
        match &self.kind {
            KernelKind::VariableOrder { .. } => false,
            _ => self.singularity_exponent == 0.0,
        }
    }

    /// Evaluates `k(t, τ)` for `τ < t`.
    pub fn eval(&self, t: f64, tau: f64) -> f64 {
        match &self.kind {
            KernelKind::Difference(h) => h(t - tau),
            KernelKind::General(k) => k(t, tau),
            KernelKind::PowerLaw { order, variant } => power_kernel(*order, *variant, t - tau),
            KernelKind::VariableOrder { alpha, variant } => power_kernel(alpha(t, tau), *variant, t - tau),
            KernelKind::Hadamard { order } => {
                let g = gamma(*order).unwrap_or(f64::NAN);
                (t / tau).ln().powf(order - 1.0) / (g * tau)
            }
        }
    }
}

fn power_kernel(order: f64, variant: Variant, d: f64) -> f64 {
    match variant {
        Variant::Integral => d.powf(order - 1.0) / gamma(order).unwrap_or(f64::NAN),
        Variant::Derivative => d.powf(-order) / gamma(1.0 - order).unwrap_or(f64::NAN),
    }
}

/// A parameter set paired with a kernel; defines `K_P`, `A_P` and `B_P`.
#[derive(Debug, Clone)]
pub struct OperatorBinding {
    /// Parameter set.
    pub p: ParameterSet,
    /// Kernel.
    pub kernel: Kernel,
}

impl OperatorBinding {
    /// Pairs a parameter set with a kernel, checking Hadamard positivity.
    pub fn new(p: ParameterSet, kernel: Kernel) -> Result<Self> {
        if matches!(kernel.kind, KernelKind::Hadamard { .. }) && p.a <= 0.0 {
            return Err(Error::Domain(format!("Hadamard kernels require a > 0, got a = {}", p.a)));
        }
        Ok(Self { p, kernel })
    }

    /// The same kernel with the dual parameter set.
    pub fn dual(&self) -> Self {
        Self { p: dual(self.p), kernel: self.kernel.clone() }
    }
}
