//! Experiment configuration parsing with per-experiment validation.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;

use fracvar_core::numerics::MAX_EIGEN_DIM;
use fracvar_core::sturm_liouville::RESOLUTION_FACTOR;
use serde::{Deserialize, Serialize};

use crate::catalogue::ExperimentId;

pub const MIN_N: usize = 1 << 5;
pub const MAX_N: usize = 1 << 14;

/// One or several fractional orders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Orders {
    One(f64),
    Many(Vec<f64>),
}

impl Orders {
    fn values(&self) -> Vec<f64> {
        match self {
            Orders::One(a) => vec![*a],
            Orders::Many(v) => v.clone(),
        }
    }
}

/// Model problems available to `direct-min`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DirectProblem {
    Quadratic,
    QuasiLinear,
    Volterra,
}

/// The document as written by the user. Every field except `experiment` is
/// optional; see [`ExperimentConfig::resolve`] for defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub experiment: Option<ExperimentId>,
    pub interval: Option<[f64; 2]>,
    pub n: Option<usize>,
    pub alpha: Option<Orders>,
    pub beta: Option<f64>,
    pub xi: Option<f64>,
    pub m: Option<usize>,
    pub m_schedule: Option<Vec<usize>>,
    pub r: Option<usize>,
    pub problem: Option<DirectProblem>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    pub output_dir: Option<PathBuf>,
    pub seed: Option<u64>,
}

/// A validated configuration with every default filled in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    pub interval: (f64, f64),
    pub n: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub alpha: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub m_schedule: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub problem: Option<DirectProblem>,
    pub tolerances: BTreeMap<String, f64>,
    #[serde(skip)]
    pub output_dir: Option<PathBuf>,
    pub seed: u64,
}

impl ExperimentConfig {
    /// Tolerance for assertion family `key`.
    pub fn tol(&self, key: &str) -> f64 {
        self.tolerances[key]
    }

    pub fn single_alpha(&self) -> f64 {
        self.alpha[0]
    }
}

/// Field-level problems found while reading a configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub errors: Vec<String>,
}

impl ConfigError {
    fn one(msg: impl Into<String>) -> Self {
        Self { errors: vec![msg.into()] }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid configuration:")?;
        for e in &self.errors {
            write!(f, "\n  {e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

/// Parses a JSON document into a raw configuration, reporting the path of
/// the offending field on failure.
pub fn parse_raw(text: &str) -> Result<RawConfig, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            ConfigError::one(inner.to_string())
        } else {
            ConfigError::one(format!("{path}: {inner}"))
        }
    })
}

/// Parses and validates a JSON document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    ExperimentConfig::resolve(parse_raw(text)?)
}

/// Which optional fields an experiment reads, with their defaults.
struct Shape {
    interval: Option<(f64, f64)>,
    n: usize,
    alpha: Option<Vec<f64>>,
    multi_alpha: bool,
    beta: Option<f64>,
    xi: Option<f64>,
    m: Option<usize>,
    m_schedule: Option<Vec<usize>>,
    r: Option<usize>,
    problem: Option<DirectProblem>,
    tolerances: &'static [(&'static str, f64)],
}

impl Shape {
    fn base(n: usize, tolerances: &'static [(&'static str, f64)]) -> Self {
        Self {
            interval: None,
            n,
            alpha: None,
            multi_alpha: false,
            beta: None,
            xi: None,
            m: None,
            m_schedule: None,
            r: None,
            problem: None,
            tolerances,
        }
    }
}

fn shape(id: ExperimentId) -> Shape {
    use ExperimentId::*;
    match id {
        OpsIdentities => Shape {
            interval: Some((0.0, 1.0)),
            alpha: Some(vec![0.5]),
            multi_alpha: true,
            beta: Some(1.5),
            ..Shape::base(4096, &[("max_error", 5e-3)])
        },
        IbpSuite => Shape {
            alpha: Some(vec![0.5]),
            ..Shape::base(2048, &[("bounded_residual", 1e-6), ("power_law_residual", 1e-3)])
        },
        Counterexample => Shape::base(4096, &[("lhs", 2e-3), ("rhs", 2e-3), ("gap", 1.5)]),
        ElCheck => {
            Shape { alpha: Some(vec![0.4]), ..Shape::base(4096, &[("ode_residual", 1e-2), ("el_residual", 1e-2)]) }
        }
        Isoperimetric => Shape {
            alpha: Some(vec![0.3]),
            xi: Some(2.0),
            ..Shape::base(2048, &[("multiplier", 1e-2), ("residual", 1e-2)])
        },
        Noether => Shape {
            alpha: Some(vec![0.5]),
            m: Some(48),
            ..Shape::base(2048, &[("drift", 1e-3), ("classical_drift", 1e-12)])
        },
        Falva => Shape {
            alpha: Some(vec![0.1]),
            ..Shape::base(2048, &[("el_residual", 1e-3), ("dissipative_parameter", 1e-6)])
        },
        SlSolve => Shape {
            interval: Some((0.0, PI)),
            alpha: Some(vec![0.75]),
            m: Some(16),
            r: Some(3),
            ..Shape::base(4096, &[("rayleigh", 1e-8), ("orthonormality", 2e-3), ("classical_relerr", 1e-2)])
        },
        SlConverge => Shape {
            interval: Some((0.0, PI)),
            alpha: Some(vec![0.9]),
            m_schedule: Some(vec![4, 8, 16, 32]),
            r: Some(1),
            ..Shape::base(4096, &[("monotone", 1e-8), ("classical_relerr", 1e-2)])
        },
        DirectMin => Shape {
            m: Some(16),
            problem: Some(DirectProblem::QuasiLinear),
            ..Shape::base(2048, &[("gradient", 1e-8), ("el_residual", 1e-2), ("solution_error", 5e-3), ("value", 1e-6)])
        },
    }
}

fn is_sl(id: ExperimentId) -> bool {
    matches!(id, ExperimentId::SlSolve | ExperimentId::SlConverge)
}

fn check_alpha(id: ExperimentId, a: f64, errors: &mut Vec<String>) {
    let ok = match id {
        _ if is_sl(id) => (a > 0.5 && a < 1.0) || a == 1.0,
        ExperimentId::Falva => a.is_finite(),
        _ => a > 0.0 && a < 1.0,
    };
    if !ok {
        let msg = match id {
            _ if is_sl(id) => format!("alpha: alpha must lie in (0.5,1), got {a}"),
            ExperimentId::Falva => format!("alpha: weight rate must be finite, got {a}"),
            _ => format!("alpha: alpha must lie in (0,1), got {a}"),
        };
        errors.push(msg);
    }
}

fn check_basis(field: &str, m: usize, n: usize, errors: &mut Vec<String>) {
    if m == 0 || m > MAX_EIGEN_DIM {
        errors.push(format!("{field}: basis size must lie in 1..={MAX_EIGEN_DIM}, got {m}"));
    } else if n >= MIN_N && n < RESOLUTION_FACTOR * m {
        errors.push(format!("{field}: basis size {m} needs n >= {}, got n = {n}", RESOLUTION_FACTOR * m));
    }
}

impl ExperimentConfig {
    /// Validates `raw` against the requirements of its experiment and fills
    /// in defaults. All problems are collected before returning.
    pub fn resolve(raw: RawConfig) -> Result<Self, ConfigError> {
        let id = raw.experiment.ok_or_else(|| ConfigError::one("experiment: missing field"))?;
        let s = shape(id);
        let mut errors = Vec::new();
        let unused = |field: &str, set: bool, allowed: bool, errors: &mut Vec<String>| {
            if set && !allowed {
                errors.push(format!("{field}: not used by experiment {id}"));
            }
        };
        unused("interval", raw.interval.is_some(), s.interval.is_some(), &mut errors);
        unused("alpha", raw.alpha.is_some(), s.alpha.is_some(), &mut errors);
        unused("beta", raw.beta.is_some(), s.beta.is_some(), &mut errors);
        unused("xi", raw.xi.is_some(), s.xi.is_some(), &mut errors);
        unused("m", raw.m.is_some(), s.m.is_some(), &mut errors);
        unused("m_schedule", raw.m_schedule.is_some(), s.m_schedule.is_some(), &mut errors);
        unused("r", raw.r.is_some(), s.r.is_some(), &mut errors);
        unused("problem", raw.problem.is_some(), s.problem.is_some(), &mut errors);

        let n = raw.n.unwrap_or(s.n);
        if !(n.is_power_of_two() && (MIN_N..=MAX_N).contains(&n)) {
            errors.push(format!("n: must be a power of two between {MIN_N} and {MAX_N}, got {n}"));
        }

        let interval = match (raw.interval, s.interval) {
            (Some([a, b]), Some(_)) => {
                if !(a.is_finite() && b.is_finite() && a < b) {
                    errors.push(format!("interval: requires finite a < b, got [{a}, {b}]"));
                }
                (a, b)
            }
            (_, Some(d)) => d,
            _ => (0.0, 1.0),
        };

        let alpha = match (&raw.alpha, &s.alpha) {
            (Some(o), Some(_)) => {
                let v = o.values();
                if v.is_empty() {
                    errors.push("alpha: list must not be empty".into());
                } else if v.len() > 1 && !s.multi_alpha {
                    errors.push(format!("alpha: experiment {id} takes a single order"));
                }
                v.iter().for_each(|&a| check_alpha(id, a, &mut errors));
                v
            }
            (_, Some(d)) => d.clone(),
            _ => Vec::new(),
        };

        let beta = raw.beta.or(s.beta);
        if let Some(b) = raw.beta {
            if !(b.is_finite() && b >= 0.0) {
                errors.push(format!("beta: power must be finite and nonnegative, got {b}"));
            }
        }
        let xi = raw.xi.or(s.xi);
        if let Some(x) = raw.xi {
            if !x.is_finite() {
                errors.push(format!("xi: must be finite, got {x}"));
            }
        }

        let m = raw.m.or(s.m);
        if let Some(m) = m {
            check_basis("m", m, n, &mut errors);
        }
        let m_schedule = raw.m_schedule.clone().or(s.m_schedule).unwrap_or_default();
        if raw.m_schedule.is_some() {
            if m_schedule.is_empty() {
                errors.push("m_schedule: must not be empty".into());
            } else if m_schedule.windows(2).any(|w| w[0] >= w[1]) {
                errors.push("m_schedule: must be strictly increasing".into());
            }
        }
        if let Some(&last) = m_schedule.last() {
            check_basis("m_schedule", last, n, &mut errors);
        }
        let r = raw.r.or(s.r);
        if let Some(r) = r {
            let cap = m.or(m_schedule.first().copied()).unwrap_or(usize::MAX);
            if r == 0 || r > cap {
                errors.push(format!("r: must lie in 1..={cap}, got {r}"));
            }
        }

        let mut tolerances: BTreeMap<String, f64> = s.tolerances.iter().map(|&(k, v)| (k.to_string(), v)).collect();
        for (k, v) in &raw.tolerances {
            if !tolerances.contains_key(k) {
                let known: Vec<&str> = s.tolerances.iter().map(|t| t.0).collect();
                errors
                    .push(format!("tolerances.{k}: unknown for experiment {id}; expected one of {}", known.join(", ")));
            } else if !(v.is_finite() && *v > 0.0) {
                errors.push(format!("tolerances.{k}: must be positive, got {v}"));
            } else {
                tolerances.insert(k.clone(), *v);
            }
        }

        if !errors.is_empty() {
            return Err(ConfigError { errors });
        }
        Ok(Self {
            experiment: id,
            interval,
            n,
            alpha,
            beta,
            xi,
            m,
            m_schedule,
            r,
            problem: raw.problem.or(s.problem),
            tolerances,
            output_dir: raw.output_dir,
            seed: raw.seed.unwrap_or(0),
        })
    }
}

/// Applies `key=value` overrides to a JSON document. Values are read as JSON
/// when they parse and as strings otherwise; `tolerances.<name>` addresses a
/// single tolerance.
pub fn apply_overrides(doc: &mut serde_json::Value, overrides: &[String]) -> Result<(), ConfigError> {
    let obj = doc.as_object_mut().ok_or_else(|| ConfigError::one("configuration must be a JSON object"))?;
    for item in overrides {
        let (key, raw) =
            item.split_once('=').ok_or_else(|| ConfigError::one(format!("--set {item}: expected key=value")))?;
        let value = serde_json::from_str(raw).unwrap_or_else(|_| serde_json::Value::String(raw.to_string()));
        match key.split_once('.') {
            Some(("tolerances", name)) => {
                let t = obj.entry("tolerances").or_insert_with(|| serde_json::json!({}));
                let t = t.as_object_mut().ok_or_else(|| ConfigError::one("tolerances: expected an object"))?;
                t.insert(name.to_string(), value);
            }
            Some(_) => return Err(ConfigError::one(format!("--set {item}: only tolerances.<name> may be nested"))),
            None => {
                obj.insert(key.to_string(), value);
            }
        }
    }
    Ok(())
}
