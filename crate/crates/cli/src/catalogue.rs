use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentId {
    OpsIdentities,
    IbpSuite,
    Counterexample,
    ElCheck,
    Isoperimetric,
    Noether,
    Falva,
    SlSolve,
    SlConverge,
    DirectMin,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 10] = [
        ExperimentId::OpsIdentities,
        ExperimentId::IbpSuite,
        ExperimentId::Counterexample,
        ExperimentId::ElCheck,
        ExperimentId::Isoperimetric,
        ExperimentId::Noether,
        ExperimentId::Falva,
        ExperimentId::SlSolve,
        ExperimentId::SlConverge,
        ExperimentId::DirectMin,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentId::OpsIdentities => "ops-identities",
            ExperimentId::IbpSuite => "ibp-suite",
            ExperimentId::Counterexample => "counterexample",
            ExperimentId::ElCheck => "el-check",
            ExperimentId::Isoperimetric => "isoperimetric",
            ExperimentId::Noether => "noether",
            ExperimentId::Falva => "falva",
            ExperimentId::SlSolve => "sl-solve",
            ExperimentId::SlConverge => "sl-converge",
            ExperimentId::DirectMin => "direct-min",
        }
    }

    /// One-line description and the result it reproduces.
    pub fn describe(self) -> (&'static str, &'static str) {
        match self {
            ExperimentId::OpsIdentities => {
                ("left and right Riemann-Liouville and Caputo operators on powers (t-a)^beta", "power-law closed forms")
            }
            ExperimentId::IbpSuite => (
                "generalized integration by parts on seeded random polynomial pairs",
                "integration by parts for K_P and its dual K_P*",
            ),
            ExperimentId::Counterexample => (
                "integration by parts with kernel (t^2-s^2)/(t^2+s^2)^2 on the unit square",
                "IBP counterexample, both sides equal to +pi/4 and -pi/4",
            ),
            ExperimentId::ElCheck => (
                "Mittag-Leffler trajectory as an extremal of a Caputo functional",
                "Euler-Lagrange equation with K_P and B_P",
            ),
            ExperimentId::Isoperimetric => (
                "Lagrange multiplier recovery for an integral constraint",
                "isoperimetric Euler-Lagrange equation, multiplier 2 xi",
            ),
            ExperimentId::Noether => (
                "conserved quantity along a computed extremal under constant shifts",
                "Noether theorem for generalized fractional functionals",
            ),
            ExperimentId::Falva => (
                "Caldirola-Kanai oscillator with exponential weight k(b,t)",
                "weighted Euler-Lagrange equation and dissipative parameter",
            ),
            ExperimentId::SlSolve => (
                "Ritz eigenpairs of the fractional Sturm-Liouville problem",
                "fractional Sturm-Liouville eigenvalue problem",
            ),
            ExperimentId::SlConverge => {
                ("Ritz eigenvalues along an increasing basis-size schedule", "monotone convergence of Ritz eigenvalues")
            }
            ExperimentId::DirectMin => (
                "direct minimization over a sine basis with a coercivity probe",
                "existence of minimizers for coercive functionals",
            ),
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Text printed by `fracvar list`.
pub fn list_experiments() -> String {
    let mut out = String::new();
    for id in ExperimentId::ALL {
        let (what, reproduces) = id.describe();
        out.push_str(&format!("{:<15} {what}\n{:<15} reproduces: {reproduces}\n", id.as_str(), ""));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_lists_every_id() {
        let text = list_experiments();
        for id in ExperimentId::ALL {
            assert!(text.contains(id.as_str()));
        }
        assert!(text.contains("counterexample") && text.contains("IBP counterexample"));
        assert!(text.contains("sl-solve") && text.contains("Sturm-Liouville eigenvalue problem"));
        assert_eq!(text, list_experiments());
    }

    #[test]
    fn ids_round_trip_through_json() {
        for id in ExperimentId::ALL {
            let s = serde_json::to_string(&id).unwrap();
            assert_eq!(s, format!("\"{id}\""));
            assert_eq!(serde_json::from_str::<ExperimentId>(&s).unwrap(), id);
        }
    }
}
