//! One runner per experiment id. Each runner fills a [`Report`] and never
//! touches the filesystem.

mod operators;
mod spectral;
mod variational;

use anyhow::Result;
use fracvar_core::numerics::{Grid, SampledFunction};

use crate::catalogue::ExperimentId;
use crate::config::ExperimentConfig;
use crate::record::Report;

pub fn run(config: &ExperimentConfig) -> Result<Report> {
    let mut report = Report::default();
    let r = &mut report;
    match config.experiment {
        ExperimentId::OpsIdentities => operators::ops_identities(config, r)?,
        ExperimentId::IbpSuite => operators::ibp_suite(config, r)?,
        ExperimentId::Counterexample => operators::counterexample(config, r)?,
        ExperimentId::ElCheck => variational::el_check(config, r)?,
        ExperimentId::Isoperimetric => variational::isoperimetric(config, r)?,
        ExperimentId::Noether => variational::noether(config, r)?,
        ExperimentId::Falva => variational::falva(config, r)?,
        ExperimentId::SlSolve => spectral::sl_solve(config, r)?,
        ExperimentId::SlConverge => spectral::sl_converge(config, r)?,
        ExperimentId::DirectMin => spectral::direct_min(config, r)?,
    }
    Ok(report)
}

/// Sup of `|f|` over the middle 80% of its grid.
fn middle_sup(f: &SampledFunction) -> f64 {
    f.sup_over(f.grid().window(0.1, 0.9))
}

fn unit_grid(n: usize) -> Result<Grid> {
    Ok(Grid::new(0.0, 1.0, n)?)
}
