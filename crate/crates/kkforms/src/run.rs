//! Verification runs: solutions in parallel, points in parallel within each
//! solution, reports folded in point order so output is deterministic.

use std::collections::BTreeMap;
use std::time::Instant;

use kkforms_core::catalog::{build, SolutionInstance};
use kkforms_core::verify::suite::{aggregate, CheckOptions, InstanceChecks};
use kkforms_core::verify::{sample_points, ResidualReport};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{EquationReport, SolutionReport, SuiteReport};

/// Build every selected instance, failing fast on the first invalid one.
pub fn instances(cfg: &RunConfig) -> Result<Vec<SolutionInstance>, CliError> {
    cfg.targets()?.iter().map(|(f, p)| build(*f, p).map_err(CliError::from)).collect()
}

/// Every check on one instance.
pub fn check_instance(
    inst: &SolutionInstance,
    points: usize,
    seed: u64,
    tolerance: f64,
) -> kkforms_core::Result<Vec<ResidualReport>> {
    let checks = InstanceChecks::new(inst, CheckOptions::default())?;
    let pts = sample_points(&inst.domain, points, seed)?;
    let per_point = pts.par_iter().map(|p| checks.at(p)).collect::<kkforms_core::Result<Vec<_>>>()?;
    Ok(aggregate(&per_point, seed, tolerance))
}

fn solution_report(inst: &SolutionInstance, cfg: &RunConfig) -> SolutionReport {
    let start = Instant::now();
    let result = check_instance(inst, cfg.points, cfg.seed, cfg.tolerance);
    let wall_clock_s = start.elapsed().as_secs_f64();
    let (equations, error): (BTreeMap<String, EquationReport>, _) = match result {
        Ok(reps) => (reps.iter().map(|r| (r.equation.clone(), r.into())).collect(), None),
        Err(e) => (Default::default(), Some(e.to_string())),
    };
    let pass = error.is_none() && equations.values().all(|r| r.pass);
    SolutionReport {
        label: inst.label(),
        family: inst.family.id().to_string(),
        params: inst.params.iter().map(|(k, v)| (k.to_string(), v)).collect(),
        dim: inst.dim(),
        eps_d: inst.eps_d(),
        wall_clock_s,
        pass,
        error,
        equations,
    }
}

/// Run the configured suite.
pub fn verify(cfg: &RunConfig) -> Result<SuiteReport, CliError> {
    let insts = instances(cfg)?;
    let solutions = insts.par_iter().map(|inst| solution_report(inst, cfg)).collect();
    Ok(SuiteReport::new(cfg.echo(), solutions))
}
