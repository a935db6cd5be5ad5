//! Rayon versions of the core trial loops. Results are collected in index
//! order, so they equal the sequential ones exactly.

use rayon::prelude::*;
use specsal_core::fewshot::{
    assemble_reports, combine_validation, evaluate_trial, validation_trial_scores, EvalReport, FeatureKind,
    GridResult, GridSpec, Protocol, SeedSplit, SweepTarget,
};
use specsal_core::taskgen::TaskKind;
use specsal_core::{Error, Result};

fn jobs(tasks: &[TaskKind], trials: usize) -> Vec<(TaskKind, usize)> {
    tasks.iter().flat_map(|&t| (0..trials).map(move |i| (t, i))).collect()
}

pub fn run_suite(tasks: &[TaskKind], kinds: &[FeatureKind], k: usize, protocol: &Protocol) -> Result<Vec<EvalReport>> {
    protocol.check()?;
    let rows = jobs(tasks, protocol.trials)
        .into_par_iter()
        .map(|(task, trial)| evaluate_trial(task, trial, kinds, k, protocol))
        .collect::<Result<Vec<_>>>()?;
    assemble_reports(tasks, kinds, k, protocol, &rows)
}

pub fn validation_grid_search(
    tasks: &[TaskKind],
    grid: &GridSpec,
    target: SweepTarget,
    protocol: &Protocol,
) -> Result<GridResult> {
    if protocol.split != SeedSplit::Validation {
        return Err(Error::Protocol("grid search must use validation seeds".into()));
    }
    protocol.check()?;
    let rows = jobs(tasks, protocol.trials)
        .into_par_iter()
        .map(|(task, trial)| validation_trial_scores(task, trial, grid, target, protocol))
        .collect::<Result<Vec<_>>>()?;
    combine_validation(grid, &rows)
}
