//! Runs the selected suites of an experiment and writes their reports.

use std::path::PathBuf;

use crate::config::Experiment;
use crate::error::HarnessError;
use crate::report::{all_pass, write_reports, SuiteReport};
use crate::suites::Suite;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: u64,
    /// Output directory; falls back to the config's `output.dir`.
    pub out: Option<PathBuf>,
    /// Restricts the run to one of the configured suites.
    pub suite: Option<Suite>,
    /// Worker threads; `None` uses every core.
    pub jobs: Option<usize>,
}

/// Outcome of a run: the per-suite reports and whether every row passed.
#[derive(Debug)]
pub struct RunOutcome {
    pub reports: Vec<SuiteReport>,
    pub all_pass: bool,
    pub out: Option<PathBuf>,
}

fn selected(exp: &Experiment, only: Option<Suite>) -> Result<Vec<Suite>, HarnessError> {
    match only {
        None => Ok(exp.suites.clone()),
        Some(s) if exp.suites.contains(&s) => Ok(vec![s]),
        Some(s) => Err(HarnessError::Invalid(format!("suite \"{s}\" is not listed in the config"))),
    }
}

fn run_suites(exp: &Experiment, suites: &[Suite], seed: u64) -> Result<Vec<SuiteReport>, HarnessError> {
    suites
        .iter()
        .map(|s| {
            log::info!("running suite {s}");
            let r = s.run(exp, seed)?;
            log::info!("suite {s}: {} rows in {:.1}s", r.records.len(), r.seconds);
            Ok(r)
        })
        .collect()
}

#[cfg(feature = "parallel")]
fn on_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, HarnessError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| HarnessError::Invalid(format!("worker pool: {e}")))?;
    Ok(pool.install(f))
}

#[cfg(not(feature = "parallel"))]
fn on_pool<T: Send>(_jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, HarnessError> {
    Ok(f())
}

/// Runs the experiment and writes `<suite>.csv` files plus `summary.json`.
pub fn run(exp: &Experiment, opts: &RunOptions) -> Result<RunOutcome, HarnessError> {
    if opts.jobs == Some(0) {
        return Err(HarnessError::Invalid("--jobs must be positive".into()));
    }
    let suites = selected(exp, opts.suite)?;
    let out = opts.out.clone().or_else(|| exp.raw.output.dir.clone());
    let reports = on_pool(opts.jobs, || run_suites(exp, &suites, opts.seed))??;
    let timings = exp.raw.output.timings;
    if let Some(dir) = &out {
        write_reports(dir, &reports, opts.seed, exp.raw.calibration_seed, timings)?;
    }
    Ok(RunOutcome { all_pass: all_pass(&reports), reports, out })
}
