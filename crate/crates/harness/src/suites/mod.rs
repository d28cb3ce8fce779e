//! Inequality suites. Each suite expands the corpus into independent tasks
//! that own their random streams, runs them on the worker pool and returns
//! records in a fixed order.

mod aleksandrov;
mod calibrate;
mod classics;
mod duality;
mod functional;
mod prep;
mod random_subspace;
mod simplex_sharp;
mod theorems;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use convexreg_core::numerics::RngStream;

use crate::config::Experiment;
use crate::error::HarnessError;
use crate::report::{Record, RowKey, SuiteReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Duality,
    Classics,
    Projections,
    Sections,
    BsWeak,
    SimplexSharp,
    RandomSubspace,
    Aleksandrov,
    Functional,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Duality,
        Suite::Classics,
        Suite::Projections,
        Suite::Sections,
        Suite::BsWeak,
        Suite::SimplexSharp,
        Suite::RandomSubspace,
        Suite::Aleksandrov,
        Suite::Functional,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Duality => "duality",
            Suite::Classics => "classics",
            Suite::Projections => "projections",
            Suite::Sections => "sections",
            Suite::BsWeak => "bs-weak",
            Suite::SimplexSharp => "simplex-sharp",
            Suite::RandomSubspace => "random-subspace",
            Suite::Aleksandrov => "aleksandrov",
            Suite::Functional => "functional",
        }
    }

    pub fn default_dimensions(self) -> &'static [usize] {
        match self {
            Suite::Duality => &[3, 4, 5, 6],
            Suite::Classics => &[2, 3, 4, 5, 6],
            Suite::Projections | Suite::Sections | Suite::BsWeak => &[4, 5, 6, 7, 8],
            Suite::SimplexSharp => &[4, 6, 8],
            Suite::RandomSubspace => &[6],
            Suite::Aleksandrov => &[4, 5],
            Suite::Functional => &[2, 3],
        }
    }

    /// Every suite looks at proper subspaces, so `n ≥ 2`.
    pub fn min_dimension(self) -> usize {
        2
    }

    fn run_rows(self, ctx: &Ctx) -> Result<SuiteRows, HarnessError> {
        match self {
            Suite::Duality => duality::run(ctx),
            Suite::Classics => classics::run(ctx),
            Suite::Projections | Suite::Sections | Suite::BsWeak => theorems::run(ctx),
            Suite::SimplexSharp => simplex_sharp::run(ctx),
            Suite::RandomSubspace => random_subspace::run(ctx),
            Suite::Aleksandrov => aleksandrov::run(ctx),
            Suite::Functional => functional::run(ctx),
        }
    }

    /// Runs the suite on the current rayon pool.
    pub fn run(self, exp: &Experiment, seed: u64) -> Result<SuiteReport, HarnessError> {
        let start = Instant::now();
        let ctx = Ctx { exp, seed, suite: self };
        let rows = self.run_rows(&ctx)?;
        Ok(SuiteReport {
            suite: self.name().to_string(),
            records: rows.records,
            calibrated: rows.calibrated,
            seconds: start.elapsed().as_secs_f64(),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
            HarnessError::Invalid(format!("unknown suite \"{s}\" (expected one of {})", names.join(", ")))
        })
    }
}

#[derive(Debug, Default)]
pub(crate) struct SuiteRows {
    pub records: Vec<Record>,
    pub calibrated: std::collections::BTreeMap<String, f64>,
}

impl SuiteRows {
    fn from_records(records: Vec<Record>) -> Self {
        Self { records, ..Default::default() }
    }
}

pub(crate) struct Ctx<'a> {
    pub exp: &'a Experiment,
    pub seed: u64,
    pub suite: Suite,
}

impl Ctx<'_> {
    /// Stream for one row, derived from the seed and the row's labels only.
    pub fn stream(&self, seed: u64, labels: &[&str]) -> RngStream {
        labels.iter().fold(RngStream::new(seed).child(self.suite.name()), |s, l| s.child(l))
    }

    pub fn key(&self, n: usize, k: usize, body: impl Into<String>) -> RowKey {
        RowKey::new(self.suite.name(), n, k, body, self.seed)
    }
}

/// Ordered map over the worker pool.
pub(crate) fn par_map<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Runs one task, turning an error into a single error row and stamping
/// every row with the task's wall-clock time.
pub(crate) fn guarded<F>(key: &RowKey, id: &str, f: F) -> Vec<Record>
where
    F: FnOnce() -> convexreg_core::Result<Vec<Record>>,
{
    let start = Instant::now();
    let mut rows = match f() {
        Ok(rows) => rows,
        Err(e) => {
            log::warn!("{} {} n={} k={} {}: {e}", key.suite, id, key.n, key.k, key.body);
            vec![key.error(id, e.to_string())]
        }
    };
    let ms = start.elapsed().as_millis() as u64;
    rows.iter_mut().for_each(|r| r.ms = Some(ms));
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }
}
