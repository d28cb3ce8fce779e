//! Calibrated-constant protocol: a ratio `lhs / rhs` is observed on a
//! calibration seed, the extreme observed value becomes the constant, and
//! evaluation rows are asserted against it with headroom.

use std::collections::BTreeMap;

use convexreg_core::measure::Estimate;
use convexreg_core::Tolerances;

use crate::report::{Record, RowKey, Sense};

/// A ratio waiting for its calibrated constant.
#[derive(Debug, Clone)]
pub struct Observation {
    pub key: RowKey,
    pub id: String,
    pub lhs: Estimate,
    pub rhs: Estimate,
    /// `Upper`: `lhs ≤ C·rhs` with `C` the largest calibration ratio.
    /// `Lower`: `lhs ≥ c·rhs` with `c` the smallest calibration ratio.
    pub sense: Sense,
}

impl Observation {
    pub fn ratio(&self) -> f64 {
        self.lhs.value / self.rhs.value
    }
}

#[derive(Debug, Clone)]
pub enum Item {
    Row(Record),
    Obs(Observation),
}

impl Item {
    pub fn split(items: Vec<Item>) -> (Vec<Record>, Vec<Observation>) {
        let mut rows = Vec::new();
        let mut obs = Vec::new();
        for i in items {
            match i {
                Item::Row(r) => rows.push(r),
                Item::Obs(o) => obs.push(o),
            }
        }
        (rows, obs)
    }
}

/// Extreme calibration ratio per inequality id; `None` when any
/// calibration observation was not finite and positive.
pub fn fit(calibration: &[Observation]) -> BTreeMap<String, Option<f64>> {
    let mut out: BTreeMap<String, Option<f64>> = BTreeMap::new();
    for o in calibration {
        let r = o.ratio();
        let ok = r.is_finite() && r > 0.0;
        let slot = out.entry(o.id.clone()).or_insert(Some(r));
        *slot = match (*slot, ok) {
            (Some(c), true) => Some(match o.sense {
                Sense::Lower => c.min(r),
                _ => c.max(r),
            }),
            _ => None,
        };
    }
    out
}

/// Asserts each observation against its fitted constant.
pub fn assert_all(
    observations: Vec<Observation>,
    constants: &BTreeMap<String, Option<f64>>,
    headroom: f64,
    tol: &Tolerances,
) -> Vec<Record> {
    observations
        .into_iter()
        .map(|o| match constants.get(&o.id).copied().flatten() {
            None => o.key.error(&o.id, "no usable calibration ratio"),
            Some(c) => {
                let rec = match o.sense {
                    Sense::Lower => {
                        let bound = o.rhs.scale(c / headroom);
                        o.key.ge(&o.id, &o.lhs, &bound, tol)
                    }
                    _ => {
                        let bound = o.rhs.scale(c * headroom);
                        o.key.le(&o.id, &o.lhs, &bound, tol)
                    }
                };
                // Report the plain ratio rather than the ratio to the scaled bound.
                Record { ratio: o.ratio(), rhs: o.rhs.value, rhs_se: o.rhs.stderr, ..rec }.with_constant(c)
            }
        })
        .collect()
}

/// Rows in task order, with each observation asserted in place.
pub fn resolve(items: Vec<Item>, constants: &BTreeMap<String, Option<f64>>, tol: &Tolerances) -> Vec<Record> {
    items
        .into_iter()
        .flat_map(|item| match item {
            Item::Row(r) => vec![r],
            Item::Obs(o) => assert_all(vec![o], constants, tol.headroom, tol),
        })
        .collect()
}

/// Largest factor by which a per-dimension constant exceeds every constant
/// at smaller dimensions, minus one. Zero when the constants never grow.
pub fn growth(per_dim: &BTreeMap<usize, f64>) -> f64 {
    let mut best = f64::NEG_INFINITY;
    let mut worst: f64 = 0.0;
    for &c in per_dim.values() {
        if best.is_finite() {
            worst = worst.max(c / best - 1.0);
        }
        best = best.max(c);
    }
    worst
}
