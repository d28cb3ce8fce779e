//! Lower side for the regular simplex `S`: on the subspaces `H_k` spanned by
//! `k` vertices and the centroid of the others,
//! `vrad(P_{H_k}(S°)) · vrad(S ∩ H_k) ≥ ĉ · n/k` with one `ĉ > 0` across all
//! tested `(n, k)`.

use convexreg_core::body::simplex::{regular_simplex, simplex_sharp_subspace_first};
use convexreg_core::measure::{vrad, Estimate};

use super::calibrate::{self, resolve, Item, Observation};
use super::{guarded, par_map, Ctx, SuiteRows};
use crate::error::HarnessError;
use crate::report::{RowKey, Sense, Status};

const ID: &str = "simplex-product";

fn run_task(ctx: &Ctx, n: usize, k: usize, calibration: bool) -> Vec<Item> {
    let seed = if calibration { ctx.exp.raw.calibration_seed } else { ctx.seed };
    let key = RowKey::new(ctx.suite.name(), n, k, "simplex", seed);
    let rs = ctx.stream(seed, &[&n.to_string(), &k.to_string()]);
    let cfg = ctx.exp.core(ctx.exp.budgets().directions);
    let mut obs = None;
    let rows = guarded(&key, ID, || {
        let s = regular_simplex(n)?;
        let h = simplex_sharp_subspace_first(n, k)?;
        let proj = vrad(&s.polar()?.project(&h)?, &cfg, rs.child("projection"))?;
        let sec = vrad(&s.section(&h)?, &cfg, rs.child("section"))?;
        let rhs = Estimate::exact(n as f64 / k as f64);
        obs = Some(Observation { key: key.clone(), id: ID.into(), lhs: proj.mul(&sec), rhs, sense: Sense::Lower });
        Ok(Vec::new())
    });
    let mut items: Vec<Item> = rows.into_iter().map(Item::Row).collect();
    items.extend(obs.map(Item::Obs));
    items
}

pub(super) fn run(ctx: &Ctx) -> std::result::Result<SuiteRows, HarnessError> {
    let mut tasks = Vec::new();
    for calibration in [false, true] {
        for n in ctx.exp.dimensions(ctx.suite) {
            for k in ctx.exp.ks(n, |n| (1..n).collect()) {
                tasks.push((n, k, calibration));
            }
        }
    }
    let results = par_map(&tasks, |&(n, k, c)| (c, run_task(ctx, n, k, c)));
    let mut eval = Vec::new();
    let mut cal = Vec::new();
    for (c, items) in results {
        if c {
            cal.extend(items);
        } else {
            eval.extend(items);
        }
    }
    let (_, cal_obs) = Item::split(cal);
    let constants = calibrate::fit(&cal_obs);
    let tol = ctx.exp.core(1).tol;
    let mut records = resolve(eval, &constants, &tol);
    let c = constants.get(ID).copied().flatten();
    let value = c.unwrap_or(f64::NAN);
    let key = ctx.key(0, 0, "simplex");
    let ok = value.is_finite() && value > 0.0;
    records.push(
        key.record(
            "simplex-constant-positive",
            &Estimate::exact(value),
            &Estimate::exact(0.0),
            Sense::Lower,
            Status::from_bool(ok),
        )
        .with_constant(value),
    );
    Ok(SuiteRows { records, calibrated: c.map(|v| (ID.to_string(), v)).into_iter().collect() })
}
