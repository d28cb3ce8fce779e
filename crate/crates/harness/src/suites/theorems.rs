//! Volume ratios of the outer and inner symmetrizations on subspaces:
//!
//! * `projections`: `vrad(P_H K_out) / vrad(P_H K_in)`
//! * `sections`: `vrad(K_out ∩ H) / vrad(K_in ∩ H)`
//! * `bs-weak`: `vrad(P_H K) · vrad(K° ∩ H)`
//!
//! each normalized by `(n/k)(ln(n+1))³`. Bodies enter under both hypotheses
//! `bar(K) = 0` and `bar(K°) = 0`. The constant is calibrated per hypothesis
//! on the calibration seed; evaluation rows are asserted against it with
//! headroom, and the per-dimension constants must not grow across `n` by
//! more than the configured drift.

use std::collections::BTreeMap;

use convexreg_core::body::ConvexBody;
use convexreg_core::measure::{vrad, Estimate};
use convexreg_core::Result;

use super::calibrate::{self, resolve, Item, Observation};
use super::prep::{center, spread_ks, subspace, Centering};
use super::{guarded, par_map, Ctx, Suite, SuiteRows};
use crate::error::HarnessError;
use crate::report::{RowKey, Sense};

fn normalizer(n: usize, k: usize) -> f64 {
    n as f64 / k as f64 * ((n + 1) as f64).ln().powi(3)
}

fn base_id(s: Suite) -> &'static str {
    match s {
        Suite::Projections => "projection-ratio",
        Suite::Sections => "section-ratio",
        _ => "polar-product",
    }
}

struct Prepared {
    n: usize,
    id: String,
    how: Centering,
    calibration: bool,
    symmetric: bool,
    body: std::result::Result<ConvexBody, String>,
}

struct Task<'a> {
    body: &'a Prepared,
    k: usize,
    h: usize,
}

/// `(numerator, denominator)` of the suite's ratio on one subspace.
fn sides(s: Suite, k: &ConvexBody, dim: usize, cfg: &convexreg_core::Config, rs: convexreg_core::numerics::RngStream) -> Result<(Estimate, Estimate)> {
    let h = subspace(k.dim(), dim, rs.child("subspace"))?;
    let common = rs.child("directions");
    match s {
        Suite::Projections => Ok((
            vrad(&k.outer_reg()?.project(&h)?, cfg, common)?,
            vrad(&k.inner_reg()?.project(&h)?, cfg, common)?,
        )),
        Suite::Sections => Ok((
            vrad(&k.outer_reg()?.section(&h)?, cfg, common)?,
            vrad(&k.inner_reg()?.section(&h)?, cfg, common)?,
        )),
        _ => {
            let p = vrad(&k.project(&h)?, cfg, common)?;
            let q = vrad(&k.polar()?.section(&h)?, cfg, rs.child("polar-directions"))?;
            Ok((p.mul(&q), Estimate::exact(1.0)))
        }
    }
}

fn run_task(ctx: &Ctx, t: &Task) -> Vec<Item> {
    let p = t.body;
    let seed = if p.calibration { ctx.exp.raw.calibration_seed } else { ctx.seed };
    let body_label = if t.h == 0 { p.id.clone() } else { format!("{}#h{}", p.id, t.h) };
    let key = RowKey::new(ctx.suite.name(), p.n, t.k, body_label, seed);
    let id = format!("{}/{}", base_id(ctx.suite), p.how.label());
    let k = match &p.body {
        Ok(k) => k,
        Err(e) => return vec![Item::Row(key.error(&id, format!("centering: {e}")))],
    };
    let rs = ctx.stream(seed, &[&p.id, p.how.label(), &p.n.to_string(), &t.k.to_string(), &t.h.to_string()]);
    let cfg = ctx.exp.core(ctx.exp.budgets().directions);
    let mut obs = None;
    let rows = guarded(&key, &id, || {
        let (num, den) = sides(ctx.suite, k, t.k, &cfg, rs)?;
        if p.symmetric && ctx.suite != Suite::BsWeak {
            // K_out = K_in, so the two estimates are the same number.
            let dev = (num.value / den.value - 1.0).abs();
            return Ok(vec![key.within(&format!("{}/symmetric-exact", base_id(ctx.suite)), dev, 0.0)]);
        }
        let g = normalizer(p.n, t.k);
        obs = Some(Observation { key: key.clone(), id: id.clone(), lhs: num, rhs: den.scale(g), sense: Sense::Upper });
        Ok(Vec::new())
    });
    let mut items: Vec<Item> = rows.into_iter().map(Item::Row).collect();
    items.extend(obs.map(Item::Obs));
    items
}

pub(super) fn run(ctx: &Ctx) -> std::result::Result<SuiteRows, HarnessError> {
    let b = ctx.exp.budgets();
    let moment = ctx.exp.core(b.moment_directions);
    let mut raw = Vec::new();
    for calibration in [false, true] {
        for n in ctx.exp.dimensions(ctx.suite) {
            for body in ctx.exp.bodies(n)? {
                let hows: &[Centering] =
                    if body.body.is_symmetric() { &[Centering::Barycenter] } else { &Centering::BOTH };
                for &how in hows {
                    raw.push((calibration, n, body.clone(), how));
                }
            }
        }
    }
    let prepared: Vec<Prepared> = par_map(&raw, |(calibration, n, b, how)| {
        let seed = if *calibration { ctx.exp.raw.calibration_seed } else { ctx.seed };
        let rs = ctx.stream(seed, &["center", &b.id, how.label(), &n.to_string()]);
        Prepared {
            n: *n,
            id: b.id.clone(),
            how: *how,
            calibration: *calibration,
            symmetric: b.body.is_symmetric(),
            body: center(&b.body, *how, &moment, rs).map_err(|e| e.to_string()),
        }
    });
    let mut tasks = Vec::new();
    for p in &prepared {
        for k in ctx.exp.ks(p.n, spread_ks) {
            for h in 0..b.theorem_subspaces {
                tasks.push(Task { body: p, k, h });
            }
        }
    }
    let results = par_map(&tasks, |t| (t.body.calibration, run_task(ctx, t)));
    let mut eval = Vec::new();
    let mut cal = Vec::new();
    for (c, items) in results {
        if c {
            cal.extend(items);
        } else {
            eval.extend(items);
        }
    }
    let (cal_rows, cal_obs) = Item::split(cal);
    for r in cal_rows.iter().filter(|r| !r.status.is_pass()) {
        log::warn!("calibration row {} {} n={} k={}: {:?}", r.inequality_id, r.body, r.n, r.k, r.status);
    }
    let constants = calibrate::fit(&cal_obs);
    let tol = ctx.exp.core(1).tol;
    let mut records = resolve(eval, &constants, &tol);

    // Per-dimension constants from the calibration seed, and their growth.
    let mut per_dim: BTreeMap<String, BTreeMap<usize, f64>> = BTreeMap::new();
    for o in &cal_obs {
        let slot = per_dim.entry(o.id.clone()).or_default().entry(o.key.n).or_insert(f64::NEG_INFINITY);
        *slot = slot.max(o.ratio());
    }
    let drift = ctx.exp.tolerances().drift;
    let mut calibrated: BTreeMap<String, f64> = constants.into_iter().filter_map(|(k, v)| v.map(|v| (k, v))).collect();
    for (id, dims) in &per_dim {
        for (n, c) in dims {
            calibrated.insert(format!("{id}/n{n}"), *c);
        }
        let key = ctx.key(0, 0, "*");
        let g = calibrate::growth(dims);
        records.push(key.within(&format!("{id}/drift"), g, drift).with_constant(calibrated.get(id).copied().unwrap_or(f64::NAN)));
    }
    Ok(SuiteRows { records, calibrated })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizer_values() {
        assert!((normalizer(4, 2) - 2.0 * 5f64.ln().powi(3)).abs() < 1e-12);
    }
}
