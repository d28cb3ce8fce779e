//! Distribution of `vrad(K_out ∩ H) / vrad(K_in ∩ H)` over Haar subspaces
//! for bodies in isotropic position. For each `(n, k)` the empirical
//! `1 - e^{-k}` quantile is reported; it must be finite and at least 1, and a
//! second pass with fresh directions on the same subspaces must agree with it.

use convexreg_core::body::ConvexBody;
use convexreg_core::measure::{vrad, Estimate};
use convexreg_core::numerics::RngStream;
use convexreg_core::Result;

use super::prep::{isotropic, subspace};
use super::{guarded, par_map, Ctx, SuiteRows};
use crate::error::HarnessError;
use crate::report::Record;

/// Ratios on `count` subspaces; the subspaces depend only on `subspaces`.
fn ratios(k: &ConvexBody, dim: usize, count: usize, cfg: &convexreg_core::Config, subspaces: RngStream, directions: RngStream) -> Result<Vec<Estimate>> {
    let (outer, inner) = (k.outer_reg()?, k.inner_reg()?);
    (0..count)
        .map(|i| {
            let h = subspace(k.dim(), dim, subspaces.substream(i as u64))?;
            let d = directions.substream(i as u64);
            Ok(vrad(&outer.section(&h)?, cfg, d)?.div(&vrad(&inner.section(&h)?, cfg, d)?))
        })
        .collect()
}

/// Empirical quantile (lower order statistic) with the error of the chosen ratio.
pub(crate) fn quantile(values: &[Estimate], level: f64) -> Estimate {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.value.total_cmp(&b.value));
    let idx = ((level * v.len() as f64).ceil() as usize).clamp(1, v.len()) - 1;
    v[idx]
}

fn run_task(ctx: &Ctx, n: usize, id: &str, body: &std::result::Result<ConvexBody, String>, dim: usize) -> Vec<Record> {
    let key = ctx.key(n, dim, id);
    let tol = ctx.exp.core(1).tol;
    let b = ctx.exp.budgets();
    let cfg = ctx.exp.core(b.quantile_directions);
    let rs = ctx.stream(ctx.seed, &[id, &n.to_string(), &dim.to_string()]);
    guarded(&key, "quantile", || {
        let k = body.as_ref().map_err(|e| convexreg_core::Error::NonConverged(format!("isotropic position: {e}")))?;
        let subspaces = rs.child("subspaces");
        let a = ratios(k, dim, b.quantile_subspaces, &cfg, subspaces, rs.child("pass-a"))?;
        let c = ratios(k, dim, b.quantile_subspaces, &cfg, subspaces, rs.child("pass-b"))?;
        let level = 1.0 - (-(dim as f64)).exp();
        let (qa, qb) = (quantile(&a, level), quantile(&c, level));
        let median = quantile(&a, 0.5);
        log::info!("random-subspace {id} n={n} k={dim}: median {:.4}, quantile({level:.3}) {:.4}", median.value, qa.value);
        let ln = (n as f64).ln();
        Ok(vec![
            key.ge("section-ratio-quantile", &qa, &Estimate::exact(1.0), &tol).with_constant(qa.value / (ln * ln)),
            key.close("section-ratio-quantile-rerun", &qb, &qa, &tol).with_constant(qa.value / ln),
        ])
    })
}

pub(super) fn run(ctx: &Ctx) -> std::result::Result<SuiteRows, HarnessError> {
    let moment = ctx.exp.core(ctx.exp.budgets().moment_directions);
    let mut raw = Vec::new();
    for n in ctx.exp.dimensions(ctx.suite) {
        for b in ctx.exp.bodies(n)? {
            raw.push((n, b));
        }
    }
    let prepared: Vec<_> = par_map(&raw, |(n, b)| {
        let rs = ctx.stream(ctx.seed, &["isotropic", &b.id, &n.to_string()]);
        (*n, b.id.clone(), isotropic(&b.body, &moment, rs).map_err(|e| e.to_string()))
    });
    let mut tasks = Vec::new();
    for (i, (n, _, _)) in prepared.iter().enumerate() {
        for k in ctx.exp.ks(*n, |n| (1..=3.min(n - 1)).collect()) {
            tasks.push((i, k));
        }
    }
    let rows = par_map(&tasks, |&(i, k)| {
        let (n, id, body) = &prepared[i];
        run_task(ctx, *n, id, body, k)
    });
    let records: Vec<Record> = rows.into_iter().flatten().collect();
    let calibrated = records
        .iter()
        .filter(|r| r.inequality_id == "section-ratio-quantile" && r.status.is_pass())
        .filter_map(|r| r.const_calibrated.map(|c| (format!("gamma/{}/n{}k{}", r.body, r.n, r.k), c)))
        .collect();
    Ok(SuiteRows { records, calibrated })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_is_an_order_statistic() {
        let v: Vec<Estimate> = [3.0, 1.0, 2.0, 4.0].iter().map(|&x| Estimate::exact(x)).collect();
        assert_eq!(quantile(&v, 0.5).value, 2.0);
        assert_eq!(quantile(&v, 0.9).value, 4.0);
        assert_eq!(quantile(&v, 0.0).value, 1.0);
    }
}
