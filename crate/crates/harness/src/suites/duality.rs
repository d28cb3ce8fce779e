//! Pointwise oracle identities: `(K_out)° = (K°)_in`, `(K_in)° = (K°)_out`,
//! `K°° = K` and `p_{P_H K} = h_{K° ∩ H}`. The two sides of each identity are
//! built through different routes (polyhedral fast paths against lifted LPs).

use convexreg_core::body::ConvexBody;
use convexreg_core::Result;

use super::prep::{directions, max_deviation, spread_ks, subspace};
use super::{guarded, par_map, Ctx, SuiteRows};
use crate::error::HarnessError;
use crate::report::Record;

struct Task {
    n: usize,
    k: usize,
    id: String,
    body: ConvexBody,
}

/// Gauge and support deviation between two descriptions of the same body.
fn compare(a: &ConvexBody, b: &ConvexBody, points: &[Vec<f64>]) -> Result<f64> {
    let g = max_deviation(points, |x| a.gauge(x), |x| b.gauge(x))?;
    let h = max_deviation(points, |x| a.support(x), |x| b.support(x))?;
    Ok(g.max(h))
}

fn run_task(ctx: &Ctx, t: &Task) -> Vec<Record> {
    let tol = ctx.exp.tolerances().oracle;
    let count = ctx.exp.budgets().identity_directions;
    let key = ctx.key(t.n, t.k, &t.id);
    let stream = |label: &str| ctx.stream(ctx.seed, &[label, &t.id, &t.n.to_string(), &t.k.to_string()]);
    let k = &t.body;
    let lifted = k.lifted_route();
    if t.k > 0 {
        return guarded(&key, "projection-polar", || {
            let h = subspace(t.n, t.k, stream("subspace"))?;
            let proj = k.project(&h)?;
            let sec = lifted.polar()?.section(&h)?;
            let pts = directions(t.k, count, stream("points"));
            let dev = max_deviation(&pts, |z| proj.gauge(z), |z| sec.support(z))?;
            Ok(vec![key.within("projection-polar", dev, tol)])
        });
    }
    let pts = directions(t.n, count, stream("points"));
    let mut rows = Vec::new();
    rows.extend(guarded(&key, "outer-polar", || {
        let a = k.outer_reg()?.polar()?;
        let b = lifted.polar()?.inner_reg()?;
        Ok(vec![key.within("outer-polar", compare(&a, &b, &pts)?, tol)])
    }));
    rows.extend(guarded(&key, "inner-polar", || {
        let a = k.inner_reg()?.polar()?;
        let b = lifted.polar()?.outer_reg()?;
        Ok(vec![key.within("inner-polar", compare(&a, &b, &pts)?, tol)])
    }));
    rows.extend(guarded(&key, "bipolar", || {
        let fast = compare(&k.polar()?.polar()?, k, &pts)?;
        let slow = compare(&lifted.polar()?.polar()?, k, &pts)?;
        Ok(vec![key.within("bipolar", fast.max(slow), tol)])
    }));
    rows
}

pub(super) fn run(ctx: &Ctx) -> std::result::Result<SuiteRows, HarnessError> {
    let mut tasks = Vec::new();
    for n in ctx.exp.dimensions(ctx.suite) {
        let ks = ctx.exp.ks(n, spread_ks);
        for b in ctx.exp.bodies(n)? {
            tasks.push(Task { n, k: 0, id: b.id.clone(), body: b.body.clone() });
            for &k in &ks {
                tasks.push(Task { n, k, id: b.id.clone(), body: b.body.clone() });
            }
        }
    }
    let rows = par_map(&tasks, |t| run_task(ctx, t));
    Ok(SuiteRows::from_records(rows.into_iter().flatten().collect()))
}
