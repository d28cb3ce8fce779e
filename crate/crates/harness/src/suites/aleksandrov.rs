//! Grassmannian averages of symmetric bodies: monotonicity of Aleksandrov's
//! `Q_k`, `Q_1 = M*`, and the ball as the minimizer of the Paouris–Pivovarov
//! functional `Φ_k`. Non-symmetric corpus bodies enter through `K_out`.

use convexreg_core::body::ConvexBody;
use convexreg_core::measure::{aleksandrov_q, mean_width, paouris_pivovarov_phi};

use super::{guarded, par_map, Ctx, SuiteRows};
use crate::error::HarnessError;
use crate::report::Record;

fn run_task(ctx: &Ctx, n: usize, id: &str, k: &ConvexBody) -> Vec<Record> {
    let tol = ctx.exp.core(1).tol;
    let cfg = ctx.exp.core(ctx.exp.budgets().directions);
    let rs = ctx.stream(ctx.seed, &[id, &n.to_string()]);
    let mut rows = Vec::new();
    let qs: Vec<Option<convexreg_core::measure::Estimate>> = (1..n)
        .map(|d| {
            let key = ctx.key(n, d, id);
            let mut out = None;
            rows.extend(guarded(&key, "aleksandrov-q", || {
                out = Some(aleksandrov_q(k, d, &cfg, rs.child("q").substream(d as u64))?);
                Ok(Vec::new())
            }));
            out
        })
        .collect();
    for d in 1..n.saturating_sub(1) {
        if let (Some(a), Some(b)) = (qs[d - 1], qs[d]) {
            rows.push(ctx.key(n, d, id).le("aleksandrov-monotone", &b, &a, &tol));
        }
    }
    if let Some(q1) = qs.first().copied().flatten() {
        rows.extend(guarded(&ctx.key(n, 1, id), "aleksandrov-first-mean-width", || {
            let m = mean_width(k, &cfg, rs.child("mean-width"))?;
            Ok(vec![ctx.key(n, 1, id).close("aleksandrov-first-mean-width", &q1, &m, &tol)])
        }));
    }
    for d in [1, 2].into_iter().filter(|&d| d < n) {
        let key = ctx.key(n, d, id);
        rows.extend(guarded(&key, "paouris-pivovarov", || {
            let ball = ConvexBody::ball(n, 1.0)?;
            let phi = paouris_pivovarov_phi(k, d, &cfg, rs.child("phi").substream(d as u64))?;
            let phi_ball = paouris_pivovarov_phi(&ball, d, &cfg, rs.child("phi-ball").substream(d as u64))?;
            Ok(vec![key.ge("paouris-pivovarov", &phi.estimate, &phi_ball.estimate, &tol)])
        }));
    }
    rows
}

pub(super) fn run(ctx: &Ctx) -> std::result::Result<SuiteRows, HarnessError> {
    let mut tasks = Vec::new();
    for n in ctx.exp.dimensions(ctx.suite) {
        for b in ctx.exp.bodies(n)? {
            if b.body.is_symmetric() {
                tasks.push((n, b.id.clone(), Ok(b.body.clone())));
            } else {
                tasks.push((n, format!("{}/out", b.id), b.body.outer_reg().map_err(|e| e.to_string())));
            }
        }
    }
    let rows = par_map(&tasks, |(n, id, body)| match body {
        Ok(k) => run_task(ctx, *n, id, k),
        Err(e) => vec![ctx.key(*n, 0, id).error("aleksandrov-q", e.clone())],
    });
    Ok(SuiteRows::from_records(rows.into_iter().flatten().collect()))
}
