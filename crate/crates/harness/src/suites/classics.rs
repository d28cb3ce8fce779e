//! Classical volume inequalities: Blaschke–Santaló and Bourgain–Milman,
//! Rogers–Shephard and Milman–Pajor, mean width and mean gauge bounds,
//! the section–projection band, Fradelizi's section bound and Rudelson's
//! difference-body section bound.

use convexreg_core::body::ConvexBody;
use convexreg_core::measure::{mean_gauge, mean_width, volume, vrad, Estimate};
use convexreg_core::numerics::linalg::Subspace;
use convexreg_core::numerics::special::{ln_gamma_fn, unit_ball_volume};
use convexreg_core::numerics::RngStream;
use convexreg_core::{Config, Result};

use super::calibrate::{self, resolve, Item, Observation};
use super::prep::{center_barycenter, spread_ks, subspace};
use super::{guarded, par_map, Ctx, SuiteRows};
use crate::error::HarnessError;
use crate::report::{Record, RowKey, Sense};

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    let (n, k) = (n as f64, k as f64);
    (ln_gamma_fn(n + 1.0) - ln_gamma_fn(k + 1.0) - ln_gamma_fn(n - k + 1.0)).exp().round()
}

/// Convex hull of planar points, counter-clockwise.
fn hull(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut p = points.to_vec();
    p.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let cross = |o: &[f64; 2], a: &[f64; 2], b: &[f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut out: Vec<[f64; 2]> = Vec::new();
    for pass in 0..2 {
        let start = out.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> =
            if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for q in iter {
            while out.len() >= start + 2 && cross(&out[out.len() - 2], &out[out.len() - 1], q) <= 0.0 {
                out.pop();
            }
            out.push(*q);
        }
        out.pop();
    }
    out
}

fn area(poly: &[[f64; 2]]) -> f64 {
    let m = poly.len();
    (0..m).map(|i| poly[i][0] * poly[(i + 1) % m][1] - poly[(i + 1) % m][0] * poly[i][1]).sum::<f64>().abs() / 2.0
}

/// Exact `vol(K - K) / vol(K)` for a planar polygon given by points.
pub(crate) fn polygon_difference_ratio(points: &[Vec<f64>]) -> f64 {
    let p: Vec<[f64; 2]> = points.iter().map(|v| [v[0], v[1]]).collect();
    let d: Vec<[f64; 2]> = p.iter().flat_map(|a| p.iter().map(move |b| [a[0] - b[0], a[1] - b[1]])).collect();
    area(&hull(&d)) / area(&hull(&p))
}

struct Prepared {
    n: usize,
    id: String,
    raw: ConvexBody,
    centered: std::result::Result<ConvexBody, String>,
}

#[derive(Clone, Copy)]
enum Part {
    Body,
    Subspace(usize),
}

struct Task<'a> {
    body: &'a Prepared,
    part: Part,
    calibration: bool,
}

fn santalo_rows(ctx: &Ctx, key: &RowKey, k: &ConvexBody, rs: RngStream) -> Result<Vec<Record>> {
    let n = k.dim();
    let b = ctx.exp.budgets();
    let tol = &ctx.exp.core(1).tol;
    let w2 = unit_ball_volume(n).powi(2);
    let mut rows = Vec::new();
    let polar = k.polar()?;
    let cfg = ctx.exp.core(b.directions);
    let product = volume(k, &cfg, rs.child("volume"))?.mul(&volume(&polar, &cfg, rs.child("polar-volume"))?).scale(1.0 / w2);
    if k.is_symmetric() {
        rows.push(key.le("blaschke-santalo", &product, &Estimate::exact(1.0), tol));
        let c = ctx.exp.tolerances().bourgain_milman_c;
        rows.push(key.ge("bourgain-milman", &product, &Estimate::exact(c.powi(n as i32)), tol));
    }
    if let (Some(v), Some(vp)) = (k.closed_form_volume(), polar.closed_form_volume()) {
        let cfg = ctx.exp.core(b.oracle_directions);
        let est = volume(k, &cfg, rs.child("oracle-volume"))?
            .mul(&volume(&polar, &cfg, rs.child("oracle-polar-volume"))?)
            .scale(1.0 / w2);
        rows.push(key.close("santalo-product-closed-form", &est, &Estimate::exact(v * vp / w2), tol));
    }
    Ok(rows)
}

fn volume_rows(ctx: &Ctx, key: &RowKey, k: &ConvexBody, raw: &ConvexBody, rs: RngStream) -> Result<Vec<Record>> {
    let n = k.dim();
    let nf = n as f64;
    let b = ctx.exp.budgets();
    let tol = &ctx.exp.core(1).tol;
    let cfg = ctx.exp.core(b.directions);
    let mut rows = Vec::new();
    if let Some(v) = raw.closed_form_volume() {
        let exact = (v / unit_ball_volume(n)).powf(1.0 / nf);
        rows.push(key.close("vrad-closed-form", &vrad(raw, &cfg, rs.child("vrad"))?, &Estimate::exact(exact), tol));
    }
    // One stream for every body below keeps the ratios' numerators and
    // denominators on common directions.
    let common = rs.child("common");
    let vol = volume(k, &cfg, common)?;
    let diff = volume(&k.difference_body()?, &cfg, common)?;
    let ratio = diff.div(&vol);
    rows.push(key.ge("rogers-shephard-lower", &ratio, &Estimate::exact(2f64.powi(n as i32)), tol));
    rows.push(key.le("rogers-shephard-upper", &ratio, &Estimate::exact(binomial(2 * n, n)), tol));
    if let Some(vs) = raw.polyhedron().and_then(|p| p.vertices()).filter(|_| n == 2) {
        let exact = polygon_difference_ratio(vs);
        let ocfg = ctx.exp.core(b.oracle_directions);
        let o = rs.child("oracle-difference");
        let est = volume(&raw.difference_body()?, &ocfg, o)?.div(&volume(raw, &ocfg, o)?);
        rows.push(key.close("difference-ratio-closed-form", &est, &Estimate::exact(exact), tol));
    }
    let outer = volume(&k.outer_reg()?, &cfg, common)?;
    let inner = volume(&k.inner_reg()?, &cfg, common)?;
    rows.push(key.le("milman-pajor-outer", &outer, &vol.scale(2f64.powi(n as i32)), tol));
    rows.push(key.ge("milman-pajor-inner", &inner, &vol.scale(2f64.powi(-(n as i32))), tol));
    Ok(rows)
}

fn mean_rows(ctx: &Ctx, key: &RowKey, k: &ConvexBody, rs: RngStream) -> Result<Vec<Record>> {
    let tol = &ctx.exp.core(1).tol;
    let cfg = ctx.exp.core(ctx.exp.budgets().directions);
    let common = rs.child("common");
    let (outer, inner) = (k.outer_reg()?, k.inner_reg()?);
    let m = mean_gauge(k, &cfg, common)?;
    let ms = mean_width(k, &cfg, common)?;
    let m_in = mean_gauge(&inner, &cfg, common)?;
    let m_out = mean_gauge(&outer, &cfg, common)?;
    let ms_in = mean_width(&inner, &cfg, common)?;
    let ms_out = mean_width(&outer, &cfg, common)?;
    Ok(vec![
        key.ge("mean-width-product", &m.mul(&ms), &Estimate::exact(1.0), tol),
        key.le("mean-width-outer", &ms_out, &ms.scale(2.0), tol),
        key.le("mean-gauge-inner", &m_in, &m.scale(2.0), tol),
        key.le("mean-gauge-outer-monotone", &m_out, &m, tol),
        key.le("mean-width-inner-monotone", &ms_in, &ms, tol),
    ])
}

/// `vrad_k((K - x) ∩ H)` for `x` given in coordinates of `H^⊥`, or `None`
/// when `x` is not an interior point of `K`.
fn offset_section(k: &ConvexBody, h: &Subspace, x: &[f64], cfg: &Config, rs: RngStream) -> Result<Option<Estimate>> {
    let shift = h.embed_complement(x);
    if k.gauge(&shift)? >= 1.0 - 1e-6 {
        return Ok(None);
    }
    let neg: Vec<f64> = shift.iter().map(|v| -v).collect();
    Ok(Some(vrad(&k.translate(&neg)?.section(h)?, cfg, rs)?))
}

/// Maximizes the section volume over translates `x + H`: a centred grid of
/// `5^min(n-k, 3)` offsets with spacing `R̄/4` along the first complement
/// axes, then pattern-search steps along every complement axis. The search
/// runs on a reduced budget with common directions; the returned point is
/// re-estimated on a fresh stream so the maximum is not biased by the noise.
fn max_section(ctx: &Ctx, k: &ConvexBody, h: &Subspace, rs: RngStream) -> Result<(Vec<f64>, Estimate)> {
    let b = ctx.exp.budgets();
    let m = k.dim() - h.dim();
    let search = ctx.exp.core((b.directions / 4).max(64));
    let crn = rs.child("search");
    let eval = |x: &[f64]| -> Result<f64> {
        Ok(offset_section(k, h, x, &search, crn)?.map_or(f64::NEG_INFINITY, |e| e.value))
    };
    let step0 = k.radii().outer / 4.0;
    let axes = m.min(3);
    let mut best = vec![0.0; m];
    let mut best_v = eval(&best)?;
    for idx in 0..5usize.pow(axes as u32) {
        let mut x = vec![0.0; m];
        let mut r = idx;
        for c in x.iter_mut().take(axes) {
            *c = (r % 5) as f64 * step0 - 2.0 * step0;
            r /= 5;
        }
        let v = eval(&x)?;
        if v > best_v {
            best_v = v;
            best = x;
        }
    }
    let mut step = step0 / 2.0;
    for _ in 0..b.local_steps {
        let mut moved = false;
        for axis in 0..m {
            for sign in [1.0, -1.0] {
                let mut x = best.clone();
                x[axis] += sign * step;
                let v = eval(&x)?;
                if v > best_v {
                    best_v = v;
                    best = x;
                    moved = true;
                }
            }
        }
        if !moved {
            step /= 2.0;
        }
    }
    let cfg = ctx.exp.core(b.directions);
    let est = offset_section(k, h, &best, &cfg, rs.child("maximum"))?
        .ok_or_else(|| convexreg_core::Error::NonConverged("translate search left the body".into()))?;
    Ok((best, est))
}

fn subspace_items(ctx: &Ctx, key: &RowKey, k: &ConvexBody, dim: usize, calibration: bool, rs: RngStream) -> Result<Vec<Item>> {
    let n = k.dim();
    let tol = &ctx.exp.core(1).tol;
    let cfg = ctx.exp.core(ctx.exp.budgets().directions);
    let h = subspace(n, dim, rs.child("subspace"))?;
    let mut items = Vec::new();
    let (_, max) = max_section(ctx, k, &h, rs.child("translates"))?;
    let sec = vrad(&k.section(&h)?, &cfg, rs.child("central"))?;
    let diff = vrad(&k.difference_body()?.section(&h)?, &cfg, rs.child("difference"))?;
    let kf = dim as f64;
    let nf = n as f64;
    let rudelson = Observation {
        key: key.clone(),
        id: "rudelson".into(),
        lhs: diff,
        rhs: max.scale(kf.sqrt().min(nf / kf)),
        sense: Sense::Upper,
    };
    items.push(Item::Obs(rudelson));
    if calibration {
        return Ok(items);
    }
    let bound = ((nf + 1.0) / (kf + 1.0)).powf(kf);
    items.push(Item::Row(key.le("fradelizi", &max.powf(kf), &sec.powf(kf).scale(bound), tol)));
    let hp = h.complement()?;
    let common = rs.child("common");
    let proj = volume(&k.project(&h)?, &cfg, common)?;
    let perp = volume(&k.section(&hp)?, &cfg, rs.child("perp"))?;
    let vol = volume(k, &cfg, rs.child("volume"))?;
    let product = proj.mul(&perp);
    items.push(Item::Row(key.ge("section-projection-lower", &product, &vol, tol)));
    items.push(Item::Row(key.le("section-projection-upper", &product, &vol.scale(binomial(n, dim)), tol)));
    Ok(items)
}

fn run_task(ctx: &Ctx, t: &Task) -> Vec<Item> {
    let p = t.body;
    let seed = if t.calibration { ctx.exp.raw.calibration_seed } else { ctx.seed };
    let k_label = match t.part {
        Part::Body => 0,
        Part::Subspace(k) => k,
    };
    let key = RowKey::new(ctx.suite.name(), p.n, k_label, &p.id, seed);
    let rs = ctx.stream(seed, &[&p.id, &p.n.to_string(), &k_label.to_string()]);
    let k = match &p.centered {
        Ok(k) => k,
        Err(e) => return vec![Item::Row(key.error("centering", e.clone()))],
    };
    let rows = |id: &str, f: &dyn Fn() -> Result<Vec<Record>>| -> Vec<Item> {
        guarded(&key, id, f).into_iter().map(Item::Row).collect()
    };
    match t.part {
        Part::Body => {
            let mut out = rows("santalo-product", &|| santalo_rows(ctx, &key, k, rs.child("santalo")));
            out.extend(rows("volume-ratios", &|| volume_rows(ctx, &key, k, &p.raw, rs.child("volumes"))));
            out.extend(rows("mean-widths", &|| mean_rows(ctx, &key, k, rs.child("means"))));
            out
        }
        Part::Subspace(dim) => match subspace_items(ctx, &key, k, dim, t.calibration, rs) {
            Ok(items) => items,
            Err(e) => {
                log::warn!("classics {} n={} k={dim}: {e}", p.id, p.n);
                vec![Item::Row(key.error("sections", e.to_string()))]
            }
        },
    }
}

pub(super) fn run(ctx: &Ctx) -> std::result::Result<SuiteRows, HarnessError> {
    let moment = ctx.exp.core(ctx.exp.budgets().moment_directions);
    let mut raw = Vec::new();
    for n in ctx.exp.dimensions(ctx.suite) {
        for b in ctx.exp.bodies(n)? {
            raw.push((n, b));
        }
    }
    let prepared: Vec<Prepared> = par_map(&raw, |(n, b)| {
        let rs = ctx.stream(ctx.seed, &["center", &b.id, &n.to_string()]);
        Prepared {
            n: *n,
            id: b.id.clone(),
            raw: b.body.clone(),
            centered: center_barycenter(&b.body, &moment, rs).map_err(|e| e.to_string()),
        }
    });
    let mut tasks = Vec::new();
    for calibration in [false, true] {
        for p in &prepared {
            if !calibration {
                tasks.push(Task { body: p, part: Part::Body, calibration });
            }
            for k in ctx.exp.ks(p.n, spread_ks) {
                tasks.push(Task { body: p, part: Part::Subspace(k), calibration });
            }
        }
    }
    let items = par_map(&tasks, |t| (t.calibration, run_task(ctx, t)));
    let mut eval = Vec::new();
    let mut cal = Vec::new();
    for (c, it) in items {
        if c {
            cal.extend(it);
        } else {
            eval.extend(it);
        }
    }
    let (_, cal_obs) = Item::split(cal);
    let constants = calibrate::fit(&cal_obs);
    let tol = ctx.exp.core(1).tol;
    let records = resolve(eval, &constants, &tol);
    Ok(SuiteRows {
        records,
        calibrated: constants.into_iter().filter_map(|(k, v)| v.map(|v| (k, v))).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_difference_is_six() {
        let t = vec![vec![-1.0, -1.0], vec![2.0, -1.0], vec![-1.0, 1.5], vec![0.0, -0.5]];
        assert!((polygon_difference_ratio(&t) - 6.0).abs() < 1e-12);
        let sq = vec![vec![1.0, 1.0], vec![-1.0, 1.0], vec![-1.0, -1.0], vec![1.0, -1.0]];
        assert!((polygon_difference_ratio(&sq) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6.0);
        assert_eq!(binomial(12, 6), 924.0);
    }
}
