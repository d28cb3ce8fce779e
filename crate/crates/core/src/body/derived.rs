//! Oracles of derived bodies that have no finite LP description, expressed
//! as convex minimizations over the oracles of their operands.

use std::cell::RefCell;

use crate::body::ConvexBody;
use crate::error::{Error, Result};
use crate::numerics::linalg::{dot, Subspace};
use crate::numerics::minimize::{minimize_convex, MinimizeOptions};

/// Minimizes a fallible convex objective; the first oracle error wins.
pub(crate) fn try_minimize<F>(f: F, starts: &[Vec<f64>]) -> Result<(Vec<f64>, f64)>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let wrapped = |x: &[f64]| match f(x) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::INFINITY
        }
    };
    let result = minimize_convex(&wrapped, starts, &MinimizeOptions::default());
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let m = result?;
    Ok((m.x, m.value))
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn neg(a: &[f64]) -> Vec<f64> {
    a.iter().map(|x| -x).collect()
}

fn scaled(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// Gauge of `conv(K ∪ -K)`: `min_y p(y) + p(y - x)`.
pub(crate) fn outer_gauge(k: &ConvexBody, x: &[f64]) -> Result<f64> {
    if x.iter().all(|v| *v == 0.0) {
        return Ok(0.0);
    }
    let starts = [x.to_vec(), vec![0.0; x.len()], scaled(x, 0.5)];
    let (_, v) = try_minimize(|y| Ok(k.gauge(y)? + k.gauge(&sub(y, x))?), &starts)?;
    Ok(v)
}

/// Support of `K ∩ -K`: `min_v h(u - v) + h(-v)`.
pub(crate) fn inner_support(k: &ConvexBody, u: &[f64]) -> Result<f64> {
    if u.iter().all(|v| *v == 0.0) {
        return Ok(0.0);
    }
    let starts = [vec![0.0; u.len()], u.to_vec(), scaled(u, 0.5)];
    let (_, v) = try_minimize(|w| Ok(k.support(&sub(u, w))? + k.support(&neg(w))?), &starts)?;
    Ok(v)
}

/// Gauge of `K - K`: `min_y max(p(y), p(y - x))`.
pub(crate) fn difference_gauge(k: &ConvexBody, x: &[f64]) -> Result<f64> {
    if x.iter().all(|v| *v == 0.0) {
        return Ok(0.0);
    }
    let starts = [scaled(x, 0.5), x.to_vec(), vec![0.0; x.len()]];
    let (_, v) = try_minimize(|y| Ok(k.gauge(y)?.max(k.gauge(&sub(y, x))?)), &starts)?;
    Ok(v)
}

/// `min_{v ∈ H⊥} f(Bw + Cv)` for a convex positively homogeneous `f`.
pub(crate) fn fiber_min<F>(h: &Subspace, w: &[f64], f: F) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let m = h.ambient_dim() - h.dim();
    if m == 0 {
        return f(&h.embed(w));
    }
    let (_, v) = try_minimize(|v| f(&h.embed_split(w, v)), &[vec![0.0; m]])?;
    Ok(v)
}

/// Support function from a gauge: `h(u) = 1 / min{p(x) : ⟨u, x⟩ = 1}`.
pub(crate) fn support_from_gauge(k: &ConvexBody, u: &[f64]) -> Result<f64> {
    let uu = dot(u, u);
    if uu == 0.0 {
        return Ok(0.0);
    }
    let line = Subspace::spanned_by(&[u.to_vec()])?;
    let base: Vec<f64> = scaled(u, 1.0 / uu);
    let w = line.coordinates(&base);
    let m = fiber_min(&line, &w, |x| k.gauge(x))?;
    if m <= 0.0 {
        return Err(Error::DegenerateBody("support is infinite (unbounded body)".into()));
    }
    Ok(1.0 / m)
}

/// Smallest `t ≥ 0` with `x ∈ t(K + z)`, i.e. `p_K(x - tz) ≤ t`.
pub(crate) fn translate_gauge(k: &ConvexBody, z: &[f64], x: &[f64]) -> Result<f64> {
    if x.iter().all(|v| *v == 0.0) {
        return Ok(0.0);
    }
    let inside = |t: f64| -> Result<bool> { Ok(k.gauge(&sub(x, &scaled(z, t)))? <= t) };
    let mut hi = 1.0;
    let mut doublings = 0;
    while !inside(hi)? {
        hi *= 2.0;
        doublings += 1;
        if doublings > 200 {
            return Err(Error::DegenerateBody("translated body does not contain the origin".into()));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        if hi - lo <= 1e-15 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if inside(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Largest `s` with `p(x + s d) ≤ 1`, by bisection on the convex map `s ↦ p(x + sd)`.
pub(crate) fn bisect_chord(k: &ConvexBody, x: &[f64], d: &[f64]) -> Result<f64> {
    let dn = dot(d, d).sqrt();
    if dn == 0.0 {
        return Err(Error::InvalidArgument("zero chord direction".into()));
    }
    let at = |s: f64| -> Result<f64> { k.gauge(&x.iter().zip(d).map(|(a, b)| a + s * b).collect::<Vec<_>>()) };
    let mut hi = (k.radii().outer + dot(x, x).sqrt()) / dn * 1.001 + 1e-300;
    while at(hi)? <= 1.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        if hi - lo <= 1e-14 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if at(mid)? <= 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
