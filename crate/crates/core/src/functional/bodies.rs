//! Ball bodies `K_p(f)`, level bodies `R_p(f)` and integrals of log-concave
//! functions through `∫ f = vol_d(K_d(f))`.

use std::cell::RefCell;
use std::sync::Arc;

use crate::body::{ConvexBody, RadialFunction};
use crate::config::Config;
use crate::error::{ensure_dim, Error, Result};
use crate::functional::{tolerances, LogConcaveFn};
use crate::measure::volume::sphere_mean;
use crate::measure::{Estimate, Method};
use crate::numerics::linalg::{norm, Subspace};
use crate::numerics::quad::{quad_1d, UpperLimit};
use crate::numerics::rng::RngStream;
use crate::numerics::roots::root_find_increasing;
use crate::numerics::special::{gamma_fn, unit_ball_volume, upper_incomplete_gamma};

fn unit_check(f: &LogConcaveFn, unit: &[f64]) -> Result<()> {
    ensure_dim(f.dim(), unit.len())?;
    let r = norm(unit);
    if (r - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!("direction must be a unit vector, |ξ| = {r}")));
    }
    Ok(())
}

/// `φ(tξ)` with the first evaluation error kept aside so scalar routines
/// can run on a plain `Fn(f64) -> f64`.
struct Ray<'a> {
    f: &'a LogConcaveFn,
    unit: &'a [f64],
    failure: RefCell<Option<Error>>,
}

impl<'a> Ray<'a> {
    fn new(f: &'a LogConcaveFn, unit: &'a [f64]) -> Self {
        Self { f, unit, failure: RefCell::new(None) }
    }

    fn phi(&self, t: f64) -> f64 {
        let x: Vec<f64> = self.unit.iter().map(|u| t * u).collect();
        match self.f.phi(&x) {
            Ok(v) => v,
            Err(e) => {
                self.failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    }

    fn finish<T>(self, r: Result<T>) -> Result<T> {
        match self.failure.into_inner() {
            Some(e) => Err(e),
            None => r,
        }
    }
}

/// `ρ_{K_p(f)}(ξ) = (∫_0^∞ p r^{p-1} f(rξ) dr)^{1/p}`.
pub fn ball_body_radial(f: &LogConcaveFn, p: f64, unit: &[f64]) -> Result<f64> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidArgument(format!("Ball body needs p > 0, got {p}")));
    }
    unit_check(f, unit)?;
    if let Some(k) = f.indicator_body() {
        // ∫_0^{ρ_K} p r^{p-1} dr = ρ_K^p
        return k.radial(unit);
    }
    let ray = Ray::new(f, unit);
    let tail = f.tail();
    let bound = |t: f64| tail.moment_bound(p, t);
    let g = |r: f64| {
        let v = (-ray.phi(r)).exp();
        if v == 0.0 {
            0.0
        } else {
            p * r.powf(p - 1.0) * v
        }
    };
    let r = quad_1d(g, 0.0, UpperLimit::Infinity, tolerances().radial_quadrature, Some(&bound));
    let moment = ray.finish(r)?;
    Ok(moment.powf(1.0 / p))
}

/// Radius where `φ(tξ) = p - 1`, i.e. the radial function of `R_p(f)`.
pub fn level_body_radial(f: &LogConcaveFn, p: f64, unit: &[f64]) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidArgument(format!("level body needs p > 1, got {p}")));
    }
    unit_check(f, unit)?;
    if let Some(k) = f.indicator_body() {
        return k.radial(unit);
    }
    let tail = f.tail();
    // φ(tξ) ≥ slope·t ≥ p - 1 beyond this radius.
    let hi = tail.radius.max((p - 1.0) / tail.slope);
    let ray = Ray::new(f, unit);
    let r = root_find_increasing(|t| ray.phi(t), p - 1.0, (0.0, hi), tolerances().root);
    ray.finish(r)
}

#[derive(Debug)]
struct BallBody {
    f: LogConcaveFn,
    p: f64,
}

impl RadialFunction for BallBody {
    fn dim(&self) -> usize {
        self.f.dim()
    }

    fn radial(&self, unit: &[f64]) -> Result<f64> {
        ball_body_radial(&self.f, self.p, unit)
    }

    /// `f ≤ 1` below the tail radius and `f ≤ e^{-slope·r}` beyond it.
    fn outer_radius_bound(&self) -> Option<f64> {
        let t = self.f.tail();
        let p = self.p;
        let tail = p * upper_incomplete_gamma(p, t.slope * t.radius) / t.slope.powf(p);
        Some((t.radius.powf(p) + tail).powf(1.0 / p))
    }

    fn is_symmetric(&self) -> bool {
        self.f.is_symmetric()
    }

    fn describe(&self) -> String {
        format!("K_{}({})", self.p, self.f.describe())
    }
}

#[derive(Debug)]
struct LevelBody {
    f: LogConcaveFn,
    p: f64,
}

impl RadialFunction for LevelBody {
    fn dim(&self) -> usize {
        self.f.dim()
    }

    fn radial(&self, unit: &[f64]) -> Result<f64> {
        level_body_radial(&self.f, self.p, unit)
    }

    fn outer_radius_bound(&self) -> Option<f64> {
        let t = self.f.tail();
        Some(t.radius.max((self.p - 1.0) / t.slope))
    }

    fn is_symmetric(&self) -> bool {
        self.f.is_symmetric()
    }

    fn describe(&self) -> String {
        format!("R_{}({})", self.p, self.f.describe())
    }
}

/// `K_p(f)` as a convex body; indicators return their own body.
pub fn ball_body(f: &LogConcaveFn, p: f64) -> Result<ConvexBody> {
    if let Some(k) = f.indicator_body() {
        return Ok(k.clone());
    }
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidArgument(format!("Ball body needs p > 0, got {p}")));
    }
    ConvexBody::from_radial(Arc::new(BallBody { f: f.clone(), p }))
}

/// `R_p(f) = {f ≥ e^{-(p-1)}}` as a convex body.
pub fn level_body(f: &LogConcaveFn, p: f64) -> Result<ConvexBody> {
    if let Some(k) = f.indicator_body() {
        return Ok(k.clone());
    }
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidArgument(format!("level body needs p > 1, got {p}")));
    }
    ConvexBody::from_radial(Arc::new(LevelBody { f: f.clone(), p }))
}

/// `∫ f = ω_d E_ξ ρ_{K_d(f)}(ξ)^d`, exact in dimension one.
pub fn integral(f: &LogConcaveFn, cfg: &Config, rs: RngStream) -> Result<Estimate> {
    let d = f.dim();
    let p = d as f64;
    if d == 1 {
        let v = ball_body_radial(f, 1.0, &[1.0])? + ball_body_radial(f, 1.0, &[-1.0])?;
        return Ok(Estimate { seed: rs.seed, stream: rs.stream, ..Estimate::exact(v) });
    }
    if let Some(prec) = f.gaussian_precision() {
        // (2π)^{d/2} / √det P
        let det = prec.determinant();
        let v = (2.0 * std::f64::consts::PI).powf(p / 2.0) / det.sqrt();
        return Ok(Estimate { seed: rs.seed, stream: rs.stream, ..Estimate::exact(v) });
    }
    let m = sphere_mean(d, cfg, rs, 1, |xi, out| {
        out[0] = ball_body_radial(f, p, xi)?.powf(p);
        Ok(())
    })?;
    let w = unit_ball_volume(d);
    Ok(Estimate::sampled(w * m.mean[0], w * m.stderr(0), m.count, rs, Method::Sphere))
}

/// `∫_H f` over a linear subspace.
pub fn integral_on(f: &LogConcaveFn, h: &Subspace, cfg: &Config, rs: RngStream) -> Result<Estimate> {
    integral(&f.restrict(h)?, cfg, rs)
}

/// Closed-form `ρ_{K_p}` of `e^{-|x|²/2}`.
pub fn gaussian_ball_radius(p: f64) -> f64 {
    (2f64.powf(p / 2.0 - 1.0) * p * gamma_fn(p / 2.0)).powf(1.0 / p)
}
