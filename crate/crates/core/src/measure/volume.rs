//! Volume radii, volumes and mean widths from spherical averages of the
//! radial function: `vol_d(K) = ω_d · E_ξ ρ_K(ξ)^d`.

use crate::body::ConvexBody;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::measure::{Estimate, Method};
use crate::numerics::linalg::{sphere_sample, Subspace};
use crate::numerics::par::{sample_moments, Moments};
use crate::numerics::rng::RngStream;
use crate::numerics::special::unit_ball_volume;

/// Mean of `f(ξ)` over `cfg.mc.directions` uniform directions.
pub(crate) fn sphere_mean<F>(dim: usize, cfg: &Config, rs: RngStream, width: usize, f: F) -> Result<Moments>
where
    F: Fn(&[f64], &mut [f64]) -> Result<()> + Sync + Send,
{
    sample_moments(cfg.mc.exec, rs, cfg.mc.directions, cfg.mc.batch_size, width, |rng, out| {
        let xi = sphere_sample(rng, dim);
        f(&xi, out)
    })
}

fn radial_power(k: &ConvexBody, xi: &[f64], d: usize) -> Result<f64> {
    let g = k.gauge(xi)?;
    if !(g.is_finite() && g > 0.0) {
        return Err(Error::DegenerateBody(format!("gauge {g} along a sampled direction")));
    }
    Ok(g.powi(-(d as i32)))
}

/// `E ρ^d`, i.e. `vrad(K)^d`. One-dimensional bodies are evaluated exactly.
pub(crate) fn mean_radial_power(k: &ConvexBody, cfg: &Config, rs: RngStream) -> Result<Estimate> {
    let d = k.dim();
    if d == 1 {
        let v = 0.5 * (k.radial(&[1.0])? + k.radial(&[-1.0])?);
        return Ok(Estimate { seed: rs.seed, stream: rs.stream, ..Estimate::exact(v) });
    }
    let m = sphere_mean(d, cfg, rs, 1, |xi, out| {
        out[0] = radial_power(k, xi, d)?;
        Ok(())
    })?;
    Ok(Estimate::sampled(m.mean[0], m.stderr(0), m.count, rs, Method::Sphere))
}

/// Volume radius `(vol(K)/ω_d)^{1/d}` with a delta-method standard error.
pub fn vrad(k: &ConvexBody, cfg: &Config, rs: RngStream) -> Result<Estimate> {
    let m = mean_radial_power(k, cfg, rs)?;
    Ok(Estimate { method: m.method, ..m.powf(1.0 / k.dim() as f64) })
}

pub fn volume(k: &ConvexBody, cfg: &Config, rs: RngStream) -> Result<Estimate> {
    let m = mean_radial_power(k, cfg, rs)?;
    Ok(Estimate { method: m.method, ..m.scale(unit_ball_volume(k.dim())) })
}

pub fn vrad_section(k: &ConvexBody, h: &Subspace, cfg: &Config, rs: RngStream) -> Result<Estimate> {
    vrad(&k.section(h)?, cfg, rs)
}

pub fn vrad_projection(k: &ConvexBody, h: &Subspace, cfg: &Config, rs: RngStream) -> Result<Estimate> {
    vrad(&k.project(h)?, cfg, rs)
}

/// `M*(K)`, the spherical mean of the support function.
pub fn mean_width(k: &ConvexBody, cfg: &Config, rs: RngStream) -> Result<Estimate> {
    let m = sphere_mean(k.dim(), cfg, rs, 1, |xi, out| {
        out[0] = k.support(xi)?;
        Ok(())
    })?;
    Ok(Estimate::sampled(m.mean[0], m.stderr(0), m.count, rs, Method::Sphere))
}

/// `M(K)`, the spherical mean of the gauge.
pub fn mean_gauge(k: &ConvexBody, cfg: &Config, rs: RngStream) -> Result<Estimate> {
    let m = sphere_mean(k.dim(), cfg, rs, 1, |xi, out| {
        out[0] = k.gauge(xi)?;
        Ok(())
    })?;
    Ok(Estimate::sampled(m.mean[0], m.stderr(0), m.count, rs, Method::Sphere))
}
