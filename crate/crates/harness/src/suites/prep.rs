//! Body preprocessing shared by suites: recentring, isotropic position and
//! sampled directions and subspaces.

use convexreg_core::body::ConvexBody;
use convexreg_core::measure::{isotropic_normalize, radial_moments, santalo_point};
use convexreg_core::numerics::linalg::{haar_subspace, sphere_sample, Subspace};
use convexreg_core::numerics::RngStream;
use convexreg_core::{Config, Result};

/// Hypothesis under which a body enters the projection and section suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Centering {
    /// `bar(K) = 0`.
    Barycenter,
    /// `bar(K°) = 0`, i.e. the Santaló point at the origin.
    Santalo,
}

impl Centering {
    pub const BOTH: [Centering; 2] = [Centering::Barycenter, Centering::Santalo];

    pub fn label(self) -> &'static str {
        match self {
            Centering::Barycenter => "bar",
            Centering::Santalo => "santalo",
        }
    }
}

fn negate(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| -v).collect()
}

/// Moves the barycenter estimate to the origin. Symmetric bodies are already centred.
pub fn center_barycenter(k: &ConvexBody, cfg: &Config, rs: RngStream) -> Result<ConvexBody> {
    if k.is_symmetric() {
        return Ok(k.clone());
    }
    let m = radial_moments(k, cfg, rs)?;
    k.translate(&negate(&m.barycenter.value))
}

/// Moves the Santaló point estimate to the origin.
pub fn center_santalo(k: &ConvexBody, cfg: &Config, rs: RngStream) -> Result<ConvexBody> {
    if k.is_symmetric() {
        return Ok(k.clone());
    }
    let s = santalo_point(k, cfg, rs)?;
    if !s.converged {
        log::warn!("Santaló iteration stopped at residual {:.3e}", s.residual);
    }
    k.translate(&negate(&s.point))
}

pub fn center(k: &ConvexBody, how: Centering, cfg: &Config, rs: RngStream) -> Result<ConvexBody> {
    match how {
        Centering::Barycenter => center_barycenter(k, cfg, rs),
        Centering::Santalo => center_santalo(k, cfg, rs),
    }
}

/// Isotropic position; symmetric bodies keep the origin and only get whitened.
pub fn isotropic(k: &ConvexBody, cfg: &Config, rs: RngStream) -> Result<ConvexBody> {
    let (out, report) = isotropic_normalize(k, cfg, rs)?;
    if k.is_symmetric() {
        k.linear_image(&report.map)
    } else {
        Ok(out)
    }
}

pub fn directions(n: usize, count: usize, rs: RngStream) -> Vec<Vec<f64>> {
    let mut rng = rs.rng();
    (0..count).map(|_| sphere_sample(&mut rng, n)).collect()
}

pub fn subspace(n: usize, k: usize, rs: RngStream) -> Result<Subspace> {
    haar_subspace(&mut rs.rng(), n, k)
}

/// `{1, ⌊n/2⌋, n-1}` without duplicates.
pub fn spread_ks(n: usize) -> Vec<usize> {
    let mut ks = vec![1, n / 2, n - 1];
    ks.retain(|&k| k >= 1 && k < n);
    ks.dedup();
    ks
}

/// Largest relative disagreement of two oracles over `points`.
pub fn max_deviation(
    points: &[Vec<f64>],
    a: impl Fn(&[f64]) -> Result<f64>,
    b: impl Fn(&[f64]) -> Result<f64>,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for p in points {
        let (x, y) = (a(p)?, b(p)?);
        let d = (x - y).abs() / x.abs().max(y.abs()).max(1.0);
        worst = if d.is_nan() { f64::INFINITY } else { worst.max(d) };
    }
    Ok(worst)
}
