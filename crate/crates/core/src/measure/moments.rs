//! First and second moments of the uniform measure on `K` from independent
//! radial samples: with `w = ρ_K(ξ)`,
//! `vol = ω_n E[wⁿ]`, `bar = n/(n+1) · E[w^{n+1} ξ] / E[wⁿ]`,
//! `E_K[x xᵀ] = n/(n+2) · E[w^{n+2} ξ ξᵀ] / E[wⁿ]`.

use crate::body::ConvexBody;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::measure::volume::sphere_mean;
use crate::measure::{Estimate, Method, VectorEstimate};
use crate::numerics::linalg::Matrix;
use crate::numerics::rng::RngStream;
use crate::numerics::special::unit_ball_volume;

#[derive(Debug, Clone, PartialEq)]
pub struct RadialMoments {
    pub volume: Estimate,
    pub barycenter: VectorEstimate,
    /// `E_K[x xᵀ]` about the origin.
    pub second_moment: Matrix,
    /// `E_K[(x - bar)(x - bar)ᵀ]`.
    pub covariance: Matrix,
    /// Delta-method standard errors of the second-moment entries.
    pub second_moment_stderr: Matrix,
}

pub fn radial_moments(k: &ConvexBody, cfg: &Config, rs: RngStream) -> Result<RadialMoments> {
    let n = k.dim();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..=i).map(move |j| (i, j))).collect();
    let width = 1 + n + pairs.len();
    let m = sphere_mean(n, cfg, rs, width, |xi, out| {
        let g = k.gauge(xi)?;
        if !(g.is_finite() && g > 0.0) {
            return Err(Error::DegenerateBody(format!("gauge {g} along a sampled direction")));
        }
        let w = 1.0 / g;
        let wn = w.powi(n as i32);
        out[0] = wn;
        for i in 0..n {
            out[1 + i] = wn * w * xi[i];
        }
        for (p, &(i, j)) in pairs.iter().enumerate() {
            out[1 + n + p] = wn * w * w * xi[i] * xi[j];
        }
        Ok(())
    })?;
    let b = m.mean[0];
    let ratio = |idx: usize, c: f64| -> (f64, f64) {
        let a = m.mean[idx];
        let var = m.mean_covariance(idx, idx) / (b * b) - 2.0 * a * m.mean_covariance(idx, 0) / (b * b * b)
            + a * a * m.mean_covariance(0, 0) / (b * b * b * b);
        (c * a / b, c * var.max(0.0).sqrt())
    };
    let nf = n as f64;
    let (bar, bar_se): (Vec<f64>, Vec<f64>) = (0..n).map(|i| ratio(1 + i, nf / (nf + 1.0))).unzip();
    let mut second = Matrix::zeros(n, n);
    let mut second_se = Matrix::zeros(n, n);
    for (p, &(i, j)) in pairs.iter().enumerate() {
        let (v, s) = ratio(1 + n + p, nf / (nf + 2.0));
        second[(i, j)] = v;
        second[(j, i)] = v;
        second_se[(i, j)] = s;
        second_se[(j, i)] = s;
    }
    let mut cov = second.clone();
    for i in 0..n {
        for j in 0..n {
            cov[(i, j)] -= bar[i] * bar[j];
        }
    }
    let omega = unit_ball_volume(n);
    Ok(RadialMoments {
        volume: Estimate::sampled(omega * b, omega * m.stderr(0), m.count, rs, Method::Sphere),
        barycenter: VectorEstimate { value: bar, stderr: bar_se, samples: m.count, seed: rs.seed, method: Method::Sphere },
        second_moment: second,
        covariance: cov,
        second_moment_stderr: second_se,
    })
}
