//! The Santaló point: the unique `z ∈ int K` minimizing `vol((K - z)°)`.
//!
//! With fixed directions `ξ` and `h_z = h_K(ξ) - ⟨z, ξ⟩`,
//! `vol((K - z)°) ∝ E[h_z^{-n}]`, whose gradient is `n E[h_z^{-n-1} ξ]`
//! (proportional to `bar((K - z)°)`) and whose Hessian is
//! `n(n+1) E[h_z^{-n-2} ξ ξᵀ]`. The iteration takes damped Newton steps
//! against the polar barycenter and stops once that barycenter vanishes.

use crate::body::ConvexBody;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::numerics::linalg::{dot, norm, solve_spd, sphere_sample, Matrix};
use crate::numerics::par::try_map_indexed;
use crate::numerics::rng::RngStream;

#[derive(Debug, Clone, PartialEq)]
pub struct SantaloReport {
    pub point: Vec<f64>,
    /// `|bar((K - z)°)|` at the returned point, on the sampled directions.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Sampling standard error of each coordinate of the point.
    pub stderr: Vec<f64>,
}

struct Sums {
    f: f64,
    grad: Vec<f64>,
    hess: Matrix,
}

fn sums(dirs: &[Vec<f64>], h: &[f64], z: &[f64]) -> Option<Sums> {
    let n = z.len();
    let nf = n as i32;
    let mut f = 0.0;
    let mut grad = vec![0.0; n];
    let mut hess = Matrix::zeros(n, n);
    for (xi, hk) in dirs.iter().zip(h) {
        let hz = hk - dot(z, xi);
        if hz <= 0.0 {
            return None;
        }
        let w = hz.powi(-nf);
        f += w;
        let w1 = w / hz;
        let w2 = w1 / hz;
        for i in 0..n {
            grad[i] += w1 * xi[i];
            for j in 0..=i {
                hess[(i, j)] += w2 * xi[i] * xi[j];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            hess[(j, i)] = hess[(i, j)];
        }
    }
    let m = dirs.len() as f64;
    Some(Sums { f: f / m, grad: grad.iter().map(|g| g / m).collect(), hess: hess / m })
}

pub fn santalo_point(k: &ConvexBody, cfg: &Config, rs: RngStream) -> Result<SantaloReport> {
    let n = k.dim();
    let per = cfg.mc.batch_size.max(1);
    let total = cfg.mc.directions;
    let batches = total.div_ceil(per);
    let parts = try_map_indexed(cfg.mc.exec, batches, |b| {
        let mut rng = rs.substream(b as u64).rng();
        let len = per.min(total - b * per);
        (0..len)
            .map(|_| {
                let xi = sphere_sample(&mut rng, n);
                let h = k.support(&xi)?;
                Ok((xi, h))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let (dirs, h): (Vec<Vec<f64>>, Vec<f64>) = parts.into_iter().flatten().unzip();

    let nf = n as f64;
    let polar_bar = |s: &Sums| -> Vec<f64> { s.grad.iter().map(|g| nf / (nf + 1.0) * g / s.f).collect() };
    let scale = 1.0 / k.radii().inner;
    let tol = cfg.mc.santalo_tolerance * scale;
    let mut z = vec![0.0; n];
    let mut s = sums(&dirs, &h, &z).ok_or_else(|| Error::DegenerateBody("origin outside the body".into()))?;
    let mut iterations = 0;
    let mut residual = norm(&polar_bar(&s));
    while residual > tol && iterations < cfg.mc.santalo_max_iter {
        iterations += 1;
        let step = solve_spd(&s.hess, &s.grad, 1e-8)?;
        let mut alpha = cfg.mc.santalo_step;
        let mut accepted = false;
        for _ in 0..60 {
            let cand: Vec<f64> = z.iter().zip(&step).map(|(a, d)| a - alpha / (nf + 1.0) * d).collect();
            if let Some(sc) = sums(&dirs, &h, &cand) {
                // Near the optimum F is flat to rounding, so allow ties.
                if sc.f <= s.f * (1.0 + 1e-12) {
                    z = cand;
                    s = sc;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        residual = norm(&polar_bar(&s));
        if !accepted {
            break;
        }
    }
    // Sampling error of the minimizer: H⁻¹ Var(∇) H⁻¹ / N.
    let mut var = Matrix::zeros(n, n);
    for (xi, hk) in dirs.iter().zip(&h) {
        let hz = hk - dot(&z, xi);
        let w1 = hz.powi(-(n as i32) - 1);
        for i in 0..n {
            for j in 0..n {
                var[(i, j)] += (w1 * xi[i] - s.grad[i]) * (w1 * xi[j] - s.grad[j]);
            }
        }
    }
    let m = dirs.len() as f64;
    var /= m;
    let hinv = crate::numerics::linalg::inverse(&s.hess)?;
    let cov = &hinv * var * &hinv / (m * (nf + 1.0) * (nf + 1.0));
    let stderr = (0..n).map(|i| cov[(i, i)].max(0.0).sqrt()).collect();
    let converged = residual <= tol;
    if !converged {
        log::warn!("Santaló iteration stopped after {iterations} steps with residual {residual:.3e}");
    }
    Ok(SantaloReport { point: z, residual, iterations, converged, stderr })
}
