//! Hit-and-run sampling and the barycenter / covariance estimates built on it.

use rand::Rng;

use crate::body::ConvexBody;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::measure::{Method, VectorEstimate};
use crate::numerics::linalg::{sphere_sample, Matrix};
use crate::numerics::par::try_map_indexed;
use crate::numerics::rng::RngStream;

/// One hit-and-run chain started at the origin.
fn chain(k: &ConvexBody, len: usize, burn_in: usize, thinning: usize, rs: RngStream) -> Result<Vec<Vec<f64>>> {
    let n = k.dim();
    let mut rng = rs.rng();
    let mut x = vec![0.0; n];
    let mut out = Vec::with_capacity(len);
    let thinning = thinning.max(1);
    let total = burn_in + len * thinning;
    for step in 1..=total {
        let d = sphere_sample(&mut rng, n);
        let fwd = k.chord(&x, &d)?;
        let neg: Vec<f64> = d.iter().map(|v| -v).collect();
        let back = k.chord(&x, &neg)?;
        if !(fwd.is_finite() && back.is_finite()) {
            return Err(Error::NonConverged("hit-and-run chord is unbounded".into()));
        }
        let t = -back + (fwd + back) * rng.random::<f64>();
        x.iter_mut().zip(&d).for_each(|(a, b)| *a += t * b);
        if step > burn_in && (step - burn_in).is_multiple_of(thinning) {
            out.push(x.clone());
        }
    }
    Ok(out)
}

/// Approximately uniform points of `K`, drawn by independent chains of
/// `cfg.mc.batch_size` points each. Each chain starts at the origin.
pub fn hit_and_run(
    k: &ConvexBody,
    samples: usize,
    burn_in: usize,
    thinning: usize,
    cfg: &Config,
    rs: RngStream,
) -> Result<Vec<Vec<f64>>> {
    Ok(hit_and_run_chains(k, samples, burn_in, thinning, cfg, rs)?.into_iter().flatten().collect())
}

fn hit_and_run_chains(
    k: &ConvexBody,
    samples: usize,
    burn_in: usize,
    thinning: usize,
    cfg: &Config,
    rs: RngStream,
) -> Result<Vec<Vec<Vec<f64>>>> {
    let per = cfg.mc.batch_size.max(1);
    let chains = samples.div_ceil(per);
    try_map_indexed(cfg.mc.exec, chains, |c| {
        let len = per.min(samples - c * per);
        chain(k, len, burn_in, thinning, rs.substream(c as u64))
    })
}

fn default_chains(k: &ConvexBody, cfg: &Config, rs: RngStream) -> Result<Vec<Vec<Vec<f64>>>> {
    let n = k.dim();
    hit_and_run_chains(
        k,
        cfg.mc.directions,
        cfg.mc.burn_in_factor * n * n,
        cfg.mc.thinning_factor * n,
        cfg,
        rs,
    )
}

/// Standard error of a mean over chains from the spread of chain means.
fn batch_stderr(chain_means: &[f64]) -> f64 {
    let m = chain_means.len();
    if m < 2 {
        return f64::INFINITY;
    }
    let mean = chain_means.iter().sum::<f64>() / m as f64;
    let var = chain_means.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m as f64 - 1.0);
    (var / m as f64).sqrt()
}

fn entrywise<F: Fn(&[f64]) -> f64>(chains: &[Vec<Vec<f64>>], f: F) -> (f64, f64) {
    let means: Vec<f64> = chains.iter().map(|c| c.iter().map(|x| f(x)).sum::<f64>() / c.len() as f64).collect();
    let total: usize = chains.iter().map(Vec::len).sum();
    let value = chains.iter().flat_map(|c| c.iter().map(|x| f(x))).sum::<f64>() / total as f64;
    (value, batch_stderr(&means))
}

/// Barycenter from hit-and-run samples; errors use batch means over chains.
pub fn barycenter(k: &ConvexBody, cfg: &Config, rs: RngStream) -> Result<VectorEstimate> {
    let chains = default_chains(k, cfg, rs)?;
    let n = k.dim();
    let (value, stderr) = (0..n).map(|i| entrywise(&chains, |x| x[i])).unzip();
    Ok(VectorEstimate {
        value,
        stderr,
        samples: chains.iter().map(Vec::len).sum(),
        seed: rs.seed,
        method: Method::HitAndRun,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixEstimate {
    pub value: Matrix,
    pub stderr: Matrix,
    pub samples: usize,
    pub seed: u64,
    pub method: Method,
}

/// Covariance `E[(x - bar)(x - bar)ᵀ]` of the uniform measure on `K`.
pub fn covariance(k: &ConvexBody, cfg: &Config, rs: RngStream) -> Result<MatrixEstimate> {
    let chains = default_chains(k, cfg, rs)?;
    let n = k.dim();
    let bar: Vec<f64> = (0..n).map(|i| entrywise(&chains, |x| x[i]).0).collect();
    let mut value = Matrix::zeros(n, n);
    let mut stderr = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let (v, s) = entrywise(&chains, |x| (x[i] - bar[i]) * (x[j] - bar[j]));
            value[(i, j)] = v;
            value[(j, i)] = v;
            stderr[(i, j)] = s;
            stderr[(j, i)] = s;
        }
    }
    Ok(MatrixEstimate { value, stderr, samples: chains.iter().map(Vec::len).sum(), seed: rs.seed, method: Method::HitAndRun })
}
