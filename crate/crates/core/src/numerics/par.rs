//! Batched execution with a sequential fallback.
//!
//! With the `parallel` feature, `Exec::Parallel` fans batches out over rayon.
//! Every batch is a pure function of its index, and results are collected in
//! index order, so both paths produce bit-identical output.

use rand_chacha::ChaCha8Rng;

use crate::config::Exec;
use crate::error::Result;
use crate::numerics::rng::RngStream;

pub fn map_indexed<T, F>(exec: Exec, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..count).into_par_iter().map(f).collect()
        }
        _ => (0..count).map(f).collect(),
    }
}

pub fn try_map_indexed<T, F>(exec: Exec, count: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    map_indexed(exec, count, f).into_iter().collect()
}

/// Running first and second moments of a vector-valued sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Moments {
    pub count: usize,
    pub mean: Vec<f64>,
    /// Row-major `dim × dim` sum of centered outer products.
    m2: Vec<f64>,
}

impl Moments {
    pub fn new(dim: usize) -> Self {
        Self { count: 0, mean: vec![0.0; dim], m2: vec![0.0; dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn push(&mut self, x: &[f64]) {
        let d = self.dim();
        self.count += 1;
        let n = self.count as f64;
        let delta: Vec<f64> = x.iter().zip(&self.mean).map(|(a, m)| a - m).collect();
        for (m, dl) in self.mean.iter_mut().zip(&delta) {
            *m += dl / n;
        }
        for i in 0..d {
            let post_i = x[i] - self.mean[i];
            for j in 0..d {
                self.m2[i * d + j] += delta[j] * post_i;
            }
        }
    }

    /// Chan et al. pairwise combination.
    pub fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = other.clone();
            return;
        }
        let d = self.dim();
        let na = self.count as f64;
        let nb = other.count as f64;
        let n = na + nb;
        let delta: Vec<f64> = other.mean.iter().zip(&self.mean).map(|(b, a)| b - a).collect();
        for i in 0..d {
            for j in 0..d {
                self.m2[i * d + j] += other.m2[i * d + j] + delta[i] * delta[j] * na * nb / n;
            }
        }
        for (m, dl) in self.mean.iter_mut().zip(&delta) {
            *m += dl * nb / n;
        }
        self.count += other.count;
    }

    /// Sample covariance between components `i` and `j`.
    pub fn covariance(&self, i: usize, j: usize) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        self.m2[i * self.dim() + j] / (self.count as f64 - 1.0)
    }

    /// Covariance of the sample means of components `i` and `j`.
    pub fn mean_covariance(&self, i: usize, j: usize) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        self.covariance(i, j) / self.count as f64
    }

    pub fn stderr(&self, i: usize) -> f64 {
        self.mean_covariance(i, i).max(0.0).sqrt()
    }
}

/// Draws `samples` vector observations of length `dim` in batches and returns
/// their combined moments. `f` fills one observation from the batch RNG.
pub fn sample_moments<F>(
    exec: Exec,
    stream: RngStream,
    samples: usize,
    batch_size: usize,
    dim: usize,
    f: F,
) -> Result<Moments>
where
    F: Fn(&mut ChaCha8Rng, &mut [f64]) -> Result<()> + Sync + Send,
{
    let batch_size = batch_size.max(1);
    let batches = samples.div_ceil(batch_size);
    let parts = try_map_indexed(exec, batches, |b| {
        let mut rng = stream.substream(b as u64).rng();
        let len = batch_size.min(samples - b * batch_size);
        let mut acc = Moments::new(dim);
        let mut buf = vec![0.0; dim];
        for _ in 0..len {
            f(&mut rng, &mut buf)?;
            acc.push(&buf);
        }
        Ok(acc)
    })?;
    let mut total = Moments::new(dim);
    for p in &parts {
        total.merge(p);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn merge_matches_single_pass() {
        let xs: Vec<[f64; 2]> = (0..57).map(|i| [i as f64 * 0.3, (i * i) as f64 % 7.0]).collect();
        let mut whole = Moments::new(2);
        xs.iter().for_each(|x| whole.push(x));
        let mut a = Moments::new(2);
        let mut b = Moments::new(2);
        xs[..20].iter().for_each(|x| a.push(x));
        xs[20..].iter().for_each(|x| b.push(x));
        a.merge(&b);
        for i in 0..2 {
            assert!((a.mean[i] - whole.mean[i]).abs() < 1e-12);
            for j in 0..2 {
                assert!((a.covariance(i, j) - whole.covariance(i, j)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn parallel_and_sequential_agree_bitwise() {
        let run = |exec| {
            sample_moments(exec, RngStream::new(9), 5000, 333, 1, |rng, out| {
                out[0] = rng.random::<f64>();
                Ok(())
            })
            .unwrap()
        };
        let p = run(Exec::Parallel);
        let s = run(Exec::Sequential);
        assert_eq!(p.mean[0].to_bits(), s.mean[0].to_bits());
        assert_eq!(p.stderr(0).to_bits(), s.stderr(0).to_bits());
    }
}
