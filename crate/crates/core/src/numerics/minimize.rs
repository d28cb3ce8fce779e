//! Derivative-free minimization of convex (possibly non-smooth) objectives.
//!
//! Sweeps line searches along coordinate axes, a few pseudo-random directions
//! and the last sweep's displacement. Line searches bracket by geometric
//! expansion and refine with golden-section steps. All pseudo-randomness uses
//! fixed internal seeds, so results are a pure function of the inputs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numerics::linalg::{norm, sphere_sample};

const GOLD: f64 = 0.381_966_011_250_105_1;

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizeOptions {
    /// Relative objective tolerance.
    pub tol: f64,
    pub max_evaluations: usize,
    pub max_sweeps: usize,
    /// Random directions added to every sweep.
    pub random_directions: usize,
    /// Initial line-search step, relative to `1 + |x|`.
    pub initial_step: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self { tol: 1e-9, max_evaluations: 400_000, max_sweeps: 400, random_directions: 2, initial_step: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

struct Counted<'a, F: Fn(&[f64]) -> f64> {
    f: &'a F,
    evaluations: usize,
    limit: usize,
}

impl<F: Fn(&[f64]) -> f64> Counted<'_, F> {
    fn eval(&mut self, x: &[f64]) -> Result<f64> {
        self.evaluations += 1;
        if self.evaluations > self.limit {
            return Err(Error::Minimization { evaluations: self.evaluations });
        }
        let v = (self.f)(x);
        if v.is_nan() {
            return Err(Error::NonFinite("minimization objective"));
        }
        Ok(v)
    }
}

fn along(x: &[f64], d: &[f64], t: f64) -> Vec<f64> {
    x.iter().zip(d).map(|(a, b)| a + t * b).collect()
}

/// Minimizes `t ↦ f(x + t d)` starting from `t = 0` with value `f0`.
/// Returns `(t, value)` and updates the preferred step size.
fn line_search<F: Fn(&[f64]) -> f64>(
    cf: &mut Counted<'_, F>,
    x: &[f64],
    d: &[f64],
    f0: f64,
    step: &mut f64,
    xtol: f64,
) -> Result<(f64, f64)> {
    let h = *step;
    let fp = cf.eval(&along(x, d, h))?;
    let (dir, f1) = if fp < f0 {
        (1.0, fp)
    } else {
        let fm = cf.eval(&along(x, d, -h))?;
        if fm < f0 {
            (-1.0, fm)
        } else {
            // Minimum bracketed in [-h, h]; shrink the step for next time.
            let r = golden(cf, x, d, -h, 0.0, f0, h, xtol)?;
            *step = (h * 0.5).max(xtol * 4.0);
            return Ok(r);
        }
    };
    // Expand until the objective rises.
    let (mut a, mut b, mut fb) = (0.0, dir * h, f1);
    let mut c = dir * h * 2.618;
    let mut fc = cf.eval(&along(x, d, c))?;
    let mut grows = 0;
    while fc < fb {
        a = b;
        b = c;
        fb = fc;
        c = b + (b - a) * 1.618;
        fc = cf.eval(&along(x, d, c))?;
        grows += 1;
        if grows > 200 {
            return Err(Error::NonConverged("line search failed to bracket (unbounded objective?)".into()));
        }
    }
    let (lo, hi) = if a < c { (a, c) } else { (c, a) };
    let r = golden(cf, x, d, lo, b, fb, hi, xtol)?;
    *step = (r.0.abs()).max(h);
    Ok(r)
}

/// Golden-section refinement of a bracket `lo < m < hi` with `f(m) ≤ f(lo), f(hi)`.
#[allow(clippy::too_many_arguments)]
fn golden<F: Fn(&[f64]) -> f64>(
    cf: &mut Counted<'_, F>,
    x: &[f64],
    d: &[f64],
    mut lo: f64,
    mut m: f64,
    mut fm: f64,
    mut hi: f64,
    xtol: f64,
) -> Result<(f64, f64)> {
    while hi - lo > xtol {
        let t = if m - lo > hi - m { m - GOLD * (m - lo) } else { m + GOLD * (hi - m) };
        let ft = cf.eval(&along(x, d, t))?;
        if ft < fm {
            if t < m {
                hi = m;
            } else {
                lo = m;
            }
            m = t;
            fm = ft;
        } else if t < m {
            lo = t;
        } else {
            hi = t;
        }
    }
    Ok((m, fm))
}

/// Minimizes the convex function `f` from each start and returns the best result.
pub fn minimize_convex<F: Fn(&[f64]) -> f64>(
    f: &F,
    starts: &[Vec<f64>],
    opts: &MinimizeOptions,
) -> Result<Minimum> {
    let dim = starts.first().map_or(0, Vec::len);
    let mut cf = Counted { f, evaluations: 0, limit: opts.max_evaluations };
    if dim == 0 {
        let value = cf.eval(&[])?;
        return Ok(Minimum { x: vec![], value, evaluations: 1 });
    }
    let mut best: Option<(Vec<f64>, f64)> = None;
    for start in starts {
        let mut x = start.clone();
        let mut fx = cf.eval(&x)?;
        if !fx.is_finite() {
            continue;
        }
        let scale = 1.0 + norm(&x);
        let xtol = 1e-10 * scale;
        let mut steps = vec![opts.initial_step * scale; dim + opts.random_directions + 1];
        let mut rng = ChaCha8Rng::seed_from_u64(0x6d69_6e69);
        let mut quiet = 0;
        for _ in 0..opts.max_sweeps {
            let begin = x.clone();
            let f_begin = fx;
            let mut dirs: Vec<Vec<f64>> = (0..dim)
                .map(|i| {
                    let mut e = vec![0.0; dim];
                    e[i] = 1.0;
                    e
                })
                .collect();
            for _ in 0..opts.random_directions {
                dirs.push(sphere_sample(&mut rng, dim));
            }
            for (d, step) in dirs.iter().zip(steps.iter_mut()) {
                let (t, v) = line_search(&mut cf, &x, d, fx, step, xtol)?;
                if v < fx {
                    x = along(&x, d, t);
                    fx = v;
                }
            }
            let disp: Vec<f64> = x.iter().zip(&begin).map(|(a, b)| a - b).collect();
            let len = norm(&disp);
            if len > xtol {
                let unit: Vec<f64> = disp.iter().map(|v| v / len).collect();
                let step = steps.last_mut().expect("step slots cover the displacement");
                *step = step.max(len);
                let (t, v) = line_search(&mut cf, &x, &unit, fx, step, xtol)?;
                if v < fx {
                    x = along(&x, &unit, t);
                    fx = v;
                }
            }
            if f_begin - fx <= opts.tol * (1.0 + fx.abs()) {
                quiet += 1;
                if quiet >= 2 {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        if best.as_ref().is_none_or(|b| fx < b.1) {
            best = Some((x, fx));
        }
    }
    let (x, value) = best.ok_or(Error::NonFinite("minimization objective at every start"))?;
    Ok(Minimum { x, value, evaluations: cf.evaluations })
}

/// Maximizes a unimodal function on `[lo, hi]` by golden-section search.
pub fn golden_section_max<G: Fn(f64) -> f64>(g: G, mut lo: f64, mut hi: f64, xtol: f64) -> (f64, f64) {
    let mut c = hi - (1.0 - GOLD) * (hi - lo);
    let mut d = lo + (1.0 - GOLD) * (hi - lo);
    let mut gc = g(c);
    let mut gd = g(d);
    while hi - lo > xtol * (1.0 + lo.abs().max(hi.abs())) {
        if gc >= gd {
            hi = d;
            d = c;
            gd = gc;
            c = hi - (1.0 - GOLD) * (hi - lo);
            gc = g(c);
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + (1.0 - GOLD) * (hi - lo);
            gd = g(d);
        }
    }
    let t = 0.5 * (lo + hi);
    (t, g(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_minimum() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2) + x[0] * x[1];
        // Stationary point solves 2(x0-1) + x1 = 0, 6(x1+2) + x0 = 0.
        let x1 = -13.0 / 5.5;
        let x0 = 1.0 - x1 / 2.0;
        let m = minimize_convex(&f, &[vec![0.0, 0.0]], &MinimizeOptions::default()).unwrap();
        assert!((m.value - f(&[x0, x1])).abs() < 1e-9);
    }

    #[test]
    fn nonsmooth_max_of_norms() {
        // min_y max(|y|₁, |y - x|₁) = |x|₁ / 2
        let x = [2.0, -1.0, 0.5];
        let f = |y: &[f64]| {
            let a: f64 = y.iter().map(|v| v.abs()).sum();
            let b: f64 = y.iter().zip(&x).map(|(u, v)| (u - v).abs()).sum();
            a.max(b)
        };
        let m = minimize_convex(&f, &[vec![0.0; 3], x.to_vec()], &MinimizeOptions::default()).unwrap();
        assert!((m.value - 1.75).abs() < 1e-7, "{}", m.value);
    }

    #[test]
    fn infinite_outside_domain() {
        let f = |y: &[f64]| if y[0] < 1.0 { f64::INFINITY } else { y[0] + y[1] * y[1] };
        let m = minimize_convex(&f, &[vec![3.0, 1.0]], &MinimizeOptions::default()).unwrap();
        assert!((m.value - 1.0).abs() < 1e-8);
    }

    #[test]
    fn golden_max() {
        let (t, v) = golden_section_max(|t: f64| t.ln() - t, 1e-9, 10.0, 1e-12);
        assert!((t - 1.0).abs() < 1e-6 && (v + 1.0).abs() < 1e-12);
    }
}
