//! Geometric log-concave functions `f = e^{-φ}` with `φ` convex and
//! `φ(0) = min φ = 0`, their difference functions and projections, and the
//! Ball and level-set bodies attached to them.
//!
//! Every derived function is described by a jointly convex lifted objective
//! `ψ(x, w)` with `φ(x) = min_w ψ(x, w)`, so nested operators reduce to one
//! convex minimization per evaluation. Operators with exact closed forms
//! (indicators, symmetric functions, Gaussians) short-circuit.

mod bodies;
pub mod json;
mod peak;

use std::sync::Arc;

use nalgebra::SymmetricEigen;

use crate::body::ConvexBody;
use crate::config::Tolerances;
use crate::error::{ensure_dim, Error, Result};
use crate::numerics::linalg::{chol, dot, inverse, norm, Matrix, Subspace};
use crate::numerics::minimize::{minimize_convex, MinimizeOptions};

pub use bodies::{ball_body, ball_body_radial, gaussian_ball_radius, integral, integral_on, level_body, level_body_radial};
pub use peak::{kappa, ray_peak, sandwich_constant, RayPeak};

/// Linear tail certificate: `φ(x) ≥ slope · |x|` whenever `|x| ≥ radius`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tail {
    pub radius: f64,
    pub slope: f64,
}

impl Tail {
    /// Bound on `∫_T^∞ p r^{p-1} e^{-φ(rξ)} dr`, infinite below the certified radius.
    pub fn moment_bound(&self, p: f64, t: f64) -> f64 {
        if t < self.radius {
            return f64::INFINITY;
        }
        if self.slope.is_infinite() {
            return 0.0;
        }
        p * crate::numerics::special::upper_incomplete_gamma(p, self.slope * t) / self.slope.powf(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaKind {
    /// `sup √(f(x₁) f(-x₂))` over `x = (x₁ + x₂)/2`.
    Out,
    /// `min(f(x), f(-x))`.
    In,
    /// `sup f(x₁) f(x₂)` over `x = x₁ - x₂`.
    Zero,
}

#[derive(Debug)]
enum Kind {
    /// `φ(x) = xᵀ P x / 2`.
    Gaussian { precision: Matrix, lambda_min: f64 },
    /// `φ(x) = Σ |xᵢ / scale|^p`.
    LpExp { p: f64, scale: f64 },
    Indicator(ConvexBody),
    /// Bregman recentering `φ(x + s) - φ(s) - ⟨∇φ(s), x⟩` of a smooth base.
    ShiftCenter { inner: LogConcaveFn, shift: Vec<f64>, offset: f64, grad: Vec<f64> },
    Delta(DeltaKind, LogConcaveFn),
    Projection(LogConcaveFn, Subspace),
    Restrict(LogConcaveFn, Subspace),
}

#[derive(Debug, Clone)]
pub struct LogConcaveFn {
    kind: Arc<Kind>,
    dim: usize,
    aux: usize,
    tail: Tail,
    symmetric: bool,
    centered: bool,
}

fn tolerances() -> Tolerances {
    Tolerances::default()
}

fn sub(a: &[f64], b: &[f64], c: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - c * y).collect()
}

impl LogConcaveFn {
    fn new(kind: Kind, dim: usize, aux: usize, tail: Tail, symmetric: bool, centered: bool) -> Self {
        Self { kind: Arc::new(kind), dim, aux, tail, symmetric, centered }
    }

    /// `e^{-xᵀ Σ⁻¹ x / 2}` for a covariance `Σ`.
    pub fn gaussian(cov: Matrix) -> Result<Self> {
        let tol = tolerances();
        chol(&cov, tol.decomposition)?;
        let precision = inverse(&cov)?;
        let precision = (&precision + precision.transpose()) * 0.5;
        Self::from_precision(precision)
    }

    pub fn standard_gaussian(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        Self::from_precision(Matrix::identity(n, n))
    }

    fn from_precision(precision: Matrix) -> Result<Self> {
        let n = precision.nrows();
        let lambda_min = SymmetricEigen::new(precision.clone()).eigenvalues.min();
        if !(lambda_min > 0.0) {
            return Err(Error::NotPositiveDefinite);
        }
        let tail = Tail { radius: 2.0 / lambda_min, slope: 1.0 };
        Ok(Self::new(Kind::Gaussian { precision, lambda_min }, n, 0, tail, true, true))
    }

    /// `e^{-Σ |xᵢ/scale|^p}`, `p ≥ 1`.
    pub fn lp_exp(n: usize, p: f64, scale: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        if !(p >= 1.0 && p.is_finite()) || !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidArgument(format!("lp_exp needs p ≥ 1 and scale > 0, got p = {p}, scale = {scale}")));
        }
        let c = Self::lp_norm_ratio(n, p);
        let tail = Tail { radius: scale / c, slope: c / scale };
        Ok(Self::new(Kind::LpExp { p, scale }, n, 0, tail, true, true))
    }

    /// `c` with `‖x‖_p ≥ c |x|`.
    fn lp_norm_ratio(n: usize, p: f64) -> f64 {
        (n as f64).powf((1.0 / p - 0.5).min(0.0))
    }

    pub fn indicator(body: ConvexBody) -> Self {
        let n = body.dim();
        let tail = Tail { radius: body.radii().outer, slope: f64::INFINITY };
        let sym = body.is_symmetric();
        Self::new(Kind::Indicator(body), n, 0, tail, sym, sym)
    }

    /// Moves the minimum of a smooth base from `-shift` to the origin by
    /// subtracting its tangent plane at `shift`. The result is not symmetric
    /// unless the base is quadratic.
    pub fn shift_center(inner: &LogConcaveFn, shift: Vec<f64>) -> Result<Self> {
        ensure_dim(inner.dim, shift.len())?;
        let n = inner.dim;
        let (grad, slope_at): (Vec<f64>, Box<dyn Fn(f64) -> f64>) = match &*inner.kind {
            Kind::Gaussian { precision, lambda_min } => {
                let l = *lambda_min;
                ((precision * crate::numerics::linalg::Vector::from_column_slice(&shift)).as_slice().to_vec(), Box::new(move |r| l * r / 2.0))
            }
            Kind::LpExp { p, scale } if *p > 1.0 => {
                let (p, a) = (*p, *scale);
                let g = shift.iter().map(|s| p * (s.abs() / a).powf(p - 1.0) * s.signum() / a).collect();
                let c = Self::lp_norm_ratio(n, p);
                (g, Box::new(move |r| (c / a) * (c * r / a).powf(p - 1.0)))
            }
            _ => {
                return Err(Error::InvalidArgument("shift_center needs a Gaussian or lp_exp base with p > 1".into()));
            }
        };
        let offset = inner.psi(&shift, &[]);
        let gnorm = norm(&grad);
        let snorm = norm(&shift);
        // Smallest R with slope(R) ≥ 2|g| + 1, by doubling.
        let want = 2.0 * gnorm + 1.0;
        let mut r = 1.0;
        while slope_at(r) < want {
            r *= 2.0;
        }
        let b = slope_at(r);
        let radius = (r + snorm).max(2.0 * (b * snorm + offset) / (b - gnorm));
        let tail = Tail { radius, slope: (b - gnorm) / 2.0 };
        let symmetric = snorm == 0.0 || matches!(&*inner.kind, Kind::Gaussian { .. });
        if !symmetric {
            log::debug!("shift_center: recentered function has its maximum at 0 but is not claimed centered");
        }
        Ok(Self::new(Kind::ShiftCenter { inner: inner.clone(), shift, offset, grad }, n, 0, tail, symmetric, symmetric))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Whether `∫ x f = 0` is known by construction.
    pub fn is_centered(&self) -> bool {
        self.centered
    }

    pub fn indicator_body(&self) -> Option<&ConvexBody> {
        match &*self.kind {
            Kind::Indicator(k) => Some(k),
            _ => None,
        }
    }

    /// Precision matrix when the function is a centered Gaussian.
    pub fn gaussian_precision(&self) -> Option<&Matrix> {
        match &*self.kind {
            Kind::Gaussian { precision, .. } => Some(precision),
            _ => None,
        }
    }

    /// Number of auxiliary variables minimized out in [`Self::phi`].
    pub fn aux_dim(&self) -> usize {
        self.aux
    }

    pub fn describe(&self) -> String {
        match &*self.kind {
            Kind::Gaussian { .. } => format!("gaussian({})", self.dim),
            Kind::LpExp { p, scale } => format!("lp_exp({}, p={p}, scale={scale})", self.dim),
            Kind::Indicator(k) => format!("indicator({})", k.provenance()),
            Kind::ShiftCenter { inner, shift, .. } => format!("shift_center({}, |s|={:.3})", inner.describe(), norm(shift)),
            Kind::Delta(d, f) => format!("delta_{}({})", delta_name(*d), f.describe()),
            Kind::Projection(f, h) => format!("project({}, k={})", f.describe(), h.dim()),
            Kind::Restrict(f, h) => format!("restrict({}, k={})", f.describe(), h.dim()),
        }
    }

    /// Lifted objective; `+∞` outside the support.
    fn psi(&self, x: &[f64], w: &[f64]) -> f64 {
        match &*self.kind {
            Kind::Gaussian { precision, .. } => {
                let n = x.len();
                let mut s = 0.0;
                for i in 0..n {
                    let mut r = 0.0;
                    for j in 0..n {
                        r += precision[(i, j)] * x[j];
                    }
                    s += x[i] * r;
                }
                0.5 * s
            }
            Kind::LpExp { p, scale } => x.iter().map(|v| (v.abs() / scale).powf(*p)).sum(),
            Kind::Indicator(k) => match k.gauge(x) {
                Ok(g) if g <= 1.0 + 1e-12 => 0.0,
                Ok(_) => f64::INFINITY,
                Err(_) => f64::NAN,
            },
            Kind::ShiftCenter { inner, shift, offset, grad } => {
                let y: Vec<f64> = x.iter().zip(shift).map(|(a, b)| a + b).collect();
                // Nonnegative in exact arithmetic; clamp rounding below the minimum.
                (inner.psi(&y, &[]) - offset - dot(grad, x)).max(0.0)
            }
            Kind::Delta(d, f) => {
                let n = self.dim;
                let a = f.aux;
                match d {
                    DeltaKind::Out | DeltaKind::Zero => {
                        let (x1, rest) = w.split_at(n);
                        let (w1, w2) = rest.split_at(a);
                        if *d == DeltaKind::Out {
                            0.5 * (f.psi(x1, w1) + f.psi(&sub(x1, x, 2.0), w2))
                        } else {
                            f.psi(x1, w1) + f.psi(&sub(x1, x, 1.0), w2)
                        }
                    }
                    DeltaKind::In => {
                        let (w1, w2) = w.split_at(a);
                        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
                        f.psi(x, w1).max(f.psi(&neg, w2))
                    }
                }
            }
            Kind::Projection(f, h) => {
                let (y, w1) = w.split_at(h.ambient_dim() - h.dim());
                f.psi(&h.embed_split(x, y), w1)
            }
            Kind::Restrict(f, h) => f.psi(&h.embed(x), w),
        }
    }

    /// Starting points for the auxiliary variables at `x`.
    fn starts(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let first = |f: &LogConcaveFn, y: &[f64]| f.starts(y).swap_remove(0);
        match &*self.kind {
            Kind::Delta(d, f) => {
                let n = self.dim;
                let splits: Vec<Vec<f64>> = match d {
                    // x₁ ∈ {x, 0, 2x}
                    DeltaKind::Out => vec![x.to_vec(), vec![0.0; n], x.iter().map(|v| 2.0 * v).collect()],
                    DeltaKind::Zero => vec![x.iter().map(|v| 0.5 * v).collect(), vec![0.0; n], x.to_vec()],
                    DeltaKind::In => {
                        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
                        let mut s = first(f, x);
                        s.extend(first(f, &neg));
                        return vec![s];
                    }
                };
                let c = if *d == DeltaKind::Out { 2.0 } else { 1.0 };
                splits
                    .into_iter()
                    .map(|x1| {
                        let x2 = sub(&x1, x, c);
                        let mut s = x1.clone();
                        s.extend(first(f, &x1));
                        s.extend(first(f, &x2));
                        s
                    })
                    .collect()
            }
            Kind::Projection(f, h) => {
                let mut s = vec![0.0; h.ambient_dim() - h.dim()];
                s.extend(first(f, &h.embed(x)));
                vec![s]
            }
            Kind::Restrict(f, h) => f.starts(&h.embed(x)),
            _ => vec![vec![]],
        }
    }

    /// `φ(x) = -ln f(x)`, possibly `+∞`.
    pub fn phi(&self, x: &[f64]) -> Result<f64> {
        ensure_dim(self.dim, x.len())?;
        if self.aux == 0 {
            let v = self.psi(x, &[]);
            if v.is_nan() {
                return Err(Error::NonFinite("log-concave function value"));
            }
            return Ok(v);
        }
        let opts = MinimizeOptions { tol: tolerances().minimize, ..Default::default() };
        let m = minimize_convex(&|w: &[f64]| self.psi(x, w), &self.starts(x), &opts)?;
        Ok(m.value)
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        Ok((-self.phi(x)?).exp())
    }

    pub fn delta_out(&self) -> Result<Self> {
        self.delta(DeltaKind::Out)
    }

    pub fn delta_in(&self) -> Result<Self> {
        self.delta(DeltaKind::In)
    }

    pub fn delta_zero(&self) -> Result<Self> {
        self.delta(DeltaKind::Zero)
    }

    /// Difference function, using exact identities where available:
    /// indicators map to `(K-K)/2`, `K ∩ (-K)`, `K-K`; symmetric functions are
    /// fixed by `Δ_out` and `Δ_in`; Gaussians are closed under `Δ₀`.
    pub fn delta(&self, d: DeltaKind) -> Result<Self> {
        if let Kind::Indicator(k) = &*self.kind {
            let body = match d {
                DeltaKind::Out => k.difference_body()?.scale(0.5)?,
                DeltaKind::In => k.inner_reg()?,
                DeltaKind::Zero => k.difference_body()?,
            };
            return Ok(Self::indicator(body));
        }
        match d {
            DeltaKind::Out | DeltaKind::In if self.symmetric => Ok(self.clone()),
            DeltaKind::Zero if self.gaussian_precision().is_some() => {
                Self::from_precision(self.gaussian_precision().expect("checked") * 0.5)
            }
            _ => self.delta_lifted(d),
        }
    }

    /// Difference function evaluated by minimization, without shortcuts.
    pub fn delta_lifted(&self, d: DeltaKind) -> Result<Self> {
        if self.indicator_body().is_some() {
            return Err(Error::InvalidArgument("indicators use exact body constructions".into()));
        }
        let t = self.tail;
        let (aux, tail) = match d {
            DeltaKind::Out => (self.dim + 2 * self.aux, Tail { radius: 2.0 * t.radius, slope: t.slope / 2.0 }),
            DeltaKind::Zero => (self.dim + 2 * self.aux, Tail { radius: 4.0 * t.radius, slope: t.slope / 2.0 }),
            DeltaKind::In => (2 * self.aux, t),
        };
        Ok(Self::new(Kind::Delta(d, self.clone()), self.dim, aux, tail, true, true))
    }

    /// `(P_H f)(z) = sup_{y ⊥ H} f(z + y)`, a function on `H` coordinates.
    pub fn project(&self, h: &Subspace) -> Result<Self> {
        ensure_dim(self.dim, h.ambient_dim())?;
        if h.dim() == self.dim {
            return Ok(self.clone());
        }
        if let Kind::Indicator(k) = &*self.kind {
            return Ok(Self::indicator(k.project(h)?));
        }
        if let Some(p) = self.gaussian_precision() {
            // Schur complement of the orthogonal block.
            let b = h.basis();
            let c = h.complement_basis();
            let pbb = b.transpose() * p * b;
            let pbc = b.transpose() * p * c;
            let pcc = c.transpose() * p * c;
            let s = pbb - &pbc * inverse(&pcc)? * pbc.transpose();
            return Self::from_precision((&s + s.transpose()) * 0.5);
        }
        self.project_lifted(h)
    }

    pub fn project_lifted(&self, h: &Subspace) -> Result<Self> {
        ensure_dim(self.dim, h.ambient_dim())?;
        // |z + y| ≥ |z|, so the tail certificate carries over.
        let aux = self.dim - h.dim() + self.aux;
        Ok(Self::new(Kind::Projection(self.clone(), h.clone()), h.dim(), aux, self.tail, self.symmetric, self.symmetric))
    }

    /// `f|_H` in `H` coordinates.
    pub fn restrict(&self, h: &Subspace) -> Result<Self> {
        ensure_dim(self.dim, h.ambient_dim())?;
        if h.dim() == self.dim {
            return Ok(self.clone());
        }
        if let Kind::Indicator(k) = &*self.kind {
            return Ok(Self::indicator(k.section(h)?));
        }
        if let Some(p) = self.gaussian_precision() {
            let b = h.basis();
            let s = b.transpose() * p * b;
            return Self::from_precision((&s + s.transpose()) * 0.5);
        }
        Ok(Self::new(Kind::Restrict(self.clone(), h.clone()), h.dim(), self.aux, self.tail, self.symmetric, self.symmetric))
    }
}

fn delta_name(d: DeltaKind) -> &'static str {
    match d {
        DeltaKind::Out => "out",
        DeltaKind::In => "in",
        DeltaKind::Zero => "zero",
    }
}

#[cfg(test)]
mod tests;
