//! Convex bodies given by support and gauge oracles.
//!
//! A [`ConvexBody`] is an immutable node in a construction tree. Polyhedral
//! bodies stay polyhedral under every operation (exact LP oracles); bodies
//! without a finite description fall back to closed forms or to convex
//! minimization over the oracles of their operands.

mod analytic;
mod derived;
pub mod json;
mod polyhedral;
pub mod simplex;

use std::fmt;
use std::sync::Arc;

use rand::Rng;

pub use polyhedral::Polyhedron;

use crate::error::{ensure_dim, Error, Result};
use crate::numerics::linalg::{dot, gaussian_vector, inverse, norm, singular_value_range, Matrix, Subspace};
use analytic::Analytic;

/// Radial function of a star body given directly, e.g. a Ball body of a
/// log-concave function.
pub trait RadialFunction: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;
    /// `ρ(ξ)` for a unit vector `ξ`.
    fn radial(&self, unit: &[f64]) -> Result<f64>;
    /// A certified upper bound on `max ρ`, if one is known.
    fn outer_radius_bound(&self) -> Option<f64> {
        None
    }
    fn is_symmetric(&self) -> bool {
        false
    }
    fn describe(&self) -> String;
}

/// Certified radii: `inner · B ⊆ K ⊆ outer · B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Radii {
    pub inner: f64,
    pub outer: f64,
}

#[derive(Debug)]
enum Node {
    Analytic(Analytic),
    Poly(Polyhedron),
    Radial(Arc<dyn RadialFunction>),
    Polar(ConvexBody),
    Outer(ConvexBody),
    Inner(ConvexBody),
    Difference(ConvexBody),
    Section(ConvexBody, Subspace),
    Projection(ConvexBody, Subspace),
    Linear { body: ConvexBody, map: Matrix, inverse: Matrix },
    Translate(ConvexBody, Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct ConvexBody {
    node: Arc<Node>,
    dim: usize,
    radii: Radii,
    symmetric: bool,
}

fn min_ratio() -> f64 {
    crate::config::Tolerances::default().min_radius_ratio
}

fn check_radii(radii: Radii) -> Result<Radii> {
    if !(radii.inner.is_finite() && radii.outer.is_finite()) || radii.inner <= 0.0 {
        return Err(Error::DegenerateBody(format!(
            "origin is not an interior point (radii {:.3e}, {:.3e})",
            radii.inner, radii.outer
        )));
    }
    if radii.inner < min_ratio() * radii.outer {
        return Err(Error::DegenerateBody(format!(
            "inner/outer radius ratio {:.3e} below threshold",
            radii.inner / radii.outer
        )));
    }
    Ok(radii)
}

fn axis(n: usize, i: usize, sign: f64) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[i] = sign;
    e
}

impl ConvexBody {
    fn make(node: Node, dim: usize, radii: Radii, symmetric: bool) -> Result<Self> {
        let radii = check_radii(radii)?;
        Ok(Self { node: Arc::new(node), dim, radii, symmetric })
    }

    /// Inner radius certified by the axis points `ρ(±eᵢ) eᵢ`, which span a
    /// cross-polytope-like body contained in `K`.
    fn axis_inner_radius(&self) -> Result<f64> {
        let mut s = 0.0;
        for i in 0..self.dim {
            let a = self.gauge(&axis(self.dim, i, 1.0))?;
            let b = self.gauge(&axis(self.dim, i, -1.0))?;
            let m = a.max(b);
            if m.is_infinite() || !m.is_finite() {
                return Err(Error::DegenerateBody("origin lies on the boundary".into()));
            }
            s += m * m;
        }
        Ok(1.0 / s.sqrt())
    }

    /// Outer radius certified by the bounding box `[-h(-eᵢ), h(eᵢ)]`.
    fn axis_outer_radius(&self) -> Result<f64> {
        let mut s = 0.0;
        for i in 0..self.dim {
            let a = self.support(&axis(self.dim, i, 1.0))?;
            let b = self.support(&axis(self.dim, i, -1.0))?;
            s += a.max(b).powi(2);
        }
        Ok(s.sqrt())
    }

    fn with_axis_radii(node: Node, dim: usize, symmetric: bool, outer: Option<f64>) -> Result<Self> {
        let mut body = Self {
            node: Arc::new(node),
            dim,
            radii: Radii { inner: 1.0, outer: f64::INFINITY },
            symmetric,
        };
        // Bisection chords rely on the outer radius, so fix it first.
        let outer = match outer {
            Some(r) => r,
            None => body.axis_outer_radius()?,
        };
        body.radii.outer = outer;
        body.radii.inner = body.axis_inner_radius()?;
        body.radii = check_radii(body.radii)?;
        Ok(body)
    }

    fn analytic(a: Analytic, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        let (inner, outer) = a.radii(n);
        Self::make(Node::Analytic(a), n, Radii { inner, outer }, true)
    }

    pub fn ball(n: usize, radius: f64) -> Result<Self> {
        positive(radius, "radius")?;
        Self::analytic(Analytic::Ball { radius }, n)
    }

    /// `{x : xᵀ S⁻¹ x ≤ 1}` for a symmetric positive definite `S`.
    pub fn ellipsoid(shape: Matrix) -> Result<Self> {
        crate::numerics::linalg::chol(&shape, 1e-10)?;
        let n = shape.nrows();
        Self::analytic(Analytic::ellipsoid(shape)?, n)
    }

    /// `scale · B_p^n` for `p ∈ [1, ∞]`.
    pub fn lp_ball(n: usize, p: f64, scale: f64) -> Result<Self> {
        positive(scale, "scale")?;
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidArgument(format!("lp_ball needs p >= 1, got {p}")));
        }
        if p == 1.0 {
            Self::cross_polytope(n, scale)
        } else if p.is_infinite() {
            Self::cube(n, scale)
        } else if p == 2.0 {
            Self::ball(n, scale)
        } else {
            Self::analytic(Analytic::LpBall { p, scale }, n)
        }
    }

    /// `[-half, half]^n`.
    pub fn cube(n: usize, half: f64) -> Result<Self> {
        positive(half, "half-width")?;
        Self::analytic(Analytic::Cube { half }, n)
    }

    pub fn cross_polytope(n: usize, radius: f64) -> Result<Self> {
        positive(radius, "radius")?;
        Self::analytic(Analytic::Cross { radius }, n)
    }

    /// `conv V`; the origin must be an interior point.
    pub fn vpolytope(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let n = vertices.first().map_or(0, Vec::len);
        if n == 0 {
            return Err(Error::InvalidArgument("empty vertex list".into()));
        }
        for v in &vertices {
            ensure_dim(n, v.len())?;
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite("vertex coordinates"));
            }
        }
        if vertices.len() < n + 1 {
            return Err(Error::DegenerateBody(format!("{} vertices cannot span R^{n}", vertices.len())));
        }
        let diffs = Matrix::from_fn(n, vertices.len() - 1, |i, j| vertices[j + 1][i] - vertices[0][i]);
        let sv = diffs.singular_values();
        let top = sv.iter().cloned().fold(0.0, f64::max);
        let rank = sv.iter().filter(|&&s| s > 1e-10 * top.max(1e-300)).count();
        if rank < n {
            return Err(Error::DegenerateBody(format!("vertices span an affine subspace of dimension {rank}")));
        }
        let outer = vertices.iter().map(|v| norm(v)).fold(0.0, f64::max);
        let symmetric = vertices
            .iter()
            .all(|v| vertices.iter().any(|w| v.iter().zip(w).all(|(a, b)| (a + b).abs() <= 1e-12 * (1.0 + a.abs()))));
        Self::from_poly(Polyhedron::from_vertices(vertices), symmetric, Some(outer))
    }

    /// `{x : aᵢ·x ≤ 1}`; the rows must describe a bounded set.
    pub fn hpolytope(facets: Vec<Vec<f64>>) -> Result<Self> {
        let n = facets.first().map_or(0, Vec::len);
        if n == 0 {
            return Err(Error::InvalidArgument("empty facet list".into()));
        }
        for a in &facets {
            ensure_dim(n, a.len())?;
            if a.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite("facet normals"));
            }
        }
        let symmetric = facets
            .iter()
            .all(|v| facets.iter().any(|w| v.iter().zip(w).all(|(a, b)| (a + b).abs() <= 1e-12 * (1.0 + a.abs()))));
        Self::from_poly(Polyhedron::from_facets(facets), symmetric, None)
    }

    fn from_poly(p: Polyhedron, symmetric: bool, outer: Option<f64>) -> Result<Self> {
        let n = p.dim();
        let exact_inner = p
            .facets()
            .map(|f| f.iter().map(|a| 1.0 / norm(a)).fold(f64::INFINITY, f64::min));
        let mut body = Self::with_axis_radii(Node::Poly(p), n, symmetric, outer)?;
        if let Some(r) = exact_inner {
            body.radii.inner = body.radii.inner.max(r);
        }
        Ok(body)
    }

    fn derived_poly(&self, p: Polyhedron, radii: Radii, symmetric: bool) -> Result<Self> {
        Self::make(Node::Poly(p), self.dim, radii, symmetric)
    }

    pub fn from_radial(f: Arc<dyn RadialFunction>) -> Result<Self> {
        let n = f.dim();
        let symmetric = f.is_symmetric();
        let outer = f.outer_radius_bound();
        Self::with_axis_radii(Node::Radial(f), n, symmetric, outer)
    }

    /// Random polytope: `m` Gaussian points recentered at their mean.
    pub fn random_vpolytope<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> Result<Self> {
        let mut pts: Vec<Vec<f64>> = (0..m).map(|_| gaussian_vector(rng, n)).collect();
        let mean: Vec<f64> = (0..n).map(|i| pts.iter().map(|p| p[i]).sum::<f64>() / m as f64).collect();
        for p in &mut pts {
            p.iter_mut().zip(&mean).for_each(|(a, b)| *a -= b);
        }
        Self::vpolytope(pts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radii(&self) -> Radii {
        self.radii
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn polyhedron(&self) -> Option<&Polyhedron> {
        match &*self.node {
            Node::Poly(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_polyhedral(&self) -> bool {
        self.as_poly().is_some()
    }

    /// Polyhedral description, converting cubes and cross-polytopes.
    fn as_poly(&self) -> Option<Polyhedron> {
        let n = self.dim;
        match &*self.node {
            Node::Poly(p) => Some(p.clone()),
            Node::Analytic(Analytic::Cube { half }) => Some(Polyhedron::from_facets(
                (0..2 * n).map(|i| axis(n, i / 2, if i % 2 == 0 { 1.0 } else { -1.0 }).iter().map(|v| v / half).collect()).collect(),
            )),
            Node::Analytic(Analytic::Cross { radius }) => Some(Polyhedron::from_vertices(
                (0..2 * n).map(|i| axis(n, i / 2, if i % 2 == 0 { *radius } else { -*radius })).collect(),
            )),
            _ => None,
        }
    }

    /// Same body with polyhedral fast paths removed, so that derived
    /// constructions go through the general lifted LP route.
    pub fn lifted_route(&self) -> Self {
        match self.as_poly() {
            Some(p) => Self {
                node: Arc::new(Node::Poly(p.lifted_only())),
                dim: self.dim,
                radii: self.radii,
                symmetric: self.symmetric,
            },
            None => self.clone(),
        }
    }

    /// Construction tree, e.g. `polar(vpolytope[m=12])`.
    pub fn provenance(&self) -> String {
        match &*self.node {
            Node::Analytic(a) => a.describe(),
            Node::Poly(p) => p.describe(),
            Node::Radial(f) => f.describe(),
            Node::Polar(k) => format!("polar({})", k.provenance()),
            Node::Outer(k) => format!("outer({})", k.provenance()),
            Node::Inner(k) => format!("inner({})", k.provenance()),
            Node::Difference(k) => format!("difference({})", k.provenance()),
            Node::Section(k, h) => format!("section[k={}]({})", h.dim(), k.provenance()),
            Node::Projection(k, h) => format!("projection[k={}]({})", h.dim(), k.provenance()),
            Node::Linear { body, .. } => format!("linear({})", body.provenance()),
            Node::Translate(k, _) => format!("translate({})", k.provenance()),
        }
    }

    pub fn support(&self, u: &[f64]) -> Result<f64> {
        ensure_dim(self.dim, u.len())?;
        match &*self.node {
            Node::Analytic(a) => Ok(a.support(u)),
            Node::Poly(p) => p.support(u),
            Node::Radial(_) => derived::support_from_gauge(self, u),
            Node::Polar(k) => k.gauge(u),
            Node::Outer(k) => Ok(k.support(u)?.max(k.support(&negate(u))?)),
            Node::Inner(k) => derived::inner_support(k, u),
            Node::Difference(k) => Ok(k.support(u)? + k.support(&negate(u))?),
            Node::Section(k, h) => derived::fiber_min(h, u, |x| k.support(x)),
            Node::Projection(k, h) => k.support(&h.embed(u)),
            Node::Linear { body, map, .. } => body.support(&crate::numerics::linalg::mat_t_vec(map, u)),
            Node::Translate(k, z) => Ok(k.support(u)? + dot(z, u)),
        }
    }

    pub fn gauge(&self, x: &[f64]) -> Result<f64> {
        ensure_dim(self.dim, x.len())?;
        match &*self.node {
            Node::Analytic(a) => Ok(a.gauge(x)),
            Node::Poly(p) => p.gauge(x),
            Node::Radial(f) => {
                let r = norm(x);
                if r == 0.0 {
                    return Ok(0.0);
                }
                let unit: Vec<f64> = x.iter().map(|v| v / r).collect();
                Ok(r / f.radial(&unit)?)
            }
            Node::Polar(k) => k.support(x),
            Node::Outer(k) => derived::outer_gauge(k, x),
            Node::Inner(k) => Ok(k.gauge(x)?.max(k.gauge(&negate(x))?)),
            Node::Difference(k) => derived::difference_gauge(k, x),
            Node::Section(k, h) => k.gauge(&h.embed(x)),
            Node::Projection(k, h) => derived::fiber_min(h, x, |y| k.gauge(y)),
            Node::Linear { body, inverse, .. } => body.gauge(&crate::numerics::linalg::mat_vec(inverse, x)),
            Node::Translate(k, z) => derived::translate_gauge(k, z, x),
        }
    }

    /// `ρ_K(x) = 1 / p_K(x)`.
    pub fn radial(&self, x: &[f64]) -> Result<f64> {
        let g = self.gauge(x)?;
        Ok(if g == 0.0 { f64::INFINITY } else { 1.0 / g })
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> Result<bool> {
        Ok(self.gauge(x)? <= 1.0 + tol)
    }

    /// Largest `s ≥ 0` with `x + s d ∈ K`, for `x ∈ K`.
    pub fn chord(&self, x: &[f64], d: &[f64]) -> Result<f64> {
        ensure_dim(self.dim, x.len())?;
        ensure_dim(self.dim, d.len())?;
        match &*self.node {
            Node::Analytic(a) => match a.chord(x, d) {
                Some(s) => Ok(s),
                None => derived::bisect_chord(self, x, d),
            },
            Node::Poly(p) => p.chord(x, d),
            Node::Section(k, h) => k.chord(&h.embed(x), &h.embed(d)),
            Node::Linear { body, inverse, .. } => {
                use crate::numerics::linalg::mat_vec;
                body.chord(&mat_vec(inverse, x), &mat_vec(inverse, d))
            }
            Node::Translate(k, z) => {
                let y: Vec<f64> = x.iter().zip(z).map(|(a, b)| a - b).collect();
                k.chord(&y, d)
            }
            _ => derived::bisect_chord(self, x, d),
        }
    }

    pub fn polar(&self) -> Result<Self> {
        let radii = Radii { inner: 1.0 / self.radii.outer, outer: 1.0 / self.radii.inner };
        let sym = self.symmetric;
        match &*self.node {
            Node::Analytic(Analytic::Ball { radius }) => Self::ball(self.dim, 1.0 / radius),
            Node::Analytic(Analytic::Ellipsoid { inv, .. }) => Self::ellipsoid(inv.clone()),
            Node::Analytic(Analytic::LpBall { p, scale }) => Self::lp_ball(self.dim, *p / (*p - 1.0), 1.0 / scale),
            Node::Analytic(Analytic::Cube { half }) => Self::cross_polytope(self.dim, 1.0 / half),
            Node::Analytic(Analytic::Cross { radius }) => Self::cube(self.dim, 1.0 / radius),
            Node::Poly(p) => self.derived_poly(p.polar(), radii, sym),
            _ => Self::make(Node::Polar(self.clone()), self.dim, radii, sym),
        }
    }

    /// `K_out = conv(K ∪ -K)`.
    pub fn outer_reg(&self) -> Result<Self> {
        if self.symmetric {
            return Ok(self.clone());
        }
        match self.as_poly() {
            Some(p) => self.derived_poly(p.outer(), self.radii, true),
            None => Self::make(Node::Outer(self.clone()), self.dim, self.radii, true),
        }
    }

    /// `K_in = K ∩ -K`.
    pub fn inner_reg(&self) -> Result<Self> {
        if self.symmetric {
            return Ok(self.clone());
        }
        match self.as_poly() {
            Some(p) => self.derived_poly(p.inner(), self.radii, true),
            None => Self::make(Node::Inner(self.clone()), self.dim, self.radii, true),
        }
    }

    /// `K - K`.
    pub fn difference_body(&self) -> Result<Self> {
        if self.symmetric {
            return self.scale(2.0);
        }
        let radii = Radii { inner: 2.0 * self.radii.inner, outer: 2.0 * self.radii.outer };
        match self.as_poly() {
            Some(p) => self.derived_poly(p.difference(), radii, true),
            None => Self::make(Node::Difference(self.clone()), self.dim, radii, true),
        }
    }

    fn check_subspace(&self, h: &Subspace) -> Result<()> {
        ensure_dim(self.dim, h.ambient_dim())
    }

    /// `K ∩ H` in the coordinates of the basis of `H`.
    pub fn section(&self, h: &Subspace) -> Result<Self> {
        self.check_subspace(h)?;
        let k = h.dim();
        let b = h.basis();
        match &*self.node {
            Node::Analytic(Analytic::Ball { radius }) => return Self::ball(k, *radius),
            Node::Analytic(Analytic::Ellipsoid { inv, .. }) => {
                let q = b.transpose() * inv * b;
                return Self::ellipsoid(inverse(&q)?);
            }
            _ => {}
        }
        match self.as_poly() {
            Some(p) => Self::make(Node::Poly(p.section(h)), k, self.radii, self.symmetric),
            None => Self::make(Node::Section(self.clone(), h.clone()), k, self.radii, self.symmetric),
        }
    }

    /// `P_H K` in the coordinates of the basis of `H`.
    pub fn project(&self, h: &Subspace) -> Result<Self> {
        self.check_subspace(h)?;
        let k = h.dim();
        let b = h.basis();
        match &*self.node {
            Node::Analytic(Analytic::Ball { radius }) => return Self::ball(k, *radius),
            Node::Analytic(Analytic::Ellipsoid { shape, .. }) => {
                return Self::ellipsoid(b.transpose() * shape * b);
            }
            _ => {}
        }
        match self.as_poly() {
            Some(p) => Self::make(Node::Poly(p.project(h)), k, self.radii, self.symmetric),
            None => Self::make(Node::Projection(self.clone(), h.clone()), k, self.radii, self.symmetric),
        }
    }

    /// `T K` for an invertible `T`.
    pub fn linear_image(&self, map: &Matrix) -> Result<Self> {
        if map.nrows() != self.dim || map.ncols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: map.nrows() });
        }
        let inv = inverse(map)?;
        let (lo, hi) = singular_value_range(map);
        if lo <= 0.0 {
            return Err(Error::Singular);
        }
        let radii = Radii { inner: self.radii.inner * lo, outer: self.radii.outer * hi };
        let sym = self.symmetric;
        match &*self.node {
            Node::Analytic(Analytic::Ball { radius }) => {
                return Self::ellipsoid(map * map.transpose() * (radius * radius));
            }
            Node::Analytic(Analytic::Ellipsoid { shape, .. }) => {
                return Self::ellipsoid(map * shape * map.transpose());
            }
            _ => {}
        }
        match self.as_poly() {
            Some(p) => self.derived_poly(p.linear(map, &inv), radii, sym),
            None => Self::make(Node::Linear { body: self.clone(), map: map.clone(), inverse: inv }, self.dim, radii, sym),
        }
    }

    pub fn scale(&self, factor: f64) -> Result<Self> {
        positive(factor, "scale factor")?;
        match &*self.node {
            Node::Analytic(Analytic::Ball { radius }) => Self::ball(self.dim, radius * factor),
            Node::Analytic(Analytic::Cube { half }) => Self::cube(self.dim, half * factor),
            Node::Analytic(Analytic::Cross { radius }) => Self::cross_polytope(self.dim, radius * factor),
            Node::Analytic(Analytic::LpBall { p, scale }) => Self::lp_ball(self.dim, *p, scale * factor),
            _ => self.linear_image(&(Matrix::identity(self.dim, self.dim) * factor)),
        }
    }

    /// `K + z`; `-z` must be an interior point of `K`.
    pub fn translate(&self, z: &[f64]) -> Result<Self> {
        ensure_dim(self.dim, z.len())?;
        if z.iter().all(|v| *v == 0.0) {
            return Ok(self.clone());
        }
        if self.gauge(&negate(z))? >= 1.0 - 1e-12 {
            return Err(Error::DegenerateBody("translation moves the origin outside the body".into()));
        }
        let shift = norm(z);
        match self.as_poly() {
            Some(p) => {
                let outer = Some(self.radii.outer + shift);
                Self::with_axis_radii(Node::Poly(p.translate(z)?), self.dim, false, outer)
            }
            None => Self::with_axis_radii(
                Node::Translate(self.clone(), z.to_vec()),
                self.dim,
                false,
                Some(self.radii.outer + shift),
            ),
        }
    }

    /// `vol(K)` for analytic bodies.
    pub fn closed_form_volume(&self) -> Option<f64> {
        use crate::numerics::special::{ln_gamma_fn, unit_ball_volume};
        let n = self.dim as f64;
        match &*self.node {
            Node::Analytic(Analytic::Ball { radius }) => Some(unit_ball_volume(self.dim) * radius.powf(n)),
            Node::Analytic(Analytic::Ellipsoid { shape, .. }) => {
                Some(unit_ball_volume(self.dim) * shape.determinant().sqrt())
            }
            Node::Analytic(Analytic::Cube { half }) => Some((2.0 * half).powf(n)),
            Node::Analytic(Analytic::Cross { radius }) => Some((2.0 * radius).powf(n) / (ln_gamma_fn(n + 1.0)).exp()),
            Node::Analytic(Analytic::LpBall { p, scale }) => {
                let ln = n * (2.0 * ln_gamma_fn(1.0 / p + 1.0).exp()).ln() - ln_gamma_fn(n / p + 1.0);
                Some(ln.exp() * scale.powf(n))
            }
            _ => None,
        }
    }
}

fn negate(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| -v).collect()
}

fn positive(v: f64, what: &str) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{what} must be positive and finite, got {v}")))
    }
}

#[cfg(test)]
mod tests;
