//! Monte Carlo functionals of convex bodies.

mod compare;
mod grassmann;
mod isotropic;
mod moments;
mod sampling;
mod santalo;
pub(crate) mod volume;

pub use compare::{holds_le, Comparison};
pub use grassmann::{aleksandrov_q, paouris_pivovarov_phi, PhiEstimate};
pub use isotropic::{isotropic_normalize, IsotropicReport};
pub use moments::{radial_moments, RadialMoments};
pub use sampling::{barycenter, covariance, hit_and_run, MatrixEstimate};
pub use santalo::{santalo_point, SantaloReport};
pub use volume::{mean_gauge, mean_width, volume, vrad, vrad_projection, vrad_section};

use crate::numerics::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    /// Mean over uniform directions on the sphere.
    Sphere,
    HitAndRun,
    /// Mean over Haar subspaces.
    Grassmann,
    Quadrature,
    /// Combination of other estimates.
    Derived,
}

/// A Monte Carlo scalar with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
    pub stream: u64,
    pub method: Method,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self { value, stderr: 0.0, samples: 0, seed: 0, stream: 0, method: Method::Exact }
    }

    pub(crate) fn sampled(value: f64, stderr: f64, samples: usize, rs: RngStream, method: Method) -> Self {
        Self { value, stderr: stderr.max(0.0), samples, seed: rs.seed, stream: rs.stream, method }
    }

    fn derived(&self, value: f64, stderr: f64, other: Option<&Estimate>) -> Self {
        let samples = other.map_or(self.samples, |o| self.samples.max(o.samples));
        let method = match (self.method, other.map(|o| o.method)) {
            (Method::Exact, None | Some(Method::Exact)) => Method::Exact,
            _ => Method::Derived,
        };
        Self { value, stderr: stderr.max(0.0), samples, seed: self.seed, stream: self.stream, method }
    }

    /// Relative standard error, `0` for a zero value with zero error.
    pub fn relative_error(&self) -> f64 {
        if self.stderr == 0.0 {
            0.0
        } else {
            self.stderr / self.value.abs()
        }
    }

    /// Product, treating the factors as independent.
    pub fn mul(&self, other: &Estimate) -> Estimate {
        let v = self.value * other.value;
        let r = self.relative_error().hypot(other.relative_error());
        self.derived(v, v.abs() * r, Some(other))
    }

    /// Quotient, treating the operands as independent.
    pub fn div(&self, other: &Estimate) -> Estimate {
        let v = self.value / other.value;
        let r = self.relative_error().hypot(other.relative_error());
        self.derived(v, v.abs() * r, Some(other))
    }

    pub fn powf(&self, p: f64) -> Estimate {
        let v = self.value.powf(p);
        self.derived(v, v.abs() * p.abs() * self.relative_error(), None)
    }

    pub fn scale(&self, c: f64) -> Estimate {
        self.derived(self.value * c, self.stderr * c.abs(), None)
    }
}

/// A vector of estimates sharing one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorEstimate {
    pub value: Vec<f64>,
    pub stderr: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub method: Method,
}

impl VectorEstimate {
    pub fn norm(&self) -> f64 {
        crate::numerics::linalg::norm(&self.value)
    }
}

#[cfg(test)]
mod tests;
