//! Central tolerance and Monte Carlo budget record.
//!
//! Every numeric threshold used by the estimators lives here so that a run is
//! fully described by a `Config` plus a seed.

/// Execution strategy for batched Monte Carlo work.
///
/// Results are bit-identical between the two modes: every batch owns its own
/// random stream and partial results are combined in batch order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    #[default]
    Parallel,
    Sequential,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    /// Relative residual allowed for QR / Cholesky reconstructions.
    pub decomposition: f64,
    /// Max deviation of `BᵀB` from the identity for subspace bases.
    pub orthonormality: f64,
    pub lp_pivot: f64,
    /// Primal residual, complementary slackness and duality gap bound for LP certificates.
    pub lp_certificate: f64,
    /// Pointwise agreement expected between two exact oracle routes.
    pub oracle: f64,
    /// Relative tolerance of the 1-D radial quadrature behind Ball bodies.
    pub radial_quadrature: f64,
    pub root: f64,
    /// Objective tolerance of the derivative-free convex minimizer.
    pub minimize: f64,
    /// Width of the statistical slack, in standard errors.
    pub sigma: f64,
    /// Relative slack added on top of the statistical slack.
    pub relative_slack: f64,
    /// Headroom applied to calibrated constants on the evaluation corpus.
    pub headroom: f64,
    /// Smallest accepted ratio of certified inner to outer radius.
    pub min_radius_ratio: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            decomposition: 1e-10,
            orthonormality: 1e-12,
            lp_pivot: 1e-10,
            lp_certificate: 1e-9,
            oracle: 1e-9,
            radial_quadrature: 1e-10,
            root: 1e-10,
            minimize: 1e-9,
            sigma: 3.0,
            relative_slack: 1e-3,
            headroom: 1.25,
            min_radius_ratio: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct McConfig {
    /// Sphere directions per volume-type estimate.
    pub directions: usize,
    /// Samples drawn per parallel batch.
    pub batch_size: usize,
    /// Haar subspaces per Grassmannian average.
    pub subspaces: usize,
    /// Hit-and-run burn-in is `burn_in_factor · n²` steps.
    pub burn_in_factor: usize,
    /// Hit-and-run keeps one state every `thinning_factor · n` steps.
    pub thinning_factor: usize,
    pub santalo_step: f64,
    pub santalo_tolerance: f64,
    pub santalo_max_iter: usize,
    /// Largest accepted relative covariance / barycenter residual after isotropic normalization.
    pub isotropic_tolerance: f64,
    pub exec: Exec,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            directions: 20_000,
            batch_size: 1024,
            subspaces: 64,
            burn_in_factor: 10,
            thinning_factor: 1,
            santalo_step: 0.5,
            santalo_tolerance: 1e-9,
            santalo_max_iter: 200,
            isotropic_tolerance: 0.1,
            exec: Exec::Parallel,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Config {
    pub tol: Tolerances,
    pub mc: McConfig,
}

impl Config {
    pub fn with_directions(mut self, directions: usize) -> Self {
        self.mc.directions = directions;
        self
    }

    pub fn with_subspaces(mut self, subspaces: usize) -> Self {
        self.mc.subspaces = subspaces;
        self
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.mc.exec = exec;
        self
    }
}
