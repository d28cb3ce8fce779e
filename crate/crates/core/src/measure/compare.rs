use crate::config::Tolerances;
use crate::measure::Estimate;

/// Outcome of checking `lhs ≤ rhs` through two estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub excess: f64,
    pub sigma: f64,
    pub holds: bool,
}

/// `lhs ≤ rhs` is rejected only when it is violated by more than
/// `tol.sigma` combined standard errors *and* by more than
/// `tol.relative_slack` relative to the larger side.
pub fn holds_le(lhs: &Estimate, rhs: &Estimate, tol: &Tolerances) -> Comparison {
    let excess = lhs.value - rhs.value;
    let sigma = lhs.stderr.hypot(rhs.stderr);
    let statistical = excess > tol.sigma * sigma;
    let relative = excess > tol.relative_slack * lhs.value.abs().max(rhs.value.abs());
    let holds = !(statistical && relative) && excess.is_finite();
    Comparison { excess, sigma, holds }
}
