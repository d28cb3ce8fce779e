//! One-dimensional quantities behind the comparison of `K_p(f)` and `R_p(f)`:
//! for convex increasing `g` with `g(0) = 0`, `t_p` maximizes
//! `e^{-g(t)} t^{p-1}` and `M_p` is the maximum.

use crate::error::{Error, Result};
use crate::numerics::minimize::golden_section_max;
use crate::numerics::special::ln_gamma_fn;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayPeak {
    pub t_p: f64,
    pub m_p: f64,
}

pub fn ray_peak<G: Fn(f64) -> f64>(g: G, p: f64) -> Result<RayPeak> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidArgument(format!("need p > 1, got {p}")));
    }
    // g(t_p) ≤ p - 1, so any T with g(T) > p - 1 bounds t_p.
    let mut hi = 1.0;
    let mut doublings = 0;
    while !(g(hi) > p - 1.0) {
        hi *= 2.0;
        doublings += 1;
        if doublings > 200 || !hi.is_finite() {
            return Err(Error::RootNotBracketed { target: p - 1.0, lo: 0.0, hi });
        }
    }
    let objective = |t: f64| (p - 1.0) * t.ln() - g(t);
    let (t_p, v) = golden_section_max(objective, 0.0, hi, 1e-13);
    if !(t_p > 0.0 && v.is_finite()) {
        return Err(Error::NonConverged(format!("t_p search ended at {t_p}")));
    }
    Ok(RayPeak { t_p, m_p: v.exp() })
}

fn ln_upper_factor(p: f64) -> f64 {
    // ρ_{K_p}^p ≤ p e^{p-1} Γ(p) (p-1)^{-p} t_p^p
    (p.ln() + (p - 1.0) + ln_gamma_fn(p) - p * (p - 1.0).ln()) / p
}

/// `κ = sup_{p ≥ 2} (p e^{p-1} Γ(p) / (p-1)^p)^{1/p}`, so that
/// `ρ_{K_p(f)}(ξ) ≤ κ t_p` for every `p ≥ 2`.
pub fn kappa() -> f64 {
    let (p, v) = golden_section_max(ln_upper_factor, 2.0, 1.0e4, 1e-12);
    // The maximum sits on the boundary; compare against it explicitly.
    v.max(ln_upper_factor(2.0)).exp().max(ln_upper_factor(p).exp())
}

/// `c = sup_{p ≥ 2} e^{p-1} Γ(p) √(p-1) / (p-1)^p`, the constant in
/// `∫_0^∞ t^{p-1} e^{-g} ≤ c M_p t_p / √(p-1)`.
pub fn sandwich_constant() -> f64 {
    let ln_c = |p: f64| (p - 1.0) + ln_gamma_fn(p) + (0.5 - p) * (p - 1.0).ln();
    let (_, v) = golden_section_max(ln_c, 2.0, 1.0e4, 1e-12);
    v.max(ln_c(2.0)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_g() {
        for p in [2.0, 3.0, 5.0, 10.0] {
            let l = ray_peak(|t| t, p).unwrap();
            // The maximum is flat, so t_p is only accurate to ~√ε.
            assert!((l.t_p - (p - 1.0)).abs() < 1e-6 * p);
            let m = (-(p - 1.0)).exp() * (p - 1.0f64).powf(p - 1.0);
            assert!((l.m_p - m).abs() < 1e-10 * m);
        }
    }

    #[test]
    fn constants() {
        assert!((kappa() - (2.0 * std::f64::consts::E).sqrt()).abs() < 1e-9);
        assert!((sandwich_constant() - std::f64::consts::E).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_p() {
        assert!(ray_peak(|t| t, 1.0).is_err());
    }
}
