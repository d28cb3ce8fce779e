//! Averages over the Grassmannian: Aleksandrov's `Q_k` and the
//! Paouris–Pivovarov functional `Φ_k`.

use crate::body::ConvexBody;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::measure::volume::{mean_radial_power, volume};
use crate::measure::{Estimate, Method};
use crate::numerics::linalg::haar_subspace;
use crate::numerics::par::try_map_indexed;
use crate::numerics::rng::RngStream;
use crate::numerics::special::ln_unit_ball_volume;

fn check(k: &ConvexBody, dim: usize) -> Result<()> {
    if dim == 0 || dim >= k.dim() {
        return Err(Error::SubspaceDimension { n: k.dim(), k: dim });
    }
    if !k.is_symmetric() {
        return Err(Error::InvalidArgument("Grassmann averages are taken of symmetric bodies".into()));
    }
    Ok(())
}

/// `vrad(P_H K)^k` for each sampled `H`.
fn projection_powers(k: &ConvexBody, dim: usize, cfg: &Config, rs: RngStream) -> Result<Vec<f64>> {
    let inner = cfg.clone().with_exec(crate::config::Exec::Sequential);
    try_map_indexed(cfg.mc.exec, cfg.mc.subspaces, |i| {
        let sub = rs.substream(i as u64);
        let mut rng = sub.child("subspace").rng();
        let h = haar_subspace(&mut rng, k.dim(), dim)?;
        Ok(mean_radial_power(&k.project(&h)?, &inner, sub.child("directions"))?.value)
    })
}

/// `Q_k(K) = (E_H vrad(P_H K)^k)^{1/k}`.
pub fn aleksandrov_q(k: &ConvexBody, dim: usize, cfg: &Config, rs: RngStream) -> Result<Estimate> {
    check(k, dim)?;
    let v = projection_powers(k, dim, cfg, rs)?;
    let m = v.len() as f64;
    let mean = v.iter().sum::<f64>() / m;
    let var = if v.len() > 1 { v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0) } else { 0.0 };
    let e = Estimate::sampled(mean, (var / m).sqrt(), v.len(), rs, Method::Grassmann);
    Ok(Estimate { method: Method::Grassmann, ..e.powf(1.0 / dim as f64) })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhiEstimate {
    pub estimate: Estimate,
    /// Largest and smallest normalized summand `vol_k(P_H K)^{-n} / mean`.
    pub max_summand: f64,
    pub min_summand: f64,
}

/// `Φ_k(K) = vol_n(K)^{-1/n} (E_H vol_k(P_H K)^{-n})^{-1/(kn)}`, in log space.
pub fn paouris_pivovarov_phi(k: &ConvexBody, dim: usize, cfg: &Config, rs: RngStream) -> Result<PhiEstimate> {
    check(k, dim)?;
    let n = k.dim() as f64;
    let kf = dim as f64;
    let powers = projection_powers(k, dim, cfg, rs.child("projections"))?;
    // ln vol_k(P_H K) = ln ω_k + ln E ρ^k
    let logs: Vec<f64> = powers.iter().map(|p| -n * (ln_unit_ball_volume(dim) + p.ln())).collect();
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
    let m = w.len() as f64;
    let mean_w = w.iter().sum::<f64>() / m;
    let var_w = if w.len() > 1 { w.iter().map(|x| (x - mean_w).powi(2)).sum::<f64>() / (m - 1.0) } else { 0.0 };
    let ln_mean = top + mean_w.ln();
    let vol = volume(k, cfg, rs.child("volume"))?;
    let ln_phi = -vol.value.ln() / n - ln_mean / (kf * n);
    let rel_w = (var_w / m).sqrt() / mean_w;
    let se_ln = (vol.relative_error() / n).hypot(rel_w / (kf * n));
    let phi = ln_phi.exp();
    let summands: Vec<f64> = w.iter().map(|x| x / mean_w).collect();
    Ok(PhiEstimate {
        estimate: Estimate::sampled(phi, phi * se_ln, w.len(), rs, Method::Grassmann),
        max_summand: summands.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        min_summand: summands.iter().cloned().fold(f64::INFINITY, f64::min),
    })
}
