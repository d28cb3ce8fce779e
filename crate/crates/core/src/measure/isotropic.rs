//! Affine normalization to isotropic position.

use crate::body::ConvexBody;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::measure::moments::radial_moments;
use crate::numerics::linalg::{chol, inverse, mat_vec, Matrix};
use crate::numerics::rng::RngStream;

#[derive(Debug, Clone, PartialEq)]
pub struct IsotropicReport {
    /// The output body is `T (K - shift)`.
    pub map: Matrix,
    pub shift: Vec<f64>,
    /// Affine-invariant isotropic constant `vol^{-1/n} det(Cov)^{1/(2n)}`.
    pub l_k: f64,
    /// `(tr(E xxᵀ) vol / n)^{1/2}`: the directional second moment averaged over the sphere.
    pub l_k_directional: f64,
    /// `‖Cov - L² I‖₂ / L²` of the output body.
    pub covariance_residual: f64,
    /// `|bar| / L` of the output body.
    pub barycenter_residual: f64,
    pub volume: f64,
    pub converged: bool,
}

/// One pass: centre, whiten with `Cov^{-1/2}` (Cholesky), rescale to volume 1.
fn pass(k: &ConvexBody, cfg: &Config, rs: RngStream) -> Result<(Matrix, Vec<f64>)> {
    let n = k.dim();
    let m = radial_moments(k, cfg, rs)?;
    let l = chol(&m.covariance, cfg.tol.decomposition).map_err(|_| Error::NotPositiveDefinite)?;
    let linv = inverse(&l)?;
    let det_l: f64 = (0..n).map(|i| l[(i, i)]).product();
    let vol_white = m.volume.value / det_l;
    let s = vol_white.powf(-1.0 / n as f64);
    Ok((linv * s, m.barycenter.value))
}

pub fn isotropic_normalize(k: &ConvexBody, cfg: &Config, rs: RngStream) -> Result<(ConvexBody, IsotropicReport)> {
    let n = k.dim();
    let (t1, z1) = pass(k, cfg, rs.child("pass-1"))?;
    let k1 = k.translate(&neg(&z1))?.linear_image(&t1)?;
    let (t2, z2) = pass(&k1, cfg, rs.child("pass-2"))?;
    // T2 (T1 (K - z1) - z2) = T2 T1 (K - z1 - T1⁻¹ z2)
    let map = &t2 * &t1;
    let back = mat_vec(&inverse(&t1)?, &z2);
    let shift: Vec<f64> = z1.iter().zip(&back).map(|(a, b)| a + b).collect();
    let out = k.translate(&neg(&shift))?.linear_image(&map)?;

    let check = radial_moments(&out, cfg, rs.child("diagnostics"))?;
    let vol = check.volume.value;
    let det = check.covariance.determinant();
    if !(det > 0.0) {
        return Err(Error::NotPositiveDefinite);
    }
    let nf = n as f64;
    let l_k = vol.powf(-1.0 / nf) * det.powf(0.5 / nf);
    let l_k_directional = (check.second_moment.trace() * vol / nf).sqrt();
    let l2 = l_k * l_k;
    let resid = &check.covariance - Matrix::identity(n, n) * l2;
    let spectral = resid.symmetric_eigenvalues().iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let covariance_residual = spectral / l2;
    let barycenter_residual = check.barycenter.norm() / l_k;
    let tol = cfg.mc.isotropic_tolerance;
    let converged = covariance_residual <= tol && barycenter_residual <= tol;
    if !converged {
        log::warn!(
            "isotropic normalization residuals above tolerance: cov {covariance_residual:.3e}, bar {barycenter_residual:.3e}"
        );
    }
    Ok((
        out,
        IsotropicReport {
            map,
            shift,
            l_k,
            l_k_directional,
            covariance_residual,
            barycenter_residual,
            volume: vol,
            converged,
        },
    ))
}

fn neg(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| -v).collect()
}
