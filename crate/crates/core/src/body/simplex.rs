//! The regular simplex with edge `√2` centred at the origin, and the
//! subspaces on which its section/projection product is extremal.

use crate::body::ConvexBody;
use crate::error::{Error, Result};
use crate::numerics::linalg::Subspace;

/// Vertices of the regular simplex in `R^n`: the points `eᵢ - 𝟙/(n+1)` of
/// `R^{n+1}` written in an orthonormal basis of `{Σ xᵢ = 0}`.
pub fn regular_simplex_vertices(n: usize) -> Result<Vec<Vec<f64>>> {
    if n == 0 {
        return Err(Error::InvalidArgument("simplex dimension must be positive".into()));
    }
    let ones = Subspace::spanned_by(&[vec![1.0; n + 1]])?;
    let plane = ones.complement()?;
    Ok((0..=n)
        .map(|i| {
            let mut e = vec![0.0; n + 1];
            e[i] = 1.0;
            plane.coordinates(&e)
        })
        .collect())
}

pub fn regular_simplex(n: usize) -> Result<ConvexBody> {
    ConvexBody::vpolytope(regular_simplex_vertices(n)?)
}

/// `vol_n` of the regular simplex with edge `√2`: `√(n+1) / n!`.
pub fn regular_simplex_volume(n: usize) -> f64 {
    let ln_fact: f64 = (1..=n).map(|i| (i as f64).ln()).sum();
    ((n as f64 + 1.0).sqrt().ln() - ln_fact).exp()
}

/// `H = span{v_i : i ∈ chosen, w}` where `w` averages the remaining vertices.
/// The origin lies in the affine hull of these points, so `dim H = |chosen|`.
pub fn simplex_sharp_subspace(n: usize, chosen: &[usize]) -> Result<Subspace> {
    let k = chosen.len();
    if k == 0 || k >= n {
        return Err(Error::SubspaceDimension { n, k });
    }
    let mut seen = vec![false; n + 1];
    for &i in chosen {
        if i > n || seen[i] {
            return Err(Error::InvalidArgument(format!("invalid vertex index {i}")));
        }
        seen[i] = true;
    }
    let v = regular_simplex_vertices(n)?;
    let rest: Vec<&Vec<f64>> = (0..=n).filter(|i| !seen[*i]).map(|i| &v[i]).collect();
    let w: Vec<f64> = (0..n).map(|j| rest.iter().map(|p| p[j]).sum::<f64>() / rest.len() as f64).collect();
    let mut span: Vec<Vec<f64>> = chosen.iter().map(|&i| v[i].clone()).collect();
    span.push(w);
    // Rank-revealing orthonormalization of the k + 1 spanning vectors.
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for s in &span {
        let mut r = s.clone();
        for _ in 0..2 {
            for b in &basis {
                let p: f64 = r.iter().zip(b).map(|(x, y)| x * y).sum();
                r.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
            }
        }
        let len = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len > 1e-9 {
            basis.push(r.iter().map(|x| x / len).collect());
        }
    }
    if basis.len() != k {
        return Err(Error::NonConverged(format!("spanning set has rank {} instead of {k}", basis.len())));
    }
    Subspace::spanned_by(&basis)
}

/// The default choice `{0, …, k-1}`.
pub fn simplex_sharp_subspace_first(n: usize, k: usize) -> Result<Subspace> {
    simplex_sharp_subspace(n, &(0..k).collect::<Vec<_>>())
}
