//! Thin wrappers over nalgebra with explicit residual checks.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn frobenius(m: &Matrix) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn check_finite(m: &Matrix, what: &'static str) -> Result<()> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Thin QR of an `n × k` matrix (`n ≥ k`) with a non-negative diagonal in `R`.
pub fn qr(a: &Matrix, tol: f64) -> Result<(Matrix, Matrix)> {
    check_finite(a, "qr input")?;
    if a.nrows() < a.ncols() {
        return Err(Error::InvalidArgument(format!(
            "qr needs rows >= cols, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let dec = a.clone().qr();
    let mut q = dec.q();
    let mut r = dec.r();
    for i in 0..r.nrows() {
        if r[(i, i)] < 0.0 {
            r.row_mut(i).neg_mut();
            q.column_mut(i).neg_mut();
        }
    }
    let residual = frobenius(&(&q * &r - a)) / frobenius(a).max(f64::MIN_POSITIVE);
    if residual > tol {
        return Err(Error::Residual { residual, tolerance: tol });
    }
    Ok((q, r))
}

/// Lower Cholesky factor of a symmetric positive definite matrix.
pub fn chol(a: &Matrix, tol: f64) -> Result<Matrix> {
    check_finite(a, "cholesky input")?;
    if !a.is_square() {
        return Err(Error::NotPositiveDefinite);
    }
    let scale = frobenius(a).max(f64::MIN_POSITIVE);
    if frobenius(&(a - a.transpose())) > tol * scale {
        return Err(Error::NotPositiveDefinite);
    }
    let l = nalgebra::Cholesky::new(a.clone())
        .ok_or(Error::NotPositiveDefinite)?
        .l();
    let residual = frobenius(&(&l * l.transpose() - a)) / scale;
    if residual > tol {
        return Err(Error::Residual { residual, tolerance: tol });
    }
    Ok(l)
}

pub fn solve_spd(a: &Matrix, b: &[f64], tol: f64) -> Result<Vec<f64>> {
    if a.nrows() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), got: b.len() });
    }
    chol(a, tol)?;
    let x = nalgebra::Cholesky::new(a.clone())
        .ok_or(Error::NotPositiveDefinite)?
        .solve(&Vector::from_column_slice(b));
    Ok(x.as_slice().to_vec())
}

/// General square solve via LU.
pub fn solve(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let x = a
        .clone()
        .lu()
        .solve(&Vector::from_column_slice(b))
        .ok_or(Error::Singular)?;
    if x.iter().all(|v| v.is_finite()) {
        Ok(x.as_slice().to_vec())
    } else {
        Err(Error::Singular)
    }
}

pub fn inverse(a: &Matrix) -> Result<Matrix> {
    let inv = a.clone().try_inverse().ok_or(Error::Singular)?;
    check_finite(&inv, "matrix inverse")?;
    Ok(inv)
}

pub fn singular_value_range(a: &Matrix) -> (f64, f64) {
    let sv = a.clone().singular_values();
    let lo = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = sv.iter().cloned().fold(0.0, f64::max);
    (lo, hi)
}

pub fn mat_vec(a: &Matrix, x: &[f64]) -> Vec<f64> {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| a[(i, j)] * x[j]).sum())
        .collect()
}

pub fn mat_t_vec(a: &Matrix, x: &[f64]) -> Vec<f64> {
    (0..a.ncols())
        .map(|j| (0..a.nrows()).map(|i| a[(i, j)] * x[i]).sum())
        .collect()
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Uniform point on `S^{n-1}` via normalized Gaussians.
pub fn sphere_sample<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let mut g = gaussian_vector(rng, n);
        let r = norm(&g);
        if r > 1e-300 {
            g.iter_mut().for_each(|x| *x /= r);
            return g;
        }
    }
}

/// A `k`-dimensional linear subspace of `R^n` with an orthonormal basis `B`
/// (`n × k`) and an orthonormal basis `C` (`n × (n-k)`) of its complement.
///
/// `k = n` is allowed and represents the whole space.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: Matrix,
    complement: Matrix,
}

impl Subspace {
    /// Accepts a basis whose Gram matrix is within `tol` of the identity.
    pub fn from_basis(basis: Matrix, tol: f64) -> Result<Self> {
        let (n, k) = basis.shape();
        if k == 0 || k > n {
            return Err(Error::SubspaceDimension { n, k });
        }
        check_finite(&basis, "subspace basis")?;
        let gram = basis.transpose() * &basis - Matrix::identity(k, k);
        let dev = gram.amax();
        if dev > tol {
            return Err(Error::Residual { residual: dev, tolerance: tol });
        }
        let complement = orthonormal_complement(&basis);
        Ok(Self { basis, complement })
    }

    /// Span of the given vectors, which must be linearly independent.
    pub fn spanned_by(vectors: &[Vec<f64>]) -> Result<Self> {
        let k = vectors.len();
        let n = vectors.first().map_or(0, Vec::len);
        if k == 0 || k > n {
            return Err(Error::SubspaceDimension { n, k });
        }
        let a = Matrix::from_fn(n, k, |i, j| vectors[j][i]);
        let (q, r) = qr(&a, 1e-10)?;
        let scale = r.diagonal().amax();
        if (0..k).any(|i| r[(i, i)] <= 1e-10 * scale) {
            return Err(Error::InvalidArgument("spanning vectors are linearly dependent".into()));
        }
        Self::from_basis(q, 1e-10)
    }

    /// Span of the first `k` standard basis vectors.
    pub fn coordinate(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::SubspaceDimension { n, k });
        }
        Self::from_basis(Matrix::identity(n, k), 0.0)
    }

    pub fn full(n: usize) -> Self {
        Self { basis: Matrix::identity(n, n), complement: Matrix::zeros(n, 0) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn complement_basis(&self) -> &Matrix {
        &self.complement
    }

    pub fn complement(&self) -> Result<Subspace> {
        if self.complement.ncols() == 0 {
            return Err(Error::SubspaceDimension { n: self.ambient_dim(), k: 0 });
        }
        Ok(Self { basis: self.complement.clone(), complement: self.basis.clone() })
    }

    /// Coordinates `Bᵀx` of the orthogonal projection of `x`.
    pub fn coordinates(&self, x: &[f64]) -> Vec<f64> {
        mat_t_vec(&self.basis, x)
    }

    pub fn complement_coordinates(&self, x: &[f64]) -> Vec<f64> {
        mat_t_vec(&self.complement, x)
    }

    /// `Bz`: the point of `R^n` with coordinates `z` in the subspace.
    pub fn embed(&self, z: &[f64]) -> Vec<f64> {
        mat_vec(&self.basis, z)
    }

    pub fn embed_complement(&self, v: &[f64]) -> Vec<f64> {
        mat_vec(&self.complement, v)
    }

    /// `Bz + Cv`.
    pub fn embed_split(&self, z: &[f64], v: &[f64]) -> Vec<f64> {
        let mut x = self.embed(z);
        if !v.is_empty() {
            for (xi, ci) in x.iter_mut().zip(self.embed_complement(v)) {
                *xi += ci;
            }
        }
        x
    }
}

/// Orthonormal basis of the orthogonal complement of the columns of `basis`,
/// built by greedy Gram–Schmidt over the standard basis.
fn orthonormal_complement(basis: &Matrix) -> Matrix {
    let (n, k) = basis.shape();
    let mut cols: Vec<Vec<f64>> = (0..k).map(|j| basis.column(j).iter().cloned().collect()).collect();
    let mut out = Vec::with_capacity(n - k);
    let mut used = vec![false; n];
    while out.len() < n - k {
        let mut best: Option<(usize, Vec<f64>, f64)> = None;
        for j in (0..n).filter(|&j| !used[j]) {
            let mut r = vec![0.0; n];
            r[j] = 1.0;
            for _ in 0..2 {
                for c in &cols {
                    let p = dot(&r, c);
                    r.iter_mut().zip(c).for_each(|(ri, ci)| *ri -= p * ci);
                }
            }
            let len = norm(&r);
            if best.as_ref().is_none_or(|b| len > b.2) {
                best = Some((j, r, len));
            }
        }
        let (j, mut r, len) = best.expect("complement search exhausted the standard basis");
        used[j] = true;
        r.iter_mut().for_each(|x| *x /= len);
        cols.push(r.clone());
        out.push(r);
    }
    Matrix::from_fn(n, n - k, |i, j| out[j][i])
}

/// Haar-random `k`-dimensional subspace: QR of an `n × k` Gaussian matrix.
pub fn haar_subspace<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Result<Subspace> {
    if k == 0 || k >= n {
        return Err(Error::SubspaceDimension { n, k });
    }
    loop {
        let g = Matrix::from_fn(n, k, |_, _| rng.sample::<f64, _>(StandardNormal));
        let (q, r) = qr(&g, 1e-10)?;
        if (0..k).all(|i| r[(i, i)] > 1e-8) {
            return Subspace::from_basis(q, 1e-12);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rng::RngStream;

    #[test]
    fn qr_has_positive_diagonal_and_reconstructs() {
        let a = Matrix::from_row_slice(3, 2, &[1.0, 2.0, -3.0, 4.0, 5.0, -6.0]);
        let (q, r) = qr(&a, 1e-10).unwrap();
        assert!((0..2).all(|i| r[(i, i)] > 0.0));
        assert!((&q * &r - &a).amax() < 1e-12);
        assert!((q.transpose() * &q - Matrix::identity(2, 2)).amax() < 1e-12);
    }

    #[test]
    fn chol_rejects_indefinite() {
        let a = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert_eq!(chol(&a, 1e-10), Err(Error::NotPositiveDefinite));
        let b = Matrix::from_row_slice(2, 2, &[4.0, 2.0, 2.0, 3.0]);
        let l = chol(&b, 1e-10).unwrap();
        assert!((&l * l.transpose() - &b).amax() < 1e-12);
        let x = solve_spd(&b, &[2.0, 1.0], 1e-10).unwrap();
        assert!((4.0 * x[0] + 2.0 * x[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn sphere_samples_are_unit() {
        let mut rng = RngStream::new(3).rng();
        for n in 1..6 {
            assert!((norm(&sphere_sample(&mut rng, n)) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn haar_subspace_bases_are_orthonormal_and_complementary() {
        let mut rng = RngStream::new(5).rng();
        for (n, k) in [(2, 1), (5, 2), (8, 7)] {
            let h = haar_subspace(&mut rng, n, k).unwrap();
            let mut full = Matrix::zeros(n, n);
            full.columns_mut(0, k).copy_from(h.basis());
            full.columns_mut(k, n - k).copy_from(h.complement_basis());
            assert!((full.transpose() * &full - Matrix::identity(n, n)).amax() < 1e-12);
        }
        assert!(haar_subspace(&mut rng, 4, 4).is_err());
        assert!(haar_subspace(&mut rng, 4, 0).is_err());
    }

    #[test]
    fn embed_and_coordinates_roundtrip() {
        let h = Subspace::spanned_by(&[vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 1.0]]).unwrap();
        let z = [0.3, -1.2];
        let x = h.embed(&z);
        let back = h.coordinates(&x);
        assert!((back[0] - z[0]).abs() < 1e-14 && (back[1] - z[1]).abs() < 1e-14);
        assert!(h.complement_coordinates(&x)[0].abs() < 1e-14);
    }
}
