//! Bodies with closed-form support and gauge functions.

use crate::error::Result;
use crate::numerics::linalg::{dot, inverse, mat_vec, norm, Matrix};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Analytic {
    Ball { radius: f64 },
    /// `{x : xᵀ S⁻¹ x ≤ 1}`, so `h(u) = √(uᵀSu)`.
    Ellipsoid { shape: Matrix, inv: Matrix },
    /// `scale · B_p^n`, `1 < p < ∞`.
    LpBall { p: f64, scale: f64 },
    /// `[-half, half]^n`.
    Cube { half: f64 },
    /// `radius · B_1^n`.
    Cross { radius: f64 },
}

fn quad_form(m: &Matrix, x: &[f64]) -> f64 {
    dot(x, &mat_vec(m, x)).max(0.0)
}

fn lp_norm(x: &[f64], p: f64) -> f64 {
    let m = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if m == 0.0 {
        return 0.0;
    }
    m * x.iter().map(|v| (v.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

impl Analytic {
    pub fn ellipsoid(shape: Matrix) -> Result<Self> {
        let inv = inverse(&shape)?;
        Ok(Analytic::Ellipsoid { shape, inv })
    }

    pub fn support(&self, u: &[f64]) -> f64 {
        match self {
            Analytic::Ball { radius } => radius * norm(u),
            Analytic::Ellipsoid { shape, .. } => quad_form(shape, u).sqrt(),
            Analytic::LpBall { p, scale } => scale * lp_norm(u, *p / (*p - 1.0)),
            Analytic::Cube { half } => half * u.iter().map(|v| v.abs()).sum::<f64>(),
            Analytic::Cross { radius } => radius * u.iter().fold(0.0f64, |a, v| a.max(v.abs())),
        }
    }

    pub fn gauge(&self, x: &[f64]) -> f64 {
        match self {
            Analytic::Ball { radius } => norm(x) / radius,
            Analytic::Ellipsoid { inv, .. } => quad_form(inv, x).sqrt(),
            Analytic::LpBall { p, scale } => lp_norm(x, *p) / scale,
            Analytic::Cube { half } => x.iter().fold(0.0f64, |a, v| a.max(v.abs())) / half,
            Analytic::Cross { radius } => x.iter().map(|v| v.abs()).sum::<f64>() / radius,
        }
    }

    /// Closed-form chord length for quadratic bodies.
    pub fn chord(&self, x: &[f64], d: &[f64]) -> Option<f64> {
        let (a, b, c) = match self {
            Analytic::Ball { radius } => (dot(d, d), dot(x, d), dot(x, x) - radius * radius),
            Analytic::Ellipsoid { inv, .. } => {
                let id = mat_vec(inv, d);
                (dot(d, &id), dot(x, &id), quad_form(inv, x) - 1.0)
            }
            _ => return None,
        };
        let disc = (b * b - a * c).max(0.0);
        Some(((-b + disc.sqrt()) / a).max(0.0))
    }

    pub fn radii(&self, n: usize) -> (f64, f64) {
        let nf = n as f64;
        match self {
            Analytic::Ball { radius } => (*radius, *radius),
            Analytic::Ellipsoid { shape, .. } => {
                let ev = shape.clone().symmetric_eigenvalues();
                let lo = ev.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = ev.iter().cloned().fold(0.0, f64::max);
                (lo.max(0.0).sqrt(), hi.sqrt())
            }
            Analytic::LpBall { p, scale } => {
                let e = 0.5 - 1.0 / p;
                if e >= 0.0 {
                    (*scale, scale * nf.powf(e))
                } else {
                    (scale * nf.powf(e), *scale)
                }
            }
            Analytic::Cube { half } => (*half, half * nf.sqrt()),
            Analytic::Cross { radius } => (radius / nf.sqrt(), *radius),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Analytic::Ball { radius } => format!("ball[r={radius}]"),
            Analytic::Ellipsoid { .. } => "ellipsoid".into(),
            Analytic::LpBall { p, scale } => format!("lp_ball[p={p},r={scale}]"),
            Analytic::Cube { half } => format!("cube[a={half}]"),
            Analytic::Cross { radius } => format!("cross_polytope[r={radius}]"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_oracles() {
        let b = Analytic::Ball { radius: 2.0 };
        assert_eq!(b.support(&[3.0, 4.0]), 10.0);
        assert_eq!(b.gauge(&[3.0, 4.0]), 2.5);
        assert!((b.chord(&[0.0, 0.0], &[0.0, 1.0]).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn lp_duality_pairs() {
        let k = Analytic::LpBall { p: 3.0, scale: 1.0 };
        let x = [0.3, -0.5, 0.2];
        let g = k.gauge(&x);
        let h = k.support(&x);
        // Hölder: ‖x‖₂² ≤ ‖x‖_p ‖x‖_q
        assert!(dot(&x, &x) <= g * h + 1e-15);
        let cube = Analytic::Cube { half: 1.0 };
        assert_eq!(cube.support(&[1.0, -2.0]), 3.0);
        assert_eq!(Analytic::Cross { radius: 1.0 }.gauge(&[1.0, -2.0]), 3.0);
    }

    #[test]
    fn ellipsoid_chord() {
        let e = Analytic::ellipsoid(Matrix::from_diagonal(&nalgebra::DVector::from_vec(vec![4.0, 1.0]))).unwrap();
        assert!((e.chord(&[0.0, 0.0], &[1.0, 0.0]).unwrap() - 2.0).abs() < 1e-15);
        assert!((e.gauge(&[0.0, 0.5]) - 0.5).abs() < 1e-15);
        assert!((e.support(&[1.0, 0.0]) - 2.0).abs() < 1e-15);
    }
}
