use super::*;
use crate::body::simplex::regular_simplex;
use crate::config::Config;
use crate::measure::volume;
use crate::numerics::linalg::{haar_subspace, sphere_sample};
use crate::numerics::quad::{quad_1d, UpperLimit};
use crate::numerics::rng::RngStream;
use crate::numerics::special::gamma_fn;

fn skewed(n: usize) -> LogConcaveFn {
    let base = LogConcaveFn::lp_exp(n, 3.0, 1.0).unwrap();
    let shift: Vec<f64> = (0..n).map(|i| 0.4 - 0.25 * i as f64).collect();
    LogConcaveFn::shift_center(&base, shift).unwrap()
}

fn units(seed: u64, n: usize, count: usize) -> Vec<Vec<f64>> {
    let mut rng = RngStream::new(seed).rng();
    (0..count).map(|_| sphere_sample(&mut rng, n)).collect()
}

#[test]
fn normalization_and_convexity() {
    let fs = [
        LogConcaveFn::standard_gaussian(3).unwrap(),
        skewed(3),
        skewed(3).delta_lifted(DeltaKind::Out).unwrap(),
        skewed(3).delta_lifted(DeltaKind::Zero).unwrap(),
        skewed(3).delta_lifted(DeltaKind::In).unwrap(),
    ];
    let mut rng = RngStream::new(1).rng();
    for f in &fs {
        assert_eq!(f.phi(&[0.0; 3]).unwrap(), 0.0, "{}", f.describe());
        for _ in 0..10 {
            let x = crate::numerics::linalg::gaussian_vector(&mut rng, 3);
            let y = crate::numerics::linalg::gaussian_vector(&mut rng, 3);
            let m: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 0.5 * (a + b)).collect();
            let (px, py, pm) = (f.phi(&x).unwrap(), f.phi(&y).unwrap(), f.phi(&m).unwrap());
            assert!(px >= 0.0 && py >= 0.0);
            assert!(pm <= 0.5 * (px + py) + 1e-9, "{}: {pm} vs {px}, {py}", f.describe());
        }
    }
}

#[test]
fn tail_certificates_hold_on_rays() {
    for f in [skewed(3), skewed(3).delta_lifted(DeltaKind::Out).unwrap(), LogConcaveFn::lp_exp(4, 1.5, 0.7).unwrap()] {
        let t = f.tail();
        for u in units(2, 3.min(f.dim()).max(f.dim()), 20) {
            for s in [1.0, 1.5, 3.0] {
                let r = t.radius * s;
                let x: Vec<f64> = u.iter().map(|v| v * r).collect();
                assert!(f.phi(&x).unwrap() >= t.slope * r - 1e-9, "{}", f.describe());
            }
        }
    }
}

#[test]
fn gaussian_is_fixed_by_delta_out() {
    let g = LogConcaveFn::gaussian(Matrix::from_row_slice(3, 3, &[2.0, 0.3, 0.0, 0.3, 1.0, 0.1, 0.0, 0.1, 0.5])).unwrap();
    let d = g.delta_lifted(DeltaKind::Out).unwrap();
    for u in units(3, 3, 30) {
        let x: Vec<f64> = u.iter().map(|v| 1.7 * v).collect();
        assert!((d.value(&x).unwrap() - g.value(&x).unwrap()).abs() <= 1e-8);
    }
    assert_eq!(d.value(&[0.0; 3]).unwrap(), 1.0);
}

#[test]
fn gaussian_delta_zero_halves_precision() {
    let g = LogConcaveFn::standard_gaussian(3).unwrap();
    let lifted = g.delta_lifted(DeltaKind::Zero).unwrap();
    let exact = g.delta_zero().unwrap();
    for u in units(4, 3, 20) {
        let x: Vec<f64> = u.iter().map(|v| 2.0 * v).collect();
        let want = (-dot(&x, &x) / 4.0).exp();
        assert!((lifted.value(&x).unwrap() - want).abs() <= 1e-8);
        assert!((exact.value(&x).unwrap() - want).abs() <= 1e-14);
    }
}

#[test]
fn difference_functions_are_ordered() {
    let f = skewed(3);
    let out = f.delta_out().unwrap();
    let inn = f.delta_in().unwrap();
    assert!(!f.is_symmetric() && out.is_symmetric() && inn.is_symmetric());
    assert_eq!(out.value(&[0.0; 3]).unwrap(), 1.0);
    for u in units(5, 3, 30) {
        let x: Vec<f64> = u.iter().map(|v| 0.9 * v).collect();
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        let (fi, fo, fx) = (inn.value(&x).unwrap(), out.value(&x).unwrap(), f.value(&x).unwrap());
        assert!(fi <= fx + 1e-12);
        assert!(fi <= fo + 1e-9);
        assert!((fi - fx.min(f.value(&neg).unwrap())).abs() < 1e-12);
        assert!(fo >= (fx * f.value(&neg).unwrap()).sqrt() - 1e-9);
        assert!((out.value(&neg).unwrap() - fo).abs() < 1e-8);
    }
}

#[test]
fn indicator_operators_match_bodies() {
    let t = ConvexBody::vpolytope(vec![vec![-1.0, -1.0], vec![2.0, -1.0], vec![-1.0, 2.0]]).unwrap();
    let f = LogConcaveFn::indicator(t.clone());
    let d0 = f.delta_zero().unwrap();
    let cfg = Config::default().with_directions(40000);
    let ratio = volume(d0.indicator_body().unwrap(), &cfg, RngStream::new(6)).unwrap();
    let base = volume(&t, &cfg, RngStream::new(7)).unwrap();
    let r = ratio.div(&base);
    assert!((r.value - 6.0).abs() <= 3.0 * r.stderr + 1e-3 * 6.0, "{r:?}");
    let out = f.delta_out().unwrap();
    let half = t.difference_body().unwrap().scale(0.5).unwrap();
    for u in units(8, 2, 20) {
        assert!((out.indicator_body().unwrap().gauge(&u).unwrap() - half.gauge(&u).unwrap()).abs() < 1e-12);
        assert!((ball_body_radial(&f, 3.5, &u).unwrap() - t.radial(&u).unwrap()).abs() < 1e-12);
        assert!((level_body_radial(&f, 2.0, &u).unwrap() - t.radial(&u).unwrap()).abs() < 1e-12);
    }
    let inn = f.delta_in().unwrap();
    assert!(inn.indicator_body().unwrap().is_symmetric());
}

#[test]
fn projections_of_gaussians() {
    let cov = Matrix::from_row_slice(3, 3, &[1.5, 0.4, 0.2, 0.4, 1.0, -0.1, 0.2, -0.1, 0.8]);
    let g = LogConcaveFn::gaussian(cov.clone()).unwrap();
    let mut rng = RngStream::new(9).rng();
    let h = haar_subspace(&mut rng, 3, 2).unwrap();
    let exact = g.project(&h).unwrap();
    let lifted = g.project_lifted(&h).unwrap();
    // The marginal-sup of a Gaussian is the Gaussian with covariance BᵀΣB.
    let b = h.basis();
    let marginal = LogConcaveFn::gaussian(b.transpose() * &cov * b).unwrap();
    for u in units(10, 2, 20) {
        let z: Vec<f64> = u.iter().map(|v| 1.3 * v).collect();
        let m = marginal.phi(&z).unwrap();
        assert!((exact.phi(&z).unwrap() - m).abs() < 1e-10);
        assert!((lifted.phi(&z).unwrap() - m).abs() < 1e-8);
    }
    let full = Subspace::full(3);
    assert_eq!(g.project(&full).unwrap().phi(&[0.3, 0.1, 0.2]).unwrap(), g.phi(&[0.3, 0.1, 0.2]).unwrap());
}

#[test]
fn gaussian_ball_and_level_bodies() {
    let g = LogConcaveFn::standard_gaussian(4).unwrap();
    assert!((gaussian_ball_radius(2.0) - 2f64.sqrt()).abs() < 1e-14);
    for u in units(11, 4, 5) {
        for p in [1.0, 2.0, 3.0, 5.0] {
            let want = (2f64.powf(p / 2.0 - 1.0) * p * gamma_fn(p / 2.0)).powf(1.0 / p);
            assert!((ball_body_radial(&g, p, &u).unwrap() - want).abs() < 1e-9 * want);
        }
        for p in [1.5, 2.0, 4.0, 9.0] {
            assert!((level_body_radial(&g, p, &u).unwrap() - (2.0 * (p - 1.0)).sqrt()).abs() < 1e-9);
        }
    }
}

#[test]
fn ball_body_inclusions_and_peak_bands() {
    let f = skewed(3);
    let k = kappa();
    for u in units(12, 3, 6) {
        let ps = [1.0, 2.0, 3.0, 5.0, 8.0];
        let rho: Vec<f64> = ps.iter().map(|&p| ball_body_radial(&f, p, &u).unwrap()).collect();
        for i in 0..ps.len() {
            for j in i + 1..ps.len() {
                let (p, q) = (ps[i], ps[j]);
                let c = gamma_fn(p + 1.0).powf(1.0 / p) / gamma_fn(q + 1.0).powf(1.0 / q);
                assert!(c * rho[j] <= rho[i] * (1.0 + 1e-9) && rho[i] <= rho[j] * (1.0 + 1e-9));
            }
        }
        for (idx, &p) in ps.iter().enumerate().skip(1) {
            let l = ray_peak(|t| f.phi(&u.iter().map(|v| t * v).collect::<Vec<_>>()).unwrap(), p).unwrap();
            let r = level_body_radial(&f, p, &u).unwrap();
            assert!(l.t_p <= r * (1.0 + 1e-7) && r <= 2.0 * l.t_p * (1.0 + 1e-7));
            assert!(l.t_p / std::f64::consts::E <= rho[idx] && rho[idx] <= k * l.t_p);
        }
    }
}

#[test]
fn ray_peak_sandwich() {
    let c = sandwich_constant();
    let family: [(&str, fn(f64) -> f64); 3] = [("t", |t| t), ("t2", |t| t * t), ("t+t3", |t| t + t * t * t)];
    for (_, g) in family {
        for p in [2.0, 3.0, 5.0, 10.0] {
            let l = ray_peak(g, p).unwrap();
            let integral = quad_1d(|t| t.powf(p - 1.0) * (-g(t)).exp(), 0.0, UpperLimit::Infinity, 1e-12, None).unwrap();
            // g = t at p = 2 attains the upper bound, so allow for the accuracy of t_p.
            assert!(l.m_p * l.t_p / p <= integral * (1.0 + 1e-6));
            assert!(integral <= c * l.m_p * l.t_p / (p - 1.0).sqrt() * (1.0 + 1e-6));
            assert!(g(2.0 * l.t_p) >= p - 1.0 - 1e-9 && p - 1.0 >= g(l.t_p) - 1e-9);
        }
    }
}

#[test]
fn section_identity_for_gaussian() {
    let cov = Matrix::from_row_slice(3, 3, &[1.2, 0.3, 0.0, 0.3, 0.9, 0.2, 0.0, 0.2, 0.7]);
    let g = LogConcaveFn::gaussian(cov).unwrap();
    let mut rng = RngStream::new(13).rng();
    let h = haar_subspace(&mut rng, 3, 2).unwrap();
    let cfg = Config::default().with_directions(4000);
    let exact = integral_on(&g, &h, &cfg, RngStream::new(14)).unwrap();
    let body = ball_body(&g, 2.0).unwrap().section(&h).unwrap();
    let vol = volume(&body, &cfg, RngStream::new(15)).unwrap();
    assert!((vol.value - exact.value).abs() <= 3.0 * vol.stderr + 1e-3 * exact.value, "{vol:?} vs {exact:?}");
}

#[test]
fn integral_of_product_exponential() {
    // ∫ e^{-|x₁| - |x₂|} = 4
    let f = LogConcaveFn::lp_exp(2, 1.0, 1.0).unwrap();
    let cfg = Config::default().with_directions(20000);
    let v = integral(&f, &cfg, RngStream::new(16)).unwrap();
    assert!((v.value - 4.0).abs() <= 4.0 * v.stderr, "{v:?}");
    let one = LogConcaveFn::lp_exp(1, 2.0, 1.0).unwrap();
    let e = integral(&one, &cfg, RngStream::new(0)).unwrap();
    assert!((e.value - std::f64::consts::PI.sqrt()).abs() < 1e-9);
}

#[test]
fn level_sets_commute_with_projection() {
    let f = skewed(3);
    let mut rng = RngStream::new(17).rng();
    let h = haar_subspace(&mut rng, 3, 2).unwrap();
    let pf = f.project(&h).unwrap();
    let p = 3.0;
    let projected = level_body(&f, p).unwrap().project(&h).unwrap();
    for u in units(18, 2, 4) {
        let a = level_body_radial(&pf, p, &u).unwrap();
        let b = projected.radial(&u).unwrap();
        assert!((a - b).abs() < 1e-5 * b, "{a} vs {b}");
    }
}

#[test]
fn simplex_indicator_is_not_symmetric() {
    let f = LogConcaveFn::indicator(regular_simplex(3).unwrap());
    assert!(!f.is_symmetric());
    assert!(f.delta_out().unwrap().is_symmetric());
}
