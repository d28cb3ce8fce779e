use convexreg_core::body::ConvexBody;
use convexreg_core::functional::LogConcaveFn;
use convexreg_core::lp::{lp_solve, LinearProgram, LpStatus};
use convexreg_core::numerics::linalg::{dot, haar_subspace, norm, sphere_sample};
use convexreg_core::numerics::par::Moments;
use convexreg_core::numerics::RngStream;
use proptest::prelude::*;

fn polytope(seed: u64, n: usize) -> ConvexBody {
    let mut rng = RngStream::new(seed).rng();
    ConvexBody::random_vpolytope(&mut rng, n, 3 * n).unwrap()
}

fn direction(seed: u64, n: usize) -> Vec<f64> {
    sphere_sample(&mut RngStream::new(seed).child("direction").rng(), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn support_is_sublinear_and_homogeneous(seed in 0u64..1000, n in 2usize..5, lambda in 0.1f64..10.0) {
        let k = polytope(seed, n);
        let u = direction(seed, n);
        let v = direction(seed + 1, n);
        let hu = k.support(&u).unwrap();
        let scaled: Vec<f64> = u.iter().map(|x| lambda * x).collect();
        prop_assert!((k.support(&scaled).unwrap() - lambda * hu).abs() <= 1e-9 * lambda * hu.abs().max(1.0));
        let w: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
        prop_assert!(k.support(&w).unwrap() <= hu + k.support(&v).unwrap() + 1e-9);
        prop_assert!((k.gauge(&scaled).unwrap() - lambda * k.gauge(&u).unwrap()).abs() <= 1e-9 * lambda * k.gauge(&u).unwrap());
    }

    #[test]
    fn gauge_and_support_are_dual(seed in 0u64..1000, n in 2usize..5) {
        let k = polytope(seed, n);
        let x = direction(seed, n);
        let u = direction(seed + 7, n);
        prop_assert!(k.gauge(&x).unwrap() * k.support(&u).unwrap() >= dot(&x, &u) - 1e-9);
        let r = k.radii();
        prop_assert!(r.inner <= k.support(&u).unwrap() + 1e-12 && k.support(&u).unwrap() <= r.outer + 1e-12);
        let p = k.polar().unwrap();
        prop_assert!((p.support(&x).unwrap() - k.gauge(&x).unwrap()).abs() <= 1e-9 * (1.0 + k.gauge(&x).unwrap()));
    }

    #[test]
    fn regularizations_are_nested(seed in 0u64..1000, n in 2usize..4) {
        let k = polytope(seed, n);
        let x = direction(seed + 3, n);
        let (o, i) = (k.outer_reg().unwrap(), k.inner_reg().unwrap());
        let (po, pk, pi) = (o.gauge(&x).unwrap(), k.gauge(&x).unwrap(), i.gauge(&x).unwrap());
        prop_assert!(po <= pk + 1e-9 && pk <= pi + 1e-9);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        prop_assert!((o.support(&x).unwrap() - o.support(&neg).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn lp_value_scales_with_objective(seed in 0u64..1000, lambda in 0.1f64..20.0) {
        let mut rng = RngStream::new(seed).rng();
        let c = sphere_sample(&mut rng, 3);
        let mut lp = LinearProgram::maximize(c.clone());
        for _ in 0..8 {
            lp = lp.le(sphere_sample(&mut rng, 3), 1.0);
        }
        // Keep the feasible set bounded.
        for i in 0..3 {
            let mut e = vec![0.0; 3];
            e[i] = 1.0;
            lp = lp.le(e.clone(), 5.0);
            e[i] = -1.0;
            lp = lp.le(e, 5.0);
        }
        let a = lp_solve(&lp).unwrap();
        let mut scaled = lp.clone();
        scaled.objective = c.iter().map(|v| v * lambda).collect();
        let b = lp_solve(&scaled).unwrap();
        prop_assert_eq!(a.status, LpStatus::Optimal);
        prop_assert!((b.value - lambda * a.value).abs() <= 1e-9 * (1.0 + b.value.abs()));
    }

    #[test]
    fn haar_subspaces_are_orthonormal(seed in 0u64..1000, n in 2usize..8) {
        let mut rng = RngStream::new(seed).rng();
        let k = 1 + (seed as usize) % (n - 1);
        let h = haar_subspace(&mut rng, n, k).unwrap();
        let b = h.basis();
        let g = b.transpose() * b;
        for i in 0..k {
            for j in 0..k {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((g[(i, j)] - want).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn merged_moments_match_single_pass(xs in proptest::collection::vec(-10.0f64..10.0, 2..60), cut in 0usize..60) {
        let cut = cut.min(xs.len());
        let mut all = Moments::new(1);
        let (mut a, mut b) = (Moments::new(1), Moments::new(1));
        for (i, x) in xs.iter().enumerate() {
            all.push(&[*x]);
            if i < cut { a.push(&[*x]) } else { b.push(&[*x]) }
        }
        a.merge(&b);
        prop_assert_eq!(a.count, all.count);
        prop_assert!((a.mean[0] - all.mean[0]).abs() <= 1e-12 * (1.0 + all.mean[0].abs()));
        prop_assert!((a.covariance(0, 0) - all.covariance(0, 0)).abs() <= 1e-9 * (1.0 + all.covariance(0, 0)));
    }

    #[test]
    fn difference_functions_are_below_and_above(seed in 0u64..1000, s in -0.5f64..0.5, r in 0.1f64..2.0) {
        let base = LogConcaveFn::lp_exp(2, 3.0, 1.0).unwrap();
        let f = LogConcaveFn::shift_center(&base, vec![s, -0.5 * s]).unwrap();
        let x: Vec<f64> = direction(seed, 2).iter().map(|v| r * v).collect();
        let fi = f.delta_in().unwrap().value(&x).unwrap();
        let fo = f.delta_out().unwrap().value(&x).unwrap();
        prop_assert!(fi <= f.value(&x).unwrap() + 1e-12);
        prop_assert!(fi <= fo + 1e-9);
        prop_assert!(fo <= 1.0);
        prop_assert!(norm(&x) > 0.0);
    }
}
