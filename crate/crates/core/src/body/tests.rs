use super::*;
use crate::numerics::linalg::{haar_subspace, sphere_sample};
use crate::numerics::rng::RngStream;

fn random_polytope(seed: u64, n: usize) -> ConvexBody {
    let mut rng = RngStream::new(seed).rng();
    ConvexBody::random_vpolytope(&mut rng, n, 3 * n).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

#[test]
fn polar_of_ball_and_cube() {
    let b = ConvexBody::ball(3, 2.0).unwrap().polar().unwrap();
    assert!(close(b.support(&[1.0, 0.0, 0.0]).unwrap(), 0.5, 1e-15));
    let c = ConvexBody::cube(3, 1.0).unwrap().polar().unwrap();
    assert!(close(c.gauge(&[1.0, 0.0, 0.0]).unwrap(), 1.0, 1e-15));
}

#[test]
fn bipolar_reproduces_oracles() {
    let k = random_polytope(11, 4);
    let kk = k.lifted_route().polar().unwrap().polar().unwrap();
    let mut rng = RngStream::new(12).rng();
    for _ in 0..50 {
        let u = sphere_sample(&mut rng, 4);
        assert!(close(k.support(&u).unwrap(), kk.support(&u).unwrap(), 1e-9));
        assert!(close(k.gauge(&u).unwrap(), kk.gauge(&u).unwrap(), 1e-9));
    }
}

#[test]
fn duality_relations() {
    let k = random_polytope(21, 3);
    let mut rng = RngStream::new(22).rng();
    let out_polar = k.outer_reg().unwrap().polar().unwrap();
    let polar_in = k.polar().unwrap().inner_reg().unwrap();
    let in_polar = k.lifted_route().inner_reg().unwrap().polar().unwrap();
    let polar_out = k.polar().unwrap().outer_reg().unwrap();
    for _ in 0..50 {
        let u = sphere_sample(&mut rng, 3);
        assert!(close(out_polar.gauge(&u).unwrap(), polar_in.gauge(&u).unwrap(), 1e-9));
        assert!(close(in_polar.gauge(&u).unwrap(), polar_out.gauge(&u).unwrap(), 1e-9));
    }
}

#[test]
fn regularization_sandwich_and_symmetric_flags() {
    let k = random_polytope(31, 3);
    let kout = k.outer_reg().unwrap();
    let kin = k.inner_reg().unwrap();
    assert!(kout.is_symmetric() && kin.is_symmetric());
    let mut rng = RngStream::new(32).rng();
    for _ in 0..30 {
        let x = sphere_sample(&mut rng, 3);
        let (po, p, pi) = (kout.gauge(&x).unwrap(), k.gauge(&x).unwrap(), kin.gauge(&x).unwrap());
        assert!(po <= p + 1e-9 && p <= pi + 1e-9);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!(close(kin.support(&x).unwrap(), kin.support(&neg).unwrap(), 1e-9));
    }
}

#[test]
fn symmetric_regularizations_are_identity() {
    let c = ConvexBody::cross_polytope(3, 1.5).unwrap();
    let x = [0.2, -0.7, 0.4];
    assert_eq!(c.outer_reg().unwrap().gauge(&x).unwrap(), c.gauge(&x).unwrap());
    assert_eq!(c.inner_reg().unwrap().support(&x).unwrap(), c.support(&x).unwrap());
}

#[test]
fn sections_against_ray_marching() {
    let k = random_polytope(41, 4);
    let mut rng = RngStream::new(42).rng();
    let h = haar_subspace(&mut rng, 4, 2).unwrap();
    let s = k.section(&h).unwrap();
    for _ in 0..20 {
        let z = sphere_sample(&mut rng, 2);
        let x = h.embed(&z);
        // Bisection on membership along the ray.
        let (mut lo, mut hi) = (0.0, 2.0 * k.radii().outer);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            let p: Vec<f64> = x.iter().map(|v| v * mid).collect();
            if k.gauge(&p).unwrap() <= 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!(close(s.gauge(&z).unwrap(), 1.0 / lo, 1e-8));
    }
}

#[test]
fn section_and_projection_of_simple_bodies() {
    let h = Subspace::coordinate(3, 2).unwrap();
    let b = ConvexBody::ball(3, 1.0).unwrap();
    assert!(close(b.section(&h).unwrap().gauge(&[0.6, 0.8]).unwrap(), 1.0, 1e-15));
    let c = ConvexBody::cube(3, 1.0).unwrap();
    assert!(close(c.section(&h).unwrap().gauge(&[1.0, 0.5]).unwrap(), 1.0, 1e-12));
    assert!(close(c.project(&h).unwrap().gauge(&[1.0, 1.0]).unwrap(), 1.0, 1e-9));
}

#[test]
fn projection_is_polar_of_polar_section() {
    let k = random_polytope(51, 4);
    let mut rng = RngStream::new(52).rng();
    let h = haar_subspace(&mut rng, 4, 2).unwrap();
    let proj = k.project(&h).unwrap();
    let ps = k.polar().unwrap().section(&h).unwrap();
    let slow = k.lifted_route().project(&h).unwrap();
    for _ in 0..20 {
        let z = sphere_sample(&mut rng, 2);
        let g = proj.gauge(&z).unwrap();
        assert!(close(g, ps.support(&z).unwrap(), 1e-9));
        assert!(close(g, slow.gauge(&z).unwrap(), 1e-9));
    }
}

#[test]
fn linear_equivariance_of_inner_regularization() {
    let k = random_polytope(61, 3);
    let t = Matrix::from_row_slice(3, 3, &[1.0, 0.3, 0.0, -0.2, 1.5, 0.1, 0.0, 0.4, 0.8]);
    let a = k.inner_reg().unwrap().linear_image(&t).unwrap();
    let b = k.linear_image(&t).unwrap().inner_reg().unwrap();
    let mut rng = RngStream::new(62).rng();
    for _ in 0..20 {
        let x = sphere_sample(&mut rng, 3);
        assert!(close(a.gauge(&x).unwrap(), b.gauge(&x).unwrap(), 1e-9));
        assert!(close(a.support(&x).unwrap(), b.support(&x).unwrap(), 1e-9));
    }
}

#[test]
fn identity_and_scaling_maps() {
    let k = random_polytope(71, 3);
    let u = [0.3, -0.1, 0.9];
    let id = k.linear_image(&Matrix::identity(3, 3)).unwrap();
    assert!(close(id.support(&u).unwrap(), k.support(&u).unwrap(), 1e-12));
    let two = k.scale(2.0).unwrap();
    assert!(close(two.support(&u).unwrap(), 2.0 * k.support(&u).unwrap(), 1e-12));
    assert!(k.linear_image(&Matrix::zeros(3, 3)).is_err());
}

#[test]
fn translation_oracles() {
    let b = ConvexBody::ball(2, 1.0).unwrap();
    let t = b.translate(&[0.5, 0.0]).unwrap();
    assert!(close(t.support(&[1.0, 0.0]).unwrap(), 1.5, 1e-12));
    assert!(close(t.gauge(&[1.5, 0.0]).unwrap(), 1.0, 1e-12));
    assert!(close(t.gauge(&[-0.5, 0.0]).unwrap(), 1.0, 1e-12));
    assert!(close(t.chord(&[0.0, 0.0], &[0.0, 1.0]).unwrap(), 0.75f64.sqrt(), 1e-12));
    assert!(b.translate(&[1.0, 0.0]).is_err());
}

#[test]
fn derived_nodes_agree_across_dual_routes() {
    // Non-polyhedral and non-symmetric: oracles go through minimization.
    let e = ConvexBody::ellipsoid(Matrix::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 0.5])).unwrap();
    let k = e.translate(&[0.4, -0.2]).unwrap();
    let out_gauge = k.outer_reg().unwrap();
    let polar_in = k.polar().unwrap().inner_reg().unwrap();
    let mut rng = RngStream::new(81).rng();
    for _ in 0..10 {
        let x = sphere_sample(&mut rng, 2);
        assert!(close(out_gauge.gauge(&x).unwrap(), polar_in.support(&x).unwrap(), 1e-7));
    }
}

#[test]
fn difference_body_of_triangle() {
    let t = ConvexBody::vpolytope(vec![vec![2.0, -1.0], vec![-1.0, 2.0], vec![-1.0, -1.0]]).unwrap();
    let d = t.difference_body().unwrap();
    // T - T is the hexagon with vertices ±(3,-3), ±(3,0), ±(0,3).
    let hex = ConvexBody::vpolytope(vec![
        vec![3.0, -3.0],
        vec![-3.0, 3.0],
        vec![3.0, 0.0],
        vec![-3.0, 0.0],
        vec![0.0, 3.0],
        vec![0.0, -3.0],
    ])
    .unwrap();
    for u in [[1.0, 0.0], [0.3, 0.7], [-0.5, 0.2]] {
        assert!(close(d.gauge(&u).unwrap(), hex.gauge(&u).unwrap(), 1e-9));
    }
}

#[test]
fn degenerate_inputs_are_rejected() {
    assert!(matches!(
        ConvexBody::vpolytope(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]),
        Err(Error::DegenerateBody(_)) | Err(Error::Lp(_))
    ));
    assert!(ConvexBody::vpolytope(vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![2.0, 0.0]]).is_err());
    assert!(ConvexBody::ball(2, 0.0).is_err());
}

#[test]
fn radii_certificates_hold() {
    let k = random_polytope(91, 4);
    let r = k.radii();
    let mut rng = RngStream::new(92).rng();
    for _ in 0..100 {
        let u = sphere_sample(&mut rng, 4);
        let h = k.support(&u).unwrap();
        assert!(r.inner <= h + 1e-12 && h <= r.outer + 1e-12);
    }
    let p = k.polar().unwrap();
    assert!(close(p.radii().inner * r.outer, 1.0, 1e-12));
}

#[test]
fn closed_form_bodies_match_polytopes() {
    let cube = ConvexBody::cube(3, 1.0).unwrap();
    let cube_v = ConvexBody::vpolytope(
        (0..8).map(|m| (0..3).map(|i| if m >> i & 1 == 1 { 1.0 } else { -1.0 }).collect()).collect(),
    )
    .unwrap();
    let mut rng = RngStream::new(101).rng();
    for _ in 0..20 {
        let u = sphere_sample(&mut rng, 3);
        assert!(close(cube.support(&u).unwrap(), cube_v.support(&u).unwrap(), 1e-9));
        assert!(close(cube.gauge(&u).unwrap(), cube_v.gauge(&u).unwrap(), 1e-9));
        assert!(close(cube.lifted_route().gauge(&u).unwrap(), cube.gauge(&u).unwrap(), 1e-9));
    }
}
