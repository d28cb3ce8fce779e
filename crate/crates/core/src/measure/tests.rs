use super::*;
use crate::body::simplex::{regular_simplex, regular_simplex_volume};
use crate::body::ConvexBody;
use crate::config::{Config, Exec};
use crate::numerics::linalg::{Matrix, Subspace};
use crate::numerics::minimize::{minimize_convex, MinimizeOptions};
use crate::numerics::special::unit_ball_volume;
use std::f64::consts::PI;

fn cfg(directions: usize) -> Config {
    Config::default().with_directions(directions)
}

/// Within `z` standard errors plus a small absolute slack.
fn within(e: &Estimate, truth: f64, z: f64) -> bool {
    (e.value - truth).abs() <= z * e.stderr + 1e-12 * (1.0 + truth.abs())
}

#[test]
fn ball_volume_radius_is_exact() {
    let b = ConvexBody::ball(5, 1.7).unwrap();
    let v = vrad(&b, &cfg(2000), RngStream::new(1)).unwrap();
    assert!((v.value - 1.7).abs() < 1e-12);
    assert!(v.stderr < 1e-12);
}

#[test]
fn square_volume_radius() {
    let c = ConvexBody::cube(2, 1.0).unwrap();
    let v = vrad(&c, &cfg(40000), RngStream::new(2)).unwrap();
    assert!(within(&v, 2.0 / PI.sqrt(), 5.0), "{v:?}");
    assert!(v.stderr < 5e-3);
}

#[test]
fn simplex_volume() {
    let s = regular_simplex(3).unwrap();
    let v = volume(&s, &cfg(40000), RngStream::new(3)).unwrap();
    assert!(within(&v, regular_simplex_volume(3), 5.0), "{v:?}");
}

#[test]
fn one_dimensional_volume_is_exact() {
    let k = ConvexBody::vpolytope(vec![vec![-0.5], vec![2.0]]).unwrap();
    let v = volume(&k, &cfg(10), RngStream::new(4)).unwrap();
    assert_eq!(v.method, Method::Exact);
    assert!((v.value - 2.5).abs() < 1e-12);
}

#[test]
fn mean_width_and_gauge() {
    let b = ConvexBody::ball(4, 1.0).unwrap();
    assert!((mean_width(&b, &cfg(1000), RngStream::new(5)).unwrap().value - 1.0).abs() < 1e-12);
    assert!((mean_gauge(&b, &cfg(1000), RngStream::new(5)).unwrap().value - 1.0).abs() < 1e-12);
    let c = ConvexBody::cube(2, 1.0).unwrap();
    let w = mean_width(&c, &cfg(40000), RngStream::new(6)).unwrap();
    assert!(within(&w, 4.0 / PI, 5.0), "{w:?}");
    let k = ConvexBody::cross_polytope(3, 1.0).unwrap();
    let m = mean_gauge(&k, &cfg(20000), RngStream::new(7)).unwrap();
    let ms = mean_width(&k, &cfg(20000), RngStream::new(7)).unwrap();
    assert!(m.value * ms.value >= 1.0);
}

#[test]
fn estimates_are_reproducible_across_exec_modes() {
    let k = ConvexBody::cross_polytope(3, 1.0).unwrap();
    let a = vrad(&k, &cfg(5000).with_exec(Exec::Parallel), RngStream::new(8)).unwrap();
    let b = vrad(&k, &cfg(5000).with_exec(Exec::Sequential), RngStream::new(8)).unwrap();
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
}

#[test]
fn hit_and_run_cube_moments() {
    let c = ConvexBody::cube(3, 1.0).unwrap();
    let config = cfg(20000);
    let bar = barycenter(&c, &config, RngStream::new(9)).unwrap();
    for (v, s) in bar.value.iter().zip(&bar.stderr) {
        assert!(v.abs() <= 5.0 * s + 1e-3, "{bar:?}");
    }
    let cov = covariance(&c, &config, RngStream::new(10)).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let truth = if i == j { 1.0 / 3.0 } else { 0.0 };
            assert!((cov.value[(i, j)] - truth).abs() <= 5.0 * cov.stderr[(i, j)] + 2e-3, "{cov:?}");
        }
    }
}

#[test]
fn radial_and_hit_and_run_barycenters_agree() {
    let t = ConvexBody::vpolytope(vec![vec![-1.0, -1.0], vec![2.0, -1.0], vec![-1.0, 1.5]]).unwrap();
    let config = cfg(40000);
    let r = radial_moments(&t, &config, RngStream::new(11)).unwrap();
    let h = barycenter(&t, &config, RngStream::new(12)).unwrap();
    let truth = [0.0, -1.0 / 6.0];
    for i in 0..2 {
        let se = r.barycenter.stderr[i].hypot(h.stderr[i]);
        assert!((r.barycenter.value[i] - h.value[i]).abs() <= 5.0 * se + 1e-3);
        assert!((r.barycenter.value[i] - truth[i]).abs() <= 5.0 * r.barycenter.stderr[i] + 1e-3);
    }
}

#[test]
fn isotropic_constant_of_cube() {
    let c = ConvexBody::cube(3, 1.0).unwrap();
    let skew = Matrix::from_row_slice(3, 3, &[2.0, 0.3, 0.0, 0.0, 1.0, 0.5, 0.1, 0.0, 0.7]);
    let k = c.linear_image(&skew).unwrap().translate(&[0.1, -0.2, 0.05]).unwrap();
    let (iso, rep) = isotropic_normalize(&k, &cfg(40000), RngStream::new(13)).unwrap();
    let l = 1.0 / 12f64.sqrt();
    assert!((rep.l_k - l).abs() < 0.02 * l, "{rep:?}");
    assert!(rep.converged, "{rep:?}");
    let v = volume(&iso, &cfg(40000), RngStream::new(14)).unwrap();
    assert!((v.value - 1.0).abs() < 0.03, "{v:?}");
}

#[test]
fn santalo_point_of_symmetric_body_is_origin() {
    let k = ConvexBody::cross_polytope(3, 1.0).unwrap();
    let r = santalo_point(&k, &cfg(20000), RngStream::new(15)).unwrap();
    assert!(r.converged);
    for (z, s) in r.point.iter().zip(&r.stderr) {
        assert!(z.abs() <= 5.0 * s + 1e-3, "{r:?}");
    }
}

/// Exact area of `(P - z)°` for a polygon `P = {a_i · x <= b_i}`.
fn polar_area(facets: &[([f64; 2], f64)], z: &[f64]) -> f64 {
    let mut pts: Vec<[f64; 2]> = facets
        .iter()
        .map(|(a, b)| {
            let s = b - a[0] * z[0] - a[1] * z[1];
            [a[0] / s, a[1] / s]
        })
        .collect();
    pts.sort_by(|p, q| p[1].atan2(p[0]).total_cmp(&q[1].atan2(q[0])));
    let m = pts.len();
    0.5 * (0..m).map(|i| pts[i][0] * pts[(i + 1) % m][1] - pts[(i + 1) % m][0] * pts[i][1]).sum::<f64>()
}

#[test]
fn santalo_point_of_quadrilateral_matches_exact_polar_areas() {
    let facets = [([0.0, -1.0], 1.0), ([1.0, 0.0], 2.0), ([1.0, 1.0], 2.0), ([-1.0, 0.5], 1.0)];
    let rows: Vec<Vec<f64>> = facets.iter().map(|(a, b)| vec![a[0] / b, a[1] / b]).collect();
    let k = ConvexBody::hpolytope(rows).unwrap();
    let f = |z: &[f64]| {
        if facets.iter().any(|(a, b)| b - a[0] * z[0] - a[1] * z[1] <= 0.0) {
            f64::INFINITY
        } else {
            polar_area(&facets, z)
        }
    };
    let oracle = minimize_convex(&f, &[vec![0.0, 0.0]], &MinimizeOptions { tol: 1e-14, ..Default::default() }).unwrap();
    let r = santalo_point(&k, &cfg(80000), RngStream::new(16)).unwrap();
    assert!(r.converged);
    for i in 0..2 {
        assert!((r.point[i] - oracle.x[i]).abs() <= 5.0 * r.stderr[i] + 2e-3, "{r:?} vs {:?}", oracle.x);
    }
}

#[test]
fn santalo_point_of_triangle_is_centroid() {
    let t = ConvexBody::vpolytope(vec![vec![-1.0, -1.0], vec![2.0, -1.0], vec![-1.0, 1.5]]).unwrap();
    let r = santalo_point(&t, &cfg(80000), RngStream::new(17)).unwrap();
    let truth = [0.0, -1.0 / 6.0];
    for i in 0..2 {
        assert!((r.point[i] - truth[i]).abs() <= 5.0 * r.stderr[i] + 2e-3, "{r:?}");
    }
}

#[test]
fn first_quermass_average_is_mean_width() {
    // Q_1 averages half the widths of one-dimensional projections.
    let k = ConvexBody::cube(3, 1.0).unwrap();
    let config = cfg(10).with_subspaces(20000);
    let q = aleksandrov_q(&k, 1, &config, RngStream::new(18)).unwrap();
    let w = mean_width(&k, &cfg(20000), RngStream::new(19)).unwrap();
    assert!((q.value - w.value).abs() <= 5.0 * q.stderr.hypot(w.stderr), "{q:?} {w:?}");
}

#[test]
fn quermass_averages_of_ball_and_monotonicity() {
    let b = ConvexBody::ball(4, 1.3).unwrap();
    let config = cfg(200).with_subspaces(8);
    for k in 1..4 {
        let q = aleksandrov_q(&b, k, &config, RngStream::new(20)).unwrap();
        assert!((q.value - 1.3).abs() < 1e-12);
    }
    let c = ConvexBody::cross_polytope(4, 1.0).unwrap();
    let config = cfg(4000).with_subspaces(32);
    let q: Vec<Estimate> = (1..4).map(|k| aleksandrov_q(&c, k, &config, RngStream::new(21)).unwrap()).collect();
    for w in q.windows(2) {
        assert!(w[1].value <= w[0].value + 3.0 * w[0].stderr.hypot(w[1].stderr), "{q:?}");
    }
}

#[test]
fn phi_of_ball_closed_form() {
    let b = ConvexBody::ball(3, 1.0).unwrap();
    let phi = paouris_pivovarov_phi(&b, 2, &cfg(200).with_subspaces(8), RngStream::new(22)).unwrap();
    let truth = unit_ball_volume(3).powf(-1.0 / 3.0) * unit_ball_volume(2).sqrt();
    assert!((phi.estimate.value - truth).abs() < 1e-12);
    assert!((phi.max_summand - 1.0).abs() < 1e-12);
}

#[test]
fn projection_volume_of_cube_onto_coordinate_plane() {
    let c = ConvexBody::cube(3, 1.0).unwrap();
    let h = Subspace::coordinate(3, 2).unwrap();
    let v = vrad_projection(&c, &h, &cfg(40000), RngStream::new(23)).unwrap();
    assert!(within(&v, 2.0 / PI.sqrt(), 5.0), "{v:?}");
    let s = vrad_section(&c, &h, &cfg(40000), RngStream::new(23)).unwrap();
    assert!((s.value - v.value).abs() < 1e-12);
}

#[test]
fn invalid_subspace_dimension() {
    let b = ConvexBody::ball(3, 1.0).unwrap();
    assert!(aleksandrov_q(&b, 3, &cfg(10), RngStream::new(0)).is_err());
    assert!(aleksandrov_q(&b, 0, &cfg(10), RngStream::new(0)).is_err());
}
