//! Frozen values checked against hand-derived or brute-force oracles.

mod common;

use std::f64::consts::TAU;

use approx::assert_abs_diff_eq;
use nalgebra::Matrix3;

use centroflow::chain::closure_check;
use centroflow::constant::classify_constant;
use centroflow::flows::{inverse_pentagram_step, pentagram_step, proportional_step};
use centroflow::reproduce::{PARALLEL_OCTAGON, TRANSVERSAL_PENTAGON};
use centroflow::{
    compute_signature, convexity_check, generate_constant_space, generate_regular, match_polygons, ClosureKind, ConvexityDiagnostic,
    CurveError, MatchMode, MatchOptions, Polygon, VertexInvariants,
};
use common::*;

#[test]
fn pentagon_first_curvatures_are_exact_ratios() {
    let s = compute_signature(&Polygon::spatial(&TRANSVERSAL_PENTAGON).unwrap()).unwrap();
    // r_{k-1}, r_k, r_{k+1} determinants worked by hand for vertex 0
    assert_abs_diff_eq!(s.entries[0].kappa, 6.0 / 17.0, epsilon = 1e-15);
    assert_abs_diff_eq!(s.entries[0].kappa_bar, 7.0 / 34.0, epsilon = 1e-15);
    assert_abs_diff_eq!(s.entries[2].kappa, 197.0 / 29.0, epsilon = 1e-13);
    assert!(s.max_abs_tau() < 1e-15);
    assert_eq!(lib_rows(&s), signature(&Polygon::spatial(&TRANSVERSAL_PENTAGON).unwrap()));
}

#[test]
fn square_has_zero_second_curvature() {
    let s = compute_signature(&Polygon::planar(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap()).unwrap();
    for e in &s.entries {
        assert_eq!((e.kappa, e.kappa_bar), (1.0, 0.0));
    }
}

#[test]
fn regular_polygons_have_cosine_curvature() {
    for (p, l) in [(5, 1), (5, 2), (7, 1), (7, 3), (12, 5)] {
        let s = compute_signature(&generate_regular(p, l).unwrap()).unwrap();
        let expected = 2.0 * (TAU * l as f64 / p as f64).cos();
        for e in &s.entries {
            assert_abs_diff_eq!(e.kappa, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(e.kappa_bar, expected, epsilon = 1e-12);
        }
    }
    assert!(matches!(generate_regular(6, 2), Err(CurveError::InvalidPeriod { p: 6, l: 2 })));
}

#[test]
fn triangle_chain_has_order_three() {
    let l = chain_matrix([1.0, -1.0, 0.0]);
    assert_eq!(brute_period(&l, 10, 1e-12), Some(3));
    let lib = centroflow::transition_matrix(&VertexInvariants::planar(1.0, -1.0)).0;
    assert_eq!(lib, l);
    assert_abs_diff_eq!(lib * lib * lib, Matrix3::identity(), epsilon = 1e-15);
}

#[test]
fn open_signature_fails_closure() {
    let open = Polygon::new(
        centroflow::Dim::Two,
        (0..10).map(|k| nalgebra::Vector3::new(k as f64, (k * k) as f64 * 0.1 + (k as f64).sin(), 0.0)).collect(),
        false,
    )
    .unwrap();
    let mut s = compute_signature(&open).unwrap();
    assert_eq!((s.len(), s.offset), (7, 1));
    s.cyclic = true;
    let report = closure_check(&s);
    assert!(!report.is_closed);
    let brute = s.entries.iter().fold(Matrix3::<f64>::identity(), |acc, e| acc * chain_matrix([e.kappa, e.kappa_bar, e.tau]));
    assert_abs_diff_eq!(report.matrix_product_defect, (brute - Matrix3::identity()).norm(), epsilon = 1e-9);
}

#[test]
fn classification_of_known_constants() {
    let hept = classify_constant(&VertexInvariants::planar(1.0, 2.0 * (TAU / 7.0).cos()), 64).closure.unwrap();
    assert_eq!((hept.period, hept.winding, hept.kind), (7, 1, ClosureKind::PlanarRegular));
    let star = classify_constant(&VertexInvariants::planar(1.0, 2.0 * (2.0 * TAU / 5.0).cos()), 64).closure.unwrap();
    assert_eq!((star.period, star.winding, star.kind), (5, 2, ClosureKind::PlanarStar));
    let space = classify_constant(&VertexInvariants::new(-1.0, 1.0, -2.0), 64).closure.unwrap();
    assert_eq!((space.period, space.kind), (6, ClosureKind::Space));
    for e in space.eigenvalues {
        assert_abs_diff_eq!(e[0].hypot(e[1]), 1.0, epsilon = 1e-12);
    }
    assert!(classify_constant(&VertexInvariants::planar(-1.0, 1.0), 64).closure.is_none());
    assert!(classify_constant(&VertexInvariants::planar(1.0, 2.5), 64).closure.is_none());
}

#[test]
fn constant_space_hexagon_is_centrosymmetric() {
    let poly = generate_constant_space(6, 1).unwrap();
    for k in 0..3 {
        assert_abs_diff_eq!(poly.vertex(k + 3), -poly.vertex(k), epsilon = 1e-12);
    }
    let report = closure_check(&compute_signature(&poly).unwrap());
    assert_eq!(report.centrosymmetric, Some(true));
}

#[test]
fn pentagram_of_square_grid_pentagon() {
    // convex pentagon with integer vertices; image vertices from line intersections
    let poly = Polygon::planar(&[[0.0, 0.0], [4.0, 0.0], [5.0, 3.0], [2.0, 5.0], [-1.0, 3.0]]).unwrap();
    let image = pentagram_step(&poly).unwrap().polygon;
    for k in 0..5 {
        let x = line_intersection(vertex(&poly, k), vertex(&poly, k + 2), vertex(&poly, k - 1), vertex(&poly, k + 1));
        assert_abs_diff_eq!(image.vertex(k), x, epsilon = 1e-13);
    }
    // vertex 0 lies on r_0 r_2 (y = 3x/5) and r_4 r_1 (y = -3(x-4)/5): x = 2, y = 6/5
    assert_abs_diff_eq!(image.vertex(0), nalgebra::Vector3::new(2.0, 1.2, 0.0), epsilon = 1e-13);
    let back = inverse_pentagram_step(&image).unwrap().polygon;
    assert!(polygon_gap(&back, &poly.rotated(1)) < 1e-13);
}

#[test]
fn octagon_first_inverse_step() {
    let poly = Polygon::planar(&PARALLEL_OCTAGON).unwrap();
    let s = compute_signature(&inverse_pentagram_step(&poly).unwrap().polygon).unwrap();
    let kappa = [1.5, 7.0 / 6.0, 6.0 / 7.0, 2.0 / 3.0];
    let kappa_bar = [2.0, 4.0 / 3.0, 8.0 / 7.0, 4.0 / 3.0];
    for i in 0..8 {
        assert_abs_diff_eq!(s.entries[i].kappa, kappa[i % 4], epsilon = 1e-12);
        assert_abs_diff_eq!(s.entries[i].kappa_bar, kappa_bar[i % 4], epsilon = 1e-12);
    }
}

#[test]
fn midpoint_step_of_triangle_is_a_triangle() {
    let t = Polygon::planar(&[[0.0, 0.0], [2.0, 0.0], [0.0, 2.0], [-1.0, 1.0]]).unwrap();
    let step = proportional_step(&t, 0.5).unwrap();
    assert_abs_diff_eq!(step.polygon.vertex(0), nalgebra::Vector3::new(1.0, 0.0, 0.0), epsilon = 1e-15);
    assert!(step.cross_check().unwrap() < 1e-12);
}

#[test]
fn convexity_diagnostics() {
    let convex = Polygon::planar(&[[0.0, 0.0], [2.0, 0.0], [3.0, 2.0], [1.0, 3.0], [-1.0, 1.0]]).unwrap();
    let r = convexity_check(&convex).unwrap();
    assert!(r.is_convex && r.is_simple && r.pattern_violations().count() == 0);

    let star = generate_regular(5, 2).unwrap();
    let r = convexity_check(&star).unwrap();
    assert!(!r.is_simple && !r.is_convex);
    assert!(r.diagnostics.iter().any(|d| matches!(d, ConvexityDiagnostic::Crossing(..))));

    let dart = Polygon::planar(&[[0.0, 0.0], [4.0, 0.0], [1.0, 1.0], [0.0, 4.0]]).unwrap();
    let r = convexity_check(&dart).unwrap();
    assert!(r.is_simple && !r.is_convex);
    assert!(r.diagnostics.iter().any(|d| matches!(d, ConvexityDiagnostic::NonPositiveKappa(_))));
}

#[test]
fn unrelated_polygons_do_not_match() {
    let p = Polygon::planar(&[[0.0, 0.0], [3.0, 0.0], [4.0, 2.0], [1.0, 4.0], [-1.0, 2.0]]).unwrap();
    let q = Polygon::planar(&[[0.0, 0.0], [2.0, 0.0], [3.0, 3.0], [1.0, 2.5], [-1.0, 1.0]]).unwrap();
    let report = match_polygons(&p, &q, MatchMode::Affine2, &MatchOptions::default()).unwrap();
    assert!(!report.matched);
    assert!(report.signature_residual > 1e-3);
}
