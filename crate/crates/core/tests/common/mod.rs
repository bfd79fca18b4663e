//! Brute-force oracles shared by the integration tests. None of these call
//! into the library's own invariant or chain code.

#![allow(dead_code)]

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};

use centroflow::Polygon;

pub fn vertex(p: &Polygon, i: isize) -> Vector3<f64> {
    let n = p.len() as isize;
    p.vertices()[i.rem_euclid(n) as usize]
}

fn cross2(a: Vector3<f64>, b: Vector3<f64>) -> f64 {
    a.x * b.y - a.y * b.x
}

fn det3(a: Vector3<f64>, b: Vector3<f64>, c: Vector3<f64>) -> f64 {
    Matrix3::from_columns(&[a, b, c]).determinant()
}

/// `(κ, κ̄, τ)` at vertex `k` of a closed polygon straight from the
/// determinant ratios.
pub fn invariants_at(p: &Polygon, k: isize) -> [f64; 3] {
    let r = |i: isize| vertex(p, i);
    let t = |i: isize| r(i + 1) - r(i);
    if p.dim().as_usize() == 2 {
        let d = cross2(t(k - 1), t(k));
        [cross2(t(k), t(k + 1)) / d, cross2(t(k - 1), t(k + 1)) / d, 0.0]
    } else {
        let d = det3(r(k - 1), r(k), r(k + 1));
        [det3(r(k), r(k + 1), r(k + 2)) / d, det3(r(k + 1), t(k - 1), t(k + 1)) / d, det3(t(k - 1), t(k), t(k + 1)) / d]
    }
}

pub fn signature(p: &Polygon) -> Vec<[f64; 3]> {
    (0..p.len() as isize).map(|k| invariants_at(p, k)).collect()
}

/// Frame step `(r_{k+1}, r_k, r_{k-1}) -> (r_{k+2}, r_{k+1}, r_k)` as a right factor.
pub fn chain_matrix([kappa, kappa_bar, tau]: [f64; 3]) -> Matrix3<f64> {
    Matrix3::new(1.0 + kappa_bar + tau, 1.0, 0.0, -kappa - kappa_bar, 0.0, 1.0, kappa, 0.0, 0.0)
}

/// Smallest `m ≤ max` with `‖L^m − E‖ < tol`.
pub fn brute_period(l: &Matrix3<f64>, max: usize, tol: f64) -> Option<usize> {
    let mut acc = Matrix3::identity();
    (1..=max).find(|_| {
        acc *= l;
        (acc - Matrix3::identity()).norm() < tol
    })
}

/// Intersection of the lines `a b` and `c d` in the plane.
pub fn line_intersection(a: Vector3<f64>, b: Vector3<f64>, c: Vector3<f64>, d: Vector3<f64>) -> Vector3<f64> {
    let m = Matrix2::new(b.x - a.x, c.x - d.x, b.y - a.y, c.y - d.y);
    let st = m.try_inverse().expect("lines not parallel") * Vector2::new(c.x - a.x, c.y - a.y);
    a + (b - a) * st[0]
}

/// `|a − b| / max(1, |b|)`.
pub fn rel_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

/// Largest scale-aware gap between two signature tables.
pub fn max_rel_gap(a: &[[f64; 3]], b: &[[f64; 3]]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).flat_map(|(x, y)| (0..3).map(move |j| rel_gap(x[j], y[j]))).fold(0.0, f64::max)
}

pub fn lib_rows(s: &centroflow::Signature) -> Vec<[f64; 3]> {
    s.entries.iter().map(|e| [e.kappa, e.kappa_bar, e.tau]).collect()
}

/// Max vertex distance divided by the diameter of `b`.
pub fn polygon_gap(a: &Polygon, b: &Polygon) -> f64 {
    assert_eq!(a.len(), b.len());
    let d = a.vertices().iter().zip(b.vertices()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    d / b.diameter().max(1e-300)
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
