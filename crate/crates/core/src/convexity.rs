use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::CurveError;
use crate::invariants::invariants_at;
use crate::polygon::{det2, Dim, Polygon};
use crate::tolerance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ConvexityDiagnostic {
    /// Denominator determinant vanishes at this vertex.
    Inadmissible(usize),
    /// `κ ≤ 0` at this vertex.
    NonPositiveKappa(usize),
    /// Edge pair that crosses or touches (indices of the first vertex of each edge).
    Crossing(usize, usize),
    /// Adjacent edges fold back onto each other at this vertex.
    Fold(usize),
    /// Convex but `κ̄ ≤ −1` at this vertex.
    KappaBarBelowMinusOne(usize),
    /// Convex with more than two vertices having `κ̄ ≤ 0`.
    TooManyNonPositiveKappaBar(Vec<usize>),
    /// Convex with two non-adjacent vertices having `κ̄ ≤ 0`.
    NonAdjacentNonPositiveKappaBar(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub is_simple: bool,
    pub is_convex: bool,
    pub diagnostics: Vec<ConvexityDiagnostic>,
}

impl ConvexityReport {
    /// Violations of the curvature sign pattern every convex polygon must obey.
    pub fn pattern_violations(&self) -> impl Iterator<Item = &ConvexityDiagnostic> {
        self.diagnostics.iter().filter(|d| {
            matches!(
                d,
                ConvexityDiagnostic::KappaBarBelowMinusOne(_)
                    | ConvexityDiagnostic::TooManyNonPositiveKappaBar(_)
                    | ConvexityDiagnostic::NonAdjacentNonPositiveKappaBar(..)
            )
        })
    }
}

fn sign(x: f64, eps: f64) -> i8 {
    if x > eps {
        1
    } else if x < -eps {
        -1
    } else {
        0
    }
}

fn orient(a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>) -> f64 {
    det2(&(b - a), &(c - a))
}

fn within_box(a: &Vector3<f64>, b: &Vector3<f64>, p: &Vector3<f64>, eps: f64) -> bool {
    p.x >= a.x.min(b.x) - eps && p.x <= a.x.max(b.x) + eps && p.y >= a.y.min(b.y) - eps && p.y <= a.y.max(b.y) + eps
}

/// Closed-segment intersection test with a tolerance on the orientation predicate.
pub fn segments_intersect(a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>, d: &Vector3<f64>, eps: f64) -> bool {
    let o1 = sign(orient(a, b, c), eps);
    let o2 = sign(orient(a, b, d), eps);
    let o3 = sign(orient(c, d, a), eps);
    let o4 = sign(orient(c, d, b), eps);
    let lin = eps.sqrt();
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && within_box(a, b, c, lin))
        || (o2 == 0 && within_box(a, b, d, lin))
        || (o3 == 0 && within_box(c, d, a, lin))
        || (o4 == 0 && within_box(c, d, b, lin))
}

/// Simplicity (pairwise edge test) and convexity (simple with all `κ > 0`)
/// of a closed planar polygon, plus sign-pattern diagnostics of `κ̄`.
pub fn convexity_check(polygon: &Polygon) -> Result<ConvexityReport, CurveError> {
    if !polygon.is_closed() {
        return Err(CurveError::NotClosed);
    }
    if polygon.dim() != Dim::Two {
        return Err(CurveError::WrongDimension { expected: 2, found: 3 });
    }
    let n = polygon.len();
    let eps = polygon.degeneracy_tolerance(tolerance::DEGENERACY_RELATIVE);
    let mut diagnostics = Vec::new();

    let mut is_simple = true;
    for i in 0..n {
        let (a, b) = (polygon.vertex(i as isize), polygon.vertex(i as isize + 1));
        // fold-back of consecutive edges
        let next = polygon.edge(i as isize + 1);
        if sign(det2(&(b - a), &next), eps) == 0 && (b - a).dot(&next) < 0.0 {
            is_simple = false;
            diagnostics.push(ConvexityDiagnostic::Fold((i + 1) % n));
        }
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (c, d) = (polygon.vertex(j as isize), polygon.vertex(j as isize + 1));
            if segments_intersect(&a, &b, &c, &d, eps) {
                is_simple = false;
                diagnostics.push(ConvexityDiagnostic::Crossing(i, j));
            }
        }
    }

    let mut invariants = Vec::with_capacity(n);
    let mut all_positive = true;
    for k in 0..n {
        match invariants_at(polygon, k as isize, eps) {
            Some(inv) => {
                if !(inv.kappa > 0.0) {
                    all_positive = false;
                    diagnostics.push(ConvexityDiagnostic::NonPositiveKappa(k));
                }
                invariants.push(inv);
            }
            None => {
                all_positive = false;
                diagnostics.push(ConvexityDiagnostic::Inadmissible(k));
            }
        }
    }
    let is_convex = is_simple && all_positive;

    if is_convex && n > 3 {
        let parallelogram = n == 4 && invariants.iter().all(|e| e.kappa_bar.abs() < tolerance::SIGNATURE);
        if !parallelogram {
            let nonpos: Vec<usize> = (0..n).filter(|&k| invariants[k].kappa_bar <= 0.0).collect();
            for (k, e) in invariants.iter().enumerate() {
                if e.kappa_bar <= -1.0 {
                    diagnostics.push(ConvexityDiagnostic::KappaBarBelowMinusOne(k));
                }
            }
            if nonpos.len() > 2 {
                diagnostics.push(ConvexityDiagnostic::TooManyNonPositiveKappaBar(nonpos));
            } else if let [a, b] = nonpos[..] {
                if (b - a) % n != 1 && (a + n - b) % n != 1 {
                    diagnostics.push(ConvexityDiagnostic::NonAdjacentNonPositiveKappaBar(a, b));
                }
            }
        }
    }

    Ok(ConvexityReport { is_simple, is_convex, diagnostics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constant::generate_regular;

    #[test]
    fn regular_and_star() {
        let hept = convexity_check(&generate_regular(7, 1).unwrap()).unwrap();
        assert!(hept.is_convex && hept.diagnostics.is_empty());
        let star = convexity_check(&generate_regular(5, 2).unwrap()).unwrap();
        assert!(!star.is_simple && !star.is_convex);
    }

    #[test]
    fn reflex_quadrilateral() {
        let q = Polygon::planar(&[[0.0, 0.0], [4.0, 0.0], [1.0, 1.0], [0.0, 4.0]]).unwrap();
        let r = convexity_check(&q).unwrap();
        assert!(r.is_simple);
        assert!(!r.is_convex);
        assert!(r.diagnostics.iter().any(|d| matches!(d, ConvexityDiagnostic::NonPositiveKappa(_))));
    }

    #[test]
    fn bow_tie_is_not_simple() {
        let q = Polygon::planar(&[[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        let r = convexity_check(&q).unwrap();
        assert!(!r.is_simple);
        assert!(r.diagnostics.contains(&ConvexityDiagnostic::Crossing(0, 2)));
    }

    #[test]
    fn wrong_kind_of_polygon() {
        let p = generate_regular(5, 1).unwrap();
        assert_eq!(convexity_check(&p.lifted(1.0)), Err(CurveError::WrongDimension { expected: 2, found: 3 }));
        let open = Polygon::new(Dim::Two, p.vertices().to_vec(), false).unwrap();
        assert_eq!(convexity_check(&open), Err(CurveError::NotClosed));
    }
}
