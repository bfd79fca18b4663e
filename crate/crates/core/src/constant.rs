//! Curves with the same invariants at every vertex: closure classification
//! and canonical generators.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::chain::{reconstruct_closed, transition_matrix};
use crate::error::CurveError;
use crate::invariants::{Signature, VertexInvariants};
use crate::polygon::{Dim, Polygon};
use crate::tolerance;

pub const DEFAULT_MAX_PERIOD: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClosureKind {
    /// `κ = 1`, winding 1: affinely regular convex polygon.
    PlanarRegular,
    /// `κ = 1`, winding > 1: star polygon with self-intersections.
    PlanarStar,
    /// `κ = −1`, `τ = −2κ̄`.
    Space,
    /// Closes, but outside the two families above.
    Other,
}

/// Closure data of a constant-invariant curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosureSpec {
    pub kappa: f64,
    pub kappa_bar: f64,
    pub tau: f64,
    pub theta: f64,
    pub period: usize,
    pub winding: usize,
    pub planar: bool,
    pub kind: ClosureKind,
    pub eigenvalues: [[f64; 2]; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantClassification {
    /// Roots of `λ³ − (τ+κ̄+1)λ² + (κ+κ̄)λ − κ`, as `(re, im)`, sorted by argument.
    pub eigenvalues: [[f64; 2]; 3],
    pub closure: Option<ClosureSpec>,
}

/// Eigenvalues of the transition matrix built from `inv`.
pub fn chain_eigenvalues(inv: &VertexInvariants) -> [[f64; 2]; 3] {
    let ev = transition_matrix(inv).0.complex_eigenvalues();
    let mut out: Vec<[f64; 2]> = ev.iter().map(|c| [c.re, c.im]).collect();
    out.sort_by(|a, b| a[1].atan2(a[0]).total_cmp(&b[1].atan2(b[0])));
    [out[0], out[1], out[2]]
}

/// Argument of the complex-conjugate eigenvalue pair (largest `|arg|` when all are real).
fn rotation_angle(eigenvalues: &[[f64; 2]; 3]) -> f64 {
    let pair = eigenvalues.iter().max_by(|a, b| a[1].abs().total_cmp(&b[1].abs())).unwrap();
    if pair[1].abs() > 1e-9 {
        pair[1].atan2(pair[0]).abs()
    } else {
        eigenvalues.iter().map(|e| e[1].atan2(e[0]).abs()).fold(0.0, f64::max)
    }
}

/// Smallest `p` in `1..=max_period` with `‖L^p − E‖ < tol`.
pub fn minimal_period(l: &Matrix3<f64>, max_period: usize, tol: f64) -> Option<usize> {
    let mut acc = Matrix3::identity();
    for p in 1..=max_period {
        acc *= l;
        if (acc - Matrix3::identity()).norm() < tol {
            return Some(p);
        }
    }
    None
}

/// Search for the period of the constant curve with invariants `inv`.
///
/// Returns no closure when the minimal period is below 3 (the curve would
/// have fewer than three distinct vertices) or above `max_period`.
pub fn classify_constant(inv: &VertexInvariants, max_period: usize) -> ConstantClassification {
    let eigenvalues = chain_eigenvalues(inv);
    let l = transition_matrix(inv).0;
    let closure = minimal_period(&l, max_period, tolerance::CLOSURE).filter(|&p| p >= 3).map(|period| {
        let theta = rotation_angle(&eigenvalues);
        let winding = (period as f64 * theta / std::f64::consts::TAU).round() as usize;
        let planar = inv.tau.abs() < tolerance::PLANARITY;
        let kind = if planar && (inv.kappa - 1.0).abs() < tolerance::CLOSURE {
            if winding == 1 {
                ClosureKind::PlanarRegular
            } else {
                ClosureKind::PlanarStar
            }
        } else if (inv.kappa + 1.0).abs() < tolerance::CLOSURE && (inv.tau + 2.0 * inv.kappa_bar).abs() < tolerance::CLOSURE {
            ClosureKind::Space
        } else {
            ClosureKind::Other
        };
        ClosureSpec { kappa: inv.kappa, kappa_bar: inv.kappa_bar, tau: inv.tau, theta, period, winding, planar, kind, eigenvalues }
    });
    ConstantClassification { eigenvalues, closure }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Regular `p`-gon with winding `l`: vertices `(cos kθ, sin kθ)`, `θ = 2lπ/p`.
pub fn generate_regular(p: usize, l: usize) -> Result<Polygon, CurveError> {
    if p < 3 || l == 0 || 2 * l >= p || gcd(p, l) != 1 {
        return Err(CurveError::InvalidPeriod { p, l });
    }
    let theta = std::f64::consts::TAU * l as f64 / p as f64;
    let pts: Vec<[f64; 2]> = (0..p).map(|k| [(k as f64 * theta).cos(), (k as f64 * theta).sin()]).collect();
    Polygon::planar(&pts)
}

/// Constant space curve with `κ = −1`, `τ = −2κ̄` closing after `p` steps
/// with winding `l`. The chain has eigenvalue `−1`, so `p` must be even;
/// the remaining pair `e^{±iθ}`, `θ = 2lπ/p`, fixes `κ̄ = 2 − 2cos θ`.
pub fn generate_constant_space(p: usize, l: usize) -> Result<Polygon, CurveError> {
    if p < 4 || !p.is_multiple_of(2) || l == 0 || 2 * l >= p || gcd(p, l) != 1 {
        return Err(CurveError::InvalidPeriod { p, l });
    }
    let kappa_bar = 2.0 - 2.0 * (std::f64::consts::TAU * l as f64 / p as f64).cos();
    generate_constant_curve(&VertexInvariants::new(-1.0, kappa_bar, -2.0 * kappa_bar), p, Dim::Three)
}

/// Closed polygon with constant invariants `inv` and `p` vertices, built
/// from a canonical seed: the unit vectors in space, three points on the
/// unit circle spaced by `arccos(κ̄/2)` in the plane. Errors with
/// [`CurveError::NoClosure`] when the chain does not return to the seed.
pub fn generate_constant_curve(inv: &VertexInvariants, p: usize, dim: Dim) -> Result<Polygon, CurveError> {
    let seed = match dim {
        Dim::Three => [Vector3::x(), Vector3::y(), Vector3::z()],
        Dim::Two => {
            let c = (inv.kappa_bar / 2.0).clamp(-1.0, 1.0);
            let th = c.acos();
            let v = |k: f64| Vector3::new((k * th).cos(), (k * th).sin(), 0.0);
            [v(0.0), v(1.0), v(2.0)]
        }
    };
    let (poly, gap) = reconstruct_closed(&seed, dim, &Signature::constant(*inv, p))?;
    if gap > tolerance::CLOSURE.sqrt() {
        return Err(CurveError::NoClosure { max_period: p });
    }
    Ok(poly)
}
