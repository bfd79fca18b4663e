//! Pentagram map and its inverse on convex planar polygons.
//!
//! Forward: the new vertex `k` is the intersection of the diagonals
//! `r_k r_{k+2}` and `r_{k-1} r_{k+1}`. Inverse: the new vertex `k` is the
//! intersection of the lines through edges `t_{k-1}` and `t_{k+1}`.

use serde::{Deserialize, Serialize};

use super::{observe, require_closed, wrap, FlowCoefficients, FlowError, StepOutcome};
use crate::convexity::convexity_check;
use crate::error::CurveError;
use crate::invariants::{compute_signature, Signature, VertexInvariants};
use crate::polygon::{Dim, Polygon};

/// Division ratios locating the new vertex.
///
/// Forward: `r' = r_k + λ (r_{k+2} − r_k) = r_{k-1} + λ̄ (r_{k+1} − r_{k-1})`.
/// Inverse: `r' = r_k + λ (r_k − r_{k-1}) = r_{k+1} + μ (r_{k+2} − r_{k+1})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PentagramRatios {
    pub lambda: f64,
    pub lambda_bar: Option<f64>,
    pub mu: Option<f64>,
}

const DENOMINATOR_FLOOR: f64 = 1e-12;

pub fn pentagram_ratios(inv: &VertexInvariants) -> PentagramRatios {
    let d = 1.0 + inv.kappa + inv.kappa_bar;
    PentagramRatios { lambda: 1.0 / d, lambda_bar: Some((1.0 + inv.kappa_bar) / d), mu: None }
}

pub fn inverse_pentagram_ratios(inv: &VertexInvariants) -> PentagramRatios {
    PentagramRatios { lambda: inv.kappa / inv.kappa_bar, lambda_bar: None, mu: Some(-1.0 / inv.kappa_bar) }
}

/// Tangent-flow coefficients of the forward map; `α_k − β_k = 1`.
pub fn pentagram_coefficients(signature: &Signature) -> FlowCoefficients {
    let (alphas, betas) = signature
        .entries
        .iter()
        .map(|e| {
            let d = 1.0 + e.kappa + e.kappa_bar;
            ((1.0 + e.kappa_bar) / d, -e.kappa / d)
        })
        .unzip();
    FlowCoefficients { alphas, betas }
}

/// Tangent-flow coefficients of the inverse map: `α = 0`, `β = κ/κ̄`.
pub fn inverse_pentagram_coefficients(signature: &Signature) -> FlowCoefficients {
    FlowCoefficients { alphas: vec![0.0; signature.len()], betas: signature.entries.iter().map(|e| e.kappa / e.kappa_bar).collect() }
}

fn check_input(polygon: &Polygon) -> Result<Signature, FlowError> {
    require_closed(polygon)?;
    if polygon.dim() != Dim::Two {
        return Err(CurveError::WrongDimension { expected: 2, found: 3 }.into());
    }
    if polygon.len() < 5 {
        return Err(CurveError::TooFewVertices { required: 5, actual: polygon.len() }.into());
    }
    if !convexity_check(polygon)?.is_convex {
        return Err(FlowError::NotConvex);
    }
    Ok(compute_signature(polygon)?)
}

/// Closed-form signature of the forward image.
pub fn predict_pentagram(signature: &Signature) -> Signature {
    let p = signature.len();
    let at = |j: isize| signature.entries[wrap(j, p)];
    let s = |e: VertexInvariants| 1.0 + e.kappa + e.kappa_bar;
    let entries = (0..p as isize)
        .map(|n| {
            let kappa_bar = s(at(n + 1)) * (1.0 + at(n + 2).kappa_bar) / s(at(n + 2)) - 1.0;
            let e = at(n);
            let kappa = e.kappa / ((1.0 + e.kappa_bar) - s(e) / s(at(n - 1))) * kappa_bar;
            VertexInvariants::planar(kappa, kappa_bar)
        })
        .collect();
    Signature { entries, ..signature.clone() }
}

/// Closed-form signature of the inverse image.
pub fn predict_inverse_pentagram(signature: &Signature) -> Signature {
    let p = signature.len();
    let at = |j: isize| signature.entries[wrap(j, p)];
    let entries = (0..p as isize)
        .map(|n| {
            let (em, e, e1, e2) = (at(n - 1), at(n), at(n + 1), at(n + 2));
            let num = e.kappa_bar + e.kappa_bar * e2.kappa / e2.kappa_bar + 1.0;
            let den = e1.kappa * em.kappa_bar + e1.kappa_bar * (em.kappa_bar + 1.0);
            VertexInvariants::planar(e1.kappa * em.kappa_bar * num / den, e1.kappa_bar * (em.kappa_bar + 1.0) * num / den - 1.0)
        })
        .collect();
    Signature { entries, ..signature.clone() }
}

/// Forward pentagram map on a convex polygon with at least five vertices.
pub fn pentagram_step(polygon: &Polygon) -> Result<StepOutcome, FlowError> {
    let signature = check_input(polygon)?;
    let mut verts = Vec::with_capacity(polygon.len());
    for (k, e) in signature.entries.iter().enumerate() {
        if !((1.0 + e.kappa + e.kappa_bar).abs() > DENOMINATOR_FLOOR) {
            return Err(FlowError::DenominatorVanishes(k));
        }
        let lambda = pentagram_ratios(e).lambda;
        let i = k as isize;
        verts.push(polygon.vertex(i) + (polygon.vertex(i + 2) - polygon.vertex(i)) * lambda);
    }
    let next = polygon.with_vertices(verts);
    let observed = observe(&next)?;
    let mut warnings = Vec::new();
    if let Some(k) = observed.entries.iter().position(|e| !(e.kappa_bar > 0.0)) {
        warnings.push(format!("image has non-positive second curvature at vertex {k}"));
    }
    Ok(StepOutcome {
        polygon: next,
        predicted: Some(predict_pentagram(&signature)),
        observed,
        coefficients: Some(pentagram_coefficients(&signature)),
        warnings,
    })
}

/// Inverse pentagram map `r_k -> r_k + (κ_k/κ̄_k) t_{k-1}` on a convex polygon.
pub fn inverse_pentagram_step(polygon: &Polygon) -> Result<StepOutcome, FlowError> {
    let signature = check_input(polygon)?;
    if let Some(k) = signature.entries.iter().position(|e| !(e.kappa_bar.abs() > DENOMINATOR_FLOOR)) {
        return Err(FlowError::ZeroKappaBar(k));
    }
    let mut warnings = Vec::new();
    if let Some(k) = signature.entries.iter().position(|e| !(e.kappa_bar > 0.0)) {
        warnings.push(format!("second curvature is not positive at vertex {k}; the image may not be convex"));
    }
    let verts = signature
        .entries
        .iter()
        .enumerate()
        .map(|(k, e)| polygon.vertex(k as isize) + polygon.edge(k as isize - 1) * inverse_pentagram_ratios(e).lambda)
        .collect();
    let next = polygon.with_vertices(verts);
    let observed = observe(&next)?;
    Ok(StepOutcome {
        polygon: next,
        predicted: Some(predict_inverse_pentagram(&signature)),
        observed,
        coefficients: Some(inverse_pentagram_coefficients(&signature)),
        warnings,
    })
}
