//! Tangent flows `r_k -> r_k + α_k t_k + β_k t_{k-1}` and the fixed-ratio
//! division map `r_k -> (1-α) r_k + α r_{k+1}`.

use nalgebra::{Matrix3, Vector3};

use super::{observe, require_closed, wrap, FlowCoefficients, FlowError, StepOutcome};
use crate::chain::transition_matrix;
use crate::invariants::{compute_signature, Signature, VertexInvariants};
use crate::polygon::Polygon;

/// Transfer matrix `M_n` expressing the new frame at `n` in the old one.
fn transfer_matrix(s: &Signature, c: &FlowCoefficients, n: isize) -> Matrix3<f64> {
    let p = s.len();
    let at = |j: isize| s.entries[wrap(j, p)];
    let al = |j: isize| c.alphas[wrap(j, p)];
    let be = |j: isize| c.betas[wrap(j, p)];
    let (e, em) = (at(n), at(n - 1));
    Matrix3::new(
        1.0 + be(n + 1) + al(n + 1) * (e.tau + e.kappa_bar),
        al(n),
        -be(n - 1) / em.kappa,
        -al(n + 1) * (e.kappa + e.kappa_bar) - be(n + 1),
        be(n) - al(n) + 1.0,
        al(n - 1) + be(n - 1) / em.kappa * (1.0 + em.tau + em.kappa_bar),
        al(n + 1) * e.kappa,
        -be(n),
        1.0 - al(n - 1) - be(n - 1) * em.kappa_bar / em.kappa,
    )
}

/// Relative singularity threshold for `M_n`.
const TRANSFER_SINGULAR: f64 = 1e-12;

/// Predicted signature after a tangent step, evaluated through the transfer
/// matrices: `v = α_{n+2} A M⁻¹ L_n B w_{n+1} + A M⁻¹ L_n (1+β_{n+2}, −β_{n+2}, 0) − e_1`
/// with `v = (τ', κ̄', κ')` and `w = (τ, κ̄, κ)`.
pub fn predict_tangent(signature: &Signature, coeffs: &FlowCoefficients) -> Result<Signature, FlowError> {
    let p = signature.len();
    let a = Matrix3::new(1.0, 1.0, 1.0, 0.0, -1.0, -1.0, 0.0, 0.0, 1.0);
    let b = Matrix3::new(1.0, 1.0, 0.0, 0.0, -1.0, -1.0, 0.0, 0.0, 1.0);
    let mut entries = Vec::with_capacity(p);
    for n in 0..p as isize {
        let m = transfer_matrix(signature, coeffs, n);
        if !(m.determinant().abs() > TRANSFER_SINGULAR * m.norm().powi(3)) {
            return Err(FlowError::SingularTransfer(n as usize));
        }
        let x = m.lu().solve(transition_matrix(&signature.entries[n as usize]).matrix()).ok_or(FlowError::SingularTransfer(n as usize))?;
        let e1 = signature.entries[wrap(n + 1, p)];
        let (al2, be2) = (coeffs.alphas[wrap(n + 2, p)], coeffs.betas[wrap(n + 2, p)]);
        let v = a * x * b * Vector3::new(e1.tau, e1.kappa_bar, e1.kappa) * al2 + a * x * Vector3::new(1.0 + be2, -be2, 0.0) - Vector3::x();
        entries.push(VertexInvariants::new(v[2], v[1], v[0]));
    }
    Ok(Signature { entries, ..signature.clone() })
}

/// One tangent-flow step on a closed polygon.
pub fn tangent_step(polygon: &Polygon, coeffs: &FlowCoefficients) -> Result<StepOutcome, FlowError> {
    require_closed(polygon)?;
    let p = polygon.len();
    for len in [coeffs.alphas.len(), coeffs.betas.len()] {
        if len != p {
            return Err(FlowError::CoefficientCount { expected: p, found: len });
        }
    }
    let signature = compute_signature(polygon)?;
    let predicted = predict_tangent(&signature, coeffs)?;
    let verts = (0..p)
        .map(|k| {
            let (al, be) = (coeffs.alphas[k], coeffs.betas[k]);
            let i = k as isize;
            polygon.vertex(i + 1) * al + polygon.vertex(i) * (1.0 - al + be) - polygon.vertex(i - 1) * be
        })
        .collect();
    let next = polygon.with_vertices(verts);
    let observed = observe(&next)?;
    Ok(StepOutcome { polygon: next, predicted: Some(predicted), observed, coefficients: Some(coeffs.clone()), warnings: Vec::new() })
}

/// Closed-form signature after `r_k -> (1-α) r_k + α r_{k+1}`.
pub fn predict_proportional(signature: &Signature, alpha: f64) -> Signature {
    let p = signature.len();
    let a = alpha;
    let b = 1.0 - a;
    let d = |e: &VertexInvariants, c: f64| c * e.tau + (a - a * a) * e.kappa_bar + a * a * e.kappa + b * b;
    let entries = (0..p)
        .map(|n| {
            let (e, e1) = (&signature.entries[n], &signature.entries[(n + 1) % p]);
            let ratio = d(e1, a * b * b) / d(e, a * b * b);
            let kappa = e.kappa * ratio;
            let kappa_bar = (e.kappa_bar + a / b * e.kappa) * ratio - a / b * e1.kappa;
            let tau = ((a - a * a) * e.kappa_bar + a * a * e.kappa + b * b) / (a * (a - 1.0)) * ratio - d(e1, a * b) / (a * (a - 1.0));
            VertexInvariants::new(kappa, kappa_bar, tau)
        })
        .collect();
    Signature { entries, ..signature.clone() }
}

/// One division step with ratio `α ∈ (0, 1)`.
pub fn proportional_step(polygon: &Polygon, alpha: f64) -> Result<StepOutcome, FlowError> {
    require_closed(polygon)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(FlowError::InvalidParameter(format!("alpha = {alpha} must lie in (0, 1)")));
    }
    let p = polygon.len();
    let signature = compute_signature(polygon)?;
    let verts = (0..p as isize).map(|k| polygon.vertex(k) * (1.0 - alpha) + polygon.vertex(k + 1) * alpha).collect();
    let next = polygon.with_vertices(verts);
    let observed = observe(&next)?;
    Ok(StepOutcome {
        polygon: next,
        predicted: Some(predict_proportional(&signature, alpha)),
        observed,
        coefficients: Some(FlowCoefficients::constant(p, alpha, 0.0)),
        warnings: Vec::new(),
    })
}
