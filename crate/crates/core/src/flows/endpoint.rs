//! Division map with a special rule for the last vertex.

use serde::{Deserialize, Serialize};

use super::{observe, require_closed, FlowError, StepOutcome};
use crate::error::CurveError;
use crate::polygon::Polygon;

/// Rule for the last vertex `r_{p-1}`; all others move to `(1-c) r_i + c r_{i+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum EndpointRule {
    /// `r_{p-1} -> c (r_0 + r_{p-1})`.
    #[default]
    Verbatim,
    /// `r_{p-1} -> (1-c) r_{p-1} + c r_0`, i.e. the plain division map.
    ConvexCombination,
}

pub fn endpoint_flow_step(polygon: &Polygon, c: f64, rule: EndpointRule) -> Result<StepOutcome, FlowError> {
    require_closed(polygon)?;
    if !(c > 0.0 && c < 1.0) {
        return Err(FlowError::InvalidParameter(format!("c = {c} must lie in (0, 1)")));
    }
    let p = polygon.len();
    if p < 4 {
        return Err(CurveError::TooFewVertices { required: 4, actual: p }.into());
    }
    let mut verts: Vec<_> = (0..p as isize).map(|i| polygon.vertex(i) * (1.0 - c) + polygon.vertex(i + 1) * c).collect();
    if rule == EndpointRule::Verbatim {
        verts[p - 1] = (polygon.vertex(0) + polygon.vertex(p as isize - 1)) * c;
    }
    let next = polygon.with_vertices(verts);
    let observed = observe(&next)?;
    Ok(StepOutcome { polygon: next, predicted: None, observed, coefficients: None, warnings: Vec::new() })
}
