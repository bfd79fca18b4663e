//! Discrete centroaffine geometry of polygons.
//!
//! Per-vertex curvatures and torsion, reconstruction from invariants,
//! closure and convexity checks, polygon flows and affine matching.

// `!(x > y)` comparisons deliberately treat NaN as failing.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::type_complexity)]

pub mod chain;
pub mod constant;
pub mod convexity;
pub mod equivalence;
pub mod error;
pub mod flows;
pub mod invariants;
pub mod io;
pub mod polygon;
pub mod random;
pub mod reproduce;
pub mod tolerance;

pub use chain::{
    closure_check, inverse_transition_matrix, reconstruct, reconstruct_closed, transition_matrix, ClosureReport, Direction, Seed,
    TransitionMatrix,
};
pub use constant::{classify_constant, generate_constant_curve, generate_constant_space, generate_regular, ClosureKind, ClosureSpec};
pub use convexity::{convexity_check, ConvexityDiagnostic, ConvexityReport};
pub use equivalence::{match_polygons, signature_distance, AffineMap, MatchMode, MatchOptions, MatchReport};
pub use error::CurveError;
pub use flows::{stability_probe, FlowError, FlowKind, FlowSpec, ProbeOptions, StabilityReport};
pub use invariants::{compute_signature, is_planar, Signature, VertexInvariants};
pub use polygon::{Dim, Polygon};
