//! Numeric thresholds shared across the crate.
//!
//! Every comparison against a threshold goes through one of these constants
//! or through a [`Tolerances`] value built from them.

/// Relative factor for denominator determinants; scaled by `scale^d`.
pub const DEGENERACY_RELATIVE: f64 = 1e-12;

/// Default absolute tolerance for comparing two signatures entrywise.
pub const SIGNATURE: f64 = 1e-6;

/// `||L_1 L_2 ... L_p - E||` below this counts as closed.
pub const CLOSURE: f64 = 1e-8;

/// `|tau|` below this counts as planar.
pub const PLANARITY: f64 = 1e-8;

/// Max-norm difference between consecutive signatures for stability.
pub const STABILITY: f64 = 1e-8;

/// Agreement between a flow's closed-form prediction and recomputation.
pub const CROSS_CHECK: f64 = 1e-8;

/// Per-cell tolerance when comparing against 4-decimal reference values.
pub const TABLE: f64 = 1e-3;

/// Environment variable overriding [`SIGNATURE`].
pub const SIGNATURE_ENV: &str = "CENTROFLOW_TOLERANCE";

/// Tolerances bundle threaded through the higher-level operations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub degeneracy_relative: f64,
    pub signature: f64,
    pub closure: f64,
    pub planarity: f64,
    pub stability: f64,
    pub cross_check: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            degeneracy_relative: DEGENERACY_RELATIVE,
            signature: SIGNATURE,
            closure: CLOSURE,
            planarity: PLANARITY,
            stability: STABILITY,
            cross_check: CROSS_CHECK,
        }
    }
}

impl Tolerances {
    /// Defaults, with the signature tolerance taken from `CENTROFLOW_TOLERANCE`
    /// when it is set to a positive finite number.
    pub fn from_env() -> Self {
        let mut tol = Self::default();
        if let Some(v) = signature_override(std::env::var(SIGNATURE_ENV).ok().as_deref()) {
            tol.signature = v;
        }
        tol
    }
}

fn signature_override(raw: Option<&str>) -> Option<f64> {
    let v: f64 = raw?.trim().parse().ok()?;
    (v.is_finite() && v > 0.0).then_some(v)
}
