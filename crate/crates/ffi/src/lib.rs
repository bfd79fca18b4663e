//! C ABI over `centroflow`.
//!
//! Polygons and signatures are opaque heap handles owned by the caller and
//! released with the matching `*_free`. Every fallible call returns a
//! [`CfStatus`]; on failure the message is available from
//! [`cf_last_error_message`] on the same thread. Panics never cross the
//! boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use centroflow::flows::{EndpointRule, FlowCoefficients, FlowError, FlowSpec, TransversalRecipe};
use centroflow::{
    closure_check, compute_signature, generate_regular, match_polygons, CurveError, Dim, MatchMode, MatchOptions, Polygon, Signature,
};

/// Opaque polygon handle.
pub struct CfPolygon(Polygon);

/// Opaque signature handle.
pub struct CfSignature(Signature);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// A determinant vanished: the polygon is not admissible.
    Degenerate = 3,
    /// The flow cannot be applied to this polygon.
    FlowFailed = 4,
    /// Output buffer too small.
    BufferTooSmall = 5,
    Panic = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfFlowKind {
    /// `param_a` = α in (0, 1).
    Proportional = 0,
    /// Constant coefficients `param_a` = α, `param_b` = β.
    Tangent = 1,
    Pentagram = 2,
    InversePentagram = 3,
    /// `param_a` = c in (0, 1), verbatim last-vertex rule.
    Endpoint = 4,
    /// Planarity-preserving transversal step with the mean-curvature recipe.
    Transversal = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfMatchMode {
    Affine2 = 0,
    Centroaffine3 = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CfInvariants {
    pub kappa: f64,
    pub kappa_bar: f64,
    pub tau: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CfClosure {
    pub is_closed: bool,
    pub matrix_product_defect: f64,
    pub kappa_product: f64,
}

/// The transform maps `P_{i + shift}` to `Q_i`. `linear` is row-major 3×3
/// (the plane uses the top-left 2×2 block).
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CfMatchResult {
    pub matched: bool,
    pub has_transform: bool,
    pub shift: usize,
    pub reversed: bool,
    pub signature_residual: f64,
    pub geometric_residual: f64,
    pub linear: [f64; 9],
    pub translation: [f64; 3],
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

struct Failure(CfStatus, String);

impl From<CurveError> for Failure {
    fn from(e: CurveError) -> Self {
        let status = match e {
            CurveError::DegenerateDeterminant(_) | CurveError::DegenerateSeed { .. } | CurveError::SingularChain(_) => CfStatus::Degenerate,
            _ => CfStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

impl From<FlowError> for Failure {
    fn from(e: FlowError) -> Self {
        match e {
            FlowError::Curve(c) => c.into(),
            other => Failure(CfStatus::FlowFailed, other.to_string()),
        }
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(CfStatus::InvalidArgument, msg.into())
}

/// Run `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CfStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CfStatus::Panic
        }
    }
}

fn flow_kind(kind: u32) -> Result<CfFlowKind, Failure> {
    use CfFlowKind::*;
    [Proportional, Tangent, Pentagram, InversePentagram, Endpoint, Transversal]
        .into_iter()
        .find(|k| *k as u32 == kind)
        .ok_or_else(|| invalid(format!("unknown flow kind {kind}")))
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(CfStatus::NullPointer, format!("{name} is null")))
}

fn non_null_out<T>(out: *const T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(CfStatus::NullPointer, "output pointer is null".into()));
    }
    Ok(())
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(CfStatus::NullPointer, "output pointer is null".into()));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Build a polygon from `n_vertices * dim` row-major coordinates.
///
/// # Safety
/// `coords` must point to `n_vertices * dim` readable doubles and `out` to
/// writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn cf_polygon_new(
    dim: u32,
    coords: *const f64,
    n_vertices: usize,
    closed: bool,
    out: *mut *mut CfPolygon,
) -> CfStatus {
    guard(|| {
        non_null_out(out)?;
        let d = Dim::from_usize(dim as usize).ok_or_else(|| invalid(format!("dimension must be 2 or 3, got {dim}")))?;
        if coords.is_null() {
            return Err(Failure(CfStatus::NullPointer, "coords is null".into()));
        }
        let flat = std::slice::from_raw_parts(coords, n_vertices * dim as usize);
        let rows: Vec<Vec<f64>> = flat.chunks(dim as usize).map(<[f64]>::to_vec).collect();
        store(out, CfPolygon(Polygon::from_rows(d, &rows, closed)?))
    })
}

/// # Safety
/// `polygon` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cf_polygon_free(polygon: *mut CfPolygon) {
    if !polygon.is_null() {
        drop(Box::from_raw(polygon));
    }
}

/// Vertex count; 0 for a null handle.
///
/// # Safety
/// `polygon` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cf_polygon_len(polygon: *const CfPolygon) -> usize {
    polygon.as_ref().map_or(0, |p| p.0.len())
}

/// 2 or 3; 0 for a null handle.
///
/// # Safety
/// `polygon` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cf_polygon_dim(polygon: *const CfPolygon) -> u32 {
    polygon.as_ref().map_or(0, |p| p.0.dim().as_usize() as u32)
}

/// Copy the row-major coordinates into `out`, which holds `capacity` doubles.
///
/// # Safety
/// `polygon` must be a live handle and `out` must point to `capacity` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn cf_polygon_coords(polygon: *const CfPolygon, out: *mut f64, capacity: usize) -> CfStatus {
    guard(|| {
        let p = &deref(polygon, "polygon")?.0;
        if out.is_null() {
            return Err(Failure(CfStatus::NullPointer, "out is null".into()));
        }
        let flat: Vec<f64> = p.coords().into_iter().flatten().collect();
        if capacity < flat.len() {
            return Err(Failure(CfStatus::BufferTooSmall, format!("need {} doubles, got {capacity}", flat.len())));
        }
        ptr::copy_nonoverlapping(flat.as_ptr(), out, flat.len());
        Ok(())
    })
}

/// # Safety
/// `polygon` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_signature_compute(polygon: *const CfPolygon, out: *mut *mut CfSignature) -> CfStatus {
    guard(|| {
        non_null_out(out)?;
        let p = &deref(polygon, "polygon")?.0;
        store(out, CfSignature(compute_signature(p)?))
    })
}

/// # Safety
/// `signature` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cf_signature_len(signature: *const CfSignature) -> usize {
    signature.as_ref().map_or(0, |s| s.0.len())
}

/// Vertex index carried by entry 0 (0 for closed polygons, 1 for open ones).
///
/// # Safety
/// `signature` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cf_signature_offset(signature: *const CfSignature) -> isize {
    signature.as_ref().map_or(0, |s| s.0.offset)
}

/// # Safety
/// `signature` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_signature_get(signature: *const CfSignature, index: usize, out: *mut CfInvariants) -> CfStatus {
    guard(|| {
        non_null_out(out)?;
        let s = &deref(signature, "signature")?.0;
        let e = s.entries.get(index).ok_or_else(|| invalid(format!("index {index} out of range 0..{}", s.len())))?;
        let out = out.as_mut().ok_or_else(|| Failure(CfStatus::NullPointer, "out is null".into()))?;
        *out = CfInvariants { kappa: e.kappa, kappa_bar: e.kappa_bar, tau: e.tau };
        Ok(())
    })
}

/// # Safety
/// `signature` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cf_signature_free(signature: *mut CfSignature) {
    if !signature.is_null() {
        drop(Box::from_raw(signature));
    }
}

/// Treats the signature as cyclic and multiplies its transition matrices.
///
/// # Safety
/// `signature` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_closure_check(signature: *const CfSignature, out: *mut CfClosure) -> CfStatus {
    guard(|| {
        non_null_out(out)?;
        let s = &deref(signature, "signature")?.0;
        let r = closure_check(s);
        let out = out.as_mut().ok_or_else(|| Failure(CfStatus::NullPointer, "out is null".into()))?;
        *out = CfClosure { is_closed: r.is_closed, matrix_product_defect: r.matrix_product_defect, kappa_product: r.kappa_product };
        Ok(())
    })
}

/// One flow step; the new polygon is written to `out`. `kind` is a
/// [`CfFlowKind`] value; anything else is rejected.
///
/// # Safety
/// `polygon` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_flow_step(
    polygon: *const CfPolygon,
    kind: u32,
    param_a: f64,
    param_b: f64,
    out: *mut *mut CfPolygon,
) -> CfStatus {
    guard(|| {
        non_null_out(out)?;
        let p = &deref(polygon, "polygon")?.0;
        let spec = match flow_kind(kind)? {
            CfFlowKind::Proportional => FlowSpec::Proportional { alpha: param_a },
            CfFlowKind::Tangent => FlowSpec::Tangent { coefficients: FlowCoefficients::constant(p.len(), param_a, param_b) },
            CfFlowKind::Pentagram => FlowSpec::Pentagram,
            CfFlowKind::InversePentagram => FlowSpec::InversePentagram,
            CfFlowKind::Endpoint => FlowSpec::Endpoint { c: param_a, rule: EndpointRule::Verbatim },
            CfFlowKind::Transversal => FlowSpec::Transversal { recipe: TransversalRecipe::MeanCurvatures },
        };
        store(out, CfPolygon(spec.step(p)?.polygon))
    })
}

/// Decide whether `q` is an image of `p`. `mode` is a [`CfMatchMode`]
/// value. A completed comparison returns `Ok` whether or not the polygons
/// match; read `matched`.
///
/// # Safety
/// `p` and `q` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_match(
    p: *const CfPolygon,
    q: *const CfPolygon,
    mode: u32,
    allow_reversal: bool,
    out: *mut CfMatchResult,
) -> CfStatus {
    guard(|| {
        non_null_out(out)?;
        let (p, q) = (&deref(p, "p")?.0, &deref(q, "q")?.0);
        let mode = match mode {
            m if m == CfMatchMode::Affine2 as u32 => MatchMode::Affine2,
            m if m == CfMatchMode::Centroaffine3 as u32 => MatchMode::Centroaffine3,
            m => return Err(invalid(format!("unknown match mode {m}"))),
        };
        let options = MatchOptions { allow_reversal, ..MatchOptions::default() };
        let r = match_polygons(p, q, mode, &options).map_err(|e| invalid(e.to_string()))?;
        let out = out.as_mut().ok_or_else(|| Failure(CfStatus::NullPointer, "out is null".into()))?;
        let mut result = CfMatchResult {
            matched: r.matched,
            has_transform: r.transform.is_some(),
            shift: r.shift,
            reversed: r.reversed,
            signature_residual: r.signature_residual,
            geometric_residual: r.geometric_residual,
            ..CfMatchResult::default()
        };
        if let Some(t) = &r.transform {
            let (a, b) = (t.matrix3(), t.translation3());
            for i in 0..3 {
                for j in 0..3 {
                    result.linear[3 * i + j] = a[(i, j)];
                }
                result.translation[i] = b[i];
            }
        }
        *out = result;
        Ok(())
    })
}

/// Regular `p`-gon with winding `l` on the unit circle.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_generate_regular(p: usize, l: usize, out: *mut *mut CfPolygon) -> CfStatus {
    guard(|| store(out, CfPolygon(generate_regular(p, l)?)))
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn cf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cf_version() -> *const c_char {
    const VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version has no interior NUL"),
    };
    VERSION.as_ptr()
}
