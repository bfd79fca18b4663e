#ifndef CENTROFLOW_H
#define CENTROFLOW_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CfStatus {
  CF_STATUS_OK = 0,
  CF_STATUS_NULL_POINTER = 1,
  CF_STATUS_INVALID_ARGUMENT = 2,
  /**
   * A determinant vanished: the polygon is not admissible.
   */
  CF_STATUS_DEGENERATE = 3,
  /**
   * The flow cannot be applied to this polygon.
   */
  CF_STATUS_FLOW_FAILED = 4,
  /**
   * Output buffer too small.
   */
  CF_STATUS_BUFFER_TOO_SMALL = 5,
  CF_STATUS_PANIC = 99,
} CfStatus;

typedef enum CfFlowKind {
  /**
   * `param_a` = α in (0, 1).
   */
  CF_FLOW_KIND_PROPORTIONAL = 0,
  /**
   * Constant coefficients `param_a` = α, `param_b` = β.
   */
  CF_FLOW_KIND_TANGENT = 1,
  CF_FLOW_KIND_PENTAGRAM = 2,
  CF_FLOW_KIND_INVERSE_PENTAGRAM = 3,
  /**
   * `param_a` = c in (0, 1), verbatim last-vertex rule.
   */
  CF_FLOW_KIND_ENDPOINT = 4,
  /**
   * Planarity-preserving transversal step with the mean-curvature recipe.
   */
  CF_FLOW_KIND_TRANSVERSAL = 5,
} CfFlowKind;

typedef enum CfMatchMode {
  CF_MATCH_MODE_AFFINE2 = 0,
  CF_MATCH_MODE_CENTROAFFINE3 = 1,
} CfMatchMode;

/**
 * Opaque polygon handle.
 */
typedef struct CfPolygon CfPolygon;

/**
 * Opaque signature handle.
 */
typedef struct CfSignature CfSignature;

typedef struct CfInvariants {
  double kappa;
  double kappa_bar;
  double tau;
} CfInvariants;

typedef struct CfClosure {
  bool is_closed;
  double matrix_product_defect;
  double kappa_product;
} CfClosure;

/**
 * The transform maps `P_{i + shift}` to `Q_i`. `linear` is row-major 3×3
 * (the plane uses the top-left 2×2 block).
 */
typedef struct CfMatchResult {
  bool matched;
  bool has_transform;
  size_t shift;
  bool reversed;
  double signature_residual;
  double geometric_residual;
  double linear[9];
  double translation[3];
} CfMatchResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Build a polygon from `n_vertices * dim` row-major coordinates.
 *
 * # Safety
 * `coords` must point to `n_vertices * dim` readable doubles and `out` to
 * writable storage for one handle.
 */
enum CfStatus cf_polygon_new(uint32_t dim,
                             const double *coords,
                             size_t n_vertices,
                             bool closed,
                             struct CfPolygon **out);

/**
 * # Safety
 * `polygon` must be null or a handle from this library not yet freed.
 */
void cf_polygon_free(struct CfPolygon *polygon);

/**
 * Vertex count; 0 for a null handle.
 *
 * # Safety
 * `polygon` must be null or a live handle.
 */
size_t cf_polygon_len(const struct CfPolygon *polygon);

/**
 * 2 or 3; 0 for a null handle.
 *
 * # Safety
 * `polygon` must be null or a live handle.
 */
uint32_t cf_polygon_dim(const struct CfPolygon *polygon);

/**
 * Copy the row-major coordinates into `out`, which holds `capacity` doubles.
 *
 * # Safety
 * `polygon` must be a live handle and `out` must point to `capacity` writable doubles.
 */
enum CfStatus cf_polygon_coords(const struct CfPolygon *polygon, double *out, size_t capacity);

/**
 * # Safety
 * `polygon` must be a live handle and `out` writable.
 */
enum CfStatus cf_signature_compute(const struct CfPolygon *polygon, struct CfSignature **out);

/**
 * # Safety
 * `signature` must be null or a live handle.
 */
size_t cf_signature_len(const struct CfSignature *signature);

/**
 * Vertex index carried by entry 0 (0 for closed polygons, 1 for open ones).
 *
 * # Safety
 * `signature` must be null or a live handle.
 */
ptrdiff_t cf_signature_offset(const struct CfSignature *signature);

/**
 * # Safety
 * `signature` must be a live handle and `out` writable.
 */
enum CfStatus cf_signature_get(const struct CfSignature *signature,
                               size_t index,
                               struct CfInvariants *out);

/**
 * # Safety
 * `signature` must be null or a handle from this library not yet freed.
 */
void cf_signature_free(struct CfSignature *signature);

/**
 * Treats the signature as cyclic and multiplies its transition matrices.
 *
 * # Safety
 * `signature` must be a live handle and `out` writable.
 */
enum CfStatus cf_closure_check(const struct CfSignature *signature, struct CfClosure *out);

/**
 * One flow step; the new polygon is written to `out`. `kind` is a
 * [`CfFlowKind`] value; anything else is rejected.
 *
 * # Safety
 * `polygon` must be a live handle and `out` writable.
 */
enum CfStatus cf_flow_step(const struct CfPolygon *polygon,
                           uint32_t kind,
                           double param_a,
                           double param_b,
                           struct CfPolygon **out);

/**
 * Decide whether `q` is an image of `p`. `mode` is a [`CfMatchMode`]
 * value. A completed comparison returns `Ok` whether or not the polygons
 * match; read `matched`.
 *
 * # Safety
 * `p` and `q` must be live handles and `out` writable.
 */
enum CfStatus cf_match(const struct CfPolygon *p,
                       const struct CfPolygon *q,
                       uint32_t mode,
                       bool allow_reversal,
                       struct CfMatchResult *out);

/**
 * Regular `p`-gon with winding `l` on the unit circle.
 *
 * # Safety
 * `out` must be writable.
 */
enum CfStatus cf_generate_regular(size_t p, size_t l, struct CfPolygon **out);

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *cf_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cf_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CENTROFLOW_H */
