#ifndef GRASSPOLY_H
#define GRASSPOLY_H

/* Generated by cbindgen from the grasspoly-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes shared by every fallible entry point.
typedef enum GspStatus {
  GSP_STATUS_OK = 0,
  GSP_STATUS_NULL_POINTER = 1,
  GSP_STATUS_INVALID_ARGUMENT = 2,
  GSP_STATUS_DEGENERATE = 3,
  GSP_STATUS_EXHAUSTED = 4,
  GSP_STATUS_OVERFLOW = 5,
} GspStatus;

// Triangle classification, mirroring the library enum.
typedef enum GspTriangleClass {
  GSP_TRIANGLE_CLASS_ACUTE = 0,
  GSP_TRIANGLE_CLASS_RIGHT = 1,
  GSP_TRIANGLE_CLASS_OBTUSE = 2,
  GSP_TRIANGLE_CLASS_DEGENERATE = 3,
} GspTriangleClass;

// Polygon classification, mirroring the library enum.
typedef enum GspPolygonClass {
  GSP_POLYGON_CLASS_CONVEX = 0,
  GSP_POLYGON_CLASS_REFLEX = 1,
  GSP_POLYGON_CLASS_SELF_INTERSECTING = 2,
  GSP_POLYGON_CLASS_DEGENERATE = 3,
} GspPolygonClass;

// Opaque reproducible sample stream; see `gsp_stream_new`.
typedef struct GspStream GspStream;

// Derived triangle quantities. Exradii and circumcurvature are NaN when the
// triangle is degenerate.
typedef struct GspTriangleQuantities {
  double area;
  double inradius;
  double exradius_a;
  double exradius_b;
  double exradius_c;
  double circumcurvature;
  enum GspTriangleClass classification;
} GspTriangleQuantities;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a sample stream keyed by (seed, stream_id). Never fails; free
// with [`gsp_stream_free`].
struct GspStream *gsp_stream_new(uint64_t seed, uint64_t stream_id);

// Releases a stream created by [`gsp_stream_new`]. NULL is a no-op.
//
// # Safety
// `stream` must have come from [`gsp_stream_new`] and not be freed twice.
void gsp_stream_free(struct GspStream *stream);

// Writes the number of samples the stream has emitted.
//
// # Safety
// `stream` and `out_counter` must be valid pointers.
enum GspStatus gsp_stream_counter(const struct GspStream *stream, uint64_t *out_counter);

// Draws a uniform point on S²; writes (x, y, z) to `out_xyz[0..3]`.
//
// # Safety
// `stream` must be a live stream handle; `out_xyz` must point to 3 f64.
enum GspStatus gsp_sample_sphere(struct GspStream *stream, double *out_xyz);

// Draws a uniform frame on V₂(ℝⁿ); writes the two orthonormal columns to
// `out_u[0..n]` and `out_v[0..n]`.
//
// # Safety
// `stream` must be live; `out_u`, `out_v` must each point to n f64.
enum GspStatus gsp_sample_frame(struct GspStream *stream,
                                uintptr_t n,
                                double *out_u,
                                double *out_v);

// Draws a frame and writes its polygon's edges interleaved as
// (e1x, e1y, e2x, e2y, …) to `out_edges[0..2n]`.
//
// # Safety
// `stream` must be live; `out_edges` must point to 2n f64.
enum GspStatus gsp_sample_polygon(struct GspStream *stream, uintptr_t n, double *out_edges);

// Sidelengths (a, b, c) = (1 − x², 1 − y², 1 − z²) of the triangle of a
// unit vector `xyz`; rejects points off the sphere by more than 1e-9.
//
// # Safety
// `xyz` must point to 3 f64 and `out_abc` to 3 f64.
enum GspStatus gsp_triangle_sides(const double *xyz, double *out_abc);

// Classification plus derived quantities of the triangle with sides
// (a, b, c); the perimeter must equal 2 within 1e-12.
//
// # Safety
// `out` must point to a [`GspTriangleQuantities`].
enum GspStatus gsp_triangle_quantities(double a,
                                       double b,
                                       double c,
                                       struct GspTriangleQuantities *out);

// Classification of the triangle with sides (a, b, c) alone.
//
// # Safety
// `out_class` must be a valid pointer.
enum GspStatus gsp_triangle_classify(double a,
                                     double b,
                                     double c,
                                     enum GspTriangleClass *out_class);

// Classifies a closed polygon given edges interleaved as (e1x, e1y, …).
// Closure is required within 1e-10.
//
// # Safety
// `edges` must point to 2n f64; `out_class` must be valid.
enum GspStatus gsp_classify_polygon(const double *edges,
                                    uintptr_t n,
                                    double epsilon,
                                    enum GspPolygonClass *out_class);

// Strict upper triangle of the Plücker matrix of the frame (u, v), written
// row-major to `out_upper[0 .. n(n−1)/2]`. The columns must be orthonormal
// within 1e-9.
//
// # Safety
// `u`, `v` must point to n f64; `out_upper` to n(n−1)/2 f64.
enum GspStatus gsp_plucker_from_frame(uintptr_t n,
                                      const double *u,
                                      const double *v,
                                      double *out_upper);

// Exact obtuse-triangle probability 3/2 − 3 ln 2 / π.
double gsp_obtuse_probability_exact(void);

// Exact convex fraction 2/(n−1)! for n-gons.
//
// # Safety
// `out` must be a valid pointer.
enum GspStatus gsp_convex_fraction_exact(uintptr_t n, double *out);

// Number of sign chambers 2^{n−2}·(n−1)!; fails with Overflow past u64.
//
// # Safety
// `out` must be a valid pointer.
enum GspStatus gsp_chamber_count(uintptr_t n, uint64_t *out);

// Runs a registered experiment and returns the reports as a JSON array.
// `name` is one of obtuse, area, circumcurvature, convex-fraction,
// quad-classes, cell-occupancy; `n` feeds convex-fraction (0 = default 4).
// Free the string with [`gsp_string_free`].
//
// # Safety
// `name` must be a NUL-terminated string; `out_json` must be valid.
enum GspStatus gsp_estimate_json(const char *name,
                                 uintptr_t n,
                                 uint64_t n_samples,
                                 uint64_t seed,
                                 uint64_t stream_id,
                                 uintptr_t workers,
                                 char **out_json);

// Runs an acceptance suite (all, triangles, quads, group, cells, algebra)
// and returns the per-criterion results as JSON. Status Ok means the suite
// ran; inspect the "passed" fields for outcomes.
//
// # Safety
// `suite` must be a NUL-terminated string; `out_json` must be valid.
enum GspStatus gsp_verify_json(const char *suite, uint64_t seed, char **out_json);

// Releases a string returned by the *_json functions. NULL is a no-op.
//
// # Safety
// `s` must have come from this library and not be freed twice.
void gsp_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GRASSPOLY_H */
