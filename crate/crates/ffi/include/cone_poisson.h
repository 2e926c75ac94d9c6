#ifndef CONE_POISSON_H
#define CONE_POISSON_H

#include <stddef.h>

typedef enum CpStatus {
  CP_STATUS_OK = 0,
  CP_STATUS_NULL_POINTER = 1,
  CP_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed or geometrically invalid input.
   */
  CP_STATUS_INPUT = 3,
  /**
   * A cone angle at or near a positive multiple of 2 pi.
   */
  CP_STATUS_WALL = 4,
  CP_STATUS_NUMERICAL = 5,
  /**
   * The output array is too small; `cp_last_error` states the needed length.
   */
  CP_STATUS_BUFFER_TOO_SMALL = 6,
  CP_STATUS_PANIC = 7,
} CpStatus;

/**
 * Opaque surface handle.
 */
typedef struct CpSurface CpSurface;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a surface description. On success `*out` owns a new handle.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum CpStatus cp_surface_from_json(const char *json, struct CpSurface **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void cp_surface_free(struct CpSurface *s);

/**
 * Genus, number of cone points and number of edges. Any out-pointer may be null.
 *
 * # Safety
 * `s` must be a valid handle; non-null out-pointers must be writable.
 */
enum CpStatus cp_surface_counts(const struct CpSurface *s,
                                size_t *genus,
                                size_t *vertices,
                                size_t *edges);

/**
 * Cone angles, one per vertex.
 *
 * # Safety
 * `out` must hold `len` doubles.
 */
enum CpStatus cp_surface_cone_angles(const struct CpSurface *s, double *out, size_t len);

/**
 * Edge lengths in edge-id order.
 *
 * # Safety
 * `out` must hold `len` doubles.
 */
enum CpStatus cp_surface_lengths(const struct CpSurface *s, double *out, size_t len);

/**
 * Canonical JSON of the surface. Free the result with `cp_string_free`.
 * Returns null on failure.
 *
 * # Safety
 * `s` must be a valid handle.
 */
char *cp_surface_to_json(const struct CpSurface *s);

/**
 * # Safety
 * `p` must come from `cp_surface_to_json` or be null.
 */
void cp_string_free(char *p);

/**
 * The Poisson matrix, row-major, `edges * edges` entries in edge-id order.
 *
 * # Safety
 * `out` must hold `len` doubles.
 */
enum CpStatus cp_eta_matrix(const struct CpSurface *s, double *out, size_t len);

/**
 * Normalized `|P grad theta_v|`, one per vertex.
 *
 * # Safety
 * `out` must hold `len` doubles.
 */
enum CpStatus cp_radical_residuals(const struct CpSurface *s, double *out, size_t len);

/**
 * Finite-difference Jacobi residual using `jobs` threads.
 *
 * # Safety
 * `out` must be writable.
 */
enum CpStatus cp_jacobi_residual(const struct CpSurface *s, size_t jobs, double *out);

/**
 * Flips to a Delaunay triangulation. `*out` receives a new handle and
 * `*flips` (if non-null) the number of flips.
 *
 * # Safety
 * `out` must be writable; `flips` writable or null.
 */
enum CpStatus cp_make_delaunay(const struct CpSurface *s, struct CpSurface **out, size_t *flips);

/**
 * `|Tr(S_h S_j)|` for rotations by `theta_h`, `theta_j` about points at distance `d`.
 */
double cp_elliptic_product_trace(double theta_h, double theta_j, double d);

/**
 * Message for the last failure on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *cp_last_error(void);

/**
 * Static name of a status code.
 */
const char *cp_status_string(enum CpStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONE_POISSON_H */
