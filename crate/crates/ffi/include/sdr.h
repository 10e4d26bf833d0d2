#ifndef SDR_H
#define SDR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SdrBasis {
  SDR_BASIS_FULL = 0,
  SDR_BASIS_BLOCKADE = 1,
} SdrBasis;

typedef enum SdrMatchMode {
  SDR_MATCH_MODE_GEOMETRY = 0,
  SDR_MATCH_MODE_DENSITY_WEIGHTED = 1,
} SdrMatchMode;

typedef enum SdrMethod {
  SDR_METHOD_KRYLOV = 0,
  SDR_METHOD_RK4 = 1,
} SdrMethod;

/**
 * Result of every fallible call. Values 1 to 7 match the `sdr` command's
 * exit codes.
 */
typedef enum SdrStatus {
  SDR_STATUS_OK = 0,
  SDR_STATUS_INTERNAL = 1,
  SDR_STATUS_INPUT = 2,
  SDR_STATUS_BUDGET = 3,
  SDR_STATUS_HARDWARE = 4,
  SDR_STATUS_NORM_DRIFT = 5,
  SDR_STATUS_EMPTY_DATABASE = 6,
  SDR_STATUS_NO_ENTRIES = 7,
  SDR_STATUS_NULL_ARGUMENT = 8,
  SDR_STATUS_BUFFER_TOO_SMALL = 9,
  SDR_STATUS_PANIC = 10,
} SdrStatus;

/**
 * A loaded match database.
 */
typedef struct SdrDatabase SdrDatabase;

/**
 * An encoded dot cloud.
 */
typedef struct SdrDotCloud SdrDotCloud;

/**
 * A ranking with NUL-terminated ids.
 */
typedef struct SdrMatchResult SdrMatchResult;

/**
 * An embedded and evolved register.
 */
typedef struct SdrSimulation SdrSimulation;

/**
 * Encoding parameters. Start from [`sdr_encode_options_default`].
 */
typedef struct SdrEncodeOptions {
  size_t budget;
  /**
   * Relative edge threshold in (0, 1].
   */
  double threshold;
  /**
   * Resampling spacing, pixels.
   */
  double spacing;
  double eps_min;
  double eps_max;
} SdrEncodeOptions;

/**
 * Simulation parameters. Start from [`sdr_simulate_options_default`].
 */
typedef struct SdrSimulateOptions {
  /**
   * Microseconds.
   */
  double duration;
  /**
   * Microseconds.
   */
  double dt;
  enum SdrMethod method;
  enum SdrBasis basis;
  double alpha;
  bool strict;
} SdrSimulateOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on the calling thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *sdr_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sdr_version(void);

struct SdrEncodeOptions sdr_encode_options_default(void);

struct SdrSimulateOptions sdr_simulate_options_default(void);

/**
 * Encode a PGM or PNG file. `opts` may be NULL for defaults.
 *
 * # Safety
 * `path` must be a NUL-terminated string, `opts` NULL or valid, `out` a
 * valid pointer to write the new handle to.
 */
enum SdrStatus sdr_encode_file(const char *path,
                               const struct SdrEncodeOptions *opts,
                               struct SdrDotCloud **out);

/**
 * Encode a row-major 8-bit grayscale buffer of `width * height` bytes.
 *
 * # Safety
 * `pixels` must point to `width * height` readable bytes; other pointers as
 * for [`sdr_encode_file`].
 */
enum SdrStatus sdr_encode_gray(const uint8_t *pixels,
                               size_t width,
                               size_t height,
                               const struct SdrEncodeOptions *opts,
                               struct SdrDotCloud **out);

/**
 * Load a dot cloud JSON document.
 *
 * # Safety
 * As for [`sdr_encode_file`].
 */
enum SdrStatus sdr_dots_load(const char *path, struct SdrDotCloud **out);

/**
 * Write a dot cloud JSON document.
 *
 * # Safety
 * `cloud` must be a live handle and `path` a NUL-terminated string.
 */
enum SdrStatus sdr_dots_save(const struct SdrDotCloud *cloud, const char *path);

/**
 * Number of dots, 0 for NULL.
 *
 * # Safety
 * `cloud` must be NULL or a live handle.
 */
size_t sdr_dots_len(const struct SdrDotCloud *cloud);

/**
 * RDP tolerance in pixels that produced the cloud, NaN for NULL.
 *
 * # Safety
 * `cloud` must be NULL or a live handle.
 */
double sdr_dots_epsilon(const struct SdrDotCloud *cloud);

/**
 * Copy the dots as interleaved normalized coordinates. `capacity` counts
 * doubles and must be at least `2 * sdr_dots_len(cloud)`.
 *
 * # Safety
 * `cloud` must be a live handle and `out_xy` writable for `capacity` doubles.
 */
enum SdrStatus sdr_dots_copy_points(const struct SdrDotCloud *cloud,
                                    double *out_xy,
                                    size_t capacity);

/**
 * # Safety
 * `cloud` must be NULL or a handle not yet freed.
 */
void sdr_dots_free(struct SdrDotCloud *cloud);

/**
 * Unweighted symmetric Chamfer distance between two raw point sets, with no
 * normalization applied.
 *
 * # Safety
 * `a_xy` and `b_xy` must hold `2 * a_len` and `2 * b_len` doubles;
 * `out_distance` must be writable.
 */
enum SdrStatus sdr_chamfer(const double *a_xy,
                           size_t a_len,
                           const double *b_xy,
                           size_t b_len,
                           double *out_distance);

/**
 * Embed `cloud` on the default hardware profile and evolve it under the
 * default adiabatic schedule. `opts` may be NULL for defaults.
 *
 * # Safety
 * `cloud` must be a live handle, `opts` NULL or valid, `out` writable.
 */
enum SdrStatus sdr_simulate(const struct SdrDotCloud *cloud,
                            const struct SdrSimulateOptions *opts,
                            struct SdrSimulation **out);

/**
 * Number of atoms in the register, 0 for NULL.
 *
 * # Safety
 * `sim` must be NULL or a live handle.
 */
size_t sdr_simulation_atom_count(const struct SdrSimulation *sim);

/**
 * Relative norm change over the run, NaN for NULL.
 *
 * # Safety
 * `sim` must be NULL or a live handle.
 */
double sdr_simulation_norm_drift(const struct SdrSimulation *sim);

/**
 * Copy the final Rydberg densities, one per atom.
 *
 * # Safety
 * `sim` must be a live handle and `out` writable for `capacity` doubles.
 */
enum SdrStatus sdr_simulation_copy_densities(const struct SdrSimulation *sim,
                                             double *out,
                                             size_t capacity);

/**
 * Copy atom positions in micrometres, interleaved.
 *
 * # Safety
 * `sim` must be a live handle and `out_xy` writable for `capacity` doubles.
 */
enum SdrStatus sdr_simulation_copy_positions(const struct SdrSimulation *sim,
                                             double *out_xy,
                                             size_t capacity);

/**
 * Write the evolved record JSON, the same document `sdr simulate --out`
 * produces.
 *
 * # Safety
 * `sim` must be a live handle and `path` a NUL-terminated string.
 */
enum SdrStatus sdr_simulation_save(const struct SdrSimulation *sim, const char *path);

/**
 * # Safety
 * `sim` must be NULL or a handle not yet freed.
 */
void sdr_simulation_free(struct SdrSimulation *sim);

/**
 * Open and verify a database directory.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` writable.
 */
enum SdrStatus sdr_db_open(const char *path, struct SdrDatabase **out);

/**
 * Number of entries, 0 for NULL.
 *
 * # Safety
 * `db` must be NULL or a live handle.
 */
size_t sdr_db_len(const struct SdrDatabase *db);

/**
 * Rank every entry by geometry against a dot cloud.
 *
 * # Safety
 * `db` and `query` must be live handles and `out` writable.
 */
enum SdrStatus sdr_db_match_dots(const struct SdrDatabase *db,
                                 const struct SdrDotCloud *query,
                                 struct SdrMatchResult **out);

/**
 * Rank every entry against a simulation result. Geometry mode compares the
 * dot clouds; density-weighted mode compares atom positions weighted by
 * densities and needs an evolved database.
 *
 * # Safety
 * `db` and `query` must be live handles and `out` writable.
 */
enum SdrStatus sdr_db_match_simulation(const struct SdrDatabase *db,
                                       const struct SdrSimulation *query,
                                       enum SdrMatchMode mode,
                                       struct SdrMatchResult **out);

/**
 * # Safety
 * `db` must be NULL or a handle not yet freed.
 */
void sdr_db_free(struct SdrDatabase *db);

/**
 * Number of ranked entries, 0 for NULL.
 *
 * # Safety
 * `result` must be NULL or a live handle.
 */
size_t sdr_match_len(const struct SdrMatchResult *result);

/**
 * Id at `rank` (0 is the best match), or NULL when out of range. The string
 * lives as long as `result`.
 *
 * # Safety
 * `result` must be NULL or a live handle.
 */
const char *sdr_match_id(const struct SdrMatchResult *result, size_t rank);

/**
 * Distance at `rank`, NaN when out of range.
 *
 * # Safety
 * `result` must be NULL or a live handle.
 */
double sdr_match_distance(const struct SdrMatchResult *result, size_t rank);

/**
 * # Safety
 * `result` must be NULL or a handle not yet freed.
 */
void sdr_match_free(struct SdrMatchResult *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SDR_H */
