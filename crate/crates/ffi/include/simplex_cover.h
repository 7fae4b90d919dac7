#ifndef SIMPLEX_COVER_H
#define SIMPLEX_COVER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ScStatus {
  SC_STATUS_OK = 0,
  SC_STATUS_NULL_POINTER = 1,
  SC_STATUS_INVALID_ARGUMENT = 2,
  SC_STATUS_SINGULAR_BASIS = 3,
  SC_STATUS_DIMENSION_MISMATCH = 4,
  SC_STATUS_NOT_A_COVERING = 5,
  SC_STATUS_CAP_TOO_SMALL = 6,
  SC_STATUS_MULTIPLE_MINIMAL_NOTCHES = 7,
  SC_STATUS_TOO_LARGE = 8,
  SC_STATUS_BUFFER_TOO_SMALL = 9,
  SC_STATUS_PANIC = 10,
  SC_STATUS_INTERNAL = 11,
} ScStatus;

/**
 * Opaque lattice handle.
 */
typedef struct ScLattice ScLattice;

/**
 * Opaque Cayley tile handle.
 */
typedef struct ScTile ScTile;

/**
 * Outcome of [`sc_covers`]. The density fields are zero when not covered.
 */
typedef struct ScCoverResult {
  bool covered;
  uint64_t tile_diameter;
  uint64_t density_num;
  uint64_t density_den;
} ScCoverResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null after a
 * success. Valid until the next call into this library on the same thread.
 */
const char *sc_last_error_message(void);

/**
 * Builds a lattice from `rows` generators of dimension `n`, stored
 * row-major in `data` (`rows * n` entries). The basis is normalised.
 *
 * # Safety
 * `data` must point to `rows * n` readable values; `out` must be writable.
 */
enum ScStatus sc_lattice_from_rows(const int64_t *data,
                                   size_t rows,
                                   size_t n,
                                   struct ScLattice **out);

/**
 * Releases a lattice handle. Null is ignored.
 *
 * # Safety
 * `lattice` must come from this library and not be used afterwards.
 */
void sc_lattice_free(struct ScLattice *lattice);

/**
 * Dimension of the lattice, or 0 for a null handle.
 *
 * # Safety
 * `lattice` must be null or a live handle.
 */
size_t sc_lattice_dim(const struct ScLattice *lattice);

/**
 * # Safety
 * `lattice` must be a live handle; `out` must be writable.
 */
enum ScStatus sc_lattice_det(const struct ScLattice *lattice, uint64_t *out);

/**
 * Writes the normalised basis row-major into `out` (`n * n` entries).
 *
 * # Safety
 * `lattice` must be a live handle; `out` must hold `len` values.
 */
enum ScStatus sc_lattice_basis(const struct ScLattice *lattice, int64_t *out, size_t len);

/**
 * Canonical residue of `x` (length `len` = dimension) in the fundamental box.
 *
 * # Safety
 * `lattice` must be a live handle; `x` and `out` must hold `len` values.
 */
enum ScStatus sc_lattice_reduce(const struct ScLattice *lattice,
                                const int64_t *x,
                                size_t len,
                                int64_t *out);

/**
 * Builds the Cayley tile of a lattice.
 *
 * # Safety
 * `lattice` must be a live handle; `out` must be writable.
 */
enum ScStatus sc_tile_build(const struct ScLattice *lattice, struct ScTile **out);

/**
 * Releases a tile handle. Null is ignored.
 *
 * # Safety
 * `tile` must come from this library and not be used afterwards.
 */
void sc_tile_free(struct ScTile *tile);

/**
 * Number of tile points (the lattice index), or 0 for a null handle.
 *
 * # Safety
 * `tile` must be null or a live handle.
 */
size_t sc_tile_len(const struct ScTile *tile);

/**
 * Dimension of the tile, or 0 for a null handle.
 *
 * # Safety
 * `tile` must be null or a live handle.
 */
size_t sc_tile_dim(const struct ScTile *tile);

/**
 * Largest coordinate sum over the tile, or 0 for a null handle.
 *
 * # Safety
 * `tile` must be null or a live handle.
 */
uint64_t sc_tile_diameter(const struct ScTile *tile);

/**
 * Writes the tile points in graded order, row-major (`len * dim` entries).
 *
 * # Safety
 * `tile` must be a live handle; `out` must hold `len` values.
 */
enum ScStatus sc_tile_points(const struct ScTile *tile, uint32_t *out, size_t len);

/**
 * Writes the notch into `out` (`dim` entries) and sets `has_notch`.
 * A tile that is a box has no notch; `out` is then left untouched.
 *
 * # Safety
 * `tile` must be a live handle; `out` must hold `len` values and
 * `has_notch` must be writable.
 */
enum ScStatus sc_tile_notch(const struct ScTile *tile, uint32_t *out, size_t len, bool *has_notch);

/**
 * Decides whether the discrete simplex of radius `d` plus the lattice
 * covers `Z^n`, with the density when it does.
 *
 * # Safety
 * `lattice` must be a live handle; `out` must be writable.
 */
enum ScStatus sc_covers(const struct ScLattice *lattice, uint64_t d, struct ScCoverResult *out);

/**
 * Exhaustive search for `f(n, d)`. `index_cap = 0` uses the proven bound.
 * On success `f_out` and `exhaustive_out` are set, and `witness_out`, if
 * non-null, receives a new lattice handle owned by the caller. A cap that
 * is too small returns `SC_STATUS_CAP_TOO_SMALL` with the outputs still
 * filled from the best lattice found.
 *
 * # Safety
 * Output pointers must be writable; `witness_out` may be null.
 */
enum ScStatus sc_search_f(size_t n,
                          uint64_t d,
                          uint64_t index_cap,
                          uint64_t *f_out,
                          bool *exhaustive_out,
                          struct ScLattice **witness_out);

/**
 * `floor((d+2)^2 / 3)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum ScStatus sc_f2_closed_form(uint64_t d, uint64_t *out);

/**
 * Lower bound on the lattice covering density of the `n`-simplex, as a
 * fraction `num / den`.
 *
 * # Safety
 * `num` and `den` must be writable.
 */
enum ScStatus sc_theta_lower_bound(size_t n, uint64_t *num, uint64_t *den);

/**
 * General upper bound on `f(n, d)`, as a fraction `num / den`.
 *
 * # Safety
 * `num` and `den` must be writable.
 */
enum ScStatus sc_fn_upper_bound(size_t n, uint64_t d, uint64_t *num, uint64_t *den);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIMPLEX_COVER_H */
