#ifndef IONFIELD_H
#define IONFIELD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum IonfieldStatus {
  IONFIELD_STATUS_OK = 0,
  IONFIELD_STATUS_NULL_POINTER = 1,
  IONFIELD_STATUS_INVALID_ARGUMENT = 2,
  IONFIELD_STATUS_NUMERICAL = 3,
  IONFIELD_STATUS_BUFFER_TOO_SMALL = 4,
  IONFIELD_STATUS_PANIC = 5,
} IonfieldStatus;

/**
 * Equilibrium and normal modes of an ion chain.
 */
typedef struct IonfieldChain IonfieldChain;

/**
 * A Gaussian-state covariance matrix.
 */
typedef struct IonfieldCovariance IonfieldCovariance;

/**
 * Library version as a static NUL-terminated string.
 */
const char *ionfield_version(void);

/**
 * Message of the last failed call on this thread. Valid until the next
 * failing call on the same thread.
 */
const char *ionfield_last_error(void);

/**
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum IonfieldStatus ionfield_chain_new(size_t n, struct IonfieldChain **out);

/**
 * # Safety
 * `chain` must come from [`ionfield_chain_new`] and not be used afterwards.
 */
void ionfield_chain_free(struct IonfieldChain *chain);

/**
 * Number of ions, or 0 for a null handle.
 *
 * # Safety
 * `chain` must be null or a live handle.
 */
size_t ionfield_chain_len(const struct IonfieldChain *chain);

/**
 * # Safety
 * `chain` must be a live handle and `out` must hold `len` doubles.
 */
enum IonfieldStatus ionfield_chain_positions(const struct IonfieldChain *chain,
                                             double *out,
                                             size_t len);

/**
 * # Safety
 * `chain` must be a live handle and `out` must hold `len` doubles.
 */
enum IonfieldStatus ionfield_chain_frequencies(const struct IonfieldChain *chain,
                                               double *out,
                                               size_t len);

/**
 * Local-mode ground-state covariance of the chain.
 *
 * # Safety
 * `chain` must be a live handle and `out` valid for one handle.
 */
enum IonfieldStatus ionfield_chain_local_cm(const struct IonfieldChain *chain,
                                            struct IonfieldCovariance **out);

/**
 * Covariance of `window` consecutive sites of the lattice scalar vacuum.
 *
 * # Safety
 * `out` must be valid for one handle.
 */
enum IonfieldStatus ionfield_scalar_window(double mass,
                                           size_t window,
                                           struct IonfieldCovariance **out);

/**
 * Covariance from a row-major `dim × dim` array in interleaved
 * `(φ₁, π₁, …)` order.
 *
 * # Safety
 * `data` must hold `dim·dim` doubles and `out` be valid for one handle.
 */
enum IonfieldStatus ionfield_cm_from_array(const double *data,
                                           size_t dim,
                                           struct IonfieldCovariance **out);

/**
 * # Safety
 * `cm` must come from this library and not be used afterwards.
 */
void ionfield_cm_free(struct IonfieldCovariance *cm);

/**
 * # Safety
 * `cm` must be null or a live handle.
 */
size_t ionfield_cm_n_modes(const struct IonfieldCovariance *cm);

/**
 * Copies the matrix row-major into `out` (`(2n)²` doubles).
 *
 * # Safety
 * `cm` must be a live handle and `out` must hold `len` doubles.
 */
enum IonfieldStatus ionfield_cm_copy(const struct IonfieldCovariance *cm, double *out, size_t len);

/**
 * Logarithmic negativity between mode sets `a` and `b`; other modes are
 * traced out.
 *
 * # Safety
 * `cm` must be a live handle, `a`/`b` must hold `na`/`nb` indices and
 * `out` must be writable.
 */
enum IonfieldStatus ionfield_log_negativity(const struct IonfieldCovariance *cm,
                                            const size_t *a,
                                            size_t na,
                                            const size_t *b,
                                            size_t nb,
                                            double *out);

/**
 * Uhlmann fidelity of two zero-mean Gaussian states.
 *
 * # Safety
 * Both handles must be live and `out` writable.
 */
enum IonfieldStatus ionfield_fidelity(const struct IonfieldCovariance *a,
                                      const struct IonfieldCovariance *b,
                                      double *out);

/**
 * Probability outside the lowest `dim` Fock levels of a two-mode state.
 *
 * # Safety
 * `cm` must be a live handle and `out` writable.
 */
enum IonfieldStatus ionfield_qudit_deficit(const struct IonfieldCovariance *cm,
                                           size_t dim,
                                           double *out);

#endif  /* IONFIELD_H */
