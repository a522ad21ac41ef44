#ifndef QUBITFLUX_H
#define QUBITFLUX_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every call.
 */
typedef enum QfStatus {
  QF_STATUS_OK = 0,
  QF_STATUS_NULL_POINTER = 1,
  QF_STATUS_INVALID_ARGUMENT = 2,
  QF_STATUS_DOMAIN = 3,
  QF_STATUS_CONFIG = 4,
  QF_STATUS_INVARIANT = 5,
  QF_STATUS_IO = 6,
  QF_STATUS_BUFFER_TOO_SMALL = 7,
  QF_STATUS_PANIC = 8,
} QfStatus;

typedef enum QfMatchKind {
  QF_MATCH_KIND_DOUBLE_FLIP = 0,
  QF_MATCH_KIND_EXCHANGE_FLIP = 1,
  QF_MATCH_KIND_SINGLE_QUBIT1 = 2,
  QF_MATCH_KIND_SINGLE_QUBIT2 = 3,
  QF_MATCH_KIND_DECOUPLED = 4,
} QfMatchKind;

/**
 * Circuit configuration handle.
 */
typedef struct QfConfig QfConfig;

/**
 * Photon-number amplitudes of a field state.
 */
typedef struct QfField QfField;

/**
 * Derived circuit constants, energies in units of E_J0.
 */
typedef struct QfCouplings {
  double eta1;
  double eta2;
  double ebar_j1;
  double ebar_j2;
  double chi12;
  double eps01;
  double eps02;
  double detuning;
  double chi_prime;
  double omega1;
  double omega2;
  double g1;
  double g2;
  double g12;
  double xi1;
  double xi2;
  double xi12_re;
  double xi12_im;
  double drive_freq;
  bool zero_detuning;
  bool weak_detuning;
} QfCouplings;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *qf_last_error(void);

/**
 * Library version, static string.
 */
const char *qf_version(void);

/**
 * Built-in demonstration circuit.
 *
 * # Safety
 * `out` must be a valid pointer to write a handle into.
 */
enum QfStatus qf_config_default(struct QfConfig **out);

/**
 * Reads a `key = value` config file. Unset keys keep their demo values.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QfStatus qf_config_from_file(const char *path, struct QfConfig **out);

/**
 * # Safety
 * `cfg` must come from this library and `key` be NUL-terminated.
 */
enum QfStatus qf_config_set(struct QfConfig *cfg, const char *key, double value);

/**
 * # Safety
 * `cfg` must come from this library, `key` be NUL-terminated and `out` valid.
 */
enum QfStatus qf_config_get(const struct QfConfig *cfg, const char *key, double *out);

/**
 * # Safety
 * `cfg` must come from this library or be null. Frees it.
 */
void qf_config_free(struct QfConfig *cfg);

/**
 * # Safety
 * `cfg` must come from this library and `out` be valid.
 */
enum QfStatus qf_derive_couplings(const struct QfConfig *cfg, struct QfCouplings *out);

/**
 * Which resonance a drive at `omega` hits, within relative tolerance `tol`.
 *
 * # Safety
 * `cfg` must come from this library and `out` be valid.
 */
enum QfStatus qf_classify_drive(const struct QfConfig *cfg,
                                double omega,
                                double tol,
                                enum QfMatchKind *out);

/**
 * # Safety
 * `out` must be valid.
 */
enum QfStatus qf_field_vacuum(struct QfField **out);

/**
 * Coherent state with mean photon number `nbar` and phase `phase`.
 *
 * # Safety
 * `out` must be valid.
 */
enum QfStatus qf_field_coherent(double nbar, double phase, double tail_bound, struct QfField **out);

/**
 * Even superposition of |α⟩ and |−α⟩ with mean photon number `nbar`.
 *
 * # Safety
 * `out` must be valid.
 */
enum QfStatus qf_field_even_cat(double nbar, double tail_bound, struct QfField **out);

/**
 * Squeezed vacuum with mean photon number `nbar` and squeezing angle `beta`.
 *
 * # Safety
 * `out` must be valid.
 */
enum QfStatus qf_field_squeezed_vacuum(double nbar,
                                       double beta,
                                       double tail_bound,
                                       struct QfField **out);

/**
 * Number of stored amplitudes (n_max + 1).
 *
 * # Safety
 * `field` must come from this library and `out` be valid.
 */
enum QfStatus qf_field_len(const struct QfField *field, size_t *out);

/**
 * Copies P(n) into `buf`. Fails with `BufferTooSmall` when `cap` is less
 * than [`qf_field_len`].
 *
 * # Safety
 * `buf` must hold `cap` doubles.
 */
enum QfStatus qf_field_probabilities(const struct QfField *field, double *buf, size_t cap);

/**
 * # Safety
 * `field` must come from this library or be null. Frees it.
 */
void qf_field_free(struct QfField *field);

/**
 * κ(τ) for qubits starting in cos θ|gg⟩ + e^{iφ} sin θ|ee⟩ and the given
 * quantized field, written to `out[i]` for each `taus[i]`.
 *
 * # Safety
 * `taus` and `out` must each hold `n` doubles.
 */
enum QfStatus qf_kappa_trace(const struct QfField *field,
                             double theta,
                             double phi,
                             const double *taus,
                             size_t n,
                             double *out);

/**
 * κ under a classical drive.
 *
 * # Safety
 * `out` must be valid.
 */
enum QfStatus qf_kappa_classical(double theta, double phi, double tau, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUBITFLUX_H */
