/* Copyright 2026 catkerr Contributors
 * SPDX-License-Identifier: Apache-2.0 */

#ifndef CATKERR_H
#define CATKERR_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CkStatus {
  CK_STATUS_OK = 0,
  CK_STATUS_NULL_POINTER = 1,
  CK_STATUS_INVALID_ARGUMENT = 2,
  CK_STATUS_DOMAIN = 3,
  /**
   * Stiffness, accuracy loss or missing convergence.
   */
  CK_STATUS_NUMERICAL = 4,
  CK_STATUS_IO = 5,
  CK_STATUS_PANIC = 6,
} CkStatus;

/**
 * Density matrix of one mode (or two, for ZZ results).
 */
typedef struct CkDensity CkDensity;

/**
 * Physical parameters of one resonator.
 */
typedef struct CkModel CkModel;

/**
 * Scalar outcome of a protocol run.
 */
typedef struct CkProtocolResult {
  /**
   * `<psi|rho|psi>`.
   */
  double fidelity;
  double root_fidelity;
  double duration;
} CkProtocolResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Valid until the
 * next call on the same thread.
 */
const char *ck_last_error(void);

const char *ck_version(void);

/**
 * `H0 = -K a+^2 a^2 + Ep a+^2 + Ep* a^2` with loss `kappa` and `n_fock` levels.
 */
enum CkStatus ck_model_new(double k,
                           double ep_re,
                           double ep_im,
                           double kappa,
                           size_t n_fock,
                           struct CkModel **model);

void ck_model_free(struct CkModel *model);

/**
 * Steady-state coherent amplitude `alpha0` including loss.
 */
enum CkStatus ck_model_alpha0(const struct CkModel *model, double *re, double *im);

/**
 * Long-time steady state from vacuum, integrating at most to `t_max`.
 * `method` is 0 for long-time integration and 1 for the Liouvillian null
 * space.
 */
enum CkStatus ck_steady_state(const struct CkModel *model,
                              int32_t method,
                              double t_max,
                              double convergence_eps,
                              struct CkDensity **state);

enum CkStatus ck_density_coherent(double re, double im, size_t n_fock, struct CkDensity **state);

/**
 * Cat state of parity 0 (even) or 1 (odd).
 */
enum CkStatus ck_density_cat(double re,
                             double im,
                             int32_t parity_code,
                             size_t n_fock,
                             struct CkDensity **state);

void ck_density_free(struct CkDensity *state);

/**
 * Hilbert-space dimension, or 0 for a null handle.
 */
size_t ck_density_dim(const struct CkDensity *state);

/**
 * Copies the matrix into `buf` as interleaved `(re, im)` pairs in
 * row-major order; `len` counts doubles and must be at least `2 dim^2`.
 */
enum CkStatus ck_density_elements(const struct CkDensity *state, double *buf, size_t len);

enum CkStatus ck_fidelity(const struct CkDensity *state,
                          const struct CkDensity *target,
                          double *fidelity,
                          double *root_fidelity);

/**
 * Parity, mean photon number and purity of a single-mode state.
 */
enum CkStatus ck_moments(const struct CkDensity *state,
                         double *parity,
                         double *mean_n,
                         double *purity);

/**
 * Wigner function on an `nx` by `np` grid, written to `buf` as
 * `buf[ip * nx + ix]`.
 */
enum CkStatus ck_wigner(const struct CkDensity *state,
                        double x_min,
                        double x_max,
                        size_t nx,
                        double p_min,
                        double p_max,
                        size_t np,
                        double *buf,
                        size_t len);

/**
 * Ramps the two-photon drive from zero to `ep0` starting in `|0>`
 * (`initial_parity` 0) or `|1>` (1). `cd_variant` is -1 for no auxiliary
 * drive, 0 for the plain ramp, 1 exact, 2 and 3 for the two closed forms.
 * `state` may be null.
 */
enum CkStatus ck_init(double ep0,
                      double tau,
                      double t_final,
                      double kappa,
                      int32_t initial_parity,
                      int32_t cd_variant,
                      size_t n_fock,
                      struct CkProtocolResult *result,
                      struct CkDensity **state);

/**
 * Z rotation by `theta` on `|C+>`; `duration <= 0` picks the default timing.
 */
enum CkStatus ck_gate_z(double ep,
                        double ez,
                        double theta,
                        double kappa,
                        double duration,
                        size_t n_fock,
                        struct CkProtocolResult *result,
                        struct CkDensity **state);

/**
 * X rotation by `theta` on `|0>`; `duration <= 0` picks the calibrated
 * timing.
 */
enum CkStatus ck_gate_x(double ep,
                        double delta_x,
                        double theta,
                        double kappa,
                        double duration,
                        size_t n_fock,
                        struct CkProtocolResult *result,
                        struct CkDensity **state);

/**
 * Two-mode ZZ gate on `|C+>|C+>`; `n_fock` is per mode.
 */
enum CkStatus ck_gate_zz(double ep,
                         double ezz,
                         double kappa,
                         double duration,
                         size_t n_fock,
                         struct CkProtocolResult *result,
                         struct CkDensity **state);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CATKERR_H */
