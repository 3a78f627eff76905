/* Copyright 2026 The asepgap Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface of the asepgap shared library.
 *
 * All functions return a status code; on failure a human-readable message
 * is available from asepgap_last_error() (thread local). Table-producing
 * calls stream rows through callbacks; string fields in row structs are
 * only valid for the duration of the callback.
 */

#ifndef ASEPGAP_ASEPGAP_H_
#define ASEPGAP_ASEPGAP_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum asepgap_status {
  ASEPGAP_OK = 0,
  ASEPGAP_ERR_INVALID = 1,        /* invalid parameters */
  ASEPGAP_ERR_CAP = 2,            /* enumeration/memory cap exceeded */
  ASEPGAP_ERR_DEGENERATE = 3,     /* one-dimensional or empty sector */
  ASEPGAP_ERR_NO_CONVERGENCE = 4, /* solver did not converge */
  ASEPGAP_ERR_DATA = 5,           /* insufficient or non-decaying data */
  ASEPGAP_ERR_INTERNAL = 6
} asepgap_status;

const char* asepgap_version(void);
const char* asepgap_last_error(void);

/* ---- gap scans ---- */

typedef struct asepgap_gap_row {
  double q;
  int L;
  int H;
  long long N; /* -1 marks the per-(L,H) "sup" summary row */
  unsigned long long dim;
  const char* form; /* "full" | "modified" | "bernoulli_laplace" */
  double gap;
  double gamma; /* 1/gap; +inf on non-ergodic cells */
  const char* method;
  double residual;
  int iterations;
  double seconds;
  const char* error; /* empty string on success */
} asepgap_gap_row;

typedef void (*asepgap_gap_row_cb)(const asepgap_gap_row* row, void* user);

asepgap_status asepgap_gap_scan(double q, const int* Ls, int nL, const int* Hs,
                                int nH, int use_modified,
                                unsigned long long dense_cap,
                                unsigned long long iter_cap, double tol,
                                int keep_going, asepgap_gap_row_cb cb,
                                void* user);

asepgap_status asepgap_bernoulli_laplace_scan(const int* Ls, int nL,
                                              asepgap_gap_row_cb cb,
                                              void* user);

/* ---- XXZ / diagonal tables ---- */

typedef struct asepgap_xxz_row {
  double Delta;
  double q;
  int twiceS;
  int H;
  int R; /* < 0 for the chain model (column left empty) */
  int sector_2n;
  unsigned long long dim;
  double gap;
  double gap_over_S;
  double gap_times_R2_over_S; /* NaN for the chain model */
  double equivalence_residual;
  const char* error;
} asepgap_xxz_row;

typedef void (*asepgap_xxz_row_cb)(const asepgap_xxz_row* row, void* user);

/* Chain model when R <= 0, diagonal strip model otherwise. */
asepgap_status asepgap_xxz_scan(double Delta, const int* twiceS_list, int nS,
                                const int* Hs, int nH, int R,
                                asepgap_xxz_row_cb cb, void* user);

/* ---- identity suite ---- */

typedef struct asepgap_check_row {
  const char* name;
  const char* instance;
  double deviation;
  double tolerance;
  int pass;
} asepgap_check_row;

typedef void (*asepgap_check_cb)(const asepgap_check_row* row, void* user);

asepgap_status asepgap_verify(const char* filter, int corrupt_hook,
                              asepgap_check_cb cb, void* user, int* all_pass);

/* ---- simulation ---- */

typedef struct asepgap_sim_plan {
  double q;
  int L;
  int H;
  long long N;
  int profile_mode;
  unsigned long long seed;
  double t_burn;
  double t_run;
  double sample_dt;
  int observable_row;   /* 0 = round(rho) clamped to [1,H] */
  int collect_histogram; /* enables tv_distance output */
} asepgap_sim_plan;

typedef struct asepgap_relaxation {
  double rate;
  double stderr_rate;
  int n_samples;
  int lag_lo;
  int lag_hi;
} asepgap_relaxation;

typedef void (*asepgap_sample_cb)(double t, double value, void* user);

/* Runs the trajectory; optionally fits the relaxation rate (estimate may be
 * NULL) and computes the total-variation distance of the time-weighted
 * state histogram to the exact stationary law (tv_distance may be NULL,
 * requires collect_histogram). */
asepgap_status asepgap_simulate(const asepgap_sim_plan* plan,
                                asepgap_sample_cb cb, void* user,
                                asepgap_relaxation* estimate,
                                double* tv_distance);

/* ---- fine-grained operator handles ---- */

typedef struct asepgap_operator asepgap_operator;

/* kind: "full" | "modified" | "profile" | "K" | "P" | "bernoulli_laplace" */
asepgap_status asepgap_operator_create(const char* kind, double q, int L,
                                       int H, long long N,
                                       asepgap_operator** out);
asepgap_status asepgap_operator_dim(const asepgap_operator* op,
                                    long long* dim);
/* Dense below the cap, Lanczos above; returns the spectral gap. */
asepgap_status asepgap_operator_gap(const asepgap_operator* op,
                                    unsigned long long dense_cap, double tol,
                                    double* gap, double* residual,
                                    int* iterations);
void asepgap_operator_destroy(asepgap_operator* op);

/* Exact gap of the full-sector generator if it fits under dense_cap. */
asepgap_status asepgap_exact_gap(double q, int L, int H, long long N,
                                 unsigned long long dense_cap, double* gap);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ASEPGAP_ASEPGAP_H_ */
