/*
 * Copyright 2026 The Waylift Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the waylift library: lift raw driving actions into
 * ego-frame waypoints, differentiate the lift, and run the numerical
 * studies and the toy training loop.
 *
 * Conventions:
 *  - Every fallible call returns a waylift_status. On failure the message
 *    is available from waylift_last_error() on the same thread until the
 *    next failing call.
 *  - Objects are opaque handles released with the matching *_free; passing
 *    NULL to a *_free function is a no-op.
 *  - Array outputs are written to caller storage of `capacity` doubles.
 *    When it is too small the call returns WAYLIFT_ERR_INSUFFICIENT_BUFFER
 *    and writes nothing.
 *  - Text outputs (CSV, JSON) are returned as waylift_buffer handles.
 */

#ifndef WAYLIFT_WAYLIFT_H_
#define WAYLIFT_WAYLIFT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(WAYLIFT_BUILDING_LIBRARY)
#define WAYLIFT_API __attribute__((visibility("default")))
#else
#define WAYLIFT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum waylift_status {
  WAYLIFT_OK = 0,
  WAYLIFT_ERR_INVALID_ARGUMENT = 1,
  WAYLIFT_ERR_INVALID_CONFIG = 2,
  WAYLIFT_ERR_PARSE = 3,
  WAYLIFT_ERR_NUMERIC = 4,
  WAYLIFT_ERR_DIVERGED = 5,
  WAYLIFT_ERR_INSUFFICIENT_BUFFER = 6,
  /* A verification ran to completion and did not pass. */
  WAYLIFT_ERR_CHECK_FAILED = 7,
  WAYLIFT_ERR_INTERNAL = 8
} waylift_status;

WAYLIFT_API const char* waylift_version(void);
WAYLIFT_API const char* waylift_status_name(waylift_status status);
/* Never NULL; empty when the last call on this thread succeeded. */
WAYLIFT_API const char* waylift_last_error(void);

/* ---- Text buffers ---- */

typedef struct waylift_buffer waylift_buffer;

WAYLIFT_API const char* waylift_buffer_data(const waylift_buffer* buf);
WAYLIFT_API size_t waylift_buffer_size(const waylift_buffer* buf);
WAYLIFT_API void waylift_buffer_free(waylift_buffer* buf);

/* ---- Lift setup: vehicle configuration plus initial state ---- */

typedef struct waylift_setup waylift_setup;

/*
 * JSON object with keys dt, L, delta_max, a_max, kappa_M, sigma_M, n_int,
 * scheme ("euler" | "rk4"), model ("kbm" | "ccpp") and an optional
 * "initial_state": {"v0": m/s, "kappa0": 1/m} (default v0 = 10, kappa0 = 0).
 */
WAYLIFT_API waylift_status waylift_setup_from_json(const char* json,
                                                   waylift_setup** out);
WAYLIFT_API waylift_status waylift_setup_to_json(const waylift_setup* setup,
                                                 waylift_buffer** out);
WAYLIFT_API void waylift_setup_free(waylift_setup* setup);

/* ---- Raw action sequences (C_f steps x 3 channels) ---- */

typedef struct waylift_actions waylift_actions;

/* Row-major steps x 3 values: throttle, lateral, brake. */
WAYLIFT_API waylift_status waylift_actions_from_array(const double* values,
                                                      size_t steps,
                                                      waylift_actions** out);
/* CSV with header k,tau,lat,brake. */
WAYLIFT_API waylift_status waylift_actions_from_csv(const char* csv,
                                                    waylift_actions** out);
WAYLIFT_API size_t waylift_actions_steps(const waylift_actions* actions);
WAYLIFT_API void waylift_actions_free(waylift_actions* actions);

/* ---- Lifting ---- */

typedef struct waylift_trajectory waylift_trajectory;

WAYLIFT_API waylift_status waylift_lift(const waylift_setup* setup,
                                        const waylift_actions* actions,
                                        waylift_trajectory** out);
WAYLIFT_API size_t waylift_trajectory_size(const waylift_trajectory* traj);
/* Writes x_1, y_1, ..., x_C, y_C (2 C_f doubles). */
WAYLIFT_API waylift_status waylift_trajectory_points(
    const waylift_trajectory* traj, double* xy, size_t capacity);
WAYLIFT_API waylift_status waylift_trajectory_headings(
    const waylift_trajectory* traj, double* theta, size_t capacity);
/* CSV with columns k,x,y (plus theta when with_heading is nonzero). */
WAYLIFT_API waylift_status waylift_trajectory_to_csv(
    const waylift_trajectory* traj, int with_heading, waylift_buffer** out);
WAYLIFT_API void waylift_trajectory_free(waylift_trajectory* traj);

/* ---- Gradients ---- */

/*
 * Row-major (2 C_f) x (3 C_f) Jacobian of the waypoints w.r.t. the raw
 * actions. Row 2k + c is coordinate c of waypoint k + 1; column 3j + ch is
 * channel ch of step j.
 */
WAYLIFT_API waylift_status waylift_jacobian(const waylift_setup* setup,
                                            const waylift_actions* actions,
                                            double* jacobian, size_t capacity);

/*
 * Weighted waypoint L1 loss against gt_xy (2 C_f doubles) and its gradient
 * w.r.t. the raw actions (3 C_f doubles, row-major). weights may be NULL
 * for uniform weights, otherwise C_f nonnegative values with positive sum.
 */
WAYLIFT_API waylift_status waylift_loss_grad(const waylift_setup* setup,
                                             const waylift_actions* actions,
                                             const double* gt_xy,
                                             const double* weights,
                                             double* loss, double* grad,
                                             size_t grad_capacity);

/* Finite-difference check of one sequence; JSON report in *report. */
WAYLIFT_API waylift_status waylift_gradcheck(const waylift_setup* setup,
                                             const waylift_actions* actions,
                                             double fd_step,
                                             waylift_buffer** report);

/*
 * Randomized check over `cases` sequences of length `horizon`. With
 * setup == NULL the cases cycle over both models and both schemes with
 * default vehicle parameters. Always writes the JSON summary; returns
 * WAYLIFT_ERR_CHECK_FAILED when some unflagged case misses `tolerance`.
 */
WAYLIFT_API waylift_status waylift_gradcheck_random(
    const waylift_setup* setup, uint64_t seed, int cases, int horizon,
    double fd_step, double tolerance, waylift_buffer** summary);

/* ---- Numerical studies ---- */

/*
 * Runs the sweep described by spec_json and returns the CSV
 * model,scheme,cf,dt,n_int,k,mean_l1,std_l1,rhs_evals (plus mean_yaw when
 * with_yaw is nonzero). seed_override may be NULL. With substeps_only
 * nonzero the spec is restricted to the clothoid model (substep study).
 */
WAYLIFT_API waylift_status waylift_sweep(const char* spec_json,
                                         const uint64_t* seed_override,
                                         int substeps_only, int with_yaw,
                                         waylift_buffer** csv);

/* ---- Training demo ---- */

typedef struct waylift_train_result waylift_train_result;

/* config_json may be NULL or "{}" for the defaults. */
WAYLIFT_API waylift_status waylift_train(const char* config_json,
                                         const uint64_t* seed_override,
                                         waylift_train_result** out);
/* Number of recorded losses (steps + 1). */
WAYLIFT_API size_t waylift_train_loss_count(const waylift_train_result* r);
WAYLIFT_API waylift_status waylift_train_losses(const waylift_train_result* r,
                                                double* losses,
                                                size_t capacity);
WAYLIFT_API double waylift_train_ratio(const waylift_train_result* r);
/* CSV with columns step,loss. */
WAYLIFT_API waylift_status waylift_train_loss_csv(
    const waylift_train_result* r, waylift_buffer** out);
/* Trained parameters and the effective options as JSON. */
WAYLIFT_API waylift_status waylift_train_params_json(
    const waylift_train_result* r, waylift_buffer** out);
WAYLIFT_API void waylift_train_result_free(waylift_train_result* r);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* WAYLIFT_WAYLIFT_H_ */
