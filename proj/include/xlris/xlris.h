/* SPDX-License-Identifier: Apache-2.0
 *
 * xlris - near-field XL-RIS covert communication design toolkit
 * Copyright (C) 2026 The xlris authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 * ------------------------------------------------------------------------ */

#ifndef XLRIS_H
#define XLRIS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define XLRIS_API __declspec(dllexport)
#else
#define XLRIS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum xlris_status
{
    XLRIS_OK = 0,
    XLRIS_E_PARAM = 1,
    XLRIS_E_GEOMETRY = 2,
    XLRIS_E_NUMERIC = 3,
    XLRIS_E_INFEASIBLE = 4,
    XLRIS_E_CONFIG = 5,
    XLRIS_E_IO = 6,
    XLRIS_E_UNKNOWN = 99
} xlris_status;

typedef struct xlris_config xlris_config;
typedef struct xlris_solution xlris_solution;

/* Message of the last failed call on this thread; never NULL */
XLRIS_API const char *xlris_last_error(void);
XLRIS_API const char *xlris_status_name(xlris_status s);
XLRIS_API const char *xlris_version(void);

/* Configuration */
XLRIS_API xlris_status xlris_config_create_default(xlris_config **out);
XLRIS_API xlris_status xlris_config_load(const char *path, xlris_config **out);
XLRIS_API xlris_status xlris_config_from_json(const char *json, xlris_config **out);
XLRIS_API xlris_status xlris_config_set(xlris_config *cfg, const char *key, const char *json_value);
XLRIS_API xlris_status xlris_config_apply_desk_scale(xlris_config *cfg);
/* Writes up to cap bytes including the terminator; *needed receives the full length + 1 */
XLRIS_API xlris_status xlris_config_to_json(const xlris_config *cfg, char *buf, size_t cap, size_t *needed);
XLRIS_API xlris_status xlris_config_hash(const xlris_config *cfg, uint64_t *out);
XLRIS_API void xlris_config_destroy(xlris_config *cfg);

/* Closed forms */
XLRIS_API xlris_status xlris_max_leakage(double kappa, double sigma_w2, double rho, int m_w, double *out);
XLRIS_API xlris_status xlris_min_dep(double leakage, double sigma_w2, double rho, int m_w, double *out);
XLRIS_API xlris_status xlris_rayleigh_distance(double aperture, double aperture_b, double freq_hz, double *out);

/* Runs one scheme ("proposed", "fd", "rp", "ff", "zf") on the channel drawn from seed */
XLRIS_API xlris_status xlris_solve(const xlris_config *cfg, const char *scheme, uint64_t seed, xlris_solution **out);
XLRIS_API xlris_status xlris_solution_rate(const xlris_solution *sol, double *out);
XLRIS_API xlris_status xlris_solution_leakage(const xlris_solution *sol, double *out);
XLRIS_API xlris_status xlris_solution_min_dep(const xlris_solution *sol, double *out);
XLRIS_API xlris_status xlris_solution_iterations(const xlris_solution *sol, int *out);
XLRIS_API xlris_status xlris_solution_converged(const xlris_solution *sol, int *out);
XLRIS_API xlris_status xlris_solution_trace_length(const xlris_solution *sol, size_t *out);
/* Rate per AO iteration, row 0 the initial point; n entries are written */
XLRIS_API xlris_status xlris_solution_rate_trace(const xlris_solution *sol, double *out, size_t n);
XLRIS_API xlris_status xlris_solution_ris_size(const xlris_solution *sol, size_t *out);
/* Interleaved (re, im) pairs, 2 n doubles */
XLRIS_API xlris_status xlris_solution_reflection(const xlris_solution *sol, double *out, size_t n);
XLRIS_API void xlris_solution_destroy(xlris_solution *sol);

/* sweep_spec "PARAM=v1,v2,..." or NULL/"" for a single point; schemes comma-separated or NULL for all */
XLRIS_API xlris_status xlris_run_sweep(const xlris_config *cfg, const char *sweep_spec, const char *schemes,
                                       int jobs, const char *out_dir);
/* preset "steering", "focusing" or "diffraction"; default 25 m x 25 m, 200 x 200 grid */
XLRIS_API xlris_status xlris_run_heatmap(const xlris_config *cfg, const char *preset, int jobs,
                                         const char *out_path);

#ifdef __cplusplus
}
#endif

#endif
