/* Copyright 2026 The cagmps Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the Clifford-augmented Grassmann MPS ground-state solver.
 * Every call returns a cagmps_status; on failure cagmps_last_error() holds a
 * message for the calling thread until its next failing call.
 */
#ifndef CAGMPS_CAGMPS_H
#define CAGMPS_CAGMPS_H

#include <stddef.h>
#include <stdint.h>

#if defined(CAGMPS_BUILDING)
#define CAGMPS_API __attribute__((visibility("default")))
#else
#define CAGMPS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values 2..4 double as process exit codes for the CLI. */
typedef enum {
    CAGMPS_OK = 0,
    CAGMPS_ERR_CONFIG = 2,
    CAGMPS_ERR_NUMERICAL = 3,
    CAGMPS_ERR_SELF_CHECK = 4,
    CAGMPS_ERR_IO = 5,
    CAGMPS_ERR_INTERNAL = 6
} cagmps_status;

typedef struct cagmps_experiment cagmps_experiment;

typedef enum { CAGMPS_METHOD_GMPS = 0, CAGMPS_METHOD_CAGMPS = 1 } cagmps_method;

typedef struct {
    int L;
    size_t chi;
    cagmps_method method;
    double energy;
    double reference; /* NaN when the experiment has no reference */
    double energy_error;
    double mid_bond_entropy;
    double mean_bond_entropy;
    double wall_time_s;
    size_t gates_applied;
    int monotonicity_violations;
} cagmps_point;

typedef struct {
    double c, a, b;
    double rms_residual;
    size_t points;
} cagmps_fit;

typedef void (*cagmps_progress_fn)(const char *message, void *user);

CAGMPS_API const char *cagmps_version(void);
CAGMPS_API const char *cagmps_last_error(void);
CAGMPS_API const char *cagmps_status_name(cagmps_status s);

CAGMPS_API cagmps_status cagmps_experiment_create(cagmps_experiment **out);
CAGMPS_API void cagmps_experiment_destroy(cagmps_experiment *e);

/* model: "tv" or "tight-binding" (V is ignored for the latter). */
CAGMPS_API cagmps_status cagmps_experiment_set_model(cagmps_experiment *e, const char *model, int L, double t, double V);
CAGMPS_API cagmps_status cagmps_experiment_set_chis(cagmps_experiment *e, const size_t *chis, size_t n);
CAGMPS_API cagmps_status cagmps_experiment_set_sweeps(cagmps_experiment *e, int sweeps);
/* "on" (CAGMPS only), "off" (GMPS only) or "both". */
CAGMPS_API cagmps_status cagmps_experiment_set_clifford(cagmps_experiment *e, const char *mode);
CAGMPS_API cagmps_status cagmps_experiment_set_seed(cagmps_experiment *e, uint64_t seed);
/* "ed", "high-chi" or "none". */
CAGMPS_API cagmps_status cagmps_experiment_set_reference(cagmps_experiment *e, const char *mode);
/* Empty or NULL disables checkpoints. */
CAGMPS_API cagmps_status cagmps_experiment_set_checkpoint_dir(cagmps_experiment *e, const char *dir);
CAGMPS_API cagmps_status cagmps_experiment_set_progress(cagmps_experiment *e, cagmps_progress_fn fn, void *user);

/* Runs every (chi, method) pair; replaces earlier results. */
CAGMPS_API cagmps_status cagmps_experiment_run(cagmps_experiment *e);
CAGMPS_API size_t cagmps_experiment_point_count(const cagmps_experiment *e);
CAGMPS_API cagmps_status cagmps_experiment_point(const cagmps_experiment *e, size_t i, cagmps_point *out);
/* Copies up to cap bond entropies; *n receives the full count (L-1). */
CAGMPS_API cagmps_status cagmps_experiment_bond_entropies(const cagmps_experiment *e, size_t i, double *buf, size_t cap,
                                                          size_t *n);
/* "-" writes to stdout. */
CAGMPS_API cagmps_status cagmps_experiment_write_csv(const cagmps_experiment *e, const char *path);

CAGMPS_API cagmps_status cagmps_fit_central_charge(const double *L, const double *S, size_t n, cagmps_fit *out);
/* method may be NULL or "" to use every row. */
CAGMPS_API cagmps_status cagmps_fit_central_charge_file(const char *csv_path, const char *method, cagmps_fit *out);
CAGMPS_API cagmps_status cagmps_write_fit(const cagmps_fit *fit, const char *path);

/* group, Pauli quotient, Grassmann-even subset, classes. */
CAGMPS_API cagmps_status cagmps_gate_counts(size_t counts[4]);
CAGMPS_API cagmps_status cagmps_write_gate_table(const char *path);

/* Lowest levels, ascending; *n receives min(cap, 2^L). */
CAGMPS_API cagmps_status cagmps_ed_spectrum(const char *model, int L, double t, double V, double *levels, size_t cap,
                                            size_t *n);
CAGMPS_API cagmps_status cagmps_write_ed(const char *model, int L, double t, double V, size_t max_levels,
                                         const char *path);

#ifdef __cplusplus
}
#endif

#endif /* CAGMPS_CAGMPS_H */
