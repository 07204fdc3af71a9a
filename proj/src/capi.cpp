// Copyright 2026 The cagmps Authors
// SPDX-License-Identifier: Apache-2.0

#include "cagmps/cagmps.h"

#include <exception>
#include <filesystem>
#include <new>
#include <string>

#include "bench.hpp"
#include "clifford.hpp"
#include "ed.hpp"
#include "errors.hpp"

struct cagmps_experiment {
    cagmps::ExperimentConfig cfg;
    std::vector<cagmps::MeasurementPoint> points;
    cagmps_progress_fn progress = nullptr;
    void *progress_user = nullptr;
};

namespace {

thread_local std::string g_last_error;

cagmps_status fail(cagmps_status s, const std::string &msg) {
    g_last_error = msg;
    return s;
}

// Order matters: the error types derive from std::invalid_argument / runtime_error.
template <class F>
cagmps_status guarded(F &&f) {
    try {
        f();
        return CAGMPS_OK;
    } catch (const cagmps::ConfigError &e) {
        return fail(CAGMPS_ERR_CONFIG, e.what());
    } catch (const cagmps::NumericalError &e) {
        return fail(CAGMPS_ERR_NUMERICAL, e.what());
    } catch (const cagmps::SelfCheckError &e) {
        return fail(CAGMPS_ERR_SELF_CHECK, e.what());
    } catch (const cagmps::IoError &e) {
        return fail(CAGMPS_ERR_IO, e.what());
    } catch (const std::filesystem::filesystem_error &e) {
        return fail(CAGMPS_ERR_IO, e.what());
    } catch (const std::bad_alloc &) {
        return fail(CAGMPS_ERR_INTERNAL, "out of memory");
    } catch (const std::exception &e) {
        return fail(CAGMPS_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(CAGMPS_ERR_INTERNAL, "unknown error");
    }
}

void require(bool ok, const char *what) {
    if (!ok) throw cagmps::ConfigError(what);
}

cagmps::ModelSpec model_spec(const char *model, int L, double t, double V) {
    require(model != nullptr, "model name is null");
    cagmps::ModelSpec m;
    m.kind = cagmps::parse_model(model);
    m.L = L;
    m.t = t;
    m.V = V;
    return m;
}

}  // namespace

extern "C" {

const char *cagmps_version(void) { return "0.1.0"; }

const char *cagmps_last_error(void) { return g_last_error.c_str(); }

const char *cagmps_status_name(cagmps_status s) {
    switch (s) {
        case CAGMPS_OK: return "ok";
        case CAGMPS_ERR_CONFIG: return "configuration error";
        case CAGMPS_ERR_NUMERICAL: return "numerical failure";
        case CAGMPS_ERR_SELF_CHECK: return "self-check failure";
        case CAGMPS_ERR_IO: return "i/o error";
        case CAGMPS_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

cagmps_status cagmps_experiment_create(cagmps_experiment **out) {
    return guarded([&] {
        require(out != nullptr, "output handle pointer is null");
        *out = new cagmps_experiment;
    });
}

void cagmps_experiment_destroy(cagmps_experiment *e) { delete e; }

cagmps_status cagmps_experiment_set_model(cagmps_experiment *e, const char *model, int L, double t, double V) {
    return guarded([&] {
        require(e != nullptr, "experiment handle is null");
        e->cfg.model = model_spec(model, L, t, V);
    });
}

cagmps_status cagmps_experiment_set_chis(cagmps_experiment *e, const size_t *chis, size_t n) {
    return guarded([&] {
        require(e != nullptr, "experiment handle is null");
        require(chis != nullptr && n > 0, "chi list is empty");
        e->cfg.chis.assign(chis, chis + n);
    });
}

cagmps_status cagmps_experiment_set_sweeps(cagmps_experiment *e, int sweeps) {
    return guarded([&] {
        require(e != nullptr, "experiment handle is null");
        require(sweeps >= 1, "sweeps must be >= 1");
        e->cfg.sweeps = sweeps;
    });
}

cagmps_status cagmps_experiment_set_clifford(cagmps_experiment *e, const char *mode) {
    return guarded([&] {
        require(e != nullptr && mode != nullptr, "null argument");
        e->cfg.methods = cagmps::parse_method_set(mode);
    });
}

cagmps_status cagmps_experiment_set_seed(cagmps_experiment *e, uint64_t seed) {
    return guarded([&] {
        require(e != nullptr, "experiment handle is null");
        require(seed > 0, "seed must be positive");
        e->cfg.seed = seed;
    });
}

cagmps_status cagmps_experiment_set_reference(cagmps_experiment *e, const char *mode) {
    return guarded([&] {
        require(e != nullptr && mode != nullptr, "null argument");
        e->cfg.reference = cagmps::parse_reference(mode);
    });
}

cagmps_status cagmps_experiment_set_checkpoint_dir(cagmps_experiment *e, const char *dir) {
    return guarded([&] {
        require(e != nullptr, "experiment handle is null");
        e->cfg.checkpoint_dir = dir ? dir : "";
    });
}

cagmps_status cagmps_experiment_set_progress(cagmps_experiment *e, cagmps_progress_fn fn, void *user) {
    return guarded([&] {
        require(e != nullptr, "experiment handle is null");
        e->progress = fn;
        e->progress_user = user;
    });
}

cagmps_status cagmps_experiment_run(cagmps_experiment *e) {
    return guarded([&] {
        require(e != nullptr, "experiment handle is null");
        e->points.clear();
        cagmps::Progress p;
        if (e->progress) p = [e](const std::string &msg) { e->progress(msg.c_str(), e->progress_user); };
        e->points = cagmps::run_experiment(e->cfg, p);
    });
}

size_t cagmps_experiment_point_count(const cagmps_experiment *e) { return e ? e->points.size() : 0; }

cagmps_status cagmps_experiment_point(const cagmps_experiment *e, size_t i, cagmps_point *out) {
    return guarded([&] {
        require(e != nullptr && out != nullptr, "null argument");
        require(i < e->points.size(), "point index out of range");
        const auto &p = e->points[i];
        out->L = p.L;
        out->chi = p.chi;
        out->method = p.method == cagmps::Method::GMPS ? CAGMPS_METHOD_GMPS : CAGMPS_METHOD_CAGMPS;
        out->energy = p.energy;
        out->reference = p.reference;
        out->energy_error = p.energy_error;
        out->mid_bond_entropy = p.mid_bond_entropy;
        out->mean_bond_entropy = p.mean_bond_entropy;
        out->wall_time_s = p.wall_time_s;
        out->gates_applied = p.gates_applied;
        out->monotonicity_violations = p.monotonicity_violations;
    });
}

cagmps_status cagmps_experiment_bond_entropies(const cagmps_experiment *e, size_t i, double *buf, size_t cap, size_t *n) {
    return guarded([&] {
        require(e != nullptr && n != nullptr, "null argument");
        require(i < e->points.size(), "point index out of range");
        const auto &s = e->points[i].bond_entropies;
        *n = s.size();
        require(cap == 0 || buf != nullptr, "buffer is null");
        for (size_t k = 0; k < std::min(cap, s.size()); k++) buf[k] = s[k];
    });
}

cagmps_status cagmps_experiment_write_csv(const cagmps_experiment *e, const char *path) {
    return guarded([&] {
        require(e != nullptr && path != nullptr, "null argument");
        cagmps::write_atomic(path, cagmps::measurements_csv(e->points));
    });
}

cagmps_status cagmps_fit_central_charge(const double *L, const double *S, size_t n, cagmps_fit *out) {
    return guarded([&] {
        require(out != nullptr && (n == 0 || (L != nullptr && S != nullptr)), "null argument");
        auto f = cagmps::fit_central_charge(std::vector<double>(L, L + n), std::vector<double>(S, S + n));
        *out = {f.c, f.a, f.b, f.rms_residual, f.points};
    });
}

cagmps_status cagmps_fit_central_charge_file(const char *csv_path, const char *method, cagmps_fit *out) {
    return guarded([&] {
        require(csv_path != nullptr && out != nullptr, "null argument");
        auto f = cagmps::fit_central_charge_csv(cagmps::read_file(csv_path), method ? method : "");
        *out = {f.c, f.a, f.b, f.rms_residual, f.points};
    });
}

cagmps_status cagmps_write_fit(const cagmps_fit *fit, const char *path) {
    return guarded([&] {
        require(fit != nullptr && path != nullptr, "null argument");
        cagmps::FitResult f{fit->c, fit->a, fit->b, fit->rms_residual, fit->points};
        cagmps::write_atomic(path, cagmps::fit_csv(f));
    });
}

cagmps_status cagmps_gate_counts(size_t counts[4]) {
    return guarded([&] {
        require(counts != nullptr, "null argument");
        const auto &set = cagmps::canonical_gates();
        counts[0] = set.group_size;
        counts[1] = set.quotient_size;
        counts[2] = set.even_size;
        counts[3] = set.gates.size();
    });
}

cagmps_status cagmps_write_gate_table(const char *path) {
    return guarded([&] {
        require(path != nullptr, "null argument");
        cagmps::write_atomic(path, cagmps::gate_table());
    });
}

cagmps_status cagmps_ed_spectrum(const char *model, int L, double t, double V, double *levels, size_t cap, size_t *n) {
    return guarded([&] {
        require(n != nullptr && (cap == 0 || levels != nullptr), "null argument");
        auto spec = model_spec(model, L, t, V);
        auto all = cagmps::ed_spectrum(spec);
        *n = std::min(cap, all.size());
        for (size_t k = 0; k < *n; k++) levels[k] = all[k];
    });
}

cagmps_status cagmps_write_ed(const char *model, int L, double t, double V, size_t max_levels, const char *path) {
    return guarded([&] {
        require(path != nullptr, "null argument");
        cagmps::write_atomic(path, cagmps::ed_csv(model_spec(model, L, t, V), max_levels));
    });
}

}  // extern "C"
