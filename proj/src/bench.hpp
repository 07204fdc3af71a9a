// Copyright 2026 The cagmps Authors
// SPDX-License-Identifier: Apache-2.0

// Experiment driver behind the CLI: energy/entropy tables, the
// central-charge fit, the gate table and exact spectra.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dmrg.hpp"
#include "models.hpp"

namespace cagmps {

enum class Method { GMPS, CAGMPS };
enum class MethodSet { Plain, Clifford, Both };
enum class Reference { None, ED, HighChi };

std::string method_name(Method m);
MethodSet parse_method_set(const std::string &s);  // off | on | both
Reference parse_reference(const std::string &s);   // none | ed | high-chi
std::string reference_name(Reference r);

/// Bond dimension of the high-chi reference run.
constexpr size_t kHighChi = 128;
constexpr int kMaxEdSites = 12;

struct ExperimentConfig {
    ModelSpec model;
    std::vector<size_t> chis{64};
    int sweeps = 40;
    MethodSet methods = MethodSet::Both;
    uint64_t seed = 1;
    Reference reference = Reference::None;
    std::string checkpoint_dir;  // empty: no checkpoints

    void validate() const;
    SweepConfig sweep_config(size_t chi, Method m) const;
};

struct MeasurementPoint {
    int L = 0;
    size_t chi = 0;
    Method method = Method::GMPS;
    double energy = 0;
    double reference = 0;  // NaN without a reference
    double energy_error = 0;
    double mid_bond_entropy = 0;  // cut between sites L/2-1 and L/2
    double mean_bond_entropy = 0;
    double wall_time_s = 0;
    std::vector<double> bond_entropies;
    size_t gates_applied = 0;
    int monotonicity_violations = 0;
};

using Progress = std::function<void(const std::string &)>;

double reference_energy(const ExperimentConfig &cfg, const Progress &progress = {});
std::vector<MeasurementPoint> run_experiment(const ExperimentConfig &cfg, const Progress &progress = {});

std::string format_double(double x);  // 17 significant digits
std::string measurements_csv(const std::vector<MeasurementPoint> &pts);

struct FitResult {
    double c = 0, a = 0, b = 0;
    double rms_residual = 0;
    size_t points = 0;
};
/// Least squares on S = (c/6) ln L + a + b/L with all three coefficients free.
FitResult fit_central_charge(const std::vector<double> &L, const std::vector<double> &S);
/// Reads (L, mid_bond_entropy) from a CSV with a header row; `method`
/// filters on a method column when non-empty.
FitResult fit_central_charge_csv(const std::string &text, const std::string &method);
std::string fit_csv(const FitResult &f);

/// Counts, words, matrices and tableaus of the canonical gates. Throws
/// SelfCheckError if the pipeline counts are off.
std::string gate_table();

std::string ed_csv(const ModelSpec &spec, size_t max_levels = 16);

/// Writes through a temporary file in the same directory and renames it
/// into place. "-" writes to stdout.
void write_atomic(const std::string &path, const std::string &content);
std::string read_file(const std::string &path);

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cagmps
