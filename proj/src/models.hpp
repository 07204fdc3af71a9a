// Copyright 2026 The cagmps Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "pauli.hpp"

namespace cagmps {

enum class ModelKind { TV, TightBinding };

struct ModelSpec {
    ModelKind kind = ModelKind::TV;
    int L = 8;
    double t = 1.0;
    double V = 2.0;

    /// V with the tight-binding override applied.
    double interaction() const { return kind == ModelKind::TightBinding ? 0.0 : V; }
};

std::string model_name(ModelKind kind);
ModelKind parse_model(const std::string &name);

/// Open chain, three strings per bond: (-it/2) X_i Y_{i+1}, (+it/2) Y_i X_{i+1}, (V/4) Z_i Z_{i+1}.
Hamiltonian build_tv(int L, double t, double V);
Hamiltonian build_tight_binding(int L, double t);
Hamiltonian build_model(const ModelSpec &spec);

}  // namespace cagmps
