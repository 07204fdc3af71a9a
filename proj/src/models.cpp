// Copyright 2026 The cagmps Authors
// SPDX-License-Identifier: Apache-2.0

#include "models.hpp"

#include "errors.hpp"

namespace cagmps {

std::string model_name(ModelKind kind) { return kind == ModelKind::TV ? "tv" : "tight-binding"; }

ModelKind parse_model(const std::string &name) {
    if (name == "tv" || name == "t-V" || name == "t-v") return ModelKind::TV;
    if (name == "tight-binding" || name == "tight_binding" || name == "tb") return ModelKind::TightBinding;
    throw ConfigError("unknown model '" + name + "' (expected tv or tight-binding)");
}

Hamiltonian build_tv(int L, double t, double V) {
    if (L < 2) throw ConfigError("model needs L >= 2");
    Hamiltonian h;
    h.n_sites = L;
    const cplx i(0, 1);
    auto add = [&](int a, Pauli p, Pauli q, cplx coeff) {
        if (coeff == cplx(0)) return;
        PauliString s;
        s.coeff = coeff;
        s.labels.assign(L, Pauli::I);
        s.labels[a] = p;
        s.labels[a + 1] = q;
        if (!is_self_adjoint(s)) throw SelfCheckError("non-Hermitian Hamiltonian term " + s.label_string());
        h.terms.push_back(std::move(s));
    };
    for (int a = 0; a + 1 < L; a++) {
        add(a, Pauli::X, Pauli::Y, -i * t / 2.0);
        add(a, Pauli::Y, Pauli::X, i * t / 2.0);
        add(a, Pauli::Z, Pauli::Z, V / 4.0);
    }
    h.validate();
    return h;
}

Hamiltonian build_tight_binding(int L, double t) { return build_tv(L, t, 0.0); }

Hamiltonian build_model(const ModelSpec &spec) {
    return spec.kind == ModelKind::TV ? build_tv(spec.L, spec.t, spec.V) : build_tight_binding(spec.L, spec.t);
}

}  // namespace cagmps
