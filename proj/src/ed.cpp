// Copyright 2026 The cagmps Authors
// SPDX-License-Identifier: Apache-2.0

#include "ed.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "errors.hpp"

namespace cagmps {

namespace {

void check_size(int L) {
    if (L < 1 || L > 12) throw ConfigError("exact diagonalization supports 1 <= L <= 12, got L=" + std::to_string(L));
}

}  // namespace

DenseFermionOps make_dense_fermion_ops(int L) {
    check_size(L);
    const size_t dim = size_t{1} << L;
    DenseFermionOps ops;
    ops.L = L;
    for (int a = 0; a < L; a++) {
        const size_t bit = size_t{1} << (L - 1 - a);
        std::vector<Eigen::Triplet<double>> tc, tn;
        for (size_t s = 0; s < dim; s++) {
            if (!(s & bit)) continue;
            // Ordering string: occupied sites to the left of a.
            int before = std::popcount(s >> (L - a));
            tc.emplace_back(static_cast<int>(s ^ bit), static_cast<int>(s), (before & 1) ? -1.0 : 1.0);
            tn.emplace_back(static_cast<int>(s), static_cast<int>(s), 1.0);
        }
        SparseReal c(dim, dim), n(dim, dim);
        c.setFromTriplets(tc.begin(), tc.end());
        n.setFromTriplets(tn.begin(), tn.end());
        ops.c_dag.push_back(SparseReal(c.transpose()));
        ops.c.push_back(std::move(c));
        ops.n.push_back(std::move(n));
    }
    return ops;
}

SparseReal dense_hamiltonian(const ModelSpec &spec) {
    check_size(spec.L);
    if (spec.L < 2) throw ConfigError("model needs L >= 2");
    auto ops = make_dense_fermion_ops(spec.L);
    const size_t dim = size_t{1} << spec.L;
    SparseReal id(dim, dim);
    id.setIdentity();
    SparseReal h(dim, dim);
    const double V = spec.interaction();
    for (int a = 0; a + 1 < spec.L; a++) {
        SparseReal hop = ops.c_dag[a] * ops.c[a + 1] - ops.c[a] * ops.c_dag[a + 1];
        h -= spec.t * hop;
        if (V != 0.0) {
            SparseReal na = ops.n[a] - 0.5 * id, nb = ops.n[a + 1] - 0.5 * id;
            h += V * SparseReal(na * nb);
        }
    }
    h.prune(0.0);
    return h;
}

std::vector<double> ed_spectrum(const ModelSpec &spec, int parity) {
    if (parity < -1 || parity > 1) throw ConfigError("parity must be -1, 0 or 1");
    SparseReal h = dense_hamiltonian(spec);
    const int L = spec.L;
    const size_t dim = size_t{1} << L;
    std::vector<std::vector<int>> sectors(L + 1);
    std::vector<int> pos(dim);
    for (size_t s = 0; s < dim; s++) {
        int n = std::popcount(s);
        pos[s] = static_cast<int>(sectors[n].size());
        sectors[n].push_back(static_cast<int>(s));
    }
    std::vector<double> levels;
    levels.reserve(dim);
    for (int n = 0; n <= L; n++) {
        if (parity >= 0 && n % 2 != parity) continue;
        const auto &states = sectors[n];
        const int m = static_cast<int>(states.size());
        Eigen::MatrixXd block = Eigen::MatrixXd::Zero(m, m);
        for (int col = 0; col < m; col++) {
            for (SparseReal::InnerIterator it(h, states[col]); it; ++it) {
                int row = static_cast<int>(it.row());
                if (std::popcount(static_cast<size_t>(row)) != std::popcount(static_cast<size_t>(states[col]))) {
                    throw SelfCheckError("Hamiltonian does not conserve particle number");
                }
                block(pos[row], col) = it.value();
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block, Eigen::EigenvaluesOnly);
        for (int k = 0; k < m; k++) levels.push_back(es.eigenvalues()[k]);
    }
    std::sort(levels.begin(), levels.end());
    return levels;
}

double ground_energy(const ModelSpec &spec, int parity) { return ed_spectrum(spec, parity).front(); }

std::vector<double> single_particle_levels(int L, double t) {
    if (L < 1) throw ConfigError("L must be >= 1");
    std::vector<double> e;
    for (int k = 1; k <= L; k++) e.push_back(-2.0 * t * std::cos(k * std::numbers::pi / (L + 1)));
    return e;
}

double free_fermion_energy(int L, double t) {
    double e = 0;
    for (double x : single_particle_levels(L, t)) e += std::min(x, 0.0);
    return e;
}

}  // namespace cagmps
