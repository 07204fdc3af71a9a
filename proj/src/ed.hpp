// Copyright 2026 The cagmps Authors
// SPDX-License-Identifier: Apache-2.0

// Exact references built from second-quantized operators with explicit
// Jordan-Wigner strings. Nothing here touches Grassmann tensors.

#pragma once

#include <vector>

#include <Eigen/Sparse>

#include "models.hpp"

namespace cagmps {

using SparseReal = Eigen::SparseMatrix<double>;

/// Site a occupies bit (L-1-a) of the basis index.
struct DenseFermionOps {
    int L = 0;
    std::vector<SparseReal> c, c_dag, n;
};

DenseFermionOps make_dense_fermion_ops(int L);

/// -t Σ (c†_i c_{i+1} - c_i c†_{i+1}) + V Σ (n_i - 1/2)(n_{i+1} - 1/2), open chain.
SparseReal dense_hamiltonian(const ModelSpec &spec);

/// Spectrum, ascending, diagonalized block by block in particle number.
/// parity 0 or 1 keeps only that fermion-parity sector; -1 keeps all.
std::vector<double> ed_spectrum(const ModelSpec &spec, int parity = -1);
double ground_energy(const ModelSpec &spec, int parity = -1);

std::vector<double> single_particle_levels(int L, double t);
double free_fermion_energy(int L, double t);

}  // namespace cagmps
