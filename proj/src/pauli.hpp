// Copyright 2026 The cagmps Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grassmann.hpp"

namespace cagmps {

enum class Pauli : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline bool is_odd(Pauli p) { return p == Pauli::X || p == Pauli::Y; }
char pauli_char(Pauli p);
Pauli pauli_from_char(char c);

Eigen::Matrix2cd pauli_matrix(Pauli p);

/// ς^μ with signature (φ†, ψ): row index on φ†, column index on ψ.
Tensor make_pauli(Pauli p);

struct FermionOps {
    Tensor c, c_dag, n;
};
FermionOps make_fermion_ops();

/// Operator product a·b of two operators on the same n sites, both in the
/// nested signature (φ†1..φ†n, ψn..ψ1).
Tensor compose(const Tensor &a, const Tensor &b);

/// The Grassmann product ς^μ_1 ς^ν_2 in the nested signature (φ†1, φ†2, ψ2, ψ1).
Tensor pair_tensor(Pauli mu, Pauli nu);

struct PauliString {
    cplx coeff{1.0, 0.0};
    std::vector<Pauli> labels;

    std::string label_string() const;
};

int string_parity(const PauliString &s);

/// coeff·P equals its own adjoint. P† = (-1)^{k(k-1)/2} P for k odd factors.
bool is_self_adjoint(const PauliString &s, double tol = 1e-12);

struct Hamiltonian {
    int n_sites = 0;
    std::vector<PauliString> terms;

    /// Lengths match and every term is even.
    void validate() const;
};

/// Dense 2^n matrix of Σ a_i P^(i), site 1 as the most significant bit.
Eigen::MatrixXcd dense_operator(const Hamiltonian &h);

}  // namespace cagmps
