// Copyright 2026 The cagmps Authors
// SPDX-License-Identifier: Apache-2.0

// Two-site Grassmann Clifford gates. A gate is stored as its 4x4 matrix and
// as a tensor with signature (φ†1, φ†2, ψ2, ψ1); in that nested signature the
// two agree entrywise, so products of gates are plain matrix products.

#pragma once

#include <array>
#include <string>
#include <vector>

#include "pauli.hpp"

namespace cagmps {

enum class Gen : int { H0 = 0, S0 = 1, H1 = 2, S1 = 3, CNOT01 = 4, CNOT10 = 5 };
inline constexpr int kNumGens = 6;

using Word = std::vector<Gen>;

std::string gen_name(Gen g);
std::string word_string(const Word &w);  // "I" for the empty word
Word parse_word(const std::string &s);   // e.g. "CNOT01 S1 CNOT01"

Eigen::Matrix4cd generator_matrix(Gen g);
Eigen::Matrix4cd word_matrix(const Word &w);

/// Tensor with signature (φ†1, φ†2, ψ2, ψ1) whose coefficients are m.
Tensor gate_tensor(const Eigen::Matrix4cd &m);

/// Hermitian-normalized pair operator: i·ς^μ ς^ν when both are odd,
/// ς^μ ς^ν otherwise. Tableaus are written in this basis.
Tensor pair_basis(Pauli mu, Pauli nu);
Eigen::Matrix4cd pair_basis_matrix(Pauli mu, Pauli nu);
/// Phase relating the stored product to the basis element: i for odd-odd pairs.
cplx pair_phase(Pauli mu, Pauli nu);

inline int pair_index(Pauli mu, Pauli nu) { return 4 * static_cast<int>(mu) + static_cast<int>(nu); }
inline Pauli pair_first(int k) { return static_cast<Pauli>(k / 4); }
inline Pauli pair_second(int k) { return static_cast<Pauli>(k % 4); }

struct PairImage {
    int pair = 0;  // pair_index of the image
    int sign = 1;
};

/// C Q(μ,ν) C† = sign·Q(image), indexed by pair_index(μ,ν).
using Tableau = std::array<PairImage, 16>;

/// Image of one basis pair under conjugation, computed by Grassmann
/// composition. Throws SelfCheckError if the result is not ±1 times a pair.
PairImage conjugate_pair(const Tensor &gate, const Tensor &gate_dag, int pair);
Tableau tableau_of(const Eigen::Matrix4cd &m);
Tableau compose_tableaus(const Tableau &outer, const Tableau &inner);  // tableau of outer·inner
Tableau inverse_tableau(const Tableau &t);

struct CliffordGate {
    int id = 0;
    Word word;
    Eigen::Matrix4cd matrix;
    Tensor tensor;
    Tableau tableau;
    int class_size = 0;
};

CliffordGate build_generator(Gen g);

struct GroupElement {
    Eigen::Matrix4cd matrix;
    Word word;
};

/// Breadth-first closure of the identity under right multiplication by the
/// generators. Elements are unique up to a global phase.
std::vector<GroupElement> enumerate_group(const std::vector<Gen> &gens = {Gen::H0, Gen::S0, Gen::H1, Gen::S1,
                                                                         Gen::CNOT01, Gen::CNOT10});
std::vector<GroupElement> quotient_pauli(const std::vector<GroupElement> &group);
std::vector<GroupElement> filter_even(const std::vector<GroupElement> &set);
bool is_grassmann_even(const Eigen::Matrix4cd &m, double tol = 1e-12);

/// Grassmann-even products of single-site generators (the left factors
/// modded out by dedupe_left_local).
std::vector<GroupElement> local_even_subgroup();

struct Classes {
    std::vector<GroupElement> representatives;  // ordered by (word length, word)
    std::vector<std::vector<int>> members;      // indices into the input set
};
Classes dedupe_left_local(const std::vector<GroupElement> &even_set);

struct GateSet {
    size_t group_size = 0, quotient_size = 0, even_size = 0;
    std::vector<CliffordGate> gates;  // gates[0] is the identity
    std::vector<GroupElement> even_gates;
    std::vector<int> class_of_even;  // class id of each even gate
};

/// Runs the whole pipeline once and caches the result.
const GateSet &canonical_gates();
GateSet build_gate_set();

/// Class of the gate built from a word: the unique class containing P·G·M
/// for some Pauli pair P and local even G. Returns -1 if there is none.
int class_of_matrix(const GateSet &set, const Eigen::Matrix4cd &m);

/// Twelve hand-written reference words, one per expected class.
const std::vector<std::string> &reference_words();

}  // namespace cagmps
