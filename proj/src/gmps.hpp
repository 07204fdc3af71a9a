// Copyright 2026 The cagmps Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "pauli.hpp"

namespace cagmps {

/// Chain of even site tensors with signature (φ†_{a-1}, ψ_a, φ_a); the first
/// site drops φ†, the last drops φ. Sites are numbered from 0. The
/// coefficients are read as a bra: energies are ∫ G·H·conj(G).
struct GMPS {
    std::vector<Tensor> sites;
    int center = 0;

    int size() const { return static_cast<int>(sites.size()); }
    bool has_left(int a) const { return a > 0; }
    bool has_right(int a) const { return a + 1 < size(); }
    int psi_leg(int a) const { return has_left(a) ? 1 : 0; }

    /// Generator count and dimension of bond b (between sites b and b+1).
    int bond_generators(int b) const;
    std::vector<size_t> bond_dims() const;
};

GMPS product_init(const std::vector<int> &occupations);
GMPS random_even_init(int n, size_t chi, uint64_t seed);

/// Puts sites left of `center` in left-canonical and right of it in
/// right-canonical form, then normalizes the center tensor.
void canonicalize(GMPS &state, int center);
void move_center(GMPS &state, int target);

/// Largest deviation of the canonical-form identities, for checks.
double canonical_error(const GMPS &state);

Tensor dense_state(const GMPS &state);
/// Ket amplitudes, site 0 as the most significant bit.
Eigen::VectorXcd dense_ket(const GMPS &state);

/// Environment growth by one site. L has legs (φ_a, φ'†_a) and R has
/// (φ†_{a-1}, φ'_{a-1}); the boundaries are rank-0 scalars.
Tensor transfer_left(const Tensor &left, const Tensor &site, const Tensor &op, bool has_left);
Tensor transfer_right(const Tensor &right, const Tensor &site, const Tensor &op, bool has_right);
cplx close_environments(const Tensor &left, const Tensor &right);

double norm_squared(const GMPS &state);
double expectation(const GMPS &state, const Hamiltonian &h);

std::vector<double> bond_spectrum(const GMPS &state, int bond);
double bond_entropy(const GMPS &state, int bond);
std::vector<double> bond_entropies(const GMPS &state);

void write_state(std::ostream &out, const GMPS &state);
GMPS read_state(std::istream &in);

namespace binio {
void put_u32(std::ostream &out, uint32_t v);
void put_i32(std::ostream &out, int32_t v);
void put_f64(std::ostream &out, double v);
uint32_t get_u32(std::istream &in);
int32_t get_i32(std::istream &in);
double get_f64(std::istream &in);
void put_tensor(std::ostream &out, const Tensor &t);
Tensor get_tensor(std::istream &in);
}  // namespace binio

}  // namespace cagmps
