// Copyright 2026 The cagmps Authors
// SPDX-License-Identifier: Apache-2.0

#include "pauli.hpp"

#include <stdexcept>

namespace cagmps {

char pauli_char(Pauli p) {
    switch (p) {
        case Pauli::I:
            return 'I';
        case Pauli::X:
            return 'X';
        case Pauli::Y:
            return 'Y';
        case Pauli::Z:
            return 'Z';
    }
    return '?';
}

Pauli pauli_from_char(char c) {
    switch (c) {
        case 'I':
        case 'i':
            return Pauli::I;
        case 'X':
        case 'x':
            return Pauli::X;
        case 'Y':
        case 'y':
            return Pauli::Y;
        case 'Z':
        case 'z':
            return Pauli::Z;
    }
    throw std::invalid_argument(std::string("unknown Pauli label '") + c + "'");
}

Eigen::Matrix2cd pauli_matrix(Pauli p) {
    const cplx i(0, 1);
    Eigen::Matrix2cd m;
    switch (p) {
        case Pauli::I:
            m << 1, 0, 0, 1;
            break;
        case Pauli::X:
            m << 0, 1, 1, 0;
            break;
        case Pauli::Y:
            m << 0, -i, i, 0;
            break;
        case Pauli::Z:
            m << 1, 0, 0, -1;
            break;
    }
    return m;
}

Tensor make_pauli(Pauli p) {
    Tensor t({{1, true}, {1, false}}, !is_odd(p));
    auto m = pauli_matrix(p);
    for (size_t r = 0; r < 2; r++) {
        for (size_t c = 0; c < 2; c++) t({r, c}) = m(r, c);
    }
    return t;
}

FermionOps make_fermion_ops() {
    const cplx i(0, 1);
    Tensor x = make_pauli(Pauli::X), y = make_pauli(Pauli::Y);
    FermionOps ops;
    ops.c = 0.5 * (x + i * y);
    ops.c_dag = 0.5 * (x - i * y);
    ops.n = 0.5 * (make_pauli(Pauli::I) - make_pauli(Pauli::Z));
    ops.c.set_even_declared(false);
    ops.c_dag.set_even_declared(false);
    ops.n.set_even_declared(true);
    return ops;
}

Tensor compose(const Tensor &a, const Tensor &b) {
    if (a.rank() != b.rank() || a.rank() % 2) throw std::invalid_argument("compose: rank mismatch");
    const int n = static_cast<int>(a.rank() / 2);
    std::vector<int> ax, bx;
    for (int k = 0; k < n; k++) {
        ax.push_back(n + k);
        bx.push_back(n - 1 - k);
    }
    return contract(a, ax, b, bx);
}

Tensor pair_tensor(Pauli mu, Pauli nu) {
    Tensor outer = contract(make_pauli(mu), std::vector<int>{}, make_pauli(nu), std::vector<int>{});
    return sign_permute(outer, {0, 2, 3, 1});
}

std::string PauliString::label_string() const {
    std::string s;
    for (Pauli p : labels) s.push_back(pauli_char(p));
    return s;
}

int string_parity(const PauliString &s) {
    int k = 0;
    for (Pauli p : s.labels) k += is_odd(p);
    return k & 1;
}

bool is_self_adjoint(const PauliString &s, double tol) {
    int k = 0;
    for (Pauli p : s.labels) k += is_odd(p);
    double sign = ((k * (k - 1) / 2) % 2) ? -1.0 : 1.0;
    return std::abs(std::conj(s.coeff) * sign - s.coeff) <= tol * std::max(1.0, std::abs(s.coeff));
}

void Hamiltonian::validate() const {
    for (const auto &t : terms) {
        if (static_cast<int>(t.labels.size()) != n_sites) throw std::invalid_argument("Pauli string length mismatch");
        if (string_parity(t)) throw std::invalid_argument("Pauli string is Grassmann-odd");
    }
}

Eigen::MatrixXcd dense_operator(const Hamiltonian &h) {
    const int n = h.n_sites;
    if (n < 1 || n > 12) throw std::invalid_argument("dense_operator: site count must be 1..12");
    for (const auto &t : h.terms) {
        if (static_cast<int>(t.labels.size()) != n) throw std::invalid_argument("Pauli string length mismatch");
    }
    const size_t dim = size_t{1} << n;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);

    // Source signature (φ†1, ψ1, ..., φ†n, ψn); target (φ†1..φ†n, ψn..ψ1).
    std::vector<int> order;
    for (int a = 0; a < n; a++) order.push_back(2 * a);
    for (int a = n; a-- > 0;) order.push_back(2 * a + 1);

    std::vector<Eigen::Matrix2cd> mats(n);
    std::vector<int> parities(2 * n);
    for (const auto &t : h.terms) {
        for (int a = 0; a < n; a++) mats[a] = pauli_matrix(t.labels[a]);
        for (size_t col = 0; col < dim; col++) {
            size_t row = 0;
            cplx v = t.coeff;
            for (int a = 0; a < n; a++) {
                int c = (col >> (n - 1 - a)) & 1;
                int r = mats[a](0, c) != cplx(0) ? 0 : 1;
                v *= mats[a](r, c);
                row |= size_t(r) << (n - 1 - a);
                parities[2 * a] = r;
                parities[2 * a + 1] = c;
            }
            out(row, col) += double(reorder_sign(parities, order)) * v;
        }
    }
    return out;
}

}  // namespace cagmps
