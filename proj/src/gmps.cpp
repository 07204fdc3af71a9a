// Copyright 2026 The cagmps Authors
// SPDX-License-Identifier: Apache-2.0

#include "gmps.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <random>

#include "errors.hpp"

namespace cagmps {

namespace {

constexpr size_t kNoTruncation = size_t{1} << 30;

Tensor delta(int generators, bool first_conj) {
    Tensor d({{generators, first_conj}, {generators, !first_conj}});
    for (size_t i = 0; i < d.dim(0); i++) d({i, i}) = 1.0;
    return d;
}

const Tensor &identity_op() {
    static const Tensor id = make_pauli(Pauli::I);
    return id;
}

int site_bits(const GMPS &s, int a) { return (s.has_left(a) ? 1 : 0) + 1 + (s.has_right(a) ? 1 : 0); }

// Moves the center one site to the right (dir = +1) or left (dir = -1)
// without truncation; returns the bond spectrum.
std::vector<double> step(GMPS &s, int dir) {
    const int a = s.center;
    Tensor &m = s.sites[a];
    if (dir > 0) {
        std::vector<int> rows;
        for (int k = 0; k + 1 < site_bits(s, a); k++) rows.push_back(k);
        SvdResult r = svd(m, rows, kNoTruncation, 0.0);
        Tensor sv = scale_leg(r.v, 0, r.weights);
        s.sites[a] = r.u;
        s.sites[a + 1] = contract(sv, 1, s.sites[a + 1], 0);
        s.center = a + 1;
        return r.spectrum;
    }
    SvdResult r = svd(m, {0}, kNoTruncation, 0.0);
    Tensor us = scale_leg(r.u, 1, r.weights);
    s.sites[a] = r.v;
    Tensor &prev = s.sites[a - 1];
    s.sites[a - 1] = contract(prev, static_cast<int>(prev.rank()) - 1, us, 0);
    s.center = a - 1;
    return r.spectrum;
}

void normalize_center(GMPS &s) {
    double nrm = norm(s.sites[s.center]);
    if (!(nrm > 0)) throw NumericalError("state has zero norm");
    s.sites[s.center] *= cplx(1.0 / nrm);
}

}  // namespace

int GMPS::bond_generators(int b) const { return sites[b].leg(sites[b].rank() - 1).generators; }

std::vector<size_t> GMPS::bond_dims() const {
    std::vector<size_t> d;
    for (int b = 0; b + 1 < size(); b++) d.push_back(size_t{1} << bond_generators(b));
    return d;
}

GMPS product_init(const std::vector<int> &occ) {
    const int n = static_cast<int>(occ.size());
    if (n < 2) throw ConfigError("a GMPS needs at least two sites");
    int total = 0;
    for (int o : occ) {
        if (o != 0 && o != 1) throw ConfigError("occupations must be 0 or 1");
        total += o;
    }
    if (total % 2) throw ConfigError("product state has odd total occupation");
    GMPS s;
    int run = 0;
    for (int a = 0; a < n; a++) {
        const int before = run;
        run ^= occ[a];
        std::vector<Leg> legs;
        if (a > 0) legs.push_back({before, true});
        legs.push_back({1, false});
        if (a + 1 < n) legs.push_back({run, false});
        Tensor t(legs);
        // A bond with odd running parity gets one generator and uses slot 1.
        std::vector<size_t> idx;
        if (a > 0) idx.push_back(size_t(before));
        idx.push_back(size_t(occ[a]));
        if (a + 1 < n) idx.push_back(size_t(run));
        size_t off = 0;
        for (size_t k = 0; k < idx.size(); k++) off = off * t.dim(k) + idx[k];
        t.data()[off] = 1.0;
        s.sites.push_back(std::move(t));
    }
    s.center = 0;
    return s;
}

GMPS random_even_init(int n, size_t chi, uint64_t seed) {
    if (n < 2) throw ConfigError("a GMPS needs at least two sites");
    if (chi < 1) throw ConfigError("chi must be >= 1");
    const int gmax = std::bit_width(chi) - 1;
    std::vector<int> g(n - 1);
    for (int b = 0; b + 1 < n; b++) g[b] = std::min({gmax, b + 1, n - b - 1});
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    GMPS s;
    for (int a = 0; a < n; a++) {
        std::vector<Leg> legs;
        if (a > 0) legs.push_back({g[a - 1], true});
        legs.push_back({1, false});
        if (a + 1 < n) legs.push_back({g[a], false});
        Tensor t(legs);
        for (size_t i = 0; i < t.size(); i++) {
            if (!Tensor::entry_parity(i)) t.data()[i] = normal(rng);
        }
        s.sites.push_back(std::move(t));
    }
    s.center = n - 1;
    canonicalize(s, 0);
    return s;
}

void canonicalize(GMPS &s, int center) {
    const int n = s.size();
    if (center < 0 || center >= n) throw std::invalid_argument("canonicalize: center out of range");
    // Right-to-left then left-to-right establishes both gauges from scratch.
    s.center = n - 1;
    while (s.center > 0) {
        step(s, -1);
        normalize_center(s);
    }
    while (s.center < center) {
        step(s, +1);
        normalize_center(s);
    }
    normalize_center(s);
}

void move_center(GMPS &s, int target) {
    if (target < 0 || target >= s.size()) throw std::invalid_argument("move_center: target out of range");
    while (s.center < target) step(s, +1);
    while (s.center > target) step(s, -1);
}

double canonical_error(const GMPS &s) {
    double err = 0;
    for (int a = 0; a < s.center; a++) {
        Tensor left = a == 0 ? Tensor::scalar(1.0) : delta(s.bond_generators(a - 1), false);
        Tensor t = transfer_left(left, s.sites[a], identity_op(), s.has_left(a));
        err = std::max(err, max_abs_diff(t, delta(s.bond_generators(a), false)));
    }
    for (int a = s.size() - 1; a > s.center; a--) {
        Tensor right = s.has_right(a) ? delta(s.bond_generators(a), true) : Tensor::scalar(1.0);
        Tensor t = transfer_right(right, s.sites[a], identity_op(), s.has_right(a));
        err = std::max(err, max_abs_diff(t, delta(s.bond_generators(a - 1), true)));
    }
    return err;
}

Tensor dense_state(const GMPS &s) {
    if (s.size() > 12) throw std::invalid_argument("dense_state: at most 12 sites");
    Tensor acc = s.sites[0];
    for (int a = 1; a < s.size(); a++) acc = contract(acc, static_cast<int>(acc.rank()) - 1, s.sites[a], 0);
    return acc;
}

Eigen::VectorXcd dense_ket(const GMPS &s) {
    Tensor g = dense_state(s);
    Eigen::VectorXcd v(g.size());
    for (size_t i = 0; i < g.size(); i++) {
        int k = std::popcount(i);
        double r = ((k * (k - 1) / 2) % 2) ? -1.0 : 1.0;
        v[i] = r * std::conj(g.data()[i]);
    }
    return v;
}

Tensor transfer_left(const Tensor &left, const Tensor &site, const Tensor &op, bool has_left) {
    Tensor t = has_left ? contract(site, 0, left, 0) : left.coeffs()[0] * site;
    // (ψ, [φ], [φ'†]) -> ([φ], [φ'†], ψ')
    t = contract(t, 0, op, 0);
    Tensor cm = conj(site);
    const int cr = static_cast<int>(cm.rank());
    const int tr = static_cast<int>(t.rank());
    // conj(site) legs: ([φ'†_a], ψ'†, [φ'_{a-1}])
    const int psi_dag = has_left ? cr - 2 : cr - 1;
    if (has_left) return contract(t, std::vector<int>{tr - 2, tr - 1}, cm, std::vector<int>{cr - 1, psi_dag});
    return contract(t, std::vector<int>{tr - 1}, cm, std::vector<int>{psi_dag});
}

Tensor transfer_right(const Tensor &right, const Tensor &site, const Tensor &op, bool has_right) {
    const bool has_left = site.rank() == (has_right ? 3u : 2u);
    const int psi = has_left ? 1 : 0;
    Tensor t = contract(site, psi, op, 0);  // ([φ†], [φ], ψ')
    if (has_right) {
        t = contract(t, has_left ? 1 : 0, right, 0);  // ([φ†], ψ', φ')
    } else {
        t = right.coeffs()[0] * t;
    }
    Tensor cm = conj(site);  // ([φ'†_a], ψ'†, [φ'_{a-1}])
    const int tr = static_cast<int>(t.rank());
    if (has_right) return contract(t, std::vector<int>{tr - 2, tr - 1}, cm, std::vector<int>{1, 0});
    return contract(t, std::vector<int>{tr - 1}, cm, std::vector<int>{0});
}

cplx close_environments(const Tensor &left, const Tensor &right) {
    if (left.rank() == 0) return left.coeffs()[0] * right.coeffs()[0];
    return contract(left, std::vector<int>{0, 1}, right, std::vector<int>{0, 1}).coeffs()[0];
}

double norm_squared(const GMPS &s) {
    Tensor env = Tensor::scalar(1.0);
    for (int a = 0; a < s.size(); a++) env = transfer_left(env, s.sites[a], identity_op(), s.has_left(a));
    return env.coeffs()[0].real();
}

double expectation(const GMPS &s, const Hamiltonian &h) {
    const int n = s.size();
    if (h.n_sites != n) throw std::invalid_argument("expectation: Hamiltonian size mismatch");
    std::vector<Tensor> lid(n + 1), rid(n + 1);
    lid[0] = Tensor::scalar(1.0);
    for (int a = 0; a < n; a++) lid[a + 1] = transfer_left(lid[a], s.sites[a], identity_op(), s.has_left(a));
    rid[n] = Tensor::scalar(1.0);
    for (int a = n - 1; a >= 0; a--) rid[a] = transfer_right(rid[a + 1], s.sites[a], identity_op(), s.has_right(a));
    const double nrm2 = lid[n].coeffs()[0].real();

    cplx total = 0;
    for (const auto &term : h.terms) {
        int first = -1, last = -1;
        for (int a = 0; a < n; a++) {
            if (term.labels[a] != Pauli::I) {
                if (first < 0) first = a;
                last = a;
            }
        }
        if (first < 0) {
            total += term.coeff * nrm2;
            continue;
        }
        Tensor env = lid[first];
        for (int a = first; a <= last; a++) env = transfer_left(env, s.sites[a], make_pauli(term.labels[a]), s.has_left(a));
        total += term.coeff * close_environments(env, rid[last + 1]);
    }
    total /= nrm2;
    if (std::abs(total.imag()) > 1e-10 * std::max(1.0, std::abs(total.real()))) {
        throw NumericalError("expectation value has an imaginary part; operator is not Hermitian");
    }
    return total.real();
}

std::vector<double> bond_spectrum(const GMPS &state, int bond) {
    if (bond < 0 || bond + 1 >= state.size()) throw std::invalid_argument("bond out of range");
    GMPS s = state;
    move_center(s, bond);
    std::vector<double> sp = step(s, +1);
    double sum = 0;
    for (double x : sp) sum += x * x;
    if (std::abs(sum - 1.0) > 1e-8) throw NumericalError("bond spectrum is not normalized");
    return sp;
}

double bond_entropy(const GMPS &state, int bond) { return entropy_of_spectrum(bond_spectrum(state, bond)); }

std::vector<double> bond_entropies(const GMPS &state) {
    GMPS s = state;
    move_center(s, 0);
    std::vector<double> out;
    for (int b = 0; b + 1 < s.size(); b++) {
        std::vector<double> sp = step(s, +1);
        double sum = 0;
        for (double x : sp) sum += x * x;
        if (std::abs(sum - 1.0) > 1e-8) throw NumericalError("bond spectrum is not normalized");
        out.push_back(entropy_of_spectrum(sp));
    }
    return out;
}

namespace binio {

void put_u32(std::ostream &out, uint32_t v) {
    unsigned char b[4];
    for (int k = 0; k < 4; k++) b[k] = static_cast<unsigned char>(v >> (8 * k));
    out.write(reinterpret_cast<const char *>(b), 4);
}

void put_i32(std::ostream &out, int32_t v) { put_u32(out, static_cast<uint32_t>(v)); }

void put_f64(std::ostream &out, double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char b[8];
    for (int k = 0; k < 8; k++) b[k] = static_cast<unsigned char>(bits >> (8 * k));
    out.write(reinterpret_cast<const char *>(b), 8);
}

uint32_t get_u32(std::istream &in) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char *>(b), 4)) throw ConfigError("checkpoint truncated");
    uint32_t v = 0;
    for (int k = 0; k < 4; k++) v |= uint32_t(b[k]) << (8 * k);
    return v;
}

int32_t get_i32(std::istream &in) { return static_cast<int32_t>(get_u32(in)); }

double get_f64(std::istream &in) {
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char *>(b), 8)) throw ConfigError("checkpoint truncated");
    uint64_t bits = 0;
    for (int k = 0; k < 8; k++) bits |= uint64_t(b[k]) << (8 * k);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

void put_tensor(std::ostream &out, const Tensor &t) {
    put_u32(out, static_cast<uint32_t>(t.rank()));
    for (const auto &l : t.legs()) {
        put_i32(out, l.generators);
        put_u32(out, l.conj ? 1 : 0);
    }
    put_u32(out, t.even_declared() ? 1 : 0);
    for (const auto &c : t.coeffs()) {
        put_f64(out, c.real());
        put_f64(out, c.imag());
    }
}

Tensor get_tensor(std::istream &in) {
    uint32_t rank = get_u32(in);
    if (rank > 16) throw ConfigError("checkpoint: implausible tensor rank");
    std::vector<Leg> legs(rank);
    int total = 0;
    for (auto &l : legs) {
        l.generators = get_i32(in);
        l.conj = get_u32(in) != 0;
        if (l.generators < 0 || l.generators > 24) throw ConfigError("checkpoint: bad leg");
        total += l.generators;
    }
    if (total > 28) throw ConfigError("checkpoint: tensor too large");
    bool even = get_u32(in) != 0;
    Tensor t(legs, even);
    for (auto &c : t.coeffs()) {
        double re = get_f64(in);
        double im = get_f64(in);
        c = cplx(re, im);
    }
    return t;
}

}  // namespace binio

namespace {
const char kStateMagic[8] = {'C', 'A', 'G', 'M', 'P', 'S', 'S', 'T'};
constexpr uint32_t kStateVersion = 1;
}  // namespace

void write_state(std::ostream &out, const GMPS &s) {
    out.write(kStateMagic, 8);
    binio::put_u32(out, kStateVersion);
    binio::put_u32(out, static_cast<uint32_t>(s.size()));
    binio::put_i32(out, s.center);
    for (const auto &t : s.sites) binio::put_tensor(out, t);
}

GMPS read_state(std::istream &in) {
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, kStateMagic, 8) != 0) throw ConfigError("not a GMPS state container");
    if (binio::get_u32(in) != kStateVersion) throw ConfigError("unsupported state container version");
    GMPS s;
    uint32_t n = binio::get_u32(in);
    s.center = binio::get_i32(in);
    if (n < 2 || n > 100000 || s.center < 0 || s.center >= static_cast<int>(n)) throw ConfigError("bad state header");
    for (uint32_t a = 0; a < n; a++) s.sites.push_back(binio::get_tensor(in));
    return s;
}

}  // namespace cagmps
