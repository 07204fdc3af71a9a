// Copyright 2026 The cagmps Authors
// SPDX-License-Identifier: Apache-2.0

#include "clifford.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>

#include "errors.hpp"

namespace cagmps {

namespace {

const cplx kI(0, 1);

using Key = std::array<int64_t, 32>;

// Rotates the first non-negligible entry (row-major) to the positive real
// axis and rounds to 1e-9.
Key canonical_key(const Eigen::Matrix4cd &m) {
    cplx phase(1.0);
    for (int e = 0; e < 16; e++) {
        cplx v = m(e / 4, e % 4);
        if (std::abs(v) > 1e-9) {
            phase = std::conj(v) / std::abs(v);
            break;
        }
    }
    Key k{};
    for (int r = 0; r < 4; r++) {
        for (int c = 0; c < 4; c++) {
            cplx v = m(r, c) * phase;
            k[2 * (4 * r + c)] = std::llround(v.real() * 1e9);
            k[2 * (4 * r + c) + 1] = std::llround(v.imag() * 1e9);
        }
    }
    return k;
}

bool word_less(const Word &a, const Word &b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

std::map<Key, int> index_by_key(const std::vector<GroupElement> &set) {
    std::map<Key, int> idx;
    for (size_t k = 0; k < set.size(); k++) idx.emplace(canonical_key(set[k].matrix), static_cast<int>(k));
    return idx;
}

const std::array<Tensor, 16> &basis_tensors() {
    static const std::array<Tensor, 16> basis = [] {
        std::array<Tensor, 16> b;
        for (int k = 0; k < 16; k++) b[k] = pair_basis(pair_first(k), pair_second(k));
        return b;
    }();
    return basis;
}

}  // namespace

std::string gen_name(Gen g) {
    static const char *names[] = {"H0", "S0", "H1", "S1", "CNOT01", "CNOT10"};
    return names[static_cast<int>(g)];
}

std::string word_string(const Word &w) {
    if (w.empty()) return "I";
    std::string s;
    for (size_t k = 0; k < w.size(); k++) {
        if (k) s += ' ';
        s += gen_name(w[k]);
    }
    return s;
}

Word parse_word(const std::string &s) {
    std::istringstream in(s);
    Word w;
    std::string tok;
    while (in >> tok) {
        if (tok == "I") continue;
        bool found = false;
        for (int g = 0; g < kNumGens; g++) {
            if (gen_name(static_cast<Gen>(g)) == tok) {
                w.push_back(static_cast<Gen>(g));
                found = true;
            }
        }
        if (!found) throw std::invalid_argument("unknown gate generator '" + tok + "'");
    }
    return w;
}

Eigen::Matrix4cd generator_matrix(Gen g) {
    const double h = 1.0 / std::sqrt(2.0);
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    switch (g) {
        case Gen::H0:
            m << h, 0, h, 0, 0, h, 0, h, h, 0, -h, 0, 0, h, 0, -h;
            break;
        case Gen::H1:
            m << h, h, 0, 0, h, -h, 0, 0, 0, 0, h, h, 0, 0, h, -h;
            break;
        case Gen::S0:
            m.diagonal() << 1, 1, kI, kI;
            break;
        case Gen::S1:
            m.diagonal() << 1, kI, 1, kI;
            break;
        case Gen::CNOT01:
            m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
            break;
        case Gen::CNOT10:
            m(0, 0) = m(1, 3) = m(2, 2) = m(3, 1) = 1;
            break;
    }
    return m;
}

Eigen::Matrix4cd word_matrix(const Word &w) {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
    for (Gen g : w) m = m * generator_matrix(g);
    return m;
}

Tensor gate_tensor(const Eigen::Matrix4cd &m) {
    return from_dense_matrix(m, {{1, true}, {1, true}}, {{1, false}, {1, false}});
}

cplx pair_phase(Pauli mu, Pauli nu) { return (is_odd(mu) && is_odd(nu)) ? kI : cplx(1.0); }

Tensor pair_basis(Pauli mu, Pauli nu) { return pair_phase(mu, nu) * pair_tensor(mu, nu); }

Eigen::Matrix4cd pair_basis_matrix(Pauli mu, Pauli nu) { return to_dense_matrix(pair_basis(mu, nu), {0, 1}); }

PairImage conjugate_pair(const Tensor &gate, const Tensor &gate_dag, int pair) {
    const auto &basis = basis_tensors();
    Tensor img = compose(compose(gate, basis[pair]), gate_dag);
    for (int k = 0; k < 16; k++) {
        // Basis elements have four unimodular entries; project onto each.
        cplx overlap = 0;
        const auto &b = basis[k].coeffs();
        for (size_t e = 0; e < b.size(); e++) overlap += std::conj(b[e]) * img.coeffs()[e];
        overlap /= 4.0;
        if (std::abs(overlap) < 0.5) continue;
        for (int sign : {1, -1}) {
            if (max_abs_diff(img, double(sign) * basis[k]) <= 1e-10) return {k, sign};
        }
        break;
    }
    throw SelfCheckError("gate does not map pair " + std::string(1, pauli_char(pair_first(pair))) +
                         pauli_char(pair_second(pair)) + " to a signed pair");
}

Tableau tableau_of(const Eigen::Matrix4cd &m) {
    Tensor g = gate_tensor(m), gd = gate_tensor(m.adjoint());
    Tableau t;
    for (int k = 0; k < 16; k++) t[k] = conjugate_pair(g, gd, k);
    return t;
}

Tableau compose_tableaus(const Tableau &outer, const Tableau &inner) {
    Tableau t;
    for (int k = 0; k < 16; k++) {
        const PairImage &a = inner[k];
        const PairImage &b = outer[a.pair];
        t[k] = {b.pair, a.sign * b.sign};
    }
    return t;
}

Tableau inverse_tableau(const Tableau &t) {
    Tableau inv;
    for (int k = 0; k < 16; k++) inv[t[k].pair] = {k, t[k].sign};
    return inv;
}

CliffordGate build_generator(Gen g) {
    CliffordGate c;
    c.word = {g};
    c.matrix = generator_matrix(g);
    c.tensor = gate_tensor(c.matrix);
    c.tableau = tableau_of(c.matrix);
    return c;
}

std::vector<GroupElement> enumerate_group(const std::vector<Gen> &gens) {
    constexpr size_t kSafetyBound = 50000;
    std::vector<GroupElement> out;
    std::map<Key, int> seen;
    std::deque<int> queue;
    out.push_back({Eigen::Matrix4cd::Identity(), {}});
    seen.emplace(canonical_key(out[0].matrix), 0);
    queue.push_back(0);
    while (!queue.empty()) {
        int cur = queue.front();
        queue.pop_front();
        for (Gen g : gens) {
            Eigen::Matrix4cd m = out[cur].matrix * generator_matrix(g);
            auto [it, fresh] = seen.emplace(canonical_key(m), static_cast<int>(out.size()));
            if (!fresh) continue;
            Word w = out[cur].word;
            w.push_back(g);
            out.push_back({m, std::move(w)});
            queue.push_back(it->second);
            if (out.size() > kSafetyBound) throw SelfCheckError("Clifford closure exceeded its safety bound");
        }
    }
    return out;
}

std::vector<GroupElement> quotient_pauli(const std::vector<GroupElement> &group) {
    const int probes[] = {pair_index(Pauli::X, Pauli::I), pair_index(Pauli::Z, Pauli::I),
                          pair_index(Pauli::I, Pauli::X), pair_index(Pauli::I, Pauli::Z)};
    std::vector<GroupElement> out;
    for (const auto &e : group) {
        Tensor g = gate_tensor(e.matrix), gd = gate_tensor(e.matrix.adjoint());
        bool positive = true;
        for (int p : probes) {
            if (conjugate_pair(g, gd, p).sign != 1) {
                positive = false;
                break;
            }
        }
        if (positive) out.push_back(e);
    }
    // Every Pauli coset must contain exactly one survivor.
    if (out.size() * 16 != group.size()) throw SelfCheckError("Pauli quotient has the wrong size");
    auto group_idx = index_by_key(group);
    auto kept_idx = index_by_key(out);
    for (const auto &e : out) {
        for (int k = 1; k < 16; k++) {
            Key key = canonical_key(pair_basis_matrix(pair_first(k), pair_second(k)) * e.matrix);
            if (!group_idx.count(key) || kept_idx.count(key)) {
                throw SelfCheckError("Pauli coset without a unique sign-positive representative");
            }
        }
    }
    return out;
}

bool is_grassmann_even(const Eigen::Matrix4cd &m, double tol) {
    for (int r = 0; r < 4; r++) {
        for (int c = 0; c < 4; c++) {
            if ((std::popcount(unsigned(r)) + std::popcount(unsigned(c))) % 2 && std::abs(m(r, c)) > tol) return false;
        }
    }
    return true;
}

std::vector<GroupElement> filter_even(const std::vector<GroupElement> &set) {
    std::vector<GroupElement> out;
    for (const auto &e : set) {
        if (is_grassmann_even(e.matrix)) out.push_back(e);
    }
    return out;
}

std::vector<GroupElement> local_even_subgroup() {
    return filter_even(enumerate_group({Gen::H0, Gen::S0, Gen::H1, Gen::S1}));
}

Classes dedupe_left_local(const std::vector<GroupElement> &even_set) {
    auto local = local_even_subgroup();
    auto idx = index_by_key(even_set);
    std::vector<int> parent(even_set.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (size_t i = 0; i < even_set.size(); i++) {
        for (const auto &g : local) {
            auto it = idx.find(canonical_key(g.matrix * even_set[i].matrix));
            if (it != idx.end()) parent[find(static_cast<int>(i))] = find(it->second);
        }
    }
    std::map<int, std::vector<int>> groups;
    for (size_t i = 0; i < even_set.size(); i++) groups[find(static_cast<int>(i))].push_back(static_cast<int>(i));

    Classes out;
    std::vector<std::pair<int, std::vector<int>>> reps;
    for (auto &[root, members] : groups) {
        int best = members[0];
        for (int m : members) {
            if (word_less(even_set[m].word, even_set[best].word)) best = m;
        }
        reps.emplace_back(best, members);
    }
    std::sort(reps.begin(), reps.end(),
              [&](const auto &a, const auto &b) { return word_less(even_set[a.first].word, even_set[b.first].word); });
    for (auto &[best, members] : reps) {
        out.representatives.push_back(even_set[best]);
        out.members.push_back(members);
    }
    return out;
}

GateSet build_gate_set() {
    GateSet set;
    auto group = enumerate_group();
    set.group_size = group.size();
    auto quotient = quotient_pauli(group);
    set.quotient_size = quotient.size();
    set.even_gates = filter_even(quotient);
    set.even_size = set.even_gates.size();
    Classes classes = dedupe_left_local(set.even_gates);
    set.class_of_even.assign(set.even_gates.size(), -1);
    for (size_t c = 0; c < classes.representatives.size(); c++) {
        const auto &rep = classes.representatives[c];
        CliffordGate g;
        g.id = static_cast<int>(c);
        g.word = rep.word;
        g.matrix = rep.matrix;
        g.tensor = gate_tensor(rep.matrix);
        g.tableau = tableau_of(rep.matrix);
        g.class_size = static_cast<int>(classes.members[c].size());
        set.gates.push_back(std::move(g));
        for (int m : classes.members[c]) set.class_of_even[m] = static_cast<int>(c);
    }
    return set;
}

const GateSet &canonical_gates() {
    static const GateSet set = [] {
        GateSet s = build_gate_set();
        if (s.group_size != 11520 || s.quotient_size != 720 || s.even_size != 32 || s.gates.size() != 12) {
            throw SelfCheckError("Clifford gate counts do not match 11520/720/32/12");
        }
        if (!s.gates[0].word.empty()) throw SelfCheckError("identity is not the first canonical gate");
        return s;
    }();
    return set;
}

int class_of_matrix(const GateSet &set, const Eigen::Matrix4cd &m) {
    static const auto local = local_even_subgroup();
    auto idx = index_by_key(set.even_gates);
    int found = -1;
    for (int k = 0; k < 16; k++) {
        Eigen::Matrix4cd p = pair_basis_matrix(pair_first(k), pair_second(k));
        for (const auto &g : local) {
            auto it = idx.find(canonical_key(p * g.matrix * m));
            if (it == idx.end()) continue;
            int c = set.class_of_even[it->second];
            if (found >= 0 && found != c) return -1;
            found = c;
        }
    }
    return found;
}

const std::vector<std::string> &reference_words() {
    static const std::vector<std::string> words = {
        "I",
        "CNOT01 S1 CNOT01",
        "CNOT10 CNOT01 CNOT10",
        "S0 CNOT01 H0 CNOT01",
        "H0 CNOT01 CNOT10 H1",
        "S0 CNOT10 H1 CNOT10",
        "CNOT10 S1 CNOT01 H1 CNOT10",
        "CNOT01 S0 CNOT10 H0 CNOT01",
        "CNOT01 S0 H0 S0 CNOT01",
        "S0 CNOT10 H1 CNOT10 S0",
        "S1 CNOT01 H0 CNOT10 S0 CNOT01",
        "CNOT01 CNOT10 S0 H0 S0 CNOT01",
    };
    return words;
}

}  // namespace cagmps
