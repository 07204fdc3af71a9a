// Copyright 2026 The cagmps Authors
// SPDX-License-Identifier: Apache-2.0

#include "dmrg.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include "errors.hpp"

namespace cagmps {

namespace {

const Tensor &pauli_op(Pauli p) {
    static const std::array<Tensor, 4> ops = {make_pauli(Pauli::I), make_pauli(Pauli::X), make_pauli(Pauli::Y),
                                              make_pauli(Pauli::Z)};
    return ops[static_cast<int>(p)];
}

// ς_a ς_b with legs (φ†1, ψ1, φ†2, ψ2).
const Tensor &outer_pair(Pauli a, Pauli b) {
    static const std::array<Tensor, 16> pairs = [] {
        std::array<Tensor, 16> p;
        for (int k = 0; k < 16; k++) {
            p[k] = contract(pauli_op(pair_first(k)), std::vector<int>{}, pauli_op(pair_second(k)), std::vector<int>{});
        }
        return p;
    }();
    return pairs[pair_index(a, b)];
}

struct Support {
    int first = -1, last = -1;
    std::string labels;
};

std::vector<Support> supports(const Hamiltonian &h) {
    std::vector<Support> out;
    out.reserve(h.terms.size());
    for (const auto &t : h.terms) {
        Support s;
        s.labels = t.label_string();
        for (int a = 0; a < h.n_sites; a++) {
            if (t.labels[a] != Pauli::I) {
                if (s.first < 0) s.first = a;
                s.last = a;
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

void accumulate(Tensor &acc, bool &has, const Tensor &t) {
    if (has) {
        acc += t;
    } else {
        acc = t;
        has = true;
    }
}

const Tensor &lookup(const EnvCache::Side &side, const std::string &key) {
    auto it = side.envs.find(key);
    if (it == side.envs.end()) throw std::logic_error("stale environment cache: missing key " + key);
    return it->second;
}

// Multiplies c by i^p exactly.
cplx times_i_power(cplx c, int p) {
    switch (((p % 4) + 4) % 4) {
        case 1:
            return {-c.imag(), c.real()};
        case 2:
            return -c;
        case 3:
            return {c.imag(), -c.real()};
    }
    return c;
}

Hamiltonian conjugate_by(const Hamiltonian &h, const Tableau &tab, int bond) {
    if (bond < 0 || bond + 1 >= h.n_sites) throw std::invalid_argument("conjugate_hamiltonian: bond out of range");
    Hamiltonian out = h;
    for (auto &t : out.terms) {
        Pauli a = t.labels[bond], b = t.labels[bond + 1];
        const PairImage &img = tab[pair_index(a, b)];
        Pauli a2 = pair_first(img.pair), b2 = pair_second(img.pair);
        // Strings hold coeff·ς_aς_b while the table acts on κ·ς_aς_b.
        int e_old = (is_odd(a) && is_odd(b)) ? 1 : 0;
        int e_new = (is_odd(a2) && is_odd(b2)) ? 1 : 0;
        t.coeff = times_i_power(double(img.sign) * t.coeff, e_new - e_old);
        t.labels[bond] = a2;
        t.labels[bond + 1] = b2;
    }
    return out;
}

size_t row_size(const Tensor &psi2) {
    // Rows are the legs up to and including ψ_j.
    bool has_left = psi2.leg(0).conj;
    return has_left ? psi2.dim(0) * 2 : 2;
}

}  // namespace

void SweepConfig::validate() const {
    if (chi_max < 1) throw ConfigError("chi must be >= 1");
    if (n_sweeps < 1) throw ConfigError("sweeps must be >= 1");
    if (!(cutoff >= 0)) throw ConfigError("cutoff must be >= 0");
    if (!(eig_tol > 0)) throw ConfigError("eigensolver tolerance must be > 0");
    if (eig_max_iter < 1) throw ConfigError("eigensolver iteration limit must be >= 1");
    if (!(entropy_gain_threshold >= 0)) throw ConfigError("entropy threshold must be >= 0");
    if (warmup_sweeps < 0) throw ConfigError("warm-up sweeps must be >= 0");
}

EnvCache::EnvCache(const GMPS &state, const Hamiltonian &h) {
    const int n = state.size();
    if (h.n_sites != n) throw std::invalid_argument("environment: Hamiltonian size mismatch");
    left_.assign(n + 1, Side{});
    right_.assign(n + 1, Side{});
    left_[0].envs[""] = Tensor::scalar(1.0);
    right_[n].envs[""] = Tensor::scalar(1.0);
    for (int k = 0; k < state.center; k++) update_left(state, h, k);
    for (int k = n - 1; k > state.center; k--) update_right(state, h, k);
}

void EnvCache::update_left(const GMPS &s, const Hamiltonian &h, int k) {
    const Side &in = left_[k];
    const Tensor &m = s.sites[k];
    const bool hl = s.has_left(k);
    const std::string id_in(k, 'I'), id_out(k + 1, 'I');
    Side out;
    out.envs[id_out] = transfer_left(lookup(in, id_in), m, pauli_op(Pauli::I), hl);
    std::map<std::string, Tensor> block_ops;
    auto sup = supports(h);
    for (size_t i = 0; i < sup.size(); i++) {
        const auto &sp = sup[i];
        if (sp.first < 0 || sp.first > k || sp.last < k) continue;
        const std::string parent = sp.first < k ? sp.labels.substr(0, k) : id_in;
        const Pauli p = h.terms[i].labels[k];
        if (sp.last > k) {
            std::string key = sp.labels.substr(0, k + 1);
            if (!out.envs.count(key)) out.envs[key] = transfer_left(lookup(in, parent), m, pauli_op(p), hl);
        } else {
            Tensor op = h.terms[i].coeff * pauli_op(p);
            auto it = block_ops.find(parent);
            if (it == block_ops.end()) {
                block_ops.emplace(parent, op);
            } else {
                it->second += op;
            }
        }
    }
    if (in.has_block) accumulate(out.block, out.has_block, transfer_left(in.block, m, pauli_op(Pauli::I), hl));
    for (const auto &[parent, op] : block_ops) {
        accumulate(out.block, out.has_block, transfer_left(lookup(in, parent), m, op, hl));
    }
    left_[k + 1] = std::move(out);
}

void EnvCache::update_right(const GMPS &s, const Hamiltonian &h, int k) {
    const int n = s.size();
    const Side &in = right_[k + 1];
    const Tensor &m = s.sites[k];
    const bool hr = s.has_right(k);
    const std::string id_in(n - k - 1, 'I'), id_out(n - k, 'I');
    Side out;
    out.envs[id_out] = transfer_right(lookup(in, id_in), m, pauli_op(Pauli::I), hr);
    std::map<std::string, Tensor> block_ops;
    auto sup = supports(h);
    for (size_t i = 0; i < sup.size(); i++) {
        const auto &sp = sup[i];
        if (sp.first < 0 || sp.first > k || sp.last < k) continue;
        const std::string parent = sp.last > k ? sp.labels.substr(k + 1) : id_in;
        const Pauli p = h.terms[i].labels[k];
        if (sp.first < k) {
            std::string key = sp.labels.substr(k);
            if (!out.envs.count(key)) out.envs[key] = transfer_right(lookup(in, parent), m, pauli_op(p), hr);
        } else {
            Tensor op = h.terms[i].coeff * pauli_op(p);
            auto it = block_ops.find(parent);
            if (it == block_ops.end()) {
                block_ops.emplace(parent, op);
            } else {
                it->second += op;
            }
        }
    }
    if (in.has_block) accumulate(out.block, out.has_block, transfer_right(in.block, m, pauli_op(Pauli::I), hr));
    for (const auto &[parent, op] : block_ops) {
        accumulate(out.block, out.has_block, transfer_right(lookup(in, parent), m, op, hr));
    }
    right_[k] = std::move(out);
}

namespace {

using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Stride = Eigen::OuterStride<>;

// One (left, op, right) term through generic contractions, including the
// metric sign on the left virtual leg.
Tensor term_generic(const Tensor &psi2, const Tensor *left, cplx left_scalar, const Tensor &op, const Tensor *right,
                    cplx right_scalar) {
    Tensor x = left ? contract(psi2, 0, *left, 0) : left_scalar * psi2;
    Tensor y = contract(x, std::vector<int>{0, 1}, op, std::vector<int>{0, 2});
    Tensor w = right ? contract(y, 0, *right, 0) : right_scalar * y;
    if (left) {
        const size_t stride = w.size() / w.dim(0);
        for (size_t i = 0; i < w.size(); i++) {
            if (parity_of(i / stride)) w.data()[i] = -w.data()[i];
        }
    }
    return w;
}

int env_parity(const Tensor &t) {
    double even = 0, odd = 0;
    for (size_t i = 0; i < t.size(); i++) (parity_of(i) ? odd : even) += std::norm(t.data()[i]);
    if (even > 0 && odd > 0) throw std::logic_error("environment has mixed parity");
    if (even == 0 && odd == 0) return -1;  // vanishes identically
    return odd > 0 ? 1 : 0;
}

std::vector<Leg> probe_legs(const Tensor &t) {
    std::vector<Leg> legs = t.legs();
    for (auto &l : legs) l.generators = 1;
    return legs;
}

Tensor unit(std::vector<Leg> legs, size_t flat) {
    Tensor t(std::move(legs), false);
    t.data()[flat] = 1.0;
    return t;
}

using SignTable = std::array<std::array<int8_t, 16>, 2>;  // [output row parity][op entry]

// Reads the sign of every (row parity, op entry) channel off the generic path
// using one-generator tensors with a single unit entry each.
SignTable probe_signs(const Tensor *left, const Tensor *right, const Tensor &op, int pl, int pr) {
    SignTable table{};
    const bool hl = left != nullptr, hr = right != nullptr;
    std::vector<Leg> psi_legs;
    if (hl) psi_legs.push_back({1, true});
    psi_legs.push_back({1, false});
    psi_legs.push_back({1, false});
    if (hr) psi_legs.push_back({1, false});
    for (int p = 0; p < (hl ? 2 : 1); p++) {
        for (int e = 0; e < 16; e++) {
            const int i1 = (e >> 3) & 1, k1 = (e >> 2) & 1, i2 = (e >> 1) & 1, k2 = e & 1;
            if ((i1 ^ k1 ^ i2 ^ k2) != (pl ^ pr)) continue;
            const int q = p ^ i1 ^ i2;  // right index parity of the input
            if (!hr && q) continue;
            size_t in = 0, out_idx = 0;
            auto push = [](size_t &f, int bit) { f = f * 2 + static_cast<size_t>(bit); };
            if (hl) push(in, p), push(out_idx, p ^ pl);
            push(in, i1), push(in, i2), push(out_idx, k1), push(out_idx, k2);
            if (hr) push(in, q), push(out_idx, q ^ pr);
            Tensor psi = unit(psi_legs, in);
            Tensor l = hl ? unit(probe_legs(*left), static_cast<size_t>(p * 2 + (p ^ pl))) : Tensor();
            Tensor r = hr ? unit(probe_legs(*right), static_cast<size_t>(q * 2 + (q ^ pr))) : Tensor();
            Tensor w = term_generic(psi, hl ? &l : nullptr, 1.0, unit(probe_legs(op), e), hr ? &r : nullptr, 1.0);
            for (size_t i = 0; i < w.size(); i++) {
                const double want = i == out_idx ? 1.0 : 0.0;
                if (std::abs(std::abs(w.data()[i]) - want) > 0 || w.data()[i].imag() != 0) {
                    throw SelfCheckError("effective Hamiltonian sign probe is not a signed unit");
                }
            }
            table[hl ? (p ^ pl) : 0][e] = w.data()[out_idx].real() > 0 ? 1 : -1;
        }
    }
    return table;
}

const SignTable &cached_signs(const Tensor *left, const Tensor *right, const Tensor &op, int pl, int pr) {
    thread_local std::map<std::array<int, 4>, SignTable> cache;
    std::array<int, 4> key{left != nullptr, right != nullptr, pl, pr};
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, probe_signs(left, right, op, pl, pr)).first;
    return it->second;
}

}  // namespace

EffectiveHamiltonian::EffectiveHamiltonian(const EnvCache &env, const Hamiltonian &h, int j, int n) {
    if (j < 0 || j + 1 >= n || h.n_sites != n) throw std::invalid_argument("effective Hamiltonian: bad bond");
    has_left_ = j > 0;
    has_right_ = j + 2 < n;
    const EnvCache::Side &ls = env.left(j), &rs = env.right(j + 2);
    const std::string id_l(j, 'I'), id_r(n - j - 2, 'I');

    std::map<const Tensor *, int> lidx, ridx;
    auto index_of = [](std::map<const Tensor *, int> &idx, std::vector<Env> &list, const Tensor *t) {
        auto [it, fresh] = idx.emplace(t, static_cast<int>(list.size()));
        if (fresh) list.push_back({t, 0, {}, 0.0});
        return it->second;
    };
    std::map<std::pair<int, int>, Tensor> ops;
    auto add = [&](const Tensor *l, const Tensor *r, const Tensor &op) {
        int li = index_of(lidx, lefts_, l), ri = index_of(ridx, rights_, r);
        auto it = ops.find({li, ri});
        if (it == ops.end()) {
            ops.emplace(std::make_pair(li, ri), op);
        } else {
            it->second += op;
        }
    };
    auto sup = supports(h);
    for (size_t i = 0; i < sup.size(); i++) {
        const auto &sp = sup[i];
        if (sp.first < 0) {
            // Pure identity: treat as a local term.
            add(&lookup(ls, id_l), &lookup(rs, id_r), h.terms[i].coeff * outer_pair(Pauli::I, Pauli::I));
            continue;
        }
        if (sp.last < j || sp.first > j + 1) continue;  // inside a block
        const Tensor *l = &lookup(ls, sp.first < j ? sp.labels.substr(0, j) : id_l);
        const Tensor *r = &lookup(rs, sp.last > j + 1 ? sp.labels.substr(j + 2) : id_r);
        add(l, r, h.terms[i].coeff * outer_pair(h.terms[i].labels[j], h.terms[i].labels[j + 1]));
    }
    if (ls.has_block) add(&ls.block, &lookup(rs, id_r), outer_pair(Pauli::I, Pauli::I));
    if (rs.has_block) add(&lookup(ls, id_l), &rs.block, outer_pair(Pauli::I, Pauli::I));

    // Virtual indices split by parity; a missing leg is a single even slot.
    dl_ = has_left_ ? lookup(ls, id_l).dim(0) : 1;
    dr_ = has_right_ ? lookup(rs, id_r).dim(0) : 1;
    for (size_t i = 0; i < dl_; i++) lidx_[parity_of(i)].push_back(static_cast<Eigen::Index>(i));
    for (size_t i = 0; i < dr_; i++) ridx_[parity_of(i)].push_back(static_cast<Eigen::Index>(i));
    for (int s = 0; s < 4; s++) {
        for (int p = 0; p < 2; p++) {
            const int q = p ^ parity_of(s);
            Block &b = blocks_[s * 2 + p];
            b.rows = static_cast<Eigen::Index>(lidx_[p].size());
            b.cols = static_cast<Eigen::Index>(ridx_[q].size());
            if (b.rows == 0 || b.cols == 0) continue;
            b.offset = packed_size_;
            packed_size_ += b.rows * b.cols;
        }
    }

    for (auto &e : lefts_) {
        if (!has_left_) {
            e.parity = 0;
            e.scalar = e.tensor->data()[0];
            continue;
        }
        e.parity = env_parity(*e.tensor);
        if (e.parity < 0) continue;
        for (int p = 0; p < 2; p++) {
            const auto &rows = lidx_[p ^ e.parity], &cols = lidx_[p];
            e.blk[p].resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
            for (size_t a = 0; a < rows.size(); a++) {
                for (size_t c = 0; c < cols.size(); c++) e.blk[p](a, c) = e.tensor->data()[cols[c] * dl_ + rows[a]];
            }
        }
    }
    for (auto &e : rights_) {
        if (!has_right_) {
            e.parity = 0;
            e.scalar = e.tensor->data()[0];
            continue;
        }
        e.parity = env_parity(*e.tensor);
        if (e.parity < 0) continue;
        for (int q = 0; q < 2; q++) {
            const auto &rows = ridx_[q], &cols = ridx_[q ^ e.parity];
            e.blk[q].resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
            for (size_t a = 0; a < rows.size(); a++) {
                for (size_t c = 0; c < cols.size(); c++) e.blk[q](a, c) = e.tensor->data()[rows[a] * dr_ + cols[c]];
            }
        }
    }
    for (auto &[key, op] : ops) {
        const Env &l = lefts_[key.first], &r = rights_[key.second];
        if (l.parity < 0 || r.parity < 0) continue;
        const SignTable &sg = cached_signs(has_left_ ? l.tensor : nullptr, has_right_ ? r.tensor : nullptr, op,
                                           l.parity, r.parity);
        Term t{key.first, key.second, std::move(op), {}};
        for (int p = 0; p < 2; p++) {
            for (int e = 0; e < 16; e++) {
                const int s = ((e >> 3) & 1) * 2 + ((e >> 1) & 1), s2 = ((e >> 2) & 1) * 2 + (e & 1);
                const cplx v = t.op.data()[e];
                if (v == 0.0) continue;
                if (sg[p][e] == 0) continue;  // channel unreachable from an even input
                t.m[p][s * 4 + s2] += double(sg[p][e]) * v;
            }
        }
        terms_.push_back(std::move(t));
    }
}

Eigen::VectorXcd EffectiveHamiltonian::pack(const Tensor &psi2) const {
    if (psi2.size() != dl_ * 4 * dr_) throw std::invalid_argument("effective Hamiltonian: tensor shape mismatch");
    Eigen::VectorXcd v(packed_size_);
    for (int s = 0; s < 4; s++) {
        for (int p = 0; p < 2; p++) {
            const Block &b = block(s, p);
            if (b.offset < 0) continue;
            const auto &rows = lidx_[p], &cols = ridx_[p ^ parity_of(s)];
            Eigen::Index k = b.offset;
            for (Eigen::Index l : rows) {
                for (Eigen::Index r : cols) v[k++] = psi2.data()[(l * 4 + s) * dr_ + r];
            }
        }
    }
    return v;
}

Tensor EffectiveHamiltonian::unpack(const Eigen::VectorXcd &v, const std::vector<Leg> &legs) const {
    Tensor t(legs, true);
    if (t.size() != dl_ * 4 * dr_ || v.size() != packed_size_) {
        throw std::invalid_argument("effective Hamiltonian: tensor shape mismatch");
    }
    for (int s = 0; s < 4; s++) {
        for (int p = 0; p < 2; p++) {
            const Block &b = block(s, p);
            if (b.offset < 0) continue;
            const auto &rows = lidx_[p], &cols = ridx_[p ^ parity_of(s)];
            Eigen::Index k = b.offset;
            for (Eigen::Index l : rows) {
                for (Eigen::Index r : cols) t.data()[(l * 4 + s) * dr_ + r] = v[k++];
            }
        }
    }
    return t;
}

void EffectiveHamiltonian::apply_packed(const Eigen::VectorXcd &in, Eigen::VectorXcd &out) const {
    using CMap = Eigen::Map<const RowMat>;
    using WMap = Eigen::Map<RowMat>;
    out.setZero(packed_size_);
    // z[(right*4 + s')*2 + p']: left env and physical op applied, right env pending.
    std::vector<RowMat> z(rights_.size() * 8);
    std::vector<char> used(z.size(), 0);
    std::array<RowMat, 8> x;
    int current = -1;
    for (const Term &t : terms_) {
        const Env &l = lefts_[t.left];
        if (t.left != current) {
            current = t.left;
            for (int k = 0; k < 8; k++) {
                const Block &b = blocks_[k];
                if (b.offset < 0) continue;
                CMap blk(in.data() + b.offset, b.rows, b.cols);
                if (has_left_) {
                    x[k].noalias() = l.blk[k & 1] * blk;
                } else {
                    x[k] = l.scalar * blk;
                }
            }
        }
        for (int k = 0; k < 8; k++) {
            if (blocks_[k].offset < 0) continue;
            const int s = k >> 1, p2 = (k & 1) ^ l.parity;
            for (int s2 = 0; s2 < 4; s2++) {
                const cplx c = t.m[p2][s * 4 + s2];
                if (c == 0.0) continue;
                const size_t zi = (static_cast<size_t>(t.right) * 4 + s2) * 2 + p2;
                if (!used[zi]) {
                    z[zi] = c * x[k];
                    used[zi] = 1;
                } else {
                    z[zi] += c * x[k];
                }
            }
        }
    }
    for (size_t r = 0; r < rights_.size(); r++) {
        for (int s2 = 0; s2 < 4; s2++) {
            for (int p2 = 0; p2 < 2; p2++) {
                const size_t zi = (r * 4 + s2) * 2 + p2;
                if (!used[zi]) continue;
                const Block &b = block(s2, p2);
                if (b.offset < 0) throw std::logic_error("effective Hamiltonian: output block missing");
                WMap w(out.data() + b.offset, b.rows, b.cols);
                if (has_right_) {
                    const int q = p2 ^ parity_of(s2) ^ rights_[r].parity;
                    w.noalias() += z[zi] * rights_[r].blk[q];
                } else {
                    w += rights_[r].scalar * z[zi];
                }
            }
        }
    }
}

Tensor EffectiveHamiltonian::apply(const Tensor &psi2) const {
    Eigen::VectorXcd w;
    apply_packed(pack(psi2), w);
    return unpack(w, psi2.legs());
}

Tensor EffectiveHamiltonian::apply_reference(const Tensor &psi2) const {
    Tensor out(psi2.legs(), true);
    for (const Term &t : terms_) {
        const Env &l = lefts_[t.left], &r = rights_[t.right];
        out += term_generic(psi2, has_left_ ? l.tensor : nullptr, l.scalar, t.op, has_right_ ? r.tensor : nullptr,
                            r.scalar);
    }
    out.set_even_declared(true);
    return out;
}

double EffectiveHamiltonian::energy(const Tensor &psi2) const {
    Eigen::VectorXcd v = pack(psi2), w;
    apply_packed(v, w);
    return v.dot(w).real() / v.squaredNorm();
}

Tensor effective_apply(const EnvCache &env, const Hamiltonian &h, int bond, const Tensor &psi2) {
    return EffectiveHamiltonian(env, h, bond, h.n_sites).apply(psi2);
}

LocalSolve local_ground_state(const EffectiveHamiltonian &heff, const Tensor &guess, double tol, int max_iter) {
    MatVec mv = [&heff](const Eigen::VectorXcd &in, Eigen::VectorXcd &out) { heff.apply_packed(in, out); };
    LanczosOptions opt;
    opt.tol = tol;
    opt.max_iter = max_iter;
    EigResult r = lowest_eigenpair(mv, heff.pack(guess), opt);
    return {r.value, heff.unpack(r.vector / r.vector.norm(), guess.legs()), r.residual, r.matvecs, r.converged};
}

Tensor two_site_tensor(const GMPS &s, int bond) {
    const Tensor &a = s.sites[bond];
    return contract(a, static_cast<int>(a.rank()) - 1, s.sites[bond + 1], 0);
}

double two_site_entropy(const Tensor &psi2, Measure measure) {
    const size_t nr = row_size(psi2), nc = psi2.size() / nr;
    std::vector<double> probs;
    double total = 0;
    for (int par = 0; par < 2; par++) {
        std::vector<size_t> rows, cols;
        for (size_t i = 0; i < nr; i++) {
            if (parity_of(i) == par) rows.push_back(i);
        }
        for (size_t j = 0; j < nc; j++) {
            if (parity_of(j) == par) cols.push_back(j);
        }
        Eigen::MatrixXcd a(rows.size(), cols.size());
        for (size_t r = 0; r < rows.size(); r++) {
            for (size_t c = 0; c < cols.size(); c++) a(r, c) = psi2.data()[rows[r] * nc + cols[c]];
        }
        Eigen::MatrixXcd gram = rows.size() <= cols.size() ? Eigen::MatrixXcd(a * a.adjoint())
                                                            : Eigen::MatrixXcd(a.adjoint() * a);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
        for (Eigen::Index k = 0; k < es.eigenvalues().size(); k++) {
            double p = std::max(es.eigenvalues()[k], 0.0);
            probs.push_back(p);
            total += p;
        }
    }
    if (!(total > 0)) return 0.0;
    double s = 0;
    if (measure == Measure::Renyi2) {
        for (double p : probs) s += (p / total) * (p / total);
        return std::max(-std::log(s), 0.0);
    }
    for (double p : probs) {
        double q = p / total;
        if (q > 0) s -= q * std::log(q);
    }
    return std::max(s, 0.0);
}

Tensor apply_gate(const Tensor &psi2, const CliffordGate &gate) {
    const bool hl = psi2.leg(0).conj;
    const int rank = static_cast<int>(psi2.rank());
    const bool hr = rank == (hl ? 4 : 3);
    const int pj = hl ? 1 : 0;
    Tensor t = contract(psi2, std::vector<int>{pj, pj + 1}, conj(gate.tensor), std::vector<int>{0, 1});
    // t: ([φ†], [φ], ψ'_{j+1}, ψ'_j)
    const int rest = (hl ? 1 : 0) + (hr ? 1 : 0);
    std::vector<int> order;
    if (hl) order.push_back(0);
    order.push_back(rest + 1);
    order.push_back(rest);
    if (hr) order.push_back(hl ? 1 : 0);
    Tensor out = sign_permute(t, order);
    out.set_even_declared(true);
    return out;
}

Disentangled disentangle(const Tensor &psi2, const std::vector<CliffordGate> &gates, double threshold,
                         Measure measure) {
    if (gates.empty() || !gates[0].word.empty()) throw std::invalid_argument("gate list must start with the identity");
    Disentangled out;
    out.entropy_before = two_site_entropy(psi2, measure);
    int best = 0;
    double best_s = out.entropy_before;
    Tensor best_psi = psi2;
    for (size_t g = 1; g < gates.size(); g++) {
        Tensor t = apply_gate(psi2, gates[g]);
        double s = two_site_entropy(t, measure);
        if (s < best_s - threshold) {
            best = static_cast<int>(g);
            best_s = s;
            best_psi = std::move(t);
        }
    }
    out.gate = best;
    out.entropy_after = best_s;
    out.psi2 = std::move(best_psi);
    return out;
}

Split truncate_split(const Tensor &psi2, size_t chi_max, double cutoff, bool move_right) {
    const bool hl = psi2.leg(0).conj;
    std::vector<int> rows = hl ? std::vector<int>{0, 1} : std::vector<int>{0};
    SvdResult r = svd(psi2, rows, chi_max, cutoff, true);
    Split s;
    if (move_right) {
        s.left = r.u;
        s.right = scale_leg(r.v, 0, r.weights);
    } else {
        s.left = scale_leg(r.u, static_cast<int>(r.u.rank()) - 1, r.weights);
        s.right = r.v;
    }
    s.spectrum = r.spectrum;
    s.discarded = r.discarded;
    return s;
}

Hamiltonian conjugate_hamiltonian(const Hamiltonian &h, const CliffordGate &gate, int bond) {
    return conjugate_by(h, gate.tableau, bond);
}

Hamiltonian conjugate_hamiltonian_inverse(const Hamiltonian &h, const CliffordGate &gate, int bond) {
    return conjugate_by(h, inverse_tableau(gate.tableau), bond);
}

void sweep(GMPS &s, Hamiltonian &h, EnvCache &env, const SweepConfig &cfg, SweepReport &rep, int sweep_index) {
    const int n = s.size();
    if (s.center != 0) throw std::invalid_argument("sweep: center must be at site 0");
    const std::vector<CliffordGate> *gates = cfg.clifford_enabled ? &canonical_gates().gates : nullptr;
    constexpr double kHardResidual = 1e-5;

    for (int dir : {+1, -1}) {
        double trunc = 0, energy = 0;
        for (int step = 0; step + 1 < n; step++) {
            const int j = dir > 0 ? step : n - 2 - step;
            const bool last = step + 2 == n;
            Tensor psi = two_site_tensor(s, j);
            EffectiveHamiltonian heff(env, h, j, n);
            LocalSolve sol = local_ground_state(heff, psi, cfg.eig_tol, cfg.eig_max_iter);
            rep.max_residual = std::max(rep.max_residual, sol.residual);
            if (!sol.converged) {
                rep.unconverged_solves++;
                if (sol.residual > kHardResidual * std::max(1.0, std::abs(sol.energy))) {
                    throw NumericalError("eigensolver did not converge at bond " + std::to_string(j) +
                                         " (residual " + std::to_string(sol.residual) + ")");
                }
            }
            Tensor best = std::move(sol.psi2);
            if (gates) {
                Disentangled d = disentangle(best, *gates, cfg.entropy_gain_threshold, cfg.measure);
                rep.gates.push_back({sweep_index, j, d.gate, d.entropy_before, d.entropy_after});
                if (d.gate != 0) {
                    Hamiltonian rotated = conjugate_hamiltonian(h, (*gates)[d.gate], j);
                    if (cfg.check_invariance) {
                        double e1 = heff.energy(best);
                        double e2 = EffectiveHamiltonian(env, rotated, j, n).energy(d.psi2);
                        double err = std::abs(e2 - e1);
                        rep.max_invariance_error = std::max(rep.max_invariance_error, err);
                        if (err > 1e-10 * std::max(1.0, std::abs(e1))) {
                            throw SelfCheckError("energy changed under a Clifford rotation at bond " + std::to_string(j));
                        }
                    }
                    h = std::move(rotated);
                    best = std::move(d.psi2);
                }
            }
            Split sp = truncate_split(best, cfg.chi_max, cfg.cutoff, dir > 0);
            s.sites[j] = std::move(sp.left);
            s.sites[j + 1] = std::move(sp.right);
            s.center = dir > 0 ? j + 1 : j;
            trunc = std::max(trunc, sp.discarded);
            if (last) {
                energy = EffectiveHamiltonian(env, h, j, n).energy(two_site_tensor(s, j));
            } else if (dir > 0) {
                env.update_left(s, h, j);
            } else {
                env.update_right(s, h, j + 1);
            }
        }
        // Truncation makes half sweeps oscillate; compare whole sweeps only.
        const size_t k = rep.energies.size();
        if (dir < 0 && k >= 2 && energy > rep.energies[k - 2] + 1e-9) rep.monotonicity_violations++;
        rep.energies.push_back(energy);
        rep.truncation.push_back(trunc);
    }
}

std::vector<int> initial_occupations(int L) {
    int N = L / 2;
    if (N % 2) N--;
    std::vector<int> occ(L, 0);
    for (int a = 0; a < L; a++) occ[a] = ((a + 1) * N) / L > (a * N) / L ? 1 : 0;
    return occ;
}

Hamiltonian unrotate(const Hamiltonian &h, const std::vector<GateRecord> &log) {
    const auto &gates = canonical_gates().gates;
    Hamiltonian out = h;
    for (auto it = log.rbegin(); it != log.rend(); ++it) {
        if (it->gate != 0) out = conjugate_hamiltonian_inverse(out, gates.at(it->gate), it->bond);
    }
    return out;
}

RunResult run(const ModelSpec &model, const SweepConfig &cfg) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const Hamiltonian original = build_model(model);
    RunResult res;
    res.state = cfg.random_init ? random_even_init(model.L, cfg.chi_max, cfg.seed)
                                : product_init(initial_occupations(model.L));
    canonicalize(res.state, 0);
    res.hamiltonian = original;
    EnvCache env(res.state, res.hamiltonian);
    SweepConfig plain = cfg;
    plain.clifford_enabled = false;
    for (int k = 0; k < cfg.n_sweeps; k++) {
        sweep(res.state, res.hamiltonian, env, k < cfg.warmup_sweeps ? plain : cfg, res.report, k);
    }
    res.report.bond_entropies = bond_entropies(res.state);
    res.energy = res.report.energies.back();

    Hamiltonian back = unrotate(res.hamiltonian, res.report.gates);
    for (size_t i = 0; i < back.terms.size(); i++) {
        if (back.terms[i].labels != original.terms[i].labels || back.terms[i].coeff != original.terms[i].coeff) {
            throw SelfCheckError("rotated Hamiltonian does not map back to the original");
        }
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

namespace {
const char kCheckpointMagic[8] = {'C', 'A', 'G', 'M', 'P', 'S', 'C', 'K'};
constexpr uint32_t kCheckpointVersion = 1;
}  // namespace

void write_checkpoint(std::ostream &out, const GMPS &state, const Hamiltonian &h, const std::vector<GateRecord> &log) {
    out.write(kCheckpointMagic, 8);
    binio::put_u32(out, kCheckpointVersion);
    write_state(out, state);
    binio::put_u32(out, static_cast<uint32_t>(h.n_sites));
    binio::put_u32(out, static_cast<uint32_t>(h.terms.size()));
    for (const auto &t : h.terms) {
        binio::put_f64(out, t.coeff.real());
        binio::put_f64(out, t.coeff.imag());
        std::string labels = t.label_string();
        out.write(labels.data(), static_cast<std::streamsize>(labels.size()));
    }
    binio::put_u32(out, static_cast<uint32_t>(log.size()));
    for (const auto &g : log) {
        binio::put_i32(out, g.sweep);
        binio::put_i32(out, g.bond);
        binio::put_i32(out, g.gate);
        binio::put_f64(out, g.entropy_before);
        binio::put_f64(out, g.entropy_after);
    }
}

void read_checkpoint(std::istream &in, GMPS &state, Hamiltonian &h, std::vector<GateRecord> &log) {
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, kCheckpointMagic, 8) != 0) throw ConfigError("not a checkpoint file");
    if (binio::get_u32(in) != kCheckpointVersion) throw ConfigError("unsupported checkpoint version");
    state = read_state(in);
    h = Hamiltonian{};
    h.n_sites = static_cast<int>(binio::get_u32(in));
    if (h.n_sites != state.size()) throw ConfigError("checkpoint: Hamiltonian does not match the state");
    uint32_t m = binio::get_u32(in);
    for (uint32_t i = 0; i < m; i++) {
        PauliString t;
        double re = binio::get_f64(in);
        double im = binio::get_f64(in);
        t.coeff = cplx(re, im);
        std::string labels(h.n_sites, 'I');
        if (!in.read(labels.data(), h.n_sites)) throw ConfigError("checkpoint truncated");
        for (char c : labels) t.labels.push_back(pauli_from_char(c));
        h.terms.push_back(std::move(t));
    }
    uint32_t g = binio::get_u32(in);
    log.clear();
    for (uint32_t i = 0; i < g; i++) {
        GateRecord r;
        r.sweep = binio::get_i32(in);
        r.bond = binio::get_i32(in);
        r.gate = binio::get_i32(in);
        r.entropy_before = binio::get_f64(in);
        r.entropy_after = binio::get_f64(in);
        log.push_back(r);
    }
}

}  // namespace cagmps
