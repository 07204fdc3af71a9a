// Copyright 2026 The cagmps Authors
// SPDX-License-Identifier: Apache-2.0

#include "grassmann.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "errors.hpp"

namespace cagmps {

namespace {

using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::vector<size_t> strides_of(const std::vector<Leg> &legs) {
    std::vector<size_t> s(legs.size());
    size_t acc = 1;
    for (size_t k = legs.size(); k-- > 0;) {
        s[k] = acc;
        acc *= legs[k].dim();
    }
    return s;
}

// Sign lookup indexed by the parity mask of the source legs (bit a = parity
// of source leg a). Covers the reordering into sign_order plus a (-1)^p factor
// for each leg in orient_mask.
std::vector<int8_t> sign_table(size_t rank, const std::vector<int> &sign_order, uint64_t orient_mask) {
    std::vector<uint64_t> inverted(rank, 0);
    for (size_t x = 0; x < sign_order.size(); x++) {
        for (size_t y = x + 1; y < sign_order.size(); y++) {
            int a = sign_order[x], b = sign_order[y];
            if (a > b) {
                inverted[b] |= uint64_t{1} << a;
            }
        }
    }
    std::vector<int8_t> table(size_t{1} << rank);
    for (uint64_t mask = 0; mask < table.size(); mask++) {
        int s = std::popcount(mask & orient_mask);
        for (size_t a = 0; a < rank; a++) {
            if ((mask >> a) & 1) {
                s += std::popcount(mask & inverted[a]);
            }
        }
        table[mask] = (s & 1) ? -1 : 1;
    }
    return table;
}

bool is_identity(const std::vector<int> &order) {
    for (size_t k = 0; k < order.size(); k++) {
        if (order[k] != static_cast<int>(k)) return false;
    }
    return true;
}

bool all_positive(const std::vector<int8_t> &table) {
    return std::all_of(table.begin(), table.end(), [](int8_t s) { return s > 0; });
}

// Writes t's entries in the leg order `layout` (row-major), each multiplied
// by table[parity mask].
void gather(const Tensor &t, const std::vector<int> &layout, const std::vector<int8_t> *table, cplx *out) {
    const size_t r = t.rank();
    const cplx *src = t.data();
    if (r == 0) {
        out[0] = (table && (*table)[0] < 0) ? -src[0] : src[0];
        return;
    }
    auto stride = strides_of(t.legs());
    std::vector<size_t> dims(r), sstride(r);
    for (size_t k = 0; k < r; k++) {
        dims[k] = t.dim(layout[k]);
        sstride[k] = stride[layout[k]];
    }
    const size_t inner = dims[r - 1];
    const size_t istride = sstride[r - 1];
    const int ibit = layout[r - 1];
    std::vector<size_t> idx(r, 0);
    size_t base = 0;
    uint64_t mask = 0;
    size_t o = 0;
    const size_t total = t.size();
    while (o < total) {
        if (table) {
            for (size_t i = 0; i < inner; i++) {
                uint64_t m = mask ^ (uint64_t(parity_of(i)) << ibit);
                cplx v = src[base + i * istride];
                out[o++] = (*table)[m] < 0 ? -v : v;
            }
        } else {
            for (size_t i = 0; i < inner; i++) {
                out[o++] = src[base + i * istride];
            }
        }
        // Advance the outer odometer.
        for (size_t k = r - 1; k-- > 0;) {
            idx[k]++;
            base += sstride[k];
            mask ^= uint64_t(parity_of(idx[k]) ^ parity_of(idx[k] - 1)) << layout[k];
            if (idx[k] < dims[k]) break;
            base -= sstride[k] * dims[k];
            mask ^= uint64_t(parity_of(idx[k])) << layout[k];
            idx[k] = 0;
        }
    }
}

// Join/split index map: the joined offset of the entry at idx is
// Σ idx_k · tstride[k]. Non-conjugated groups put their first member in the
// low bits, conjugated groups their last member.
std::vector<size_t> join_strides(const std::vector<Leg> &legs, const std::vector<int> &group_sizes,
                                 const std::vector<Leg> &joined) {
    auto jstride = strides_of(joined);
    std::vector<size_t> tstride(legs.size());
    size_t pos = 0;
    for (size_t g = 0; g < group_sizes.size(); g++) {
        int acc = 0;
        auto place = [&](size_t k) {
            tstride[k] = jstride[g] << acc;
            acc += legs[k].generators;
        };
        if (!joined[g].conj) {
            for (int m = 0; m < group_sizes[g]; m++) place(pos + m);
        } else {
            for (int m = group_sizes[g]; m-- > 0;) place(pos + m);
        }
        pos += group_sizes[g];
    }
    return tstride;
}

template <typename F>
void for_each_mapped(const std::vector<Leg> &legs, const std::vector<size_t> &tstride, F &&f) {
    auto sstride = strides_of(legs);
    size_t total = 1;
    for (const auto &l : legs) total *= l.dim();
    for (size_t flat = 0; flat < total; flat++) {
        size_t t = 0, rem = flat;
        for (size_t k = 0; k < legs.size(); k++) {
            t += (rem / sstride[k]) * tstride[k];
            rem %= sstride[k];
        }
        f(flat, t);
    }
}

void check_order(const std::vector<int> &order, size_t rank, const char *what) {
    if (order.size() != rank) {
        throw std::invalid_argument(std::string(what) + ": permutation length mismatch");
    }
    std::vector<bool> seen(rank, false);
    for (int k : order) {
        if (k < 0 || static_cast<size_t>(k) >= rank || seen[k]) {
            throw std::invalid_argument(std::string(what) + ": not a permutation");
        }
        seen[k] = true;
    }
}

}  // namespace

Tensor::Tensor() : data_(1, cplx(0)) {}

Tensor::Tensor(std::vector<Leg> legs, bool even_declared) : legs_(std::move(legs)), even_(even_declared) {
    size_t n = 1;
    for (const auto &l : legs_) {
        if (l.generators < 0 || l.generators > 24) {
            throw std::invalid_argument("leg generator count out of range");
        }
        n *= l.dim();
    }
    data_.assign(n, cplx(0));
}

Tensor Tensor::scalar(cplx value) {
    Tensor t;
    t.data_[0] = value;
    return t;
}

size_t Tensor::offset(std::initializer_list<size_t> index) const {
    if (index.size() != legs_.size()) {
        throw std::invalid_argument("index rank mismatch");
    }
    size_t off = 0;
    size_t k = 0;
    for (size_t i : index) {
        if (i >= legs_[k].dim()) throw std::out_of_range("index out of range");
        off = off * legs_[k].dim() + i;
        k++;
    }
    return off;
}

double Tensor::odd_weight() const {
    double w = 0;
    for (size_t i = 0; i < data_.size(); i++) {
        if (entry_parity(i)) w = std::max(w, std::abs(data_[i]));
    }
    return w;
}

double Tensor::max_abs() const {
    double w = 0;
    for (const auto &c : data_) w = std::max(w, std::abs(c));
    return w;
}

Tensor &Tensor::operator+=(const Tensor &other) {
    if (other.legs_ != legs_) throw std::invalid_argument("tensor sum: leg mismatch");
    for (size_t i = 0; i < data_.size(); i++) data_[i] += other.data_[i];
    even_ = even_ && other.even_;
    return *this;
}

Tensor &Tensor::operator-=(const Tensor &other) {
    if (other.legs_ != legs_) throw std::invalid_argument("tensor difference: leg mismatch");
    for (size_t i = 0; i < data_.size(); i++) data_[i] -= other.data_[i];
    even_ = even_ && other.even_;
    return *this;
}

Tensor &Tensor::operator*=(cplx s) {
    for (auto &c : data_) c *= s;
    return *this;
}

Tensor operator+(Tensor a, const Tensor &b) { return a += b; }
Tensor operator-(Tensor a, const Tensor &b) { return a -= b; }
Tensor operator*(cplx s, Tensor t) { return t *= s; }

double max_abs_diff(const Tensor &a, const Tensor &b) {
    if (a.legs() != b.legs()) throw std::invalid_argument("max_abs_diff: leg mismatch");
    double d = 0;
    for (size_t i = 0; i < a.size(); i++) d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
    return d;
}

int reorder_sign(const std::vector<int> &parities, const std::vector<int> &order) {
    int s = 0;
    for (size_t x = 0; x < order.size(); x++) {
        for (size_t y = x + 1; y < order.size(); y++) {
            if (order[x] > order[y]) s ^= parities[order[x]] & parities[order[y]];
        }
    }
    return s ? -1 : 1;
}

Tensor sign_permute(const Tensor &t, const std::vector<int> &order) {
    check_order(order, t.rank(), "sign_permute");
    std::vector<Leg> legs(t.rank());
    for (size_t k = 0; k < order.size(); k++) legs[k] = t.leg(order[k]);
    Tensor out(std::move(legs), t.even_declared());
    if (is_identity(order)) {
        out.coeffs() = t.coeffs();
        return out;
    }
    auto table = sign_table(t.rank(), order, 0);
    gather(t, order, all_positive(table) ? nullptr : &table, out.data());
    return out;
}

Tensor contract(const Tensor &a, const std::vector<int> &axes_a, const Tensor &b, const std::vector<int> &axes_b) {
    if (axes_a.size() != axes_b.size()) {
        throw std::invalid_argument("contract: axis count mismatch");
    }
    const size_t k = axes_a.size();
    std::vector<bool> used_a(a.rank(), false), used_b(b.rank(), false);
    uint64_t orient = 0;
    for (size_t m = 0; m < k; m++) {
        int x = axes_a[m], y = axes_b[m];
        if (x < 0 || static_cast<size_t>(x) >= a.rank() || used_a[x] || y < 0 || static_cast<size_t>(y) >= b.rank() ||
            used_b[y]) {
            throw std::invalid_argument("contract: bad axis");
        }
        used_a[x] = used_b[y] = true;
        const Leg &la = a.leg(x), &lb = b.leg(y);
        if (la.generators != lb.generators) throw std::invalid_argument("contract: generator-count mismatch");
        if (la.conj == lb.conj) throw std::invalid_argument("contract: conjugation mismatch");
        if (la.conj) orient |= uint64_t{1} << x;
    }

    std::vector<int> order_a, layout_b, sign_b;
    std::vector<Leg> out_legs;
    size_t rows = 1, inner = 1, cols = 1;
    for (size_t x = 0; x < a.rank(); x++) {
        if (!used_a[x]) {
            order_a.push_back(static_cast<int>(x));
            out_legs.push_back(a.leg(x));
            rows *= a.dim(x);
        }
    }
    for (size_t m = 0; m < k; m++) {
        order_a.push_back(axes_a[m]);
        inner *= a.dim(axes_a[m]);
    }
    for (size_t m = k; m-- > 0;) sign_b.push_back(axes_b[m]);
    for (size_t m = 0; m < k; m++) layout_b.push_back(axes_b[m]);
    for (size_t y = 0; y < b.rank(); y++) {
        if (!used_b[y]) {
            sign_b.push_back(static_cast<int>(y));
            layout_b.push_back(static_cast<int>(y));
            out_legs.push_back(b.leg(y));
            cols *= b.dim(y);
        }
    }

    std::vector<cplx> buf_a, buf_b;
    const cplx *pa = a.data();
    auto table_a = sign_table(a.rank(), order_a, orient);
    if (!is_identity(order_a) || !all_positive(table_a)) {
        buf_a.resize(a.size());
        gather(a, order_a, all_positive(table_a) ? nullptr : &table_a, buf_a.data());
        pa = buf_a.data();
    }
    const cplx *pb = b.data();
    auto table_b = sign_table(b.rank(), sign_b, 0);
    if (!is_identity(layout_b) || !all_positive(table_b)) {
        buf_b.resize(b.size());
        gather(b, layout_b, all_positive(table_b) ? nullptr : &table_b, buf_b.data());
        pb = buf_b.data();
    }

    Tensor out(std::move(out_legs), a.even_declared() && b.even_declared());
    Eigen::Map<const RowMat> ma(pa, rows, inner);
    Eigen::Map<const RowMat> mb(pb, inner, cols);
    Eigen::Map<RowMat> mc(out.data(), rows, cols);
    mc.noalias() = ma * mb;
    return out;
}

Tensor contract(const Tensor &a, int leg_a, const Tensor &b, int leg_b) {
    return contract(a, std::vector<int>{leg_a}, b, std::vector<int>{leg_b});
}

std::pair<Tensor, SplitPlan> join_legs(const Tensor &t, const std::vector<int> &group_sizes) {
    SplitPlan plan;
    std::vector<Leg> joined;
    size_t pos = 0;
    for (int gsize : group_sizes) {
        if (gsize <= 0 || pos + gsize > t.rank()) throw std::invalid_argument("join_legs: bad grouping");
        std::vector<Leg> members(t.legs().begin() + pos, t.legs().begin() + pos + gsize);
        Leg merged{0, members[0].conj};
        for (const auto &l : members) {
            if (l.conj != merged.conj) throw std::invalid_argument("join_legs: mixed conjugation within a group");
            merged.generators += l.generators;
        }
        joined.push_back(merged);
        plan.groups.push_back(std::move(members));
        pos += gsize;
    }
    if (pos != t.rank()) throw std::invalid_argument("join_legs: groups do not cover all legs");
    Tensor out(joined, t.even_declared());
    auto tstride = join_strides(t.legs(), group_sizes, joined);
    for_each_mapped(t.legs(), tstride, [&](size_t flat, size_t j) { out.data()[j] = t.data()[flat]; });
    return {std::move(out), std::move(plan)};
}

Tensor split_legs(const Tensor &t, const SplitPlan &plan) {
    if (plan.groups.size() != t.rank()) throw std::invalid_argument("split_legs: inconsistent plan");
    std::vector<Leg> legs;
    std::vector<int> group_sizes;
    for (size_t g = 0; g < plan.groups.size(); g++) {
        int total = 0;
        if (plan.groups[g].empty()) throw std::invalid_argument("split_legs: inconsistent plan");
        for (const auto &l : plan.groups[g]) {
            if (l.conj != t.leg(g).conj) throw std::invalid_argument("split_legs: inconsistent plan");
            total += l.generators;
            legs.push_back(l);
        }
        if (total != t.leg(g).generators) throw std::invalid_argument("split_legs: inconsistent plan");
        group_sizes.push_back(static_cast<int>(plan.groups[g].size()));
    }
    Tensor out(legs, t.even_declared());
    auto tstride = join_strides(legs, group_sizes, t.legs());
    for_each_mapped(legs, tstride, [&](size_t flat, size_t j) { out.data()[flat] = t.data()[j]; });
    return out;
}

size_t bond_capacity(size_t chi_max) {
    if (chi_max < 1) throw std::invalid_argument("chi_max must be >= 1");
    return std::bit_floor(chi_max);
}

SvdResult svd(const Tensor &t, const std::vector<int> &row_legs, size_t chi_max, double cutoff, bool normalize) {
    if (!t.even_declared()) throw std::invalid_argument("svd: tensor is not even");
    if (row_legs.empty() || row_legs.size() >= t.rank()) {
        throw std::invalid_argument("svd: row legs must be a nonempty proper subset");
    }
    std::vector<bool> is_row(t.rank(), false);
    for (int k : row_legs) {
        if (k < 0 || static_cast<size_t>(k) >= t.rank() || is_row[k]) throw std::invalid_argument("svd: bad row leg");
        is_row[k] = true;
    }
    SvdResult res;
    res.order = row_legs;
    for (size_t k = 0; k < t.rank(); k++) {
        if (!is_row[k]) res.order.push_back(static_cast<int>(k));
    }
    Tensor p = sign_permute(t, res.order);
    size_t nr = 1;
    std::vector<Leg> row_l, col_l;
    for (size_t k = 0; k < t.rank(); k++) {
        if (k < row_legs.size()) {
            nr *= p.dim(k);
            row_l.push_back(p.leg(k));
        } else {
            col_l.push_back(p.leg(k));
        }
    }
    const size_t nc = p.size() / nr;

    std::vector<size_t> rows[2], cols[2];
    for (size_t i = 0; i < nr; i++) rows[parity_of(i)].push_back(i);
    for (size_t j = 0; j < nc; j++) cols[parity_of(j)].push_back(j);

    Eigen::MatrixXcd bu[2], bv[2];
    Eigen::VectorXd bs[2];
    struct Cand {
        double s;
        int sec;
        int k;
    };
    std::vector<Cand> cands;
    for (int sec = 0; sec < 2; sec++) {
        if (rows[sec].empty() || cols[sec].empty()) continue;
        Eigen::MatrixXcd m(rows[sec].size(), cols[sec].size());
        for (size_t a = 0; a < rows[sec].size(); a++) {
            for (size_t b = 0; b < cols[sec].size(); b++) m(a, b) = p.data()[rows[sec][a] * nc + cols[sec][b]];
        }
        Eigen::BDCSVD<Eigen::MatrixXcd> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        bu[sec] = dec.matrixU();
        bv[sec] = dec.matrixV();
        bs[sec] = dec.singularValues();
        for (int k = 0; k < bs[sec].size(); k++) cands.push_back({bs[sec][k], sec, k});
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand &x, const Cand &y) { return x.s > y.s; });
    const double smax = cands.empty() ? 0.0 : cands[0].s;
    if (!(smax > 0)) throw NumericalError("svd: empty spectrum");

    const size_t cap = bond_capacity(chi_max);
    const size_t cap_e = cap == 1 ? 1 : cap / 2, cap_o = cap == 1 ? 0 : cap / 2;
    size_t kept[2] = {0, 0};
    double kept_sq = 0;
    for (const auto &c : cands) {
        bool ok = c.s > cutoff * smax && kept[c.sec] < (c.sec == 0 ? cap_e : cap_o);
        if (ok) {
            kept[c.sec]++;
            kept_sq += c.s * c.s;
            res.spectrum.push_back(c.s);
        } else {
            res.discarded += c.s * c.s;
        }
    }
    int g = 0;
    if (kept[1] > 0 || kept[0] > 1) {
        g = 1;
        while ((size_t{1} << (g - 1)) < std::max(kept[0], kept[1])) g++;
    }
    const size_t dim = size_t{1} << g;
    std::vector<size_t> slots[2];
    for (size_t i = 0; i < dim; i++) slots[parity_of(i)].push_back(i);

    Leg bond{g, false};
    row_l.push_back(bond);
    std::vector<Leg> vlegs{bond.dual()};
    vlegs.insert(vlegs.end(), col_l.begin(), col_l.end());
    res.u = Tensor(row_l, true);
    res.v = Tensor(vlegs, true);
    res.weights.assign(dim, 0.0);
    const double scale = normalize ? 1.0 / std::sqrt(kept_sq) : 1.0;
    for (int sec = 0; sec < 2; sec++) {
        size_t use = std::min<size_t>(slots[sec].size(), bs[sec].size());
        for (size_t k = 0; k < use; k++) {
            size_t b = slots[sec][k];
            for (size_t a = 0; a < rows[sec].size(); a++) res.u.data()[rows[sec][a] * dim + b] = bu[sec](a, k);
            for (size_t c = 0; c < cols[sec].size(); c++) {
                res.v.data()[b * nc + cols[sec][c]] = std::conj(bv[sec](c, k));
            }
            if (k < kept[sec]) res.weights[b] = bs[sec][k] * scale;
        }
    }
    if (normalize) {
        for (auto &s : res.spectrum) s *= scale;
    }
    return res;
}

Tensor scale_leg(const Tensor &t, int leg, const std::vector<double> &w) {
    if (leg < 0 || static_cast<size_t>(leg) >= t.rank() || w.size() != t.dim(leg)) {
        throw std::invalid_argument("scale_leg: weight size mismatch");
    }
    auto stride = strides_of(t.legs());
    const size_t st = stride[leg], d = t.dim(leg);
    Tensor out = t;
    for (size_t i = 0; i < out.size(); i++) out.data()[i] *= w[(i / st) % d];
    return out;
}

Tensor conj(const Tensor &t) {
    std::vector<int> rev(t.rank());
    std::vector<Leg> legs(t.rank());
    for (size_t k = 0; k < t.rank(); k++) {
        rev[k] = static_cast<int>(t.rank() - 1 - k);
        legs[k] = t.leg(rev[k]).dual();
    }
    Tensor out(std::move(legs), t.even_declared());
    gather(t, rev, nullptr, out.data());
    for (auto &c : out.coeffs()) c = std::conj(c);
    return out;
}

double norm(const Tensor &t) {
    double s = 0;
    for (const auto &c : t.coeffs()) s += std::norm(c);
    return std::sqrt(s);
}

Eigen::MatrixXcd to_dense_matrix(const Tensor &t, const std::vector<int> &row_legs) {
    int total = 0;
    for (const auto &l : t.legs()) total += l.generators;
    if (total > 8) throw std::invalid_argument("to_dense_matrix: more than 8 generators");
    std::vector<bool> is_row(t.rank(), false);
    std::vector<int> order = row_legs;
    for (int k : row_legs) {
        if (k < 0 || static_cast<size_t>(k) >= t.rank()) throw std::invalid_argument("to_dense_matrix: bad leg");
        is_row[k] = true;
    }
    for (size_t k = 0; k < t.rank(); k++) {
        if (!is_row[k]) order.push_back(static_cast<int>(k));
    }
    Tensor p = sign_permute(t, order);
    std::vector<int> groups;
    if (!row_legs.empty()) groups.push_back(static_cast<int>(row_legs.size()));
    if (row_legs.size() < t.rank()) groups.push_back(static_cast<int>(t.rank() - row_legs.size()));
    auto [j, plan] = join_legs(p, groups);
    const size_t nr = row_legs.empty() ? 1 : j.dim(0);
    const size_t nc = j.size() / nr;
    Eigen::MatrixXcd m(nr, nc);
    for (size_t a = 0; a < nr; a++) {
        for (size_t b = 0; b < nc; b++) m(a, b) = j.data()[a * nc + b];
    }
    return m;
}

Tensor from_dense_matrix(const Eigen::MatrixXcd &m, const std::vector<Leg> &row_legs, const std::vector<Leg> &col_legs) {
    Leg r{0, row_legs.empty() ? false : row_legs[0].conj};
    Leg c{0, col_legs.empty() ? false : col_legs[0].conj};
    for (const auto &l : row_legs) r.generators += l.generators;
    for (const auto &l : col_legs) c.generators += l.generators;
    if (static_cast<size_t>(m.rows()) != r.dim() || static_cast<size_t>(m.cols()) != c.dim()) {
        throw std::invalid_argument("from_dense_matrix: shape mismatch");
    }
    Tensor joined({r, c}, false);
    for (Eigen::Index a = 0; a < m.rows(); a++) {
        for (Eigen::Index b = 0; b < m.cols(); b++) joined.data()[a * m.cols() + b] = m(a, b);
    }
    Tensor out = split_legs(joined, SplitPlan{{row_legs, col_legs}});
    out.set_even_declared(out.odd_weight() == 0.0);
    return out;
}

double entropy_of_spectrum(const std::vector<double> &s) {
    double total = 0;
    for (double x : s) total += x * x;
    if (!(total > 0)) return 0.0;
    double e = 0;
    for (double x : s) {
        double p = x * x / total;
        if (p > 0) e -= p * std::log(p);
    }
    return std::max(e, 0.0);
}

double renyi2_of_spectrum(const std::vector<double> &s) {
    double total = 0, sq = 0;
    for (double x : s) total += x * x;
    if (!(total > 0)) return 0.0;
    for (double x : s) sq += (x * x / total) * (x * x / total);
    return std::max(-std::log(sq), 0.0);
}

}  // namespace cagmps
