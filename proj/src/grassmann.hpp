// Copyright 2026 The cagmps Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

namespace cagmps {

using cplx = std::complex<double>;

/// A Grassmann leg. Index values are bitstrings over `generators` generators;
/// a non-conjugated leg writes its monomial in ascending generator order, a
/// conjugated one in descending order.
struct Leg {
    int generators = 1;
    bool conj = false;

    size_t dim() const { return size_t{1} << generators; }
    Leg dual() const { return Leg{generators, !conj}; }
    bool operator==(const Leg &) const = default;
};

inline int parity_of(uint64_t index) { return std::popcount(index) & 1; }

class Tensor {
   public:
    Tensor();  // rank 0, value 0
    explicit Tensor(std::vector<Leg> legs, bool even_declared = true);
    static Tensor scalar(cplx value);

    const std::vector<Leg> &legs() const { return legs_; }
    const Leg &leg(size_t k) const { return legs_[k]; }
    size_t rank() const { return legs_.size(); }
    size_t size() const { return data_.size(); }
    size_t dim(size_t k) const { return legs_[k].dim(); }

    bool even_declared() const { return even_; }
    void set_even_declared(bool even) { even_ = even; }

    cplx *data() { return data_.data(); }
    const cplx *data() const { return data_.data(); }
    std::vector<cplx> &coeffs() { return data_; }
    const std::vector<cplx> &coeffs() const { return data_; }

    size_t offset(std::initializer_list<size_t> index) const;
    cplx &operator()(std::initializer_list<size_t> index) { return data_[offset(index)]; }
    cplx operator()(std::initializer_list<size_t> index) const { return data_[offset(index)]; }

    /// Total parity of the entry stored at a flat offset. Dimensions are powers
    /// of two, so the flat offset is the concatenation of the per-leg bits.
    static int entry_parity(size_t flat) { return parity_of(flat); }

    /// Largest magnitude among odd-total-parity entries.
    double odd_weight() const;
    double max_abs() const;

    Tensor &operator+=(const Tensor &other);
    Tensor &operator-=(const Tensor &other);
    Tensor &operator*=(cplx s);

   private:
    std::vector<Leg> legs_;
    std::vector<cplx> data_;
    bool even_ = true;
};

Tensor operator+(Tensor a, const Tensor &b);
Tensor operator-(Tensor a, const Tensor &b);
Tensor operator*(cplx s, Tensor t);

double max_abs_diff(const Tensor &a, const Tensor &b);

/// Sign of reordering single-monomial factors with the given parities into
/// `order` (new position k holds old factor order[k]).
int reorder_sign(const std::vector<int> &parities, const std::vector<int> &order);

/// New leg k is old leg order[k]; entries pick up (-1)^{pq} per exchange.
Tensor sign_permute(const Tensor &t, const std::vector<int> &order);

/// Berezin contraction of the legs axes_a[k] with axes_b[k]. The product is
/// a·b; result legs are a's remaining legs followed by b's.
Tensor contract(const Tensor &a, const std::vector<int> &axes_a, const Tensor &b, const std::vector<int> &axes_b);
Tensor contract(const Tensor &a, int leg_a, const Tensor &b, int leg_b);

struct SplitPlan {
    std::vector<std::vector<Leg>> groups;
};

/// Joins consecutive runs of legs. group_sizes must sum to the rank.
std::pair<Tensor, SplitPlan> join_legs(const Tensor &t, const std::vector<int> &group_sizes);
Tensor split_legs(const Tensor &t, const SplitPlan &plan);

struct SvdResult {
    Tensor u;                      // row legs..., bond
    Tensor v;                      // bond†, column legs...
    std::vector<double> weights;   // singular value per bond index, zero on filler slots
    std::vector<double> spectrum;  // kept values, descending
    double discarded = 0;          // sum of squares of dropped values
    std::vector<int> order;        // leg order of contract(u, v) relative to the input
};

/// Largest power of two not exceeding chi_max.
size_t bond_capacity(size_t chi_max);

/// Parity-blocked SVD. Keeps the largest values above cutoff·max subject to
/// per-parity capacity bond_capacity(chi_max)/2 each (one even slot when the
/// capacity is 1). The bond leg gets the fewest generators that fit; spare
/// slots are filled with further singular vectors at weight zero so that u
/// and v stay isometric. With normalize set the kept spectrum is rescaled to
/// unit 2-norm.
SvdResult svd(const Tensor &t, const std::vector<int> &row_legs, size_t chi_max, double cutoff, bool normalize = false);

/// Multiplies slice i of the given leg by w[i].
Tensor scale_leg(const Tensor &t, int leg, const std::vector<double> &w);

Tensor conj(const Tensor &t);
double norm(const Tensor &t);

/// Dense matrix with rows joined from row_legs and columns from the rest.
/// Each group must share a conjugation type; at most 8 generators in total.
Eigen::MatrixXcd to_dense_matrix(const Tensor &t, const std::vector<int> &row_legs);
Tensor from_dense_matrix(const Eigen::MatrixXcd &m, const std::vector<Leg> &row_legs, const std::vector<Leg> &col_legs);

/// Entropy -Σ p ln p of the normalized squared spectrum.
double entropy_of_spectrum(const std::vector<double> &s);
double renyi2_of_spectrum(const std::vector<double> &s);

}  // namespace cagmps
