// Copyright 2026 The cagmps Authors
// SPDX-License-Identifier: Apache-2.0

// Two-site DMRG on a GMPS with an optional Clifford disentangling step.
// Bond j joins sites j and j+1; its two-site tensor has signature
// (φ†_{j-1}, ψ_j, ψ_{j+1}, φ_{j+1}) with the boundary legs dropped.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "clifford.hpp"
#include "gmps.hpp"
#include "lanczos.hpp"
#include "models.hpp"

namespace cagmps {

enum class Measure { VonNeumann, Renyi2 };

struct SweepConfig {
    size_t chi_max = 64;
    double cutoff = 1e-14;
    int n_sweeps = 40;
    bool clifford_enabled = true;
    double eig_tol = 1e-10;
    int eig_max_iter = 200;
    double entropy_gain_threshold = 1e-12;
    Measure measure = Measure::VonNeumann;
    bool check_invariance = true;
    bool random_init = true;  // otherwise an evenly spread product state
    int warmup_sweeps = 1;    // plain sweeps before disentangling starts
    uint64_t seed = 1;

    void validate() const;
};

struct GateRecord {
    int sweep = 0;
    int bond = 0;
    int gate = 0;
    double entropy_before = 0;
    double entropy_after = 0;
};

struct SweepReport {
    std::vector<double> energies;    // after each half sweep
    std::vector<double> truncation;  // largest discarded weight per half sweep
    std::vector<GateRecord> gates;
    std::vector<double> bond_entropies;
    int unconverged_solves = 0;
    double max_residual = 0;
    int monotonicity_violations = 0;
    double max_invariance_error = 0;
};

/// Environments keyed by the label content of the string part they cover.
/// left[k] covers sites < k, right[k] covers sites >= k. `block` sums all
/// strings lying entirely inside the covered range.
class EnvCache {
   public:
    struct Side {
        std::map<std::string, Tensor> envs;
        Tensor block;
        bool has_block = false;
    };

    EnvCache() = default;
    /// Builds left[0..center] and right[center+1..n].
    EnvCache(const GMPS &state, const Hamiltonian &h);

    void update_left(const GMPS &state, const Hamiltonian &h, int k);   // left[k+1] from left[k]
    void update_right(const GMPS &state, const Hamiltonian &h, int k);  // right[k] from right[k+1]

    const Side &left(int k) const { return left_[k]; }
    const Side &right(int k) const { return right_[k]; }

   private:
    std::vector<Side> left_, right_;
};

/// H_eff for one bond with the environments resolved once. apply() includes
/// the sign of the Grassmann pairing on the left virtual leg, so it is
/// Hermitian in the Euclidean inner product on coefficients.
///
/// The fast path treats the four physical configurations as a batch of
/// (left × right) matrices: W_s' = Σ m(s,s') L^T Ψ_s R. The Grassmann signs
/// only depend on parities and are read off the generic contraction applied
/// to one-generator probes, so apply() and apply_reference() agree by
/// construction; tests compare them on random data anyway.
class EffectiveHamiltonian {
   public:
    EffectiveHamiltonian(const EnvCache &env, const Hamiltonian &h, int bond, int n_sites);
    Tensor apply(const Tensor &psi2) const;
    /// Same map through generic contractions, one term at a time.
    Tensor apply_reference(const Tensor &psi2) const;
    double energy(const Tensor &psi2) const;

    /// Even entries grouped into dense parity blocks; the Lanczos vector.
    Eigen::Index packed_size() const { return packed_size_; }
    Eigen::VectorXcd pack(const Tensor &psi2) const;
    Tensor unpack(const Eigen::VectorXcd &v, const std::vector<Leg> &legs) const;
    void apply_packed(const Eigen::VectorXcd &in, Eigen::VectorXcd &out) const;

    size_t left_count() const { return lefts_.size(); }
    size_t right_count() const { return rights_.size(); }
    size_t term_count() const { return terms_.size(); }

   private:
    struct Env {
        const Tensor *tensor;
        int parity;
        // Left: L^T restricted to (rows p^parity, cols p). Right: R on (rows q, cols q^parity).
        std::array<Eigen::MatrixXcd, 2> blk;
        cplx scalar;
    };
    struct Term {
        int left, right;
        Tensor op;  // Σ coeff ς_j ς_{j+1}, legs (φ†1, ψ1, φ†2, ψ2)
        // Signed physical matrix per output-row parity, index s*4+s'.
        std::array<std::array<cplx, 16>, 2> m;
    };
    struct Block {
        Eigen::Index offset = -1, rows = 0, cols = 0;
    };
    const Block &block(int s, int p) const { return blocks_[s * 2 + p]; }

    std::vector<Env> lefts_, rights_;
    std::vector<Term> terms_;  // sorted by left
    bool has_left_ = false, has_right_ = false;
    size_t dl_ = 1, dr_ = 1;
    std::array<std::vector<Eigen::Index>, 2> lidx_, ridx_;  // virtual indices by parity
    std::array<Block, 8> blocks_;                            // by (s, left parity)
    Eigen::Index packed_size_ = 0;
};

Tensor effective_apply(const EnvCache &env, const Hamiltonian &h, int bond, const Tensor &psi2);

struct LocalSolve {
    double energy = 0;
    Tensor psi2;
    double residual = 0;
    int matvecs = 0;
    bool converged = false;
};
LocalSolve local_ground_state(const EffectiveHamiltonian &heff, const Tensor &guess, double tol, int max_iter);

Tensor two_site_tensor(const GMPS &state, int bond);
/// Entanglement across the middle of a two-site tensor, from the parity
/// blocks of its Gram matrix.
double two_site_entropy(const Tensor &psi2, Measure measure = Measure::VonNeumann);

/// Applies C to the ket, i.e. contracts the bra with C† on the physical legs.
Tensor apply_gate(const Tensor &psi2, const CliffordGate &gate);

struct Disentangled {
    int gate = 0;
    Tensor psi2;
    double entropy_before = 0;
    double entropy_after = 0;
};
Disentangled disentangle(const Tensor &psi2, const std::vector<CliffordGate> &gates, double threshold,
                         Measure measure = Measure::VonNeumann);

struct Split {
    Tensor left, right;
    std::vector<double> spectrum;
    double discarded = 0;
};
/// Renormalized parity-blocked split. With move_right the left factor is an
/// isometry and the weights go to the right factor, otherwise the reverse.
Split truncate_split(const Tensor &psi2, size_t chi_max, double cutoff, bool move_right);

/// H -> C H C† on sites (bond, bond+1) through the gate's tableau.
Hamiltonian conjugate_hamiltonian(const Hamiltonian &h, const CliffordGate &gate, int bond);
Hamiltonian conjugate_hamiltonian_inverse(const Hamiltonian &h, const CliffordGate &gate, int bond);

/// One full sweep: bonds 0..n-2 left to right, then n-2..0 back. The state
/// must have its center at site 0 and `env` must match it.
void sweep(GMPS &state, Hamiltonian &h, EnvCache &env, const SweepConfig &cfg, SweepReport &report, int sweep_index);

std::vector<int> initial_occupations(int L);

struct RunResult {
    SweepReport report;
    GMPS state;
    Hamiltonian hamiltonian;  // in the rotated frame
    double energy = 0;
    double seconds = 0;
};
RunResult run(const ModelSpec &model, const SweepConfig &cfg);

/// Undoes every logged gate, newest first.
Hamiltonian unrotate(const Hamiltonian &h, const std::vector<GateRecord> &log);

void write_checkpoint(std::ostream &out, const GMPS &state, const Hamiltonian &h, const std::vector<GateRecord> &log);
void read_checkpoint(std::istream &in, GMPS &state, Hamiltonian &h, std::vector<GateRecord> &log);

}  // namespace cagmps
