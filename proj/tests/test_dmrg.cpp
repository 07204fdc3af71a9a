// Copyright 2026 The cagmps Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "dmrg.hpp"
#include "ed.hpp"
#include "errors.hpp"
#include "test_util.hpp"

using namespace cagmps;

namespace {

cplx inner(const Tensor &a, const Tensor &b) {
    cplx s = 0;
    for (size_t i = 0; i < a.size(); i++) s += std::conj(a.data()[i]) * b.data()[i];
    return s;
}

// kron(I, M, I) with site 0 as the most significant bit.
Eigen::MatrixXcd embed(const Eigen::Matrix4cd &m, int n, int bond) {
    const Eigen::Index lo = Eigen::Index(1) << (n - bond - 2), hi = Eigen::Index(1) << bond;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(hi * 4 * lo, hi * 4 * lo);
    for (Eigen::Index h = 0; h < hi; h++) {
        for (Eigen::Index l = 0; l < lo; l++) {
            for (int r = 0; r < 4; r++) {
                for (int c = 0; c < 4; c++) out((h * 4 + r) * lo + l, (h * 4 + c) * lo + l) = m(r, c);
            }
        }
    }
    return out;
}

// Writes a two-site tensor back into the state without truncation.
void store(GMPS &s, int bond, const Tensor &psi2) {
    Split sp = truncate_split(psi2, 1 << 12, 0.0, true);
    s.sites[bond] = sp.left;
    s.sites[bond + 1] = sp.right;
    s.center = bond + 1;
}

}  // namespace

TEST(lanczos, diagonal_operator) {
    const int dim = 600;
    Eigen::VectorXd diag(dim);
    for (int i = 0; i < dim; i++) diag[i] = 1.0 + 0.01 * i;
    diag[417] = -3.0;
    MatVec mv = [&](const Eigen::VectorXcd &in, Eigen::VectorXcd &out) { out = diag.cast<cplx>().cwiseProduct(in); };
    Eigen::VectorXcd guess = Eigen::VectorXcd::Ones(dim);
    LanczosOptions opt;
    opt.max_iter = 2000;
    EigResult r = lowest_eigenpair(mv, guess, opt);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, -3.0, 1e-10);
    EXPECT_NEAR(std::abs(r.vector[417]), 1.0, 1e-6);
}

TEST(lanczos, eigenvector_guess_converges_at_once) {
    const int dim = 400;
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    Eigen::MatrixXcd a(dim, dim);
    for (int i = 0; i < dim; i++) {
        for (int j = 0; j < dim; j++) a(i, j) = {nd(rng), nd(rng)};
    }
    Eigen::MatrixXcd h = a + a.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    MatVec mv = [&](const Eigen::VectorXcd &in, Eigen::VectorXcd &out) { out = h * in; };
    EigResult r = lowest_eigenpair(mv, es.eigenvectors().col(0), LanczosOptions{});
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.matvecs, 1);
    EXPECT_NEAR(r.value, es.eigenvalues()[0], 1e-9);
    // A random start finds the same value.
    EigResult q = lowest_eigenpair(mv, Eigen::VectorXcd::Ones(dim), LanczosOptions{1e-10, 3000, 40, 256});
    EXPECT_TRUE(q.converged);
    EXPECT_NEAR(q.value, es.eigenvalues()[0], 1e-8);
}

TEST(effective_hamiltonian, energy_matches_expectation) {
    for (int n : {2, 3, 5}) {
        for (int j = 0; j + 1 < n; j++) {
            GMPS s = random_even_init(n, 8, 10 + n);
            canonicalize(s, j);
            Hamiltonian h = build_tv(n, 1.0, 1.5);
            EnvCache env(s, h);
            EffectiveHamiltonian heff(env, h, j, n);
            EXPECT_NEAR(heff.energy(two_site_tensor(s, j)), expectation(s, h), 1e-10) << n << " " << j;
        }
    }
}

TEST(effective_hamiltonian, is_hermitian) {
    std::mt19937_64 rng(8);
    for (int j = 0; j < 4; j++) {
        GMPS s = random_even_init(5, 8, 31);
        canonicalize(s, j);
        Hamiltonian h = build_tv(5, 0.7, 2.0);
        EnvCache env(s, h);
        EffectiveHamiltonian heff(env, h, j, 5);
        Tensor ref = two_site_tensor(s, j);
        Tensor a = testing_util::random_tensor(ref.legs(), rng, true);
        Tensor b = testing_util::random_tensor(ref.legs(), rng, true);
        cplx ab = inner(a, heff.apply(b)), ba = inner(b, heff.apply(a));
        EXPECT_NEAR(std::abs(ab - std::conj(ba)), 0.0, 1e-10 * std::abs(ab)) << j;
        EXPECT_EQ(heff.apply(a).odd_weight(), 0.0);
    }
}

TEST(effective_hamiltonian, fast_path_matches_generic_contractions) {
    const auto &gates = canonical_gates().gates;
    std::mt19937_64 rng(21);
    Hamiltonian h = build_tv(6, 1.0, 2.0);
    for (int g = 1; g < 12; g++) h = conjugate_hamiltonian(h, gates[g], g % 5);
    for (const Hamiltonian &ham : {build_tv(6, 1.0, 2.0), h}) {
        for (int j = 0; j < 5; j++) {
            GMPS s = random_even_init(6, 16, 3 + j);
            canonicalize(s, j);
            EnvCache env(s, ham);
            EffectiveHamiltonian heff(env, ham, j, 6);
            Tensor x = testing_util::random_tensor(two_site_tensor(s, j).legs(), rng, true);
            Tensor fast = heff.apply(x), ref = heff.apply_reference(x);
            EXPECT_LE(max_abs_diff(fast, ref), 1e-12 * std::max(1.0, ref.max_abs())) << j;
            EXPECT_NEAR(heff.energy(two_site_tensor(s, j)), expectation(s, ham), 1e-10);
        }
    }
}

TEST(effective_hamiltonian, cache_updates_match_fresh_build) {
    GMPS s = random_even_init(6, 8, 2);
    Hamiltonian h = build_tv(6, 1.0, 2.0);
    EnvCache env(s, h);
    std::mt19937_64 rng(1);
    for (int j = 0; j + 1 < 6; j++) {
        Tensor psi = two_site_tensor(s, j);
        store(s, j, psi);
        if (j + 2 < 6) {
            env.update_left(s, h, j);
            EnvCache fresh(s, h);
            EffectiveHamiltonian a(env, h, j + 1, 6), b(fresh, h, j + 1, 6);
            Tensor x = testing_util::random_tensor(two_site_tensor(s, j + 1).legs(), rng, true);
            EXPECT_LE(max_abs_diff(a.apply(x), b.apply(x)), 1e-12);
        }
    }
}

TEST(apply_gate, acts_on_the_ket) {
    const auto &gates = canonical_gates().gates;
    const int n = 4;
    for (int j = 0; j < 3; j++) {
        for (int g : {1, 5, 11}) {
            GMPS s = random_even_init(n, 8, 50 + j);
            canonicalize(s, j);
            Eigen::VectorXcd before = dense_ket(s);
            store(s, j, apply_gate(two_site_tensor(s, j), gates[g]));
            Eigen::VectorXcd after = dense_ket(s);
            Eigen::VectorXcd want = embed(gates[g].matrix, n, j) * before;
            EXPECT_LE((after - want).norm(), 1e-10) << "bond " << j << " gate " << g;
        }
    }
}

TEST(conjugate_hamiltonian, matches_dense_similarity) {
    const auto &gates = canonical_gates().gates;
    Hamiltonian h = build_tv(4, 1.0, 2.0);
    for (int g = 0; g < 12; g++) {
        for (int j = 0; j < 3; j++) {
            Eigen::MatrixXcd u = embed(gates[g].matrix, 4, j);
            Eigen::MatrixXcd want = u * dense_operator(h) * u.adjoint();
            Hamiltonian r = conjugate_hamiltonian(h, gates[g], j);
            EXPECT_LE((dense_operator(r) - want).norm(), 1e-10) << g << " " << j;
            Hamiltonian back = conjugate_hamiltonian_inverse(r, gates[g], j);
            for (size_t k = 0; k < h.terms.size(); k++) {
                EXPECT_EQ(back.terms[k].coeff, h.terms[k].coeff);
                EXPECT_EQ(back.terms[k].labels, h.terms[k].labels);
            }
        }
    }
}

TEST(conjugate_hamiltonian, energy_is_invariant) {
    const auto &gates = canonical_gates().gates;
    GMPS s = random_even_init(6, 8, 77);
    Hamiltonian h = build_tv(6, 1.0, 2.0);
    const double e0 = expectation(s, h);
    for (int g = 1; g < 12; g++) {
        const int j = g % 5;
        canonicalize(s, j);
        store(s, j, apply_gate(two_site_tensor(s, j), gates[g]));
        h = conjugate_hamiltonian(h, gates[g], j);
        EXPECT_NEAR(expectation(s, h), e0, 1e-10) << g;
    }
}

TEST(disentangle, removes_gate_entanglement) {
    const auto &gates = canonical_gates().gates;
    // Product state entangled by one gate is restored by its inverse class.
    GMPS s = product_init({1, 1, 0, 0});
    canonicalize(s, 1);
    for (int g = 1; g < 12; g++) {
        Tensor prod = two_site_tensor(s, 1);
        Tensor ent = apply_gate(prod, gates[g]);
        double s_ent = two_site_entropy(ent);
        Disentangled d = disentangle(ent, gates, 1e-12);
        EXPECT_LE(d.entropy_after, 1e-10);
        EXPECT_NEAR(d.entropy_before, s_ent, 1e-14);
        if (s_ent > 1e-10) EXPECT_NE(d.gate, 0);
        EXPECT_NEAR(two_site_entropy(d.psi2), d.entropy_after, 1e-14);
    }
    Disentangled keep = disentangle(two_site_tensor(s, 1), gates, 1e-12);
    EXPECT_EQ(keep.gate, 0);
}

TEST(disentangle, entropy_matches_bond_spectrum) {
    GMPS s = random_even_init(6, 8, 4);
    for (int j = 0; j < 5; j++) {
        canonicalize(s, j);
        Tensor psi = two_site_tensor(s, j);
        EXPECT_NEAR(two_site_entropy(psi), bond_entropy(s, j), 1e-10);
        auto sp = bond_spectrum(s, j);
        double p2 = 0;
        for (double x : sp) p2 += x * x * x * x;
        EXPECT_NEAR(two_site_entropy(psi, Measure::Renyi2), -std::log(p2), 1e-10);
    }
}

TEST(truncate_split, keeps_the_state_when_untruncated) {
    GMPS s = random_even_init(5, 8, 12);
    canonicalize(s, 2);
    Eigen::VectorXcd v = dense_ket(s);
    for (bool right : {true, false}) {
        GMPS t = s;
        Split sp = truncate_split(two_site_tensor(t, 2), 64, 0.0, right);
        t.sites[2] = sp.left;
        t.sites[3] = sp.right;
        t.center = right ? 3 : 2;
        EXPECT_LE(canonical_error(t), 1e-10);
        EXPECT_NEAR(std::abs(dense_ket(t).dot(v)), 1.0, 1e-10);
        EXPECT_NEAR(sp.discarded, 0.0, 1e-20);
    }
    Split cut = truncate_split(two_site_tensor(s, 2), 2, 0.0, true);
    double kept = 0;
    for (double x : cut.spectrum) kept += x * x;
    EXPECT_NEAR(kept, 1.0, 1e-12);
    EXPECT_LE(cut.spectrum.size(), 2u);
}

TEST(run, initial_occupations) {
    EXPECT_EQ(initial_occupations(8), (std::vector<int>{0, 1, 0, 1, 0, 1, 0, 1}));
    for (int L : {4, 6, 10, 12, 50}) {
        int n = 0;
        for (int x : initial_occupations(L)) n += x;
        EXPECT_EQ(n % 2, 0);
        EXPECT_EQ(n, (L / 2) % 2 ? L / 2 - 1 : L / 2);
    }
}

TEST(run, matches_exact_diagonalization) {
    for (bool cliff : {false, true}) {
        for (double V : {0.0, 2.0}) {
            ModelSpec m{ModelKind::TV, 8, 1.0, V};
            SweepConfig cfg;
            cfg.chi_max = 32;
            cfg.n_sweeps = 6;
            cfg.clifford_enabled = cliff;
            RunResult r = run(m, cfg);
            EXPECT_NEAR(r.energy, ground_energy(m), 1e-8) << cliff << " " << V;
            EXPECT_EQ(r.report.monotonicity_violations, 0);
            EXPECT_NEAR(expectation(r.state, r.hamiltonian), r.energy, 1e-9);
        }
    }
}

TEST(run, tight_binding_closed_form) {
    ModelSpec m{ModelKind::TightBinding, 12, 1.0, 0.0};
    SweepConfig cfg;
    cfg.chi_max = 32;
    cfg.n_sweeps = 8;
    RunResult r = run(m, cfg);
    EXPECT_NEAR(r.energy, free_fermion_energy(12, 1.0), 1e-8);
}

TEST(run, deterministic) {
    ModelSpec m{ModelKind::TV, 8, 1.0, 2.0};
    SweepConfig cfg;
    cfg.chi_max = 8;
    cfg.n_sweeps = 3;
    RunResult a = run(m, cfg), b = run(m, cfg);
    EXPECT_EQ(a.report.energies, b.report.energies);
    ASSERT_EQ(a.report.gates.size(), b.report.gates.size());
    for (size_t k = 0; k < a.report.gates.size(); k++) EXPECT_EQ(a.report.gates[k].gate, b.report.gates[k].gate);
}

TEST(run, rejects_bad_config) {
    ModelSpec m{ModelKind::TV, 8, 1.0, 2.0};
    SweepConfig cfg;
    cfg.chi_max = 0;
    EXPECT_THROW(run(m, cfg), ConfigError);
    cfg.chi_max = 8;
    cfg.n_sweeps = 0;
    EXPECT_THROW(run(m, cfg), ConfigError);
}

TEST(checkpoint, round_trip_with_rotated_frame) {
    ModelSpec m{ModelKind::TV, 6, 1.0, 2.0};
    SweepConfig cfg;
    cfg.chi_max = 8;
    cfg.n_sweeps = 2;
    RunResult r = run(m, cfg);
    std::stringstream buf;
    write_checkpoint(buf, r.state, r.hamiltonian, r.report.gates);
    GMPS s;
    Hamiltonian h;
    std::vector<GateRecord> log;
    read_checkpoint(buf, s, h, log);
    EXPECT_EQ(log.size(), r.report.gates.size());
    EXPECT_NEAR(expectation(s, h), r.energy, 1e-10);
    Hamiltonian back = unrotate(h, log);
    Hamiltonian orig = build_model(m);
    for (size_t k = 0; k < orig.terms.size(); k++) EXPECT_EQ(back.terms[k].labels, orig.terms[k].labels);
}

namespace {

// Ket of a two-site tensor on a two-site chain (no virtual legs).
Eigen::Vector4cd ket_of(const Tensor &psi) {
    Eigen::Vector4cd v;
    for (int i = 0; i < 4; i++) v(i) = (i == 3 ? -1.0 : 1.0) * std::conj(psi.data()[i]);
    return v;
}

double dense_entropy(const Eigen::Vector4cd &ket) {
    Eigen::Matrix2cd m;
    m << ket(0), ket(1), ket(2), ket(3);
    Eigen::Vector2d sv = Eigen::JacobiSVD<Eigen::Matrix2cd>(m).singularValues();
    double s = 0;
    for (int k = 0; k < 2; k++) {
        double p = sv(k) * sv(k) / sv.squaredNorm();
        if (p > 1e-300) s -= p * std::log(p);
    }
    return s;
}

}  // namespace

TEST(effective_hamiltonian, zero_hamiltonian_gives_zero) {
    Hamiltonian h;
    h.n_sites = 5;
    GMPS s = random_even_init(5, 8, 3);
    canonicalize(s, 0);
    EnvCache env(s, h);
    for (int j = 0; j + 1 < 5; j++) {
        Tensor r = effective_apply(env, h, j, two_site_tensor(s, j));
        EXPECT_EQ(norm(r), 0.0);
        if (j + 2 < 5) {
            canonicalize(s, j + 1);
            env.update_left(s, h, j);
        }
    }
}

TEST(effective_hamiltonian, two_sites_is_the_dense_operator) {
    GMPS s = random_even_init(2, 4, 9);
    canonicalize(s, 0);
    for (double V : {0.0, 2.0, -0.7}) {
        Hamiltonian h = build_tv(2, 1.3, V);
        EnvCache env(s, h);
        Tensor psi = two_site_tensor(s, 0);
        ASSERT_EQ(psi.size(), 4u);
        EXPECT_LE((ket_of(psi) - dense_ket(s)).norm(), 1e-12);
        Tensor r = effective_apply(env, h, 0, psi);
        EXPECT_LE((ket_of(r) - dense_operator(h) * ket_of(psi)).norm(), 1e-12) << V;
    }
}

TEST(local_ground_state, two_site_tv_matches_dense_even_sector) {
    GMPS s = random_even_init(2, 4, 21);
    canonicalize(s, 0);
    for (double V : {0.0, 2.0, -3.0}) {
        Hamiltonian h = build_tv(2, 1.0, V);
        Eigen::MatrixXcd d = dense_operator(h);
        Eigen::Matrix2cd even;
        even << d(0, 0), d(0, 3), d(3, 0), d(3, 3);
        double want = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd>(even).eigenvalues()(0);
        EnvCache env(s, h);
        EffectiveHamiltonian heff(env, h, 0, 2);
        LocalSolve sol = local_ground_state(heff, two_site_tensor(s, 0), 1e-12, 200);
        EXPECT_NEAR(sol.energy, want, 1e-10) << V;
        EXPECT_NEAR(heff.energy(sol.psi2), want, 1e-10);
    }
}

TEST(disentangle, bell_pair_matches_brute_force) {
    const auto &gates = canonical_gates().gates;
    Tensor psi({{1, false}, {1, false}}, true);
    psi.data()[0] = psi.data()[3] = 1.0 / std::sqrt(2.0);
    // Exhaustive search with the same tie rule: a later gate must win by more than the threshold.
    const double thr = 1e-12;
    int best = 0;
    double best_s = dense_entropy(ket_of(psi));
    for (int g = 1; g < 12; g++) {
        double sg = dense_entropy(gates[g].matrix * ket_of(psi));
        if (sg < best_s - thr) {
            best = g;
            best_s = sg;
        }
    }
    Disentangled d = disentangle(psi, gates, thr);
    EXPECT_NEAR(d.entropy_before, std::log(2.0), 1e-12);
    EXPECT_EQ(d.gate, best);
    EXPECT_NEAR(d.entropy_after, best_s, 1e-12);
    EXPECT_LE(best_s, 1e-12);  // a CNOT-type gate maps the Bell pair to a product
}

TEST(disentangle, never_increases_entropy) {
    const auto &gates = canonical_gates().gates;
    GMPS s = random_even_init(6, 8, 31);
    for (int j = 0; j < 5; j++) {
        canonicalize(s, j);
        Tensor psi = two_site_tensor(s, j);
        Disentangled d = disentangle(psi, gates, 1e-12);
        EXPECT_LE(d.entropy_after, two_site_entropy(psi) + 1e-12);
    }
}

TEST(truncate_split, discarded_weight_is_the_dropped_spectrum) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 10; trial++) {
        Tensor psi = testing_util::random_tensor({{1, true}, {1, false}, {1, false}, {1, false}}, rng, true);
        const double nrm = norm(psi);
        for (size_t i = 0; i < psi.size(); i++) psi.data()[i] /= nrm;
        // Rows (φ†, ψ_j), columns (ψ_{j+1}, φ); two 2x2 parity blocks, one value kept in each.
        double dropped = 0;
        for (int par = 0; par < 2; par++) {
            Eigen::Matrix2cd b;
            int r = 0;
            for (int row = 0; row < 4; row++) {
                if (parity_of(row) != par) continue;
                int c = 0;
                for (int col = 0; col < 4; col++) {
                    if (parity_of(col) != par) continue;
                    b(r, c++) = psi.data()[row * 4 + col];
                }
                r++;
            }
            Eigen::Vector2d sv = Eigen::JacobiSVD<Eigen::Matrix2cd>(b).singularValues();
            ASSERT_GT(sv(1), 1e-6);  // full rank
            dropped += sv(1) * sv(1);
        }
        Split sp = truncate_split(psi, 2, 0.0, true);
        EXPECT_NEAR(sp.discarded, dropped, 1e-12);
        EXPECT_EQ(sp.spectrum.size(), 2u);
    }
}

TEST(conjugate_hamiltonian, zz_under_word_gate) {
    CliffordGate g;
    g.word = parse_word("CNOT01 S1 CNOT01");
    g.matrix = word_matrix(g.word);
    g.tensor = gate_tensor(g.matrix);
    g.tableau = tableau_of(g.matrix);
    Hamiltonian h;
    h.n_sites = 2;
    h.terms.push_back({1.0, {Pauli::Z, Pauli::Z}});
    Hamiltonian r = conjugate_hamiltonian(h, g, 0);
    Eigen::MatrixXcd want = g.matrix * dense_operator(h) * g.matrix.adjoint();
    EXPECT_LE((dense_operator(r) - want).norm(), 1e-12);
    Hamiltonian back = conjugate_hamiltonian_inverse(r, g, 0);
    EXPECT_EQ(back.terms[0].labels, h.terms[0].labels);
    EXPECT_EQ(back.terms[0].coeff, h.terms[0].coeff);
}
