// Copyright 2026 The cagmps Authors
// SPDX-License-Identifier: Apache-2.0

#include "lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cagmps {

namespace {

EigResult dense_solve(const MatVec &apply, Eigen::Index dim) {
    Eigen::MatrixXcd h(dim, dim);
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim), col(dim);
    for (Eigen::Index k = 0; k < dim; k++) {
        e[k] = 1.0;
        apply(e, col);
        h.col(k) = col;
        e[k] = 0.0;
    }
    Eigen::MatrixXcd herm = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
    EigResult r;
    r.value = es.eigenvalues()[0];
    r.vector = es.eigenvectors().col(0);
    r.residual = (h * r.vector - r.value * r.vector).norm();
    r.matvecs = static_cast<int>(dim);
    r.converged = true;
    return r;
}

}  // namespace

EigResult lowest_eigenpair(const MatVec &apply, const Eigen::VectorXcd &guess, const LanczosOptions &opt) {
    const Eigen::Index dim = guess.size();
    if (dim == 0) throw std::invalid_argument("lowest_eigenpair: empty problem");
    if (dim <= opt.dense_threshold) return dense_solve(apply, dim);

    Eigen::VectorXcd v = guess;
    double gn = v.norm();
    if (!(gn > 0)) {
        v = Eigen::VectorXcd::Ones(dim);
        gn = v.norm();
    }
    v /= gn;

    EigResult best;
    best.vector = v;
    best.value = 0;
    best.residual = INFINITY;
    int used = 0;
    const int kmax = static_cast<int>(std::min<Eigen::Index>(opt.krylov_dim, dim));
    Eigen::MatrixXcd basis(dim, kmax);
    Eigen::VectorXcd w(dim);

    while (used < opt.max_iter) {
        std::vector<double> alpha, beta;
        basis.col(0) = v;
        double theta = 0, est = INFINITY;
        Eigen::VectorXd ritz;
        int k = 0;
        for (; k < kmax && used < opt.max_iter; k++) {
            apply(basis.col(k), w);
            used++;
            double a = basis.col(k).dot(w).real();
            alpha.push_back(a);
            // Full reorthogonalization, twice for stability.
            for (int pass = 0; pass < 2; pass++) {
                Eigen::VectorXcd c = basis.leftCols(k + 1).adjoint() * w;
                w.noalias() -= basis.leftCols(k + 1) * c;
            }
            double b = w.norm();
            const int m = k + 1;
            Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
            for (int i = 0; i < m; i++) {
                t(i, i) = alpha[i];
                if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
            theta = es.eigenvalues()[0];
            ritz = es.eigenvectors().col(0);
            est = std::abs(b * ritz[m - 1]);
            const bool done = est <= opt.tol * std::max(1.0, std::abs(theta)) || b < 1e-14 || m == dim;
            if (done || k + 1 == kmax || used == opt.max_iter) {
                k++;
                break;
            }
            beta.push_back(b);
            basis.col(k + 1) = w / b;
        }
        v = basis.leftCols(k) * ritz.head(k);
        v /= v.norm();
        best.vector = v;
        best.value = theta;
        best.residual = est;
        if (est <= opt.tol * std::max(1.0, std::abs(theta))) {
            best.converged = true;
            break;
        }
        if (k == dim) {
            best.converged = true;
            break;
        }
    }
    best.matvecs = used;
    return best;
}

}  // namespace cagmps
