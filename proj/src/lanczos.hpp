// Copyright 2026 The cagmps Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

#include <Eigen/Dense>

namespace cagmps {

using MatVec = std::function<void(const Eigen::VectorXcd &, Eigen::VectorXcd &)>;

struct EigResult {
    double value = 0;
    Eigen::VectorXcd vector;
    double residual = 0;
    int matvecs = 0;
    bool converged = false;
};

struct LanczosOptions {
    double tol = 1e-10;
    int max_iter = 200;       // matrix-vector products
    int krylov_dim = 32;      // vectors kept before a restart
    int dense_threshold = 256;  // solve densely at or below this dimension
};

/// Lowest eigenpair of a Hermitian operator given as a matrix-vector product.
/// Lanczos with full reorthogonalization, restarted from the current Ritz
/// vector. The reported residual is the Ritz estimate of ‖Hv - λv‖.
EigResult lowest_eigenpair(const MatVec &apply, const Eigen::VectorXcd &guess, const LanczosOptions &opt);

}  // namespace cagmps
