#pragma once

#include <cstdint>

#include "lcm/types.hpp"

namespace lcm {

struct SvdOptions {
    /// Residual contract: ||R v_i - sigma_i u_i|| <= tol * sigma_1 for every
    /// retained triplet with sigma_i > tol * sigma_1.
    double tol = 1e-8;
    /// Extra subspace-iteration rounds allowed on the randomized path before
    /// giving up with a ConvergenceError.
    int max_iter = 16;
    std::uint64_t seed = 0;
    /// Use the dense Gram-matrix eigendecomposition when min(N,J) is at most
    /// this; the seeded randomized subspace iteration above it.
    Index dense_limit = 512;
    int oversampling = 10;
    int power_iters = 2;
};

struct TruncatedSvd {
    Matrix u;      // N x K, orthonormal columns
    Vector sigma;  // length K, nonincreasing, nonnegative
    Matrix v;      // J x K, orthonormal columns
    double residual = 0.0;
};

/// all_singular_values stays on the dense (values-only) eigensolver up to
/// this minimum dimension even when truncated_svd would already have
/// switched to the randomized path.
inline constexpr Index kDenseValuesLimit = 2048;

/// Top-k singular triplets of r.
TruncatedSvd truncated_svd(const Matrix& r, Index k, const SvdOptions& opts = {});

/// Top-m singular values of r, nonincreasing. Same accuracy contract as
/// truncated_svd.
Vector all_singular_values(const Matrix& r, Index m, const SvdOptions& opts = {});

}  // namespace lcm
