#pragma once

#include <cstdint>

#include "lcm/kmeans.hpp"
#include "lcm/svd.hpp"
#include "lcm/types.hpp"

namespace lcm {

struct SpectralOptions {
    /// Master seed; the SVD and K-means sub-seeds are derived from it, so the
    /// per-stage seeds inside `svd` and `kmeans` are ignored.
    std::uint64_t seed = 0;
    SvdOptions svd{};
    KMeansOptions kmeans{};
};

struct SpectralFit {
    LabelVector labels;
    Matrix embedding;  // N x K rows of U * diag(sigma)
    TruncatedSvd svd;
    double kmeans_objective = 0.0;
};

/// Rank-k SVD of the response matrix followed by K-means on the rows of
/// U * diag(sigma). A degenerate clustering (empty class) is returned as-is;
/// classifying it as a failure is the caller's job.
SpectralFit spectral_cluster(const ResponseMatrix& r, int k, const SpectralOptions& opts = {});

}  // namespace lcm
