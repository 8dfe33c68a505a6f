#pragma once

#include <cstdint>

#include "lcm/types.hpp"

namespace lcm {

struct KMeansOptions {
    int restarts = 10;
    int max_iter = 100;
    double tol = 1e-6;  // relative objective decrease per Lloyd iteration
    std::uint64_t seed = 0;
};

struct KMeansResult {
    LabelVector assignments;  // 1-based cluster labels
    Matrix centers;           // k x d
    double objective = 0.0;   // sum of squared distances to assigned centers
};

/// Lloyd's algorithm with k-means++ seeding, best of `restarts` runs.
///
/// Restart r consumes the stream derived from (seed, r), so results do not
/// depend on how restarts are scheduled and adding restarts can only improve
/// the objective. Nearest-center ties break toward the lowest center index.
/// An empty cluster is re-seeded at the point farthest from its assigned
/// center rather than treated as an error.
KMeansResult kmeans(const Matrix& points, int k, const KMeansOptions& opts = {});

}  // namespace lcm
