#include "lcm/kmeans.hpp"

#include <cassert>
#include <limits>

#include "lcm/rng.hpp"

namespace lcm {

namespace {

struct LloydRun {
    std::vector<int> assign;  // 0-based
    Matrix centers;
    double objective = std::numeric_limits<double>::infinity();
};

// Squared distances of every point to one center.
Vector dist2_to(const Matrix& pts, const Vector& center) {
    return (pts.rowwise() - center.transpose()).rowwise().squaredNorm();
}

void seed_kmeanspp(const Matrix& pts, int k, Rng& rng, Matrix& centers) {
    const Index n = pts.rows();
    centers.resize(k, pts.cols());
    centers.row(0) = pts.row(static_cast<Index>(rng.uniform_index(static_cast<size_t>(n))));
    Vector mind2 = dist2_to(pts, centers.row(0).transpose());
    for (int c = 1; c < k; ++c) {
        const double total = mind2.sum();
        Index chosen;
        if (total > 0.0) {
            // D^2 sampling via the cumulative distribution.
            const double target = rng.uniform01() * total;
            double acc = 0.0;
            chosen = n - 1;
            for (Index i = 0; i < n; ++i) {
                acc += mind2(i);
                if (acc > target) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = static_cast<Index>(rng.uniform_index(static_cast<size_t>(n)));
        }
        centers.row(c) = pts.row(chosen);
        mind2 = mind2.cwiseMin(dist2_to(pts, centers.row(c).transpose()));
    }
}

// Nearest-center assignment, ties toward the lowest index. Returns objective.
double assign_points(const Matrix& pts, const Matrix& centers, std::vector<int>& assign) {
    const Index n = pts.rows();
    const int k = static_cast<int>(centers.rows());
    double obj = 0.0;
    for (Index i = 0; i < n; ++i) {
        int best = 0;
        double best_d = (pts.row(i) - centers.row(0)).squaredNorm();
        for (int c = 1; c < k; ++c) {
            const double d = (pts.row(i) - centers.row(c)).squaredNorm();
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        assign[static_cast<size_t>(i)] = best;
        obj += best_d;
    }
    return obj;
}

LloydRun lloyd(const Matrix& pts, int k, const KMeansOptions& opts, Rng rng) {
    const Index n = pts.rows();
    LloydRun run;
    seed_kmeanspp(pts, k, rng, run.centers);
    run.assign.assign(static_cast<size_t>(n), 0);

    // Absolute slack for the monotonicity assert: rounding in the mean
    // update perturbs an exactly-zero objective by ~(eps * scale)^2.
    const double obj_slack = 1e-20 * (pts.squaredNorm() + 1.0);
    (void)obj_slack;

    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < opts.max_iter; ++it) {
        const double obj = assign_points(pts, run.centers, run.assign);
        assert(obj <= prev * (1.0 + 1e-12) + obj_slack &&
               "k-means objective must not increase");
        run.objective = obj;
        if (prev - obj <= opts.tol * std::max(prev, 1e-300) && it > 0) break;
        prev = obj;

        // Means per cluster; empty clusters re-seed at the farthest point.
        Matrix sums = Matrix::Zero(k, pts.cols());
        std::vector<Index> counts(static_cast<size_t>(k), 0);
        for (Index i = 0; i < n; ++i) {
            sums.row(run.assign[static_cast<size_t>(i)]) += pts.row(i);
            ++counts[static_cast<size_t>(run.assign[static_cast<size_t>(i)])];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<size_t>(c)] > 0) {
                run.centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<size_t>(c)]);
            } else {
                Index far = 0;
                double far_d = -1.0;
                for (Index i = 0; i < n; ++i) {
                    const double d =
                        (pts.row(i) - run.centers.row(run.assign[static_cast<size_t>(i)]))
                            .squaredNorm();
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                run.centers.row(c) = pts.row(far);
            }
        }
    }
    // Final assignment under the last centers so the Lloyd fixed-point
    // invariant (every point at its nearest center) holds on return.
    run.objective = assign_points(pts, run.centers, run.assign);
    return run;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, int k, const KMeansOptions& opts) {
    const Index n = points.rows();
    if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
    if (n < k) throw std::invalid_argument("kmeans: fewer points than clusters");

    LloydRun best;
    for (int r = 0; r < opts.restarts; ++r) {
        LloydRun run = lloyd(points, k, opts, Rng::stream(opts.seed, static_cast<std::uint64_t>(r)));
        if (run.objective < best.objective) best = std::move(run);
    }

    KMeansResult res;
    std::vector<int> one_based(best.assign.size());
    for (size_t i = 0; i < best.assign.size(); ++i) one_based[i] = best.assign[i] + 1;
    res.assignments = LabelVector(std::move(one_based), k);
    res.centers = std::move(best.centers);
    res.objective = best.objective;
    return res;
}

}  // namespace lcm
