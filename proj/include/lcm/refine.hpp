#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lcm/spectral.hpp"
#include "lcm/types.hpp"

namespace lcm {

struct RefineOptions {
    std::uint64_t seed = 0;
    SpectralOptions spectral{};  // seed inside is derived from `seed`
    double clamp_eps = kClampEps;
    /// When set, sola_split also estimates per-half class proportions and
    /// adds their logs to the cross-half assignment scores.
    bool split_use_proportions = false;
};

struct FitReport {
    LabelVector labels;
    ItemParams theta_hat;
    std::optional<MixingProportions> proportions;
    /// Score of the starting labels under the first maximization step's
    /// parameter estimates (NaN when not applicable, e.g. sola_split).
    double loglik_init = std::numeric_limits<double>::quiet_NaN();
    /// One entry per completed refinement step; nondecreasing for the
    /// sola/sola_plus joint likelihood and the cem prior-augmented score.
    std::vector<double> loglik_trace;
    FitFailure failure = FitFailure::none;
    double seconds = 0.0;
    int steps_run = 0;
};

/// Index sets of a random half split of 0..n-1, |s1| = ceil(n/2).
struct SplitPlan {
    std::vector<Index> s1;
    std::vector<Index> s2;
};

/// Class-wise column means: theta(j,c) = mean of column j over rows with
/// label c, clamped to [clamp_eps, 1-clamp_eps]. Throws EmptyClassError when
/// some class has no members.
ItemParams estimate_theta(const ResponseMatrix& r, const LabelVector& s, int k,
                          double clamp_eps = kClampEps);

/// Per-row likelihood argmax under the given item parameters, optionally with
/// per-class log-prior offsets. Ties break toward the lowest class index.
LabelVector assign_labels(const ResponseMatrix& r, const ItemParams& theta,
                          const std::optional<Vector>& log_prior = std::nullopt);

/// Spectral initialization followed by one maximization + assignment step.
FitReport sola(const ResponseMatrix& r, int k, const RefineOptions& opts = {});

/// Multi-step variant: alternates maximization and assignment `steps` times,
/// stopping early once the labels reach a fixed point.
FitReport sola_plus(const ResponseMatrix& r, int k, int steps, const RefineOptions& opts = {});

/// Classification-EM variant: each assignment adds log class proportions
/// (re-estimated every step) to the likelihood scores.
FitReport cem(const ResponseMatrix& r, int k, int steps, const RefineOptions& opts = {});

/// Uniformly random half split, deterministic given the seed. Requires n >= 4.
SplitPlan make_split(Index n, std::uint64_t seed);

/// Exact minimizer over permutations of || theta1 - theta2 * G_perm ||_F.
/// The result p maps columns of theta2 into theta1's indexing: p[c] (1-based)
/// is the theta2 column matched to theta1 column c+1. Enumeration for K <= 8,
/// assignment solve on the column-distance matrix otherwise.
std::vector<int> align_permutation(const ItemParams& theta1, const ItemParams& theta2);

/// Sample-splitting variant: spectral fit and column-mean estimates per half,
/// cross-half assignment, then permutation alignment of the two halves.
FitReport sola_split(const ResponseMatrix& r, int k, const RefineOptions& opts = {});

/// Likelihood argmax under known item parameters (simulation diagnostics).
LabelVector oracle_classify(const ResponseMatrix& r, const ItemParams& theta_true,
                            double clamp_eps = kClampEps);

struct EmOptions {
    int restarts = 10;
    int max_iter = 100;
    double tol = 1e-8;
    std::uint64_t seed = 0;
    double clamp_eps = kClampEps;
};

/// Marginal-likelihood EM baseline with soft posteriors, random-responsibility
/// initialization per restart, and labels by maximum posterior. The trace
/// holds the best restart's marginal log-likelihood per iteration.
FitReport em_baseline(const ResponseMatrix& r, int k, const EmOptions& opts = {});

}  // namespace lcm
