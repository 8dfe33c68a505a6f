#include "lcm/refine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "lcm/info.hpp"
#include "lcm/metrics.hpp"
#include "lcm/rng.hpp"

namespace lcm {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_seconds(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Class-wise column means. Empty classes are reported through `empty` and
// filled with the clamped overall item means so the result stays usable for
// reporting.
Matrix class_means(const ResponseMatrix& r, const LabelVector& s, int k, double eps,
                   std::vector<int>* empty) {
    const Index n = r.rows();
    const Index j = r.cols();
    Matrix sums = Matrix::Zero(j, k);
    std::vector<double> counts(static_cast<size_t>(k), 0.0);
    for (Index i = 0; i < n; ++i) {
        sums.col(s[i] - 1) += r.dense().row(i).transpose();
        counts[static_cast<size_t>(s[i] - 1)] += 1.0;
    }
    const Vector overall = r.dense().colwise().mean().transpose();
    for (int c = 0; c < k; ++c) {
        if (counts[static_cast<size_t>(c)] > 0.0) {
            sums.col(c) /= counts[static_cast<size_t>(c)];
        } else {
            if (empty) empty->push_back(c + 1);
            sums.col(c) = overall;
        }
    }
    return sums.array().max(eps).min(1.0 - eps).matrix();
}

Vector proportions_of(const LabelVector& s) {
    Vector p = Vector::Zero(s.k());
    for (Index i = 0; i < s.size(); ++i) p(s[i] - 1) += 1.0;
    return p / static_cast<double>(s.size());
}

// Score of a labeling under the prior-augmented objective (or the plain joint
// likelihood when log_prior is absent).
double objective_value(const ResponseMatrix& r, const LabelVector& s, const ItemParams& theta,
                       const std::optional<Vector>& log_prior, double eps) {
    double val = joint_log_likelihood(r, s, theta, eps);
    if (log_prior) {
        for (Index i = 0; i < s.size(); ++i) val += (*log_prior)(s[i] - 1);
    }
    return val;
}

// Shared alternating maximization loop behind sola/sola_plus/cem.
FitReport refine_loop(const ResponseMatrix& r, int k, int steps, const RefineOptions& opts,
                      bool with_proportions) {
    const auto start = Clock::now();
    SpectralOptions sp = opts.spectral;
    sp.seed = mix_seed(opts.seed, 0x5bec);
    SpectralFit init = spectral_cluster(r, k, sp);

    FitReport report;
    report.labels = init.labels;

    for (int t = 1; t <= steps; ++t) {
        std::vector<int> empty;
        const Matrix th = class_means(r, report.labels, k, opts.clamp_eps, &empty);
        if (!empty.empty()) {
            report.failure = FitFailure::empty_class;
            if (t == 1) report.theta_hat = ItemParams(th);
            break;
        }
        ItemParams theta(th);
        std::optional<Vector> log_prior;
        std::optional<MixingProportions> props;
        if (with_proportions) {
            const Vector p = proportions_of(report.labels);
            props = MixingProportions(p);
            log_prior = p.array().log().matrix();
        }
        if (t == 1) {
            report.loglik_init = objective_value(r, report.labels, theta, log_prior, opts.clamp_eps);
        }

        LabelVector next = assign_labels(r, theta, log_prior);
        report.loglik_trace.push_back(objective_value(r, next, theta, log_prior, opts.clamp_eps));
        report.steps_run = t;
        report.theta_hat = theta;
        if (with_proportions) report.proportions = MixingProportions(proportions_of(next));

        const bool fixed_point = (next == report.labels);
        report.labels = std::move(next);
        if (fixed_point) break;
    }

    report.seconds = elapsed_seconds(start);
    return report;
}

}  // namespace

ItemParams estimate_theta(const ResponseMatrix& r, const LabelVector& s, int k, double clamp_eps) {
    if (!r.fully_observed()) {
        throw std::invalid_argument("estimate_theta: missing cells present, impute first");
    }
    if (s.size() != r.rows()) throw std::invalid_argument("estimate_theta: label length");
    if (s.k() > k) throw std::invalid_argument("estimate_theta: labels exceed k");
    std::vector<int> empty;
    Matrix th = class_means(r, s, k, clamp_eps, &empty);
    if (!empty.empty()) throw EmptyClassError(empty.front());
    return ItemParams(std::move(th));
}

LabelVector assign_labels(const ResponseMatrix& r, const ItemParams& theta,
                          const std::optional<Vector>& log_prior) {
    if (!r.fully_observed()) {
        throw std::invalid_argument("assign_labels: missing cells present, impute first");
    }
    if (theta.items() != r.cols()) throw std::invalid_argument("assign_labels: theta dimensions");
    const int k = static_cast<int>(theta.classes());
    if (log_prior && log_prior->size() != k) {
        throw std::invalid_argument("assign_labels: log_prior length");
    }

    const Matrix th = theta.dense();
    if ((th.array() <= 0.0).any() || (th.array() >= 1.0).any()) {
        throw std::invalid_argument("assign_labels: theta must be clamped inside (0,1)");
    }
    const Matrix log_th = th.array().log().matrix();
    const Matrix log_1m = (1.0 - th.array()).log().matrix();

    // score(i,c) = sum_j [ R_ij log th_jc + (1-R_ij) log(1-th_jc) ]  (+ prior)
    Matrix scores = r.dense() * (log_th - log_1m);
    scores.rowwise() += log_1m.colwise().sum();
    if (log_prior) scores.rowwise() += log_prior->transpose();

    std::vector<int> out(static_cast<size_t>(r.rows()));
    for (Index i = 0; i < r.rows(); ++i) {
        int best = 0;
        for (int c = 1; c < k; ++c) {
            if (scores(i, c) > scores(i, best)) best = c;
        }
        out[static_cast<size_t>(i)] = best + 1;
    }
    return LabelVector(std::move(out), k);
}

FitReport sola(const ResponseMatrix& r, int k, const RefineOptions& opts) {
    return refine_loop(r, k, 1, opts, false);
}

FitReport sola_plus(const ResponseMatrix& r, int k, int steps, const RefineOptions& opts) {
    if (steps < 1) throw std::invalid_argument("sola_plus: steps must be >= 1");
    return refine_loop(r, k, steps, opts, false);
}

FitReport cem(const ResponseMatrix& r, int k, int steps, const RefineOptions& opts) {
    if (steps < 1) throw std::invalid_argument("cem: steps must be >= 1");
    return refine_loop(r, k, steps, opts, true);
}

SplitPlan make_split(Index n, std::uint64_t seed) {
    if (n < 4) throw std::invalid_argument("make_split: need n >= 4");
    std::vector<Index> idx(static_cast<size_t>(n));
    std::iota(idx.begin(), idx.end(), Index{0});
    Rng rng = Rng::stream(seed, 0x5117);
    for (Index i = n - 1; i > 0; --i) {
        const auto j = static_cast<Index>(rng.uniform_index(static_cast<size_t>(i) + 1));
        std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
    }
    const Index n1 = (n + 1) / 2;
    SplitPlan plan;
    plan.s1.assign(idx.begin(), idx.begin() + n1);
    plan.s2.assign(idx.begin() + n1, idx.end());
    std::sort(plan.s1.begin(), plan.s1.end());
    std::sort(plan.s2.begin(), plan.s2.end());
    return plan;
}

std::vector<int> align_permutation(const ItemParams& theta1, const ItemParams& theta2) {
    if (theta1.items() != theta2.items() || theta1.classes() != theta2.classes()) {
        throw std::invalid_argument("align_permutation: shape mismatch");
    }
    const int k = static_cast<int>(theta1.classes());
    Matrix cost(k, k);  // cost(a, b) = || theta1[:,a] - theta2[:,b] ||^2
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            cost(a, b) = (theta1.dense().col(a) - theta2.dense().col(b)).squaredNorm();

    std::vector<int> best(static_cast<size_t>(k));
    if (k <= 8) {
        std::vector<int> perm(static_cast<size_t>(k));
        std::iota(perm.begin(), perm.end(), 0);
        double best_cost = std::numeric_limits<double>::infinity();
        do {
            double c = 0.0;
            for (int a = 0; a < k; ++a) c += cost(a, perm[static_cast<size_t>(a)]);
            if (c < best_cost) {
                best_cost = c;
                best = perm;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        best = solve_assignment(cost);
    }
    for (auto& v : best) v += 1;  // 1-based class indices
    return best;
}

FitReport sola_split(const ResponseMatrix& r, int k, const RefineOptions& opts) {
    const auto start = Clock::now();
    const Index n = r.rows();
    if (n < 2 * static_cast<Index>(k)) {
        throw std::invalid_argument("sola_split: need at least 2K rows");
    }

    const SplitPlan plan = make_split(n, mix_seed(opts.seed, 0x5b17));
    const ResponseMatrix r1 = r.rows_subset(plan.s1);
    const ResponseMatrix r2 = r.rows_subset(plan.s2);

    FitReport report;

    SpectralOptions sp1 = opts.spectral;
    sp1.seed = mix_seed(opts.seed, 0xa1);
    SpectralOptions sp2 = opts.spectral;
    sp2.seed = mix_seed(opts.seed, 0xa2);
    const SpectralFit fit1 = spectral_cluster(r1, k, sp1);
    const SpectralFit fit2 = spectral_cluster(r2, k, sp2);

    auto stitch = [&](const LabelVector& l1, const LabelVector& l2) {
        std::vector<int> out(static_cast<size_t>(n), 1);
        for (size_t i = 0; i < plan.s1.size(); ++i)
            out[static_cast<size_t>(plan.s1[i])] = l1[static_cast<Index>(i)];
        for (size_t i = 0; i < plan.s2.size(); ++i)
            out[static_cast<size_t>(plan.s2[i])] = l2[static_cast<Index>(i)];
        return LabelVector(std::move(out), k);
    };

    std::vector<int> empty1, empty2;
    const Matrix th1 = class_means(r1, fit1.labels, k, opts.clamp_eps, &empty1);
    const Matrix th2 = class_means(r2, fit2.labels, k, opts.clamp_eps, &empty2);
    if (!empty1.empty() || !empty2.empty()) {
        report.failure = FitFailure::empty_class;
        report.labels = stitch(fit1.labels, fit2.labels);
        report.theta_hat = ItemParams(th1);
        report.seconds = elapsed_seconds(start);
        return report;
    }
    const ItemParams theta1(th1), theta2(th2);

    std::optional<Vector> prior1, prior2;
    if (opts.split_use_proportions) {
        prior1 = proportions_of(fit1.labels).array().log().matrix();
        prior2 = proportions_of(fit2.labels).array().log().matrix();
    }

    // Cross-half refinement: S1 scored under the other half's estimates.
    const LabelVector s1_frame2 = assign_labels(r1, theta2, prior2);
    const LabelVector s2_frame1 = assign_labels(r2, theta1, prior1);

    // Map S2 into S1's frame (theta2's indexing, which s1_frame2 already uses).
    const std::vector<int> perm = align_permutation(theta1, theta2);
    std::vector<int> s2_mapped(static_cast<size_t>(r2.rows()));
    for (Index i = 0; i < r2.rows(); ++i) {
        s2_mapped[static_cast<size_t>(i)] = perm[static_cast<size_t>(s2_frame1[i] - 1)];
    }

    report.labels = stitch(s1_frame2, LabelVector(std::move(s2_mapped), k));

    std::vector<int> empty_final;
    const Matrix th_final = class_means(r, report.labels, k, opts.clamp_eps, &empty_final);
    if (!empty_final.empty()) {
        report.failure = FitFailure::empty_class;
        report.theta_hat = theta2;
    } else {
        report.theta_hat = ItemParams(th_final);
    }
    if (opts.split_use_proportions) {
        report.proportions = MixingProportions(proportions_of(report.labels));
    }
    report.loglik_trace.push_back(
        joint_log_likelihood(r, report.labels, report.theta_hat, opts.clamp_eps));
    report.steps_run = 1;
    report.seconds = elapsed_seconds(start);
    return report;
}

LabelVector oracle_classify(const ResponseMatrix& r, const ItemParams& theta_true,
                            double clamp_eps) {
    return assign_labels(r, theta_true.clamped(clamp_eps), std::nullopt);
}

FitReport em_baseline(const ResponseMatrix& r, int k, const EmOptions& opts) {
    const auto start = Clock::now();
    if (!r.fully_observed()) {
        throw std::invalid_argument("em_baseline: missing cells present, impute first");
    }
    if (k < 1) throw std::invalid_argument("em_baseline: k must be >= 1");
    const Index n = r.rows();

    FitReport best;
    double best_ll = -std::numeric_limits<double>::infinity();

    for (int restart = 0; restart < opts.restarts; ++restart) {
        Rng rng = Rng::stream(opts.seed, static_cast<std::uint64_t>(restart));

        // Random responsibilities, rows normalized.
        Matrix resp(n, k);
        for (Index i = 0; i < n; ++i) {
            double row_sum = 0.0;
            for (int c = 0; c < k; ++c) {
                resp(i, c) = rng.uniform01() + 1e-12;
                row_sum += resp(i, c);
            }
            resp.row(i) /= row_sum;
        }

        Vector p = Vector::Constant(k, 1.0 / k);
        Matrix theta;
        std::vector<double> trace;
        FitFailure failure = FitFailure::none;
        double ll = -std::numeric_limits<double>::infinity();

        for (int it = 0; it < opts.max_iter; ++it) {
            // M-step
            const Vector mass = resp.colwise().sum().transpose();
            p = mass / static_cast<double>(n);
            theta = (r.dense().transpose() * resp);
            for (int c = 0; c < k; ++c) {
                if (mass(c) > 1e-12) {
                    theta.col(c) /= mass(c);
                } else {
                    failure = FitFailure::empty_class;
                    theta.col(c).setConstant(0.5);
                }
            }
            theta = theta.array().max(opts.clamp_eps).min(1.0 - opts.clamp_eps).matrix();

            // E-step in log space
            const Matrix log_th = theta.array().log().matrix();
            const Matrix log_1m = (1.0 - theta.array()).log().matrix();
            Matrix scores = r.dense() * (log_th - log_1m);
            scores.rowwise() += log_1m.colwise().sum();
            for (int c = 0; c < k; ++c) {
                scores.col(c).array() += (p(c) > 0.0) ? std::log(p(c))
                                                      : -std::numeric_limits<double>::infinity();
            }
            double new_ll = 0.0;
            for (Index i = 0; i < n; ++i) {
                const double m = scores.row(i).maxCoeff();
                const double lse = m + std::log((scores.row(i).array() - m).exp().sum());
                new_ll += lse;
                resp.row(i) = (scores.row(i).array() - lse).exp();
            }
            if (!std::isfinite(new_ll)) {
                failure = FitFailure::numeric;
                break;
            }
            trace.push_back(new_ll);
            if (it > 0 && new_ll - ll <= opts.tol * (std::abs(ll) + 1.0)) {
                ll = new_ll;
                break;
            }
            ll = new_ll;
        }

        if (ll > best_ll) {
            best_ll = ll;
            std::vector<int> labels(static_cast<size_t>(n));
            for (Index i = 0; i < n; ++i) {
                int c_best = 0;
                for (int c = 1; c < k; ++c) {
                    if (resp(i, c) > resp(i, c_best)) c_best = c;
                }
                labels[static_cast<size_t>(i)] = c_best + 1;
            }
            best.labels = LabelVector(std::move(labels), k);
            best.theta_hat = ItemParams(theta);
            best.proportions = MixingProportions(p / p.sum());
            best.loglik_trace = trace;
            best.loglik_init = trace.empty() ? std::numeric_limits<double>::quiet_NaN() : trace.front();
            best.failure = failure;
            best.steps_run = static_cast<int>(trace.size());
        }
    }

    if (best.labels.size() == 0) {
        // Every restart diverged; should not happen with clamped parameters.
        best.failure = FitFailure::numeric;
    }
    best.seconds = elapsed_seconds(start);
    return best;
}

}  // namespace lcm
