#include "lcm/info.hpp"

#include <cmath>

namespace lcm {

namespace {

void require_open_unit(double x, const char* what) {
    if (!(x > 0.0 && x < 1.0)) {
        throw std::invalid_argument(std::string(what) + ": input must lie strictly in (0,1)");
    }
}

}  // namespace

double renyi_half(double p, double q) {
    require_open_unit(p, "renyi_half");
    require_open_unit(q, "renyi_half");
    const double bc = std::sqrt(p * q) + std::sqrt((1.0 - p) * (1.0 - q));
    // bc <= 1 by Cauchy-Schwarz; guard the log against tiny overshoot.
    return -2.0 * std::log(std::min(bc, 1.0));
}

double snr_istar(const ItemParams& theta) {
    const Index k = theta.classes();
    if (k < 2) throw std::invalid_argument("snr_istar: need at least two classes");
    double best = std::numeric_limits<double>::infinity();
    for (Index a = 0; a < k; ++a) {
        for (Index b = a + 1; b < k; ++b) {
            double sum = 0.0;
            for (Index j = 0; j < theta.items(); ++j) sum += renyi_half(theta(j, a), theta(j, b));
            best = std::min(best, sum);
        }
    }
    return best;
}

double separation_delta(const ItemParams& theta) {
    const Index k = theta.classes();
    if (k < 2) throw std::invalid_argument("separation_delta: need at least two classes");
    double best = std::numeric_limits<double>::infinity();
    for (Index a = 0; a < k; ++a) {
        for (Index b = a + 1; b < k; ++b) {
            best = std::min(best, (theta.dense().col(a) - theta.dense().col(b)).norm());
        }
    }
    return best;
}

double sigma_theta_sq(double theta_val) {
    require_open_unit(theta_val, "sigma_theta_sq");
    if (std::abs(theta_val - 0.5) < 1e-8) return 0.25;
    return (1.0 - 2.0 * theta_val) / (2.0 * std::log((1.0 - theta_val) / theta_val));
}

double joint_log_likelihood(const ResponseMatrix& r, const LabelVector& s, const ItemParams& theta,
                            double clamp_eps) {
    if (!r.fully_observed()) {
        throw std::invalid_argument("joint_log_likelihood: missing cells present, impute first");
    }
    if (s.size() != r.rows()) throw std::invalid_argument("joint_log_likelihood: label length");
    if (theta.items() != r.cols() || theta.classes() < s.k()) {
        throw std::invalid_argument("joint_log_likelihood: theta dimensions");
    }

    const Matrix th = theta.clamped(clamp_eps).dense();
    const Matrix log_th = th.array().log().matrix();
    const Matrix log_1m = (1.0 - th.array()).log().matrix();

    double total = 0.0;
    for (Index i = 0; i < r.rows(); ++i) {
        const Index c = s[i] - 1;
        total += r.dense().row(i).dot(log_th.col(c) - log_1m.col(c)) + log_1m.col(c).sum();
    }
    return total;
}

}  // namespace lcm
