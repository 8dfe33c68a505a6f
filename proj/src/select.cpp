#include "lcm/select.hpp"

#include <cmath>

#include "lcm/info.hpp"

namespace lcm {

int estimate_k(const std::vector<double>& singular_values, Index n, Index j, double factor) {
    if (n < 1 || j < 1) throw std::invalid_argument("estimate_k: sizes must be positive");
    for (size_t i = 0; i < singular_values.size(); ++i) {
        if (singular_values[i] < 0.0) {
            throw std::invalid_argument("estimate_k: singular values must be nonnegative");
        }
        if (i > 0 && singular_values[i] > singular_values[i - 1] + 1e-12) {
            throw std::invalid_argument("estimate_k: singular values must be nonincreasing");
        }
    }
    const double threshold =
        factor * (std::sqrt(static_cast<double>(j)) + std::sqrt(static_cast<double>(n)));
    int count = 0;
    for (double v : singular_values) {
        if (v > threshold) ++count;
    }
    return count;
}

int estimate_k_from_data(const ResponseMatrix& r, Index cap, double factor,
                         const SvdOptions& svd) {
    if (!r.fully_observed()) {
        throw std::invalid_argument("estimate_k_from_data: missing cells present, impute first");
    }
    const Index m = std::min({r.rows(), r.cols(), cap});
    const Vector sv = all_singular_values(r.dense(), m, svd);
    return estimate_k(std::vector<double>(sv.data(), sv.data() + sv.size()), r.rows(), r.cols(),
                      factor);
}

double beta_b_constant(double a, double b) {
    if (a <= 0.0 || b <= 0.0) {
        throw std::invalid_argument("beta_b_constant: parameters must be positive");
    }
    return a * (a + b + a / (a + b)) / ((a + b) * (a + b + 1.0));
}

double tau(double x) {
    if (!(x > 0.0 && x < 1.0)) {
        throw std::invalid_argument("tau: input must lie strictly in (0,1)");
    }
    if (std::abs(x - 0.5) < 1e-8) return 1.0;
    return (1.0 - 2.0 * x) / (2.0 * x * (1.0 - x) * std::log((1.0 - x) / x));
}

DiagnosticsReport diagnose(const ItemParams& theta,
                           std::optional<std::pair<double, double>> beta_params) {
    DiagnosticsReport rep;
    rep.delta = separation_delta(theta);

    double max_s2 = 0.0;
    for (Index j = 0; j < theta.items(); ++j) {
        for (Index k = 0; k < theta.classes(); ++k) {
            max_s2 = std::max(max_s2, sigma_theta_sq(theta(j, k)));
        }
    }
    rep.sigma_bar = std::sqrt(max_s2);
    rep.istar = snr_istar(theta);
    rep.spectral_exponent = rep.delta * rep.delta / (8.0 * max_s2);
    rep.oracle_exponent = rep.istar / 2.0;
    if (beta_params) rep.beta_b = beta_b_constant(beta_params->first, beta_params->second);

    // Locate the pair achieving istar to report the tau proxy on its items.
    const Index k = theta.classes();
    Index best_a = 0, best_b = 1;
    double best = std::numeric_limits<double>::infinity();
    for (Index a = 0; a < k; ++a) {
        for (Index b = a + 1; b < k; ++b) {
            double sum = 0.0;
            for (Index j = 0; j < theta.items(); ++j) sum += renyi_half(theta(j, a), theta(j, b));
            if (sum < best) {
                best = sum;
                best_a = a;
                best_b = b;
            }
        }
    }
    (void)best_b;
    double proxy = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < theta.items(); ++j) proxy = std::min(proxy, tau(theta(j, best_a)));
    rep.tau_min_proxy = proxy;
    return rep;
}

}  // namespace lcm
