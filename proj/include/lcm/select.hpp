#pragma once

#include <optional>
#include <vector>

#include "lcm/svd.hpp"
#include "lcm/types.hpp"

namespace lcm {

/// Threshold factor for the singular-value counting rule; kept configurable
/// rather than hard-coded.
inline constexpr double kDefaultKThresholdFactor = 2.01;

struct DiagnosticsReport {
    double delta = 0.0;              // min pairwise column separation
    double sigma_bar = 0.0;          // max per-entry variance proxy (sqrt of max sigma^2)
    double istar = 0.0;              // min pairwise summed Renyi-1/2
    double spectral_exponent = 0.0;  // delta^2 / (8 sigma_bar^2)
    double oracle_exponent = 0.0;    // istar / 2
    std::optional<double> beta_b;    // generative-constant B when Beta params given
    /// Proxy only: min over the istar-achieving pair's items of tau at the
    /// lower-indexed class's entry. The fully weighted variant needs
    /// asymptotic item classification and is deliberately not computed.
    std::optional<double> tau_min_proxy;
};

/// Number of singular values strictly above factor * (sqrt(J) + sqrt(N)).
/// `values` must be nonincreasing and nonnegative.
int estimate_k(const std::vector<double>& singular_values, Index n, Index j,
               double factor = kDefaultKThresholdFactor);

/// The counting rule applied to the top min(N, J, cap) singular values of r.
int estimate_k_from_data(const ResponseMatrix& r, Index cap = 50,
                         double factor = kDefaultKThresholdFactor, const SvdOptions& svd = {});

/// Signal-strength constant of the Beta(a,b) generative setting:
///   B = a (a + b + a/(a+b)) / ((a+b)(a+b+1)).
double beta_b_constant(double a, double b);

/// Exponent-comparison factor
///   tau(x) = (1 - 2x) / (2 x (1-x) log((1-x)/x)),  tau(1/2) = 1,
/// with the removable singularity handled as in sigma_theta_sq.
double tau(double x);

/// Signal-strength summary of the given item parameters; includes B when the
/// generating Beta parameters are supplied.
DiagnosticsReport diagnose(const ItemParams& theta,
                           std::optional<std::pair<double, double>> beta_params = std::nullopt);

}  // namespace lcm
