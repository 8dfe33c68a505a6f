#pragma once

#include "lcm/types.hpp"

namespace lcm {

/// Order-1/2 Renyi divergence between Bernoulli(p) and Bernoulli(q):
///   -2 log( sqrt(p q) + sqrt((1-p)(1-q)) ).
/// Symmetric in (p, q) and zero iff p == q. Inputs must lie strictly in (0,1).
double renyi_half(double p, double q);

/// Minimum over unordered class pairs of the per-item Renyi-1/2 divergences
/// summed across items: the signal-to-noise ratio that governs the optimal
/// misclassification exponent exp(-istar/2).
double snr_istar(const ItemParams& theta);

/// Minimum Euclidean distance between any two columns of theta.
double separation_delta(const ItemParams& theta);

/// Bernoulli sub-Gaussian variance proxy
///   sigma^2(t) = (1 - 2t) / (2 log((1-t)/t)),  sigma^2(1/2) = 1/4.
/// The removable singularity at 1/2 is handled by branching to the limit
/// for |t - 1/2| < 1e-8.
double sigma_theta_sq(double theta_val);

/// Joint log-likelihood of labels and item parameters given the responses:
///   sum_ij [ R_ij log theta(j, s_i) + (1 - R_ij) log(1 - theta(j, s_i)) ].
/// theta is clamped to [clamp_eps, 1-clamp_eps] before taking logs.
/// Requires a fully observed response matrix.
double joint_log_likelihood(const ResponseMatrix& r, const LabelVector& s, const ItemParams& theta,
                            double clamp_eps = kClampEps);

}  // namespace lcm
