#pragma once

#include <cstdint>

#include "lcm/types.hpp"

namespace lcm {

/// Simulates a model instance: labels i.i.d. uniform on 1..k, item
/// parameters theta(j,k) i.i.d. Beta(beta_a, beta_b), and each response cell
/// Bernoulli(theta(j, label(i))).
///
/// Draw order is fixed (labels, then theta item-major, then cells row-major),
/// so the result is bit-reproducible for a given seed.
ModelInstance generate_instance(Index n, Index j, int k, double beta_a, double beta_b,
                                std::uint64_t seed);

}  // namespace lcm
