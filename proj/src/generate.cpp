#include "lcm/generate.hpp"

#include "lcm/rng.hpp"

namespace lcm {

ModelInstance generate_instance(Index n, Index j, int k, double beta_a, double beta_b,
                                std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("generate_instance: k must be >= 2");
    if (n < k) throw std::invalid_argument("generate_instance: need n >= k");
    if (j < 1) throw std::invalid_argument("generate_instance: need j >= 1");
    if (beta_a <= 0.0 || beta_b <= 0.0) {
        throw std::invalid_argument("generate_instance: Beta parameters must be positive");
    }

    Rng rng(seed);

    std::vector<int> labels(static_cast<size_t>(n));
    for (auto& v : labels) v = static_cast<int>(rng.uniform_index(static_cast<size_t>(k))) + 1;

    Matrix theta(j, k);
    for (Index jj = 0; jj < j; ++jj)
        for (Index kk = 0; kk < k; ++kk) theta(jj, kk) = rng.beta(beta_a, beta_b);

    Matrix cells(n, j);
    for (Index i = 0; i < n; ++i) {
        const Index col = labels[static_cast<size_t>(i)] - 1;
        for (Index jj = 0; jj < j; ++jj) {
            cells(i, jj) = rng.bernoulli(theta(jj, col)) ? 1.0 : 0.0;
        }
    }

    ModelInstance inst;
    inst.truth_labels = LabelVector(std::move(labels), k);
    inst.truth_theta = ItemParams(std::move(theta));
    inst.responses = ResponseMatrix(std::move(cells));
    inst.seed = seed;
    inst.gen_spec = GenSpec{n, j, k, beta_a, beta_b};
    return inst;
}

}  // namespace lcm
