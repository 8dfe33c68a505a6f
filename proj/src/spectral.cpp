#include "lcm/spectral.hpp"

#include "lcm/rng.hpp"

namespace lcm {

SpectralFit spectral_cluster(const ResponseMatrix& r, int k, const SpectralOptions& opts) {
    if (!r.fully_observed()) {
        throw std::invalid_argument("spectral_cluster: missing cells present, impute first");
    }
    if (k < 1 || k > std::min(r.rows(), r.cols())) {
        throw std::invalid_argument("spectral_cluster: k out of range");
    }

    SvdOptions svd_opts = opts.svd;
    svd_opts.seed = mix_seed(opts.seed, 1);
    KMeansOptions km_opts = opts.kmeans;
    km_opts.seed = mix_seed(opts.seed, 2);

    SpectralFit fit;
    fit.svd = truncated_svd(r.dense(), k, svd_opts);
    fit.embedding = fit.svd.u * fit.svd.sigma.asDiagonal();

    KMeansResult km = kmeans(fit.embedding, k, km_opts);
    fit.labels = std::move(km.assignments);
    fit.kmeans_objective = km.objective;
    return fit;
}

}  // namespace lcm
