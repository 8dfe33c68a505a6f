#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace lcm {

/// SplitMix64 finalizer; used to whiten seeds and derive sub-streams.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Derives a stream seed from a base seed and a stream id. Streams derived
/// from distinct ids are independent for practical purposes, which keeps
/// parallel replicates schedule-independent.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
    return mix64(mix64(base) ^ (stream + 0x9e3779b97f4a7c15ull));
}

/// Seedable generator with the sampling routines the toolkit needs.
///
/// All draws are implemented on top of the raw 64-bit stream so results are
/// reproducible bit-for-bit for a given seed, independent of the standard
/// library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(mix64(seed)) {}

    /// Stream split: Rng::stream(seed, 3) is independent of stream 2.
    static Rng stream(std::uint64_t base, std::uint64_t id) { return Rng(mix_seed(base, id)); }

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n), unbiased (Lemire with rejection).
    std::size_t uniform_index(std::size_t n) {
        if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
        const std::uint64_t bound = n;
        while (true) {
            const std::uint64_t x = next_u64();
            const __uint128_t m = static_cast<__uint128_t>(x) * bound;
            const std::uint64_t lo = static_cast<std::uint64_t>(m);
            if (lo >= bound || lo >= (-bound) % bound) {
                return static_cast<std::size_t>(m >> 64);
            }
        }
    }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Standard normal via Box-Muller; the second variate is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    /// Gamma(shape, 1) via Marsaglia-Tsang, with the usual boost for shape < 1.
    double gamma(double shape) {
        if (shape <= 0.0) throw std::invalid_argument("gamma: shape must be positive");
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0);
            double u = uniform01();
            while (u <= 0.0) u = uniform01();
            return g * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        while (true) {
            double x;
            double v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform01();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    double beta(double a, double b) {
        if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("beta: parameters must be positive");
        while (true) {
            const double x = gamma(a);
            const double y = gamma(b);
            if (x + y > 0.0) return x / (x + y);
        }
    }

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace lcm
