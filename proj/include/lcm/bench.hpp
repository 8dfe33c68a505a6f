#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lcm/types.hpp"

namespace lcm {

enum class FailurePolicy { exclude, abort };

struct BenchConfig {
    std::vector<std::string> methods;             // subset of kBenchMethods
    std::vector<std::array<Index, 3>> grid;       // (N, J, K) points
    double beta_a = 5.0;
    double beta_b = 5.0;
    int replicates = 50;
    std::uint64_t base_seed = 42;
    int sola_plus_steps = 10;
    FailurePolicy failure_policy = FailurePolicy::exclude;
    int em_restarts = 10;
    int em_max_iter = 100;
    double em_tol = 1e-8;
    int threads = 0;      // 0 = hardware concurrency
    bool timing = true;   // false zeroes the seconds column for byte-stable output
};

inline const std::vector<std::string> kBenchMethods = {
    "spec", "sola", "sola_plus", "cem", "sola_split", "em", "oracle"};

struct BenchRow {
    std::string method;
    Index n = 0;
    Index j = 0;
    Index k = 0;
    int replicate = 0;
    double loss = 0.0;
    bool failed = false;
    double seconds = 0.0;
    std::uint64_t instance_hash = 0;  // identical across methods of a replicate
};

struct BenchAggregate {
    std::string method;
    Index n = 0;
    Index j = 0;
    Index k = 0;
    int replicates = 0;
    int failures = 0;
    double mean_loss = 0.0;  // failed replicates excluded
    double se_loss = 0.0;
    double mean_seconds = 0.0;
};

/// Line-oriented key=value config with repeated grid=N,J,K lines. Errors
/// carry the offending line number.
BenchConfig parse_bench_config(std::istream& in);
BenchConfig load_bench_config(const std::string& path);

/// Built-in scaled-down experiment presets: "sim1-small" (Beta(5,5)) and
/// "sim2-small" (Beta(1,8)), both on K=3, N=2J, J in {25,55,95}, 50
/// replicates.
BenchConfig bench_preset(const std::string& name);

/// Runs every (method, grid point, replicate) cell. Replicate seeds are
/// derived from (base_seed, grid index, replicate) only, so all methods see
/// the same instance and parallel scheduling never changes results.
std::vector<BenchRow> run_bench(const BenchConfig& cfg);

std::vector<BenchAggregate> aggregate_rows(const std::vector<BenchRow>& rows);

void write_rows_csv(std::ostream& out, const std::vector<BenchRow>& rows);
void write_aggregates_csv(std::ostream& out, const std::vector<BenchAggregate>& aggs);

std::uint64_t instance_hash(const ModelInstance& inst);

}  // namespace lcm
