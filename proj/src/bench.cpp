#include "lcm/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "lcm/generate.hpp"
#include "lcm/io.hpp"
#include "lcm/metrics.hpp"
#include "lcm/refine.hpp"
#include "lcm/rng.hpp"
#include "lcm/spectral.hpp"

namespace lcm {

namespace {

[[noreturn]] void config_error(long line_no, const std::string& msg) {
    throw std::runtime_error("bench config line " + std::to_string(line_no) + ": " + msg);
}

void validate(const BenchConfig& cfg) {
    if (cfg.replicates < 1) throw std::runtime_error("bench config: replicates must be >= 1");
    if (cfg.grid.empty()) throw std::runtime_error("bench config: grid is empty");
    if (cfg.methods.empty()) throw std::runtime_error("bench config: methods is empty");
    for (const auto& m : cfg.methods) {
        if (std::find(kBenchMethods.begin(), kBenchMethods.end(), m) == kBenchMethods.end()) {
            throw std::runtime_error("bench config: unknown method '" + m + "'");
        }
    }
    const bool has_split = std::find(cfg.methods.begin(), cfg.methods.end(), "sola_split") !=
                           cfg.methods.end();
    for (const auto& [n, j, k] : cfg.grid) {
        if (k < 2 || n < k || j < 1 || k > std::min(n, j)) {
            throw std::runtime_error("bench config: bad grid point N=" + std::to_string(n) +
                                     ",J=" + std::to_string(j) + ",K=" + std::to_string(k));
        }
        if (has_split && n < std::max<Index>(2 * k, 4)) {
            throw std::runtime_error("bench config: sola_split needs N >= max(2K, 4)");
        }
    }
}

struct FitOutcome {
    LabelVector labels;
    FitFailure failure = FitFailure::none;
};

FitOutcome run_method(const std::string& method, const ModelInstance& inst, int k,
                      std::uint64_t fit_seed, const BenchConfig& cfg) {
    FitOutcome out;
    if (method == "spec") {
        SpectralOptions sp;
        sp.seed = mix_seed(fit_seed, 0x5bec);
        out.labels = spectral_cluster(inst.responses, k, sp).labels;
    } else if (method == "oracle") {
        out.labels = oracle_classify(inst.responses, inst.truth_theta);
    } else if (method == "em") {
        EmOptions em;
        em.restarts = cfg.em_restarts;
        em.max_iter = cfg.em_max_iter;
        em.tol = cfg.em_tol;
        em.seed = fit_seed;
        const FitReport rep = em_baseline(inst.responses, k, em);
        out.labels = rep.labels;
        out.failure = rep.failure;
    } else {
        RefineOptions ro;
        ro.seed = fit_seed;
        FitReport rep;
        if (method == "sola") {
            rep = sola(inst.responses, k, ro);
        } else if (method == "sola_plus") {
            rep = sola_plus(inst.responses, k, cfg.sola_plus_steps, ro);
        } else if (method == "cem") {
            rep = cem(inst.responses, k, cfg.sola_plus_steps, ro);
        } else {  // sola_split
            rep = sola_split(inst.responses, k, ro);
        }
        out.labels = rep.labels;
        out.failure = rep.failure;
    }
    return out;
}

}  // namespace

BenchConfig parse_bench_config(std::istream& in) {
    BenchConfig cfg;
    cfg.methods.clear();
    cfg.grid.clear();

    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        // trim
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
        size_t start = 0;
        while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start]))) ++start;
        line = line.substr(start);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) config_error(line_no, "expected key=value");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        try {
            if (key == "methods") {
                std::stringstream ss(value);
                std::string m;
                while (std::getline(ss, m, ',')) cfg.methods.push_back(m);
            } else if (key == "grid") {
                std::stringstream ss(value);
                std::string part;
                std::vector<Index> nums;
                while (std::getline(ss, part, ',')) nums.push_back(std::stol(part));
                if (nums.size() != 3) config_error(line_no, "grid needs N,J,K");
                cfg.grid.push_back({nums[0], nums[1], nums[2]});
            } else if (key == "beta") {
                std::stringstream ss(value);
                std::string part;
                std::vector<double> nums;
                while (std::getline(ss, part, ',')) nums.push_back(std::stod(part));
                if (nums.size() != 2) config_error(line_no, "beta needs a,b");
                cfg.beta_a = nums[0];
                cfg.beta_b = nums[1];
            } else if (key == "replicates") {
                cfg.replicates = std::stoi(value);
            } else if (key == "base_seed") {
                cfg.base_seed = std::stoull(value);
            } else if (key == "sola_plus_steps") {
                cfg.sola_plus_steps = std::stoi(value);
            } else if (key == "em_restarts") {
                cfg.em_restarts = std::stoi(value);
            } else if (key == "em_max_iter") {
                cfg.em_max_iter = std::stoi(value);
            } else if (key == "em_tol") {
                cfg.em_tol = std::stod(value);
            } else if (key == "threads") {
                cfg.threads = std::stoi(value);
            } else if (key == "failure_policy") {
                if (value == "exclude") {
                    cfg.failure_policy = FailurePolicy::exclude;
                } else if (value == "abort") {
                    cfg.failure_policy = FailurePolicy::abort;
                } else {
                    config_error(line_no, "failure_policy must be exclude or abort");
                }
            } else {
                config_error(line_no, "unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            config_error(line_no, "bad value '" + value + "' for key '" + key + "'");
        }
    }
    validate(cfg);
    return cfg;
}

BenchConfig load_bench_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open bench config: " + path);
    return parse_bench_config(in);
}

BenchConfig bench_preset(const std::string& name) {
    BenchConfig cfg;
    cfg.methods = {"spec", "sola", "sola_plus", "cem", "em"};
    cfg.grid = {{50, 25, 3}, {110, 55, 3}, {190, 95, 3}};
    cfg.replicates = 50;
    cfg.base_seed = 42;
    if (name == "sim1-small") {
        cfg.beta_a = 5.0;
        cfg.beta_b = 5.0;
    } else if (name == "sim2-small") {
        cfg.beta_a = 1.0;
        cfg.beta_b = 8.0;
    } else {
        throw std::runtime_error("unknown preset '" + name + "' (have sim1-small, sim2-small)");
    }
    return cfg;
}

std::uint64_t instance_hash(const ModelInstance& inst) {
    // FNV-1a over sizes, labels and cells.
    std::uint64_t h = 1469598103934665603ull;
    auto mixin = [&h](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    mixin(static_cast<std::uint64_t>(inst.responses.rows()));
    mixin(static_cast<std::uint64_t>(inst.responses.cols()));
    mixin(static_cast<std::uint64_t>(inst.truth_labels.k()));
    for (Index i = 0; i < inst.truth_labels.size(); ++i) {
        mixin(static_cast<std::uint64_t>(inst.truth_labels[i]));
    }
    for (Index i = 0; i < inst.responses.rows(); ++i) {
        for (Index j = 0; j < inst.responses.cols(); ++j) {
            h ^= inst.responses(i, j) != 0.0 ? 0x9d : 0x3b;
            h *= 1099511628211ull;
        }
    }
    return h;
}

std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
    validate(cfg);
    const size_t n_methods = cfg.methods.size();
    const size_t n_tasks = cfg.grid.size() * static_cast<size_t>(cfg.replicates);
    std::vector<BenchRow> rows(n_tasks * n_methods);

    std::atomic<size_t> next_task{0};
    std::atomic<bool> aborted{false};

    auto worker = [&]() {
        while (true) {
            const size_t task = next_task.fetch_add(1);
            if (task >= n_tasks || aborted.load()) return;
            const size_t gi = task / static_cast<size_t>(cfg.replicates);
            const int rep = static_cast<int>(task % static_cast<size_t>(cfg.replicates));
            const auto [n, j, k] = cfg.grid[gi];

            // Method-independent replicate seed: every method sees this data.
            const std::uint64_t rep_id = static_cast<std::uint64_t>(gi) * 1000003ull +
                                         static_cast<std::uint64_t>(rep);
            const std::uint64_t data_seed = mix_seed(cfg.base_seed, rep_id);
            const std::uint64_t fit_seed = mix_seed(data_seed, 0xf17);

            const ModelInstance inst =
                generate_instance(n, j, static_cast<int>(k), cfg.beta_a, cfg.beta_b, data_seed);
            const std::uint64_t hash = instance_hash(inst);

            if (cfg.timing) {
                // Untimed warmup pass: sub-millisecond fits are otherwise
                // dominated by first-touch allocator and cache costs.
                for (size_t mi = 0; mi < n_methods; ++mi) {
                    try {
                        run_method(cfg.methods[mi], inst, static_cast<int>(k), fit_seed, cfg);
                    } catch (const std::exception&) {
                    }
                }
            }

            for (size_t mi = 0; mi < n_methods; ++mi) {
                BenchRow& row = rows[task * n_methods + mi];
                row.method = cfg.methods[mi];
                row.n = n;
                row.j = j;
                row.k = k;
                row.replicate = rep;
                row.instance_hash = hash;

                const auto t0 = std::chrono::steady_clock::now();
                bool threw = false;
                FitOutcome out;
                try {
                    out = run_method(cfg.methods[mi], inst, static_cast<int>(k), fit_seed, cfg);
                } catch (const std::exception&) {
                    // An error during execution counts as a failed replicate.
                    threw = true;
                }
                row.seconds =
                    cfg.timing
                        ? std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                              .count()
                        : 0.0;
                if (threw) {
                    row.failed = true;
                    row.loss = std::numeric_limits<double>::quiet_NaN();
                } else {
                    row.loss = hamming_loss(out.labels, inst.truth_labels);
                    row.failed = out.failure != FitFailure::none || out.labels.has_empty_class();
                }
                if (row.failed && cfg.failure_policy == FailurePolicy::abort) {
                    aborted.store(true);
                }
            }
        }
    };

    int n_threads = cfg.threads > 0 ? cfg.threads
                                    : static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;
    n_threads = std::min<int>(n_threads, static_cast<int>(n_tasks));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    if (aborted.load()) throw std::runtime_error("bench: a fit failed and failure_policy=abort");
    return rows;
}

std::vector<BenchAggregate> aggregate_rows(const std::vector<BenchRow>& rows) {
    // Keyed by (method, n, j, k); output sorted for stable files.
    std::vector<BenchAggregate> aggs;
    auto find = [&aggs](const BenchRow& r) -> BenchAggregate& {
        for (auto& a : aggs) {
            if (a.method == r.method && a.n == r.n && a.j == r.j && a.k == r.k) return a;
        }
        aggs.push_back(BenchAggregate{r.method, r.n, r.j, r.k, 0, 0, 0.0, 0.0, 0.0});
        return aggs.back();
    };
    for (const auto& r : rows) {
        auto& a = find(r);
        ++a.replicates;
        if (r.failed) {
            ++a.failures;
        } else {
            a.mean_loss += r.loss;
            a.se_loss += r.loss * r.loss;
        }
        a.mean_seconds += r.seconds;
    }
    for (auto& a : aggs) {
        const int ok = a.replicates - a.failures;
        if (ok > 0) {
            const double mean = a.mean_loss / ok;
            const double ex2 = a.se_loss / ok;
            a.mean_loss = mean;
            a.se_loss = ok > 1 ? std::sqrt(std::max(0.0, ex2 - mean * mean) / (ok - 1)) : 0.0;
        } else {
            a.mean_loss = std::numeric_limits<double>::quiet_NaN();
            a.se_loss = std::numeric_limits<double>::quiet_NaN();
        }
        a.mean_seconds /= a.replicates;
    }
    std::sort(aggs.begin(), aggs.end(), [](const BenchAggregate& x, const BenchAggregate& y) {
        return std::tie(x.method, x.n, x.j, x.k) < std::tie(y.method, y.n, y.j, y.k);
    });
    return aggs;
}

void write_rows_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << "method,N,J,K,replicate,loss,failed,seconds,instance_hash\n";
    char hash_buf[20];
    for (const auto& r : rows) {
        std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                      static_cast<unsigned long long>(r.instance_hash));
        out << r.method << ',' << r.n << ',' << r.j << ',' << r.k << ',' << r.replicate << ','
            << format_double(r.loss) << ',' << (r.failed ? 1 : 0) << ','
            << format_double(r.seconds) << ',' << hash_buf << '\n';
    }
}

void write_aggregates_csv(std::ostream& out, const std::vector<BenchAggregate>& aggs) {
    out << "method,N,J,K,replicates,failures,failure_rate,mean_loss,se_loss,mean_seconds\n";
    for (const auto& a : aggs) {
        out << a.method << ',' << a.n << ',' << a.j << ',' << a.k << ',' << a.replicates << ','
            << a.failures << ','
            << format_double(static_cast<double>(a.failures) / a.replicates) << ','
            << format_double(a.mean_loss) << ',' << format_double(a.se_loss) << ','
            << format_double(a.mean_seconds) << '\n';
    }
}

}  // namespace lcm
