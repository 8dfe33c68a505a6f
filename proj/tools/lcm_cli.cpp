// Command-line front end: data simulation and ingestion, model fitting,
// class-count selection, diagnostics, and the benchmark harness.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "lcm/bench.hpp"
#include "lcm/generate.hpp"
#include "lcm/info.hpp"
#include "lcm/ingest.hpp"
#include "lcm/io.hpp"
#include "lcm/metrics.hpp"
#include "lcm/refine.hpp"
#include "lcm/rng.hpp"
#include "lcm/select.hpp"
#include "lcm/spectral.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitFitFailure = 2;

std::pair<double, double> parse_beta_pair(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) {
        throw std::runtime_error("--beta expects two comma-separated values, e.g. 5,5");
    }
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

std::string join_trace(const std::vector<double>& trace) {
    std::ostringstream out;
    for (size_t i = 0; i < trace.size(); ++i) {
        if (i) out << ',';
        out << lcm::format_double(trace[i]);
    }
    return out.str();
}

struct FitArgs {
    std::string input;
    bool header = false;
    std::string drop_rows;
    std::uint64_t impute_seed = 0;
    int k = 0;
    bool auto_k = false;
    std::string method = "sola";
    std::string theta_file;
    int steps = 10;
    int em_restarts = 10;
    std::uint64_t seed = 0;
    std::string out_dir;
};

int cmd_fit(const FitArgs& args) {
    lcm::IngestOptions ing;
    ing.header = args.header;
    if (!args.drop_rows.empty()) ing.drop_rows_file = args.drop_rows;
    const lcm::ResponseMatrix r = lcm::ingest_csv(args.input, args.impute_seed, ing);

    std::optional<int> k_hat;
    int k = args.k;
    if (args.auto_k) {
        k_hat = lcm::estimate_k_from_data(r);
        k = *k_hat;
    }

    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("method", args.method);
    kv.emplace_back("n", std::to_string(r.rows()));
    kv.emplace_back("j", std::to_string(r.cols()));
    if (k_hat) kv.emplace_back("k_hat", std::to_string(*k_hat));

    if (k < 1) {
        std::cerr << "fit: estimated number of classes is " << k << "; nothing to fit\n";
        kv.emplace_back("failure", "degenerate_k");
        fs::create_directories(args.out_dir);
        lcm::write_kv((fs::path(args.out_dir) / "summary.txt").string(), kv);
        return kExitFitFailure;
    }
    kv.emplace_back("k", std::to_string(k));

    lcm::RefineOptions ro;
    ro.seed = args.seed;

    lcm::FitReport rep;
    if (args.method == "spec") {
        lcm::SpectralOptions sp;
        sp.seed = lcm::mix_seed(args.seed, 0x5bec);
        const lcm::SpectralFit fit = lcm::spectral_cluster(r, k, sp);
        rep.labels = fit.labels;
        try {
            rep.theta_hat = lcm::estimate_theta(r, rep.labels, k);
            rep.loglik_trace.push_back(lcm::joint_log_likelihood(r, rep.labels, rep.theta_hat));
        } catch (const lcm::EmptyClassError&) {
            rep.failure = lcm::FitFailure::empty_class;
        }
    } else if (args.method == "sola") {
        rep = lcm::sola(r, k, ro);
    } else if (args.method == "sola_plus") {
        rep = lcm::sola_plus(r, k, args.steps, ro);
    } else if (args.method == "cem") {
        rep = lcm::cem(r, k, args.steps, ro);
    } else if (args.method == "sola_split") {
        rep = lcm::sola_split(r, k, ro);
    } else if (args.method == "em") {
        lcm::EmOptions em;
        em.seed = args.seed;
        em.restarts = args.em_restarts;
        rep = lcm::em_baseline(r, k, em);
    } else if (args.method == "oracle") {
        if (args.theta_file.empty()) {
            throw std::runtime_error("fit: --method oracle requires --theta");
        }
        const lcm::ItemParams theta{lcm::read_matrix_csv(args.theta_file)};
        rep.labels = lcm::oracle_classify(r, theta);
        rep.theta_hat = theta;
    } else {
        throw std::runtime_error("fit: unknown method '" + args.method + "'");
    }

    fs::create_directories(args.out_dir);
    lcm::write_labels((fs::path(args.out_dir) / "labels.txt").string(), rep.labels);
    if (rep.theta_hat.items() > 0) {
        lcm::write_matrix_csv((fs::path(args.out_dir) / "theta.csv").string(),
                              rep.theta_hat.dense());
    }

    if (!std::isnan(rep.loglik_init)) {
        kv.emplace_back("loglik_init", lcm::format_double(rep.loglik_init));
    }
    if (!rep.loglik_trace.empty()) {
        kv.emplace_back("loglik", lcm::format_double(rep.loglik_trace.back()));
        kv.emplace_back("loglik_trace", join_trace(rep.loglik_trace));
    }
    if (rep.proportions) {
        std::ostringstream p;
        for (lcm::Index c = 0; c < rep.proportions->size(); ++c) {
            if (c) p << ',';
            p << lcm::format_double((*rep.proportions)[c]);
        }
        kv.emplace_back("proportions", p.str());
    }
    kv.emplace_back("failure", lcm::to_string(rep.failure));
    kv.emplace_back("seconds", lcm::format_double(rep.seconds));
    kv.emplace_back("steps_run", std::to_string(rep.steps_run));
    lcm::write_kv((fs::path(args.out_dir) / "summary.txt").string(), kv);

    return rep.failure == lcm::FitFailure::none ? kExitOk : kExitFitFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral + likelihood-refinement clustering for binary-response latent class models"};
    app.require_subcommand(1);

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "Generate a synthetic instance and write it to CSV");
    lcm::Index sim_n = 200, sim_j = 100;
    int sim_k = 3;
    std::string sim_beta = "5,5";
    std::uint64_t sim_seed = 0;
    std::string sim_out;
    sim->add_option("--n", sim_n, "Number of individuals");
    sim->add_option("--j", sim_j, "Number of items");
    sim->add_option("--k", sim_k, "Number of classes");
    sim->add_option("--beta", sim_beta, "Beta parameters a,b for the item probabilities");
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("--out", sim_out, "Output directory")->required();

    // ---- fit ----
    auto* fit = app.add_subcommand("fit", "Fit class labels to a response CSV");
    FitArgs fa;
    fit->add_option("--input", fa.input, "Response CSV with cells 0/1/NA")->required();
    fit->add_flag("--header", fa.header, "Skip the first line");
    fit->add_option("--drop-rows", fa.drop_rows, "File of 1-based row indices to drop");
    fit->add_option("--impute-seed", fa.impute_seed, "Seed for missing-cell imputation");
    auto* k_opt = fit->add_option("--k", fa.k, "Number of classes");
    auto* autok = fit->add_flag("--auto-k", fa.auto_k, "Select K by the singular-value rule");
    autok->excludes(k_opt);
    fit->add_option("--method", fa.method,
                    "One of spec, sola, sola_plus, cem, sola_split, em, oracle");
    fit->add_option("--theta", fa.theta_file, "True item-parameter CSV (oracle only)");
    fit->add_option("--steps", fa.steps, "Refinement steps for sola_plus/cem");
    fit->add_option("--em-restarts", fa.em_restarts, "Random restarts for em");
    fit->add_option("--seed", fa.seed, "RNG seed");
    fit->add_option("--out", fa.out_dir, "Output directory")->required();

    // ---- select-k ----
    auto* selk = app.add_subcommand("select-k", "Estimate the number of classes");
    std::string sk_input, sk_drop, sk_out;
    bool sk_header = false;
    std::uint64_t sk_impute = 0;
    lcm::Index sk_cap = 50;
    double sk_factor = lcm::kDefaultKThresholdFactor;
    selk->add_option("--input", sk_input, "Response CSV with cells 0/1/NA")->required();
    selk->add_flag("--header", sk_header, "Skip the first line");
    selk->add_option("--drop-rows", sk_drop, "File of 1-based row indices to drop");
    selk->add_option("--impute-seed", sk_impute, "Seed for missing-cell imputation");
    selk->add_option("--cap", sk_cap, "Maximum number of singular values to inspect");
    selk->add_option("--factor", sk_factor, "Threshold factor");
    selk->add_option("--out", sk_out, "Optional key=value output file");

    // ---- diagnose ----
    auto* diag = app.add_subcommand("diagnose", "Signal-strength diagnostics");
    std::string dg_theta, dg_beta, dg_out;
    diag->add_option("--theta", dg_theta, "Item-parameter CSV");
    diag->add_option("--beta", dg_beta, "Beta parameters a,b");
    diag->add_option("--out", dg_out, "Optional key=value output file");

    // ---- bench ----
    auto* bench = app.add_subcommand("bench", "Replicated benchmark over a (N,J,K) grid");
    std::string bc_config, bc_preset, bc_rows_out, bc_agg_out, bc_methods;
    int bc_replicates = -1, bc_threads = -1;
    std::int64_t bc_base_seed = -1;
    bool bc_no_timing = false;
    bench->add_option("--config", bc_config, "key=value config file with grid= lines");
    bench->add_option("--preset", bc_preset, "Built-in preset: sim1-small or sim2-small");
    bench->add_option("--out-csv", bc_rows_out, "Per-replicate rows CSV")->required();
    bench->add_option("--aggregate-csv", bc_agg_out, "Aggregate table CSV");
    bench->add_option("--replicates", bc_replicates, "Override replicate count");
    bench->add_option("--methods", bc_methods, "Override method list (comma-separated)");
    bench->add_option("--threads", bc_threads, "Worker threads (0 = hardware)");
    bench->add_option("--base-seed", bc_base_seed, "Override base seed");
    bench->add_flag("--no-timing", bc_no_timing, "Zero the seconds column (byte-stable output)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            const auto [a, b] = parse_beta_pair(sim_beta);
            const lcm::ModelInstance inst =
                lcm::generate_instance(sim_n, sim_j, sim_k, a, b, sim_seed);
            fs::create_directories(sim_out);
            // Responses as integer cells.
            std::ofstream rcsv(fs::path(sim_out) / "responses.csv");
            for (lcm::Index i = 0; i < inst.responses.rows(); ++i) {
                for (lcm::Index j = 0; j < inst.responses.cols(); ++j) {
                    if (j) rcsv << ',';
                    rcsv << static_cast<int>(inst.responses(i, j));
                }
                rcsv << '\n';
            }
            lcm::write_labels((fs::path(sim_out) / "labels.txt").string(), inst.truth_labels);
            lcm::write_matrix_csv((fs::path(sim_out) / "theta.csv").string(),
                                  inst.truth_theta.dense());
            lcm::write_kv((fs::path(sim_out) / "meta.txt").string(),
                          {{"n", std::to_string(sim_n)},
                           {"j", std::to_string(sim_j)},
                           {"k", std::to_string(sim_k)},
                           {"beta_a", lcm::format_double(a)},
                           {"beta_b", lcm::format_double(b)},
                           {"seed", std::to_string(sim_seed)}});
            return kExitOk;
        }

        if (fit->parsed()) {
            if (!fa.auto_k && fa.k < 1) {
                std::cerr << "fit: provide --k or --auto-k\n";
                return kExitError;
            }
            return cmd_fit(fa);
        }

        if (selk->parsed()) {
            lcm::IngestOptions ing;
            ing.header = sk_header;
            if (!sk_drop.empty()) ing.drop_rows_file = sk_drop;
            const lcm::ResponseMatrix r = lcm::ingest_csv(sk_input, sk_impute, ing);
            const int k_hat = lcm::estimate_k_from_data(r, sk_cap, sk_factor);
            const double threshold =
                sk_factor * (std::sqrt(static_cast<double>(r.cols())) +
                             std::sqrt(static_cast<double>(r.rows())));
            std::vector<std::pair<std::string, std::string>> kv = {
                {"n", std::to_string(r.rows())},
                {"j", std::to_string(r.cols())},
                {"k_hat", std::to_string(k_hat)},
                {"threshold", lcm::format_double(threshold)}};
            for (const auto& [key, value] : kv) std::cout << key << '=' << value << '\n';
            if (!sk_out.empty()) lcm::write_kv(sk_out, kv);
            return kExitOk;
        }

        if (diag->parsed()) {
            std::vector<std::pair<std::string, std::string>> kv;
            std::optional<std::pair<double, double>> beta;
            if (!dg_beta.empty()) beta = parse_beta_pair(dg_beta);
            if (!dg_theta.empty()) {
                const lcm::ItemParams theta{lcm::read_matrix_csv(dg_theta)};
                const lcm::DiagnosticsReport rep = lcm::diagnose(theta.clamped(), beta);
                kv.emplace_back("delta", lcm::format_double(rep.delta));
                kv.emplace_back("sigma_bar", lcm::format_double(rep.sigma_bar));
                kv.emplace_back("istar", lcm::format_double(rep.istar));
                kv.emplace_back("spectral_exponent", lcm::format_double(rep.spectral_exponent));
                kv.emplace_back("oracle_exponent", lcm::format_double(rep.oracle_exponent));
                if (rep.beta_b) kv.emplace_back("beta_B", lcm::format_double(*rep.beta_b));
                if (rep.tau_min_proxy) {
                    kv.emplace_back("tau_min_proxy", lcm::format_double(*rep.tau_min_proxy));
                }
            } else if (beta) {
                kv.emplace_back("beta_B",
                                lcm::format_double(lcm::beta_b_constant(beta->first, beta->second)));
            } else {
                std::cerr << "diagnose: provide --theta and/or --beta\n";
                return kExitError;
            }
            for (const auto& [key, value] : kv) std::cout << key << '=' << value << '\n';
            if (!dg_out.empty()) lcm::write_kv(dg_out, kv);
            return kExitOk;
        }

        if (bench->parsed()) {
            lcm::BenchConfig cfg;
            if (!bc_preset.empty()) {
                cfg = lcm::bench_preset(bc_preset);
            } else if (!bc_config.empty()) {
                cfg = lcm::load_bench_config(bc_config);
            } else {
                std::cerr << "bench: provide --config or --preset\n";
                return kExitError;
            }
            if (bc_replicates > 0) cfg.replicates = bc_replicates;
            if (bc_threads >= 0) cfg.threads = bc_threads;
            if (bc_base_seed >= 0) cfg.base_seed = static_cast<std::uint64_t>(bc_base_seed);
            if (bc_no_timing) cfg.timing = false;
            if (!bc_methods.empty()) {
                cfg.methods.clear();
                std::stringstream ss(bc_methods);
                std::string m;
                while (std::getline(ss, m, ',')) cfg.methods.push_back(m);
            }

            std::vector<lcm::BenchRow> rows;
            try {
                rows = lcm::run_bench(cfg);
            } catch (const std::runtime_error& e) {
                std::cerr << e.what() << '\n';
                return kExitFitFailure;
            }
            std::ofstream out(bc_rows_out);
            if (!out) throw std::runtime_error("cannot open " + bc_rows_out);
            lcm::write_rows_csv(out, rows);
            const auto aggs = lcm::aggregate_rows(rows);
            if (!bc_agg_out.empty()) {
                std::ofstream agg(bc_agg_out);
                if (!agg) throw std::runtime_error("cannot open " + bc_agg_out);
                lcm::write_aggregates_csv(agg, aggs);
            } else {
                lcm::write_aggregates_csv(std::cout, aggs);
            }
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
