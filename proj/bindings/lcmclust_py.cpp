// Python bindings for the main operations: simulation, spectral clustering,
// likelihood refinement, class-count selection and diagnostics.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lcm/bench.hpp"
#include "lcm/generate.hpp"
#include "lcm/info.hpp"
#include "lcm/kmeans.hpp"
#include "lcm/metrics.hpp"
#include "lcm/refine.hpp"
#include "lcm/select.hpp"
#include "lcm/spectral.hpp"
#include "lcm/svd.hpp"

namespace py = pybind11;

namespace {

using IntVec = Eigen::VectorXi;

lcm::ResponseMatrix to_responses(const lcm::Matrix& r) { return lcm::ResponseMatrix(r); }

lcm::LabelVector to_labels(const IntVec& v, int k) {
    return lcm::LabelVector(std::vector<int>(v.data(), v.data() + v.size()), k);
}

IntVec from_labels(const lcm::LabelVector& l) {
    IntVec out(l.size());
    for (lcm::Index i = 0; i < l.size(); ++i) out(i) = l[i];
    return out;
}

struct PyFitReport {
    IntVec labels;
    lcm::Matrix theta;
    std::optional<lcm::Vector> proportions;
    double loglik_init;
    std::vector<double> loglik_trace;
    std::string failure;
    double seconds;
    int steps_run;
};

PyFitReport wrap(const lcm::FitReport& rep) {
    PyFitReport out;
    out.labels = from_labels(rep.labels);
    out.theta = rep.theta_hat.items() > 0 ? rep.theta_hat.dense() : lcm::Matrix();
    if (rep.proportions) out.proportions = rep.proportions->dense();
    out.loglik_init = rep.loglik_init;
    out.loglik_trace = rep.loglik_trace;
    out.failure = lcm::to_string(rep.failure);
    out.seconds = rep.seconds;
    out.steps_run = rep.steps_run;
    return out;
}

lcm::RefineOptions refine_opts(std::uint64_t seed) {
    lcm::RefineOptions o;
    o.seed = seed;
    return o;
}

}  // namespace

PYBIND11_MODULE(_lcmclust, m) {
    m.doc() = "Clustering toolkit for binary-response latent class models";

    py::class_<PyFitReport>(m, "FitReport")
        .def_readonly("labels", &PyFitReport::labels)
        .def_readonly("theta", &PyFitReport::theta)
        .def_readonly("proportions", &PyFitReport::proportions)
        .def_readonly("loglik_init", &PyFitReport::loglik_init)
        .def_readonly("loglik_trace", &PyFitReport::loglik_trace)
        .def_readonly("failure", &PyFitReport::failure)
        .def_readonly("seconds", &PyFitReport::seconds)
        .def_readonly("steps_run", &PyFitReport::steps_run);

    py::class_<lcm::DiagnosticsReport>(m, "DiagnosticsReport")
        .def_readonly("delta", &lcm::DiagnosticsReport::delta)
        .def_readonly("sigma_bar", &lcm::DiagnosticsReport::sigma_bar)
        .def_readonly("istar", &lcm::DiagnosticsReport::istar)
        .def_readonly("spectral_exponent", &lcm::DiagnosticsReport::spectral_exponent)
        .def_readonly("oracle_exponent", &lcm::DiagnosticsReport::oracle_exponent)
        .def_readonly("beta_b", &lcm::DiagnosticsReport::beta_b)
        .def_readonly("tau_min_proxy", &lcm::DiagnosticsReport::tau_min_proxy);

    m.def(
        "generate_instance",
        [](lcm::Index n, lcm::Index j, int k, double beta_a, double beta_b, std::uint64_t seed) {
            const lcm::ModelInstance inst = lcm::generate_instance(n, j, k, beta_a, beta_b, seed);
            return py::make_tuple(inst.responses.dense(), from_labels(inst.truth_labels),
                                  inst.truth_theta.dense());
        },
        py::arg("n"), py::arg("j"), py::arg("k"), py::arg("beta_a") = 5.0, py::arg("beta_b") = 5.0,
        py::arg("seed") = 0,
        "Simulate (responses, labels, theta) with labels uniform on 1..k and "
        "theta entries Beta(beta_a, beta_b)");

    m.def(
        "spec",
        [](const lcm::Matrix& r, int k, std::uint64_t seed) {
            lcm::SpectralOptions opts;
            opts.seed = seed;
            const lcm::SpectralFit fit = lcm::spectral_cluster(to_responses(r), k, opts);
            return py::make_tuple(from_labels(fit.labels), fit.embedding, fit.kmeans_objective);
        },
        py::arg("r"), py::arg("k"), py::arg("seed") = 0,
        "Spectral clustering: returns (labels, embedding, kmeans_objective)");

    m.def(
        "sola",
        [](const lcm::Matrix& r, int k, std::uint64_t seed) {
            return wrap(lcm::sola(to_responses(r), k, refine_opts(seed)));
        },
        py::arg("r"), py::arg("k"), py::arg("seed") = 0);

    m.def(
        "sola_plus",
        [](const lcm::Matrix& r, int k, int steps, std::uint64_t seed) {
            return wrap(lcm::sola_plus(to_responses(r), k, steps, refine_opts(seed)));
        },
        py::arg("r"), py::arg("k"), py::arg("steps") = 10, py::arg("seed") = 0);

    m.def(
        "cem",
        [](const lcm::Matrix& r, int k, int steps, std::uint64_t seed) {
            return wrap(lcm::cem(to_responses(r), k, steps, refine_opts(seed)));
        },
        py::arg("r"), py::arg("k"), py::arg("steps") = 10, py::arg("seed") = 0);

    m.def(
        "sola_split",
        [](const lcm::Matrix& r, int k, std::uint64_t seed, bool use_proportions) {
            lcm::RefineOptions o = refine_opts(seed);
            o.split_use_proportions = use_proportions;
            return wrap(lcm::sola_split(to_responses(r), k, o));
        },
        py::arg("r"), py::arg("k"), py::arg("seed") = 0, py::arg("use_proportions") = false);

    m.def(
        "em_baseline",
        [](const lcm::Matrix& r, int k, int restarts, int max_iter, double tol,
           std::uint64_t seed) {
            lcm::EmOptions o;
            o.restarts = restarts;
            o.max_iter = max_iter;
            o.tol = tol;
            o.seed = seed;
            return wrap(lcm::em_baseline(to_responses(r), k, o));
        },
        py::arg("r"), py::arg("k"), py::arg("restarts") = 10, py::arg("max_iter") = 100,
        py::arg("tol") = 1e-8, py::arg("seed") = 0);

    m.def(
        "oracle_classify",
        [](const lcm::Matrix& r, const lcm::Matrix& theta) {
            return from_labels(lcm::oracle_classify(to_responses(r), lcm::ItemParams(theta)));
        },
        py::arg("r"), py::arg("theta"));

    m.def(
        "estimate_theta",
        [](const lcm::Matrix& r, const IntVec& labels, int k) {
            return lcm::estimate_theta(to_responses(r), to_labels(labels, k), k).dense();
        },
        py::arg("r"), py::arg("labels"), py::arg("k"));

    m.def(
        "assign_labels",
        [](const lcm::Matrix& r, const lcm::Matrix& theta,
           const std::optional<lcm::Vector>& log_prior) {
            return from_labels(
                lcm::assign_labels(to_responses(r), lcm::ItemParams(theta), log_prior));
        },
        py::arg("r"), py::arg("theta"), py::arg("log_prior") = std::nullopt);

    m.def(
        "hamming_loss",
        [](const IntVec& a, const IntVec& b, int k) {
            return lcm::hamming_loss(to_labels(a, k), to_labels(b, k));
        },
        py::arg("s"), py::arg("s_star"), py::arg("k"));

    m.def(
        "raw_disagreement",
        [](const IntVec& a, const IntVec& b, int k) {
            return lcm::raw_disagreement(to_labels(a, k), to_labels(b, k));
        },
        py::arg("s"), py::arg("s_star"), py::arg("k"));

    m.def(
        "align_permutation",
        [](const lcm::Matrix& t1, const lcm::Matrix& t2) {
            return lcm::align_permutation(lcm::ItemParams(t1), lcm::ItemParams(t2));
        },
        py::arg("theta1"), py::arg("theta2"));

    m.def("renyi_half", &lcm::renyi_half, py::arg("p"), py::arg("q"));
    m.def("sigma_theta_sq", &lcm::sigma_theta_sq, py::arg("theta"));
    m.def("tau", &lcm::tau, py::arg("x"));
    m.def("beta_b_constant", &lcm::beta_b_constant, py::arg("a"), py::arg("b"));

    m.def(
        "snr_istar",
        [](const lcm::Matrix& theta) { return lcm::snr_istar(lcm::ItemParams(theta)); },
        py::arg("theta"));
    m.def(
        "separation_delta",
        [](const lcm::Matrix& theta) { return lcm::separation_delta(lcm::ItemParams(theta)); },
        py::arg("theta"));
    m.def(
        "joint_log_likelihood",
        [](const lcm::Matrix& r, const IntVec& labels, const lcm::Matrix& theta, int k) {
            return lcm::joint_log_likelihood(to_responses(r), to_labels(labels, k),
                                             lcm::ItemParams(theta));
        },
        py::arg("r"), py::arg("labels"), py::arg("theta"), py::arg("k"));

    m.def(
        "diagnose",
        [](const lcm::Matrix& theta, std::optional<std::pair<double, double>> beta) {
            return lcm::diagnose(lcm::ItemParams(theta), beta);
        },
        py::arg("theta"), py::arg("beta") = std::nullopt);

    m.def("estimate_k", &lcm::estimate_k, py::arg("singular_values"), py::arg("n"), py::arg("j"),
          py::arg("factor") = lcm::kDefaultKThresholdFactor);
    m.def(
        "estimate_k_from_data",
        [](const lcm::Matrix& r, lcm::Index cap, double factor) {
            return lcm::estimate_k_from_data(to_responses(r), cap, factor);
        },
        py::arg("r"), py::arg("cap") = 50, py::arg("factor") = lcm::kDefaultKThresholdFactor);

    m.def(
        "truncated_svd",
        [](const lcm::Matrix& r, lcm::Index k, std::uint64_t seed) {
            lcm::SvdOptions opts;
            opts.seed = seed;
            const lcm::TruncatedSvd svd = lcm::truncated_svd(r, k, opts);
            return py::make_tuple(svd.u, svd.sigma, svd.v);
        },
        py::arg("r"), py::arg("k"), py::arg("seed") = 0);

    m.def(
        "all_singular_values",
        [](const lcm::Matrix& r, lcm::Index m) { return lcm::all_singular_values(r, m); },
        py::arg("r"), py::arg("m"));

    m.def(
        "kmeans",
        [](const lcm::Matrix& points, int k, int restarts, std::uint64_t seed) {
            lcm::KMeansOptions opts;
            opts.restarts = restarts;
            opts.seed = seed;
            const lcm::KMeansResult res = lcm::kmeans(points, k, opts);
            return py::make_tuple(from_labels(res.assignments), res.centers, res.objective);
        },
        py::arg("points"), py::arg("k"), py::arg("restarts") = 10, py::arg("seed") = 0);

    m.attr("__version__") = "0.1.0";
}
