#include "gbsval/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace gbsval {

namespace {

using nlohmann::json;

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

void open_or_throw(std::ofstream& out, const std::string& path) {
    out.open(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
}

} // namespace

json to_json(const BinningSpec& spec) {
    return {{"subsets", spec.subsets}, {"m_min", spec.m_min}, {"m_max", spec.m_max}};
}

json to_json(const EnsemblePlan& plan) {
    return {{"samples_per_trajectory", plan.samples_per_trajectory},
            {"trajectories", plan.trajectories},
            {"seed", plan.seed}};
}

json to_json(const GcpEstimate& est) {
    json j{{"probabilities", est.probabilities},
           {"binning", to_json(est.spec)},
           {"sum", est.sum()}};
    if (!est.sigma.empty()) j["sigma"] = est.sigma;
    if (est.n_patterns > 0) {
        j["n_patterns"] = est.n_patterns;
        j["underflow"] = est.underflow;
        j["overflow"] = est.overflow;
    } else {
        j["plan"] = to_json(est.plan);
    }
    return j;
}

json to_json(const ExactDistribution& dist) {
    return {{"model", dist.model},       {"modes", dist.modes},
            {"r", dist.r},               {"t", dist.t},
            {"probabilities", dist.probabilities}, {"tail_bound", dist.tail_bound},
            {"sum", dist.sum()},         {"mean", dist.mean()}};
}

json to_json(const TestReport& rep) {
    json j{{"label", rep.label},
           {"chi2", rep.chi2},
           {"k", rep.k},
           {"chi2_over_k", rep.chi2_over_k()},
           {"z", rep.z},
           {"reliable", rep.reliable},
           {"normalized_diff", rep.normalized_diff},
           {"admitted", rep.admitted}};
    if (!rep.note.empty()) j["note"] = rep.note;
    return j;
}

json to_json(const ModeMoments& mom) {
    return {{"mean", std::vector<double>(mom.mean.begin(), mom.mean.end())},
            {"sigma_T", std::vector<double>(mom.sigma_T.begin(), mom.sigma_T.end())},
            {"second_moment",
             std::vector<double>(mom.second_moment.begin(), mom.second_moment.end())}};
}

json to_json(const FitResult& fit) {
    return {{"epsilon", fit.epsilon},
            {"t", fit.t},
            {"converged", fit.converged},
            {"iterations", fit.iterations},
            {"resolution_epsilon", fit.resolution_epsilon},
            {"resolution_t", fit.resolution_t},
            {"objective_trace", fit.objective_trace},
            {"report", to_json(fit.report)}};
}

void write_json_report(const std::string& path, const ReportMeta& meta,
                       const json& payload) {
    json doc{{"meta",
              {{"config_hash", meta.config_hash},
               {"seed", meta.seed},
               {"command", meta.command},
               {"format_version", 1}}},
             {"result", payload}};
    std::ofstream out;
    open_or_throw(out, path);
    out << doc.dump(2) << '\n';
}

std::string render_test_table(const std::vector<TestReport>& reports) {
    std::string s = "test      chi2/k         k        Z  note\n";
    for (const auto& rep : reports) {
        char line[256];
        std::snprintf(line, sizeof(line), "%-6s %9.3f %9d %8.2f  %s\n",
                      rep.label.empty() ? "-" : rep.label.c_str(), rep.chi2_over_k(),
                      rep.k, rep.z, rep.note.c_str());
        s += line;
    }
    return s;
}

std::string render_moment_table(const Eigen::VectorXd& experimental_means,
                                const ModeMoments& theory,
                                const Eigen::VectorXd& sigma_E) {
    std::string s = "mode     exp mean  theory mean        sigma        Z\n";
    for (int j = 0; j < experimental_means.size(); ++j) {
        const double var =
            sigma_E[j] * sigma_E[j] + theory.sigma_T[j] * theory.sigma_T[j];
        const double z = var > 0.0
                             ? (experimental_means[j] - theory.mean[j]) / std::sqrt(var)
                             : 0.0;
        char line[256];
        std::snprintf(line, sizeof(line), "%4d %12.6f %12.6f %12.3e %8.2f\n", j,
                      experimental_means[j], theory.mean[j], std::sqrt(var), z);
        s += line;
    }
    return s;
}

void write_plot_csv(const std::string& path, const GcpEstimate& est) {
    std::ofstream out;
    open_or_throw(out, path);
    const int d = est.spec.dimension();
    for (int a = 0; a < d; ++a) out << 'm' << (a + 1) << ',';
    out << "probability,lower,upper\n";

    const auto shape = est.spec.shape();
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    for (std::size_t i = 0; i < est.probabilities.size(); ++i) {
        for (int a = 0; a < d; ++a)
            out << (est.spec.m_min[static_cast<std::size_t>(a)] +
                    idx[static_cast<std::size_t>(a)])
                << ',';
        const double p = est.probabilities[i];
        const double s = est.sigma.empty() ? 0.0 : est.sigma[i];
        out << fmt("%.17g", p) << ',' << fmt("%.17g", p - s) << ','
            << fmt("%.17g", p + s) << '\n';
        for (int a = d - 1; a >= 0; --a) {
            auto& v = idx[static_cast<std::size_t>(a)];
            if (++v < shape[static_cast<std::size_t>(a)]) break;
            v = 0;
        }
    }
}

void write_plot_csv(const std::string& path, const ExactDistribution& dist) {
    std::ofstream out;
    open_or_throw(out, path);
    out << "m,probability\n";
    for (std::size_t m = 0; m < dist.probabilities.size(); ++m)
        out << m << ',' << fmt("%.17g", dist.probabilities[m]) << '\n';
}

} // namespace gbsval
