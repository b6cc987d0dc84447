#pragma once

#include "gbsval/exact_models.hpp"
#include "gbsval/gcp.hpp"
#include "gbsval/phase_space.hpp"
#include "gbsval/stats.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gbsval {

/// Provenance block embedded in every emitted report.
struct ReportMeta {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string command;
};

nlohmann::json to_json(const BinningSpec& spec);
nlohmann::json to_json(const EnsemblePlan& plan);
nlohmann::json to_json(const GcpEstimate& est);
nlohmann::json to_json(const ExactDistribution& dist);
nlohmann::json to_json(const TestReport& rep);
nlohmann::json to_json(const ModeMoments& mom);
nlohmann::json to_json(const FitResult& fit);

/// Wraps a payload with the provenance block and writes it to `path`.
void write_json_report(const std::string& path, const ReportMeta& meta,
                       const nlohmann::json& payload);

/// Aligned-column table over test reports: label, chi2/k, k, Z, note.
std::string render_test_table(const std::vector<TestReport>& reports);

/// Aligned-column per-mode moment table: mode, experimental mean, theory
/// mean, sigma, Z.
std::string render_moment_table(const Eigen::VectorXd& experimental_means,
                                const ModeMoments& theory,
                                const Eigen::VectorXd& sigma_E);

/// Plot data for a d=1 estimate: count, probability, probability -/+ 1 sigma.
/// Zero probabilities are emitted as 0, never blank. Multi-axis estimates are
/// written one row per bin with the window coordinates in leading columns.
void write_plot_csv(const std::string& path, const GcpEstimate& est);
void write_plot_csv(const std::string& path, const ExactDistribution& dist);

} // namespace gbsval
