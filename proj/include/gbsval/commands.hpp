#pragma once

#include "gbsval/config.hpp"
#include "gbsval/exact_models.hpp"
#include "gbsval/fake_experiment.hpp"
#include "gbsval/gcp.hpp"
#include "gbsval/report.hpp"
#include "gbsval/stats.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gbsval {

/// Command implementations live in the library so they are testable without
/// spawning processes. An empty output prefix suppresses all file output;
/// otherwise each command writes <prefix>.json plus format-specific extras.

struct SimulateResult {
    GcpEstimate estimate;
    BinningSpec windows;
};

struct ValidateResult {
    GcpEstimate experimental;
    std::vector<TestReport> reports; // EI and/or ET, plus the moment test
    std::optional<FitResult> fit;
    std::string table; // aligned text rendering of `reports`
};

/// Wraps a closed-form distribution as a d=1 estimate on the spec window so
/// it can enter chi_square against binned data.
GcpEstimate to_estimate(const ExactDistribution& dist, const BinningSpec& spec);

SimulateResult cmd_simulate(const RunConfig& cfg, const std::string& prefix);
ExactDistribution cmd_exact(const RunConfig& cfg, const std::string& prefix);
ValidateResult cmd_validate(const RunConfig& cfg, const std::string& prefix);
CountPatternSet cmd_fake(const RunConfig& cfg, const std::string& prefix);
FitResult cmd_fit(const RunConfig& cfg, const std::string& prefix);
ModeMoments cmd_moments(const RunConfig& cfg, const std::string& prefix);

} // namespace gbsval
