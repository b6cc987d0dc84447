#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

namespace gbsval {

/// Raised when a pattern file cannot be parsed; the CLI maps this to its
/// dataset-ingestion exit code.
struct IngestError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// N_E photon count patterns, one row per shot, M columns of counts.
struct CountPatternSet {
    Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> patterns;
    std::string provenance;

    std::int64_t size() const { return patterns.rows(); }
    int modes() const { return static_cast<int>(patterns.cols()); }
};

/// One pattern per line, whitespace-separated non-negative integers;
/// optional "# M=<int> N_E=<int>" header. Malformed lines are reported with
/// their line number.
CountPatternSet ingest_patterns(const std::string& path);

void save_patterns(const CountPatternSet& set, const std::string& path);

} // namespace gbsval
