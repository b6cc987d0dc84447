#pragma once

#include "gbsval/patterns.hpp"
#include "gbsval/phase_space.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gbsval {

/// Partition of output modes into d disjoint subsets, each with an integer
/// count window [m_min, m_max]. Mode indices are 0-based.
struct BinningSpec {
    std::vector<std::vector<int>> subsets;
    std::vector<int> m_min;
    std::vector<int> m_max;

    int dimension() const { return static_cast<int>(subsets.size()); }
    int order() const; // n = sum of subset sizes
    std::int64_t bins() const;
    std::vector<std::int64_t> shape() const;
    void validate(int total_modes, std::int64_t max_bins = kDefaultBinBudget) const;

    /// d=1, all modes in one subset.
    static BinningSpec total_counts(int total_modes, int mmin, int mmax);
    /// d contiguous, near-equal subsets; windows must still be set.
    static BinningSpec contiguous_split(int total_modes, int d);

    static constexpr std::int64_t kDefaultBinBudget = 1LL << 24;
};

/// Relabels mode indices in a spec through a bijection (new index =
/// perm[old index]).
BinningSpec permute_modes(const BinningSpec& spec, const std::vector<int>& perm);
/// Applies the same relabeling to measured patterns: input column j lands in
/// output column perm[j].
CountPatternSet permute_modes(const CountPatternSet& set, const std::vector<int>& perm);

/// Binned probability array over the spec windows with theoretical (sigma_T)
/// error bars when produced by the estimator, or raw tallies when produced
/// from experimental patterns.
struct GcpEstimate {
    std::vector<double> probabilities; // row-major over shape()
    std::vector<double> sigma;         // same shape; empty for pattern data
    BinningSpec spec;
    EnsemblePlan plan;                 // meaningful for simulated estimates
    std::int64_t n_patterns = 0;       // meaningful for experimental estimates
    std::vector<std::int64_t> underflow, overflow; // per axis, pattern data only

    double sum() const;
    double& at(const std::vector<int>& m);       // m in window coordinates
    double value(const std::vector<int>& m) const;
    /// Sums probabilities over one axis; sigma is dropped (it is not
    /// recoverable from the final array alone).
    GcpEstimate marginalized(int axis) const;
};

struct EstimateOptions {
    bool error_bars = true;
    std::int64_t max_bins = BinningSpec::kDefaultBinBudget;
};

/// Positive-P GCP estimator: per sample the complex subset intensities
/// n'_S = sum alpha' beta'* feed Poisson-form weights evaluated over the
/// count windows; the real part of their product is averaged.
GcpEstimate estimate_gcp(const PhaseSpaceEnsemble& ens, const BinningSpec& spec,
                         const EstimateOptions& opts = {});

/// Chooses per-subset count windows so the edge probabilities of a coarse
/// pilot estimate fall below the threshold.
BinningSpec default_windows(const PhaseSpaceEnsemble& ens, const BinningSpec& subsets_only,
                            double threshold = 1e-7, std::int64_t pilot_samples = 10000);

/// Normalized histogram of measured patterns over the spec windows;
/// patterns falling outside any window are tallied per axis, not dropped.
GcpEstimate bin_patterns(const CountPatternSet& set, const BinningSpec& spec);

} // namespace gbsval
