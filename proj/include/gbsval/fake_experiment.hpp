#pragma once

#include "gbsval/patterns.hpp"
#include "gbsval/phase_space.hpp"

#include <cstdint>

namespace gbsval {

enum class TailPolicy {
    Renormalize, // condition the Poisson weights on c <= c_max
    Clamp,       // report c_max for any draw beyond saturation
};

/// PNR detector with a saturation count.
struct DetectorModel {
    int c_max = 13;
    TailPolicy tail_policy = TailPolicy::Renormalize;
};

/// One truncated-Poisson count at intensity lambda, consuming exactly one
/// uniform variate.
int draw_count(double lambda, const DetectorModel& det, Rng& rng);

/// Replicates PNR photo-detection of a classical (diagonal-P) ensemble:
/// per sample and mode, counts are drawn from Poisson weights at intensity
/// n'_j = |alpha'_j|^2, truncated at c_max. Emits one pattern per phase-space
/// sample (N_F = E_S). Throws std::invalid_argument for non-classical
/// ensembles, where the intensities are not probabilities.
CountPatternSet generate_patterns(const PhaseSpaceEnsemble& ens, const DetectorModel& det,
                                  std::uint64_t seed);

/// Root-mean-square deviation of the per-mode empirical means from a uniform
/// expected mean.
double actual_error(const CountPatternSet& patterns, double expected_mean);

} // namespace gbsval
