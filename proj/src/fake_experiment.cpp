#include "gbsval/fake_experiment.hpp"

#include <cmath>
#include <stdexcept>

namespace gbsval {

namespace {

constexpr std::uint64_t kDetectorStreamSalt = 0x66616b65646574ULL;

// Poisson weights via the recurrence p_{c+1} = p_c * lambda/(c+1); at the
// intensities of interest this stays well inside double range
int draw_truncated(double lambda, int c_max, TailPolicy policy, double u) {
    if (lambda <= 0.0) return 0;
    double p = std::exp(-lambda);
    if (policy == TailPolicy::Renormalize) {
        double total = p;
        double q = p;
        for (int c = 0; c < c_max; ++c) {
            q *= lambda / (c + 1.0);
            total += q;
        }
        u *= total;
    }
    double cum = p;
    int c = 0;
    while (cum <= u && c < c_max) {
        ++c;
        p *= lambda / c;
        cum += p;
    }
    return c; // any residual untruncated mass saturates at c_max
}

} // namespace

int draw_count(double lambda, const DetectorModel& det, Rng& rng) {
    if (det.c_max < 1) throw std::invalid_argument("draw_count: c_max must be >= 1");
    return draw_truncated(lambda, det.c_max, det.tail_policy, rng.uniform());
}

CountPatternSet generate_patterns(const PhaseSpaceEnsemble& ens, const DetectorModel& det,
                                  std::uint64_t seed) {
    if (det.c_max < 1)
        throw std::invalid_argument("generate_patterns: c_max must be >= 1");
    if (!ens.classical())
        throw std::invalid_argument(
            "generate_patterns: ensemble is not classical (beta != alpha); "
            "photo-detection replication needs a diagonal-P input");

    const int m = ens.modes();
    const EnsemblePlan& plan = ens.plan();
    CountPatternSet out;
    out.patterns.resize(plan.total(), m);
    out.provenance = "fake-experiment";

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < plan.trajectories; ++k) {
        TrajectoryBlock block = ens.trajectory(k);
        Rng rng(seed ^ kDetectorStreamSalt, static_cast<std::uint64_t>(k) + 1);
        const std::int64_t row0 = k * plan.samples_per_trajectory;
        for (std::int64_t s = 0; s < plan.samples_per_trajectory; ++s) {
            for (int j = 0; j < m; ++j) {
                const double lambda = std::norm(block.alpha(j, s));
                out.patterns(row0 + s, j) = static_cast<std::int32_t>(
                    draw_truncated(lambda, det.c_max, det.tail_policy, rng.uniform()));
            }
        }
    }
    return out;
}

double actual_error(const CountPatternSet& patterns, double expected_mean) {
    if (patterns.size() < 1 || patterns.modes() < 1)
        throw std::invalid_argument("actual_error: empty pattern set");
    const double inv_n = 1.0 / static_cast<double>(patterns.size());
    double acc = 0.0;
    for (int j = 0; j < patterns.modes(); ++j) {
        const double mean =
            patterns.patterns.col(j).cast<double>().sum() * inv_n;
        const double d = mean - expected_mean;
        acc += d * d;
    }
    return std::sqrt(acc / patterns.modes());
}

} // namespace gbsval
