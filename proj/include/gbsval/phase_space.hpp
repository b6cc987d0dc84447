#pragma once

#include "gbsval/linear_network.hpp"
#include "gbsval/rng.hpp"

#include <Eigen/Dense>
#include <cstdint>

namespace gbsval {

/// Sub-ensemble layout: E_S = samples_per_trajectory * trajectories.
struct EnsemblePlan {
    std::int64_t samples_per_trajectory = 500;
    std::int64_t trajectories = 4800;
    std::uint64_t seed = 1;

    std::int64_t total() const { return samples_per_trajectory * trajectories; }
    void validate(bool error_bars_requested) const;
};

/// One trajectory worth of output stochastic amplitudes. Amplitudes are
/// stored mode-major: (modes) x (samples).
struct TrajectoryBlock {
    Eigen::MatrixXcd alpha;
    Eigen::MatrixXcd beta;
};

/// Raw input amplitudes alpha_j = (sx w_j + i sy w_{j+N})/2 with sy the
/// (possibly imaginary) y-noise amplitude. For quantum inputs both alpha and
/// beta come out real; `real_valued` records that so propagation can use the
/// cheaper real matrix product.
struct InputBlock {
    Eigen::MatrixXcd alpha; // N x samples
    Eigen::MatrixXcd beta;
    bool real_valued = false;
    bool classical = false; // beta == alpha sample by sample
};

InputBlock sample_inputs(const SqueezerBank& bank, std::int64_t n_samples, Rng& rng);

TrajectoryBlock propagate(const InputBlock& in, const TransmissionMatrix& t);

/// Lazily generated positive-P ensemble: trajectory k is reproducible from
/// (plan.seed, k) alone, so any scheduler may process trajectories in
/// parallel without changing the result.
class PhaseSpaceEnsemble {
public:
    PhaseSpaceEnsemble(SqueezerBank bank, TransmissionMatrix network, EnsemblePlan plan);

    int modes() const { return network_.modes(); }
    bool classical() const { return classical_; }
    const SqueezerBank& bank() const { return bank_; }
    const TransmissionMatrix& network() const { return network_; }
    const EnsemblePlan& plan() const { return plan_; }

    TrajectoryBlock trajectory(std::int64_t k) const;

private:
    SqueezerBank bank_;
    TransmissionMatrix network_;
    EnsemblePlan plan_;
    bool classical_;
};

struct ModeMoments {
    Eigen::VectorXd mean;          // Re<alpha'_j beta'_j*>
    Eigen::VectorXd sigma_T;       // standard error over the N_R trajectory means
    Eigen::VectorXd second_moment; // <n'_j^2> = Re<(alpha' beta'*)^2> + mean
};

/// Per-mode output photon number with trajectory-level error bars.
ModeMoments mode_moments(const PhaseSpaceEnsemble& ens);

} // namespace gbsval
