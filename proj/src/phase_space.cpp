#include "gbsval/phase_space.hpp"

#include "detail_reduce.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace gbsval {

void EnsemblePlan::validate(bool error_bars_requested) const {
    if (samples_per_trajectory < 1)
        throw std::invalid_argument("EnsemblePlan: samples_per_trajectory must be >= 1");
    if (trajectories < 1)
        throw std::invalid_argument("EnsemblePlan: trajectories must be >= 1");
    if (error_bars_requested && trajectories < 2)
        throw std::invalid_argument(
            "EnsemblePlan: error bars need at least 2 trajectories");
}

InputBlock sample_inputs(const SqueezerBank& bank, std::int64_t n_samples, Rng& rng) {
    const int n = bank.modes();
    InputBlock block;
    block.classical = bank.classical();
    block.real_valued = true;
    for (int j = 0; j < n; ++j)
        if (bank.var_y(j) > 0.0 && bank.r[j] > 0.0) block.real_valued = false;

    // sigma_x is real; sigma_y may be imaginary for quantum inputs, so keep
    // it complex and apply the sampling formula verbatim
    std::vector<double> sx(n);
    std::vector<std::complex<double>> isy(n); // i * sigma_y
    for (int j = 0; j < n; ++j) {
        sx[j] = std::sqrt(bank.var_x(j));
        std::complex<double> sy = std::sqrt(std::complex<double>(bank.var_y(j), 0.0));
        isy[j] = std::complex<double>(0.0, 1.0) * sy;
    }

    block.alpha.resize(n, n_samples);
    block.beta.resize(n, n_samples);
    std::vector<double> wx(n), wy(n);
    for (std::int64_t s = 0; s < n_samples; ++s) {
        for (int j = 0; j < n; ++j) wx[j] = rng.normal();
        for (int j = 0; j < n; ++j) wy[j] = rng.normal();
        for (int j = 0; j < n; ++j) {
            const std::complex<double> a = 0.5 * (sx[j] * wx[j] + isy[j] * wy[j]);
            const std::complex<double> bstar = 0.5 * (sx[j] * wx[j] - isy[j] * wy[j]);
            block.alpha(j, s) = a;
            block.beta(j, s) = std::conj(bstar);
        }
    }
    return block;
}

TrajectoryBlock propagate(const InputBlock& in, const TransmissionMatrix& t) {
    const int n_in = static_cast<int>(in.alpha.rows());
    if (t.modes() < n_in)
        throw std::invalid_argument("propagate: network has fewer modes than inputs");
    const Eigen::MatrixXcd eff = t.effective().leftCols(n_in);
    TrajectoryBlock out;
    if (in.real_valued) {
        // quantum squeezed inputs have real amplitudes; split the complex
        // matrix product into two real GEMMs (the hot path at large M)
        const Eigen::MatrixXd a = in.alpha.real();
        const Eigen::MatrixXd b = in.beta.real();
        const Eigen::MatrixXd er = eff.real();
        const Eigen::MatrixXd ei = eff.imag();
        out.alpha.resize(eff.rows(), a.cols());
        out.beta.resize(eff.rows(), a.cols());
        out.alpha.real() = er * a;
        out.alpha.imag() = ei * a;
        out.beta.real() = er * b;
        out.beta.imag() = ei * b;
    } else {
        out.alpha = eff * in.alpha;
        if (in.classical)
            out.beta = out.alpha;
        else
            out.beta = eff * in.beta;
    }
    return out;
}

PhaseSpaceEnsemble::PhaseSpaceEnsemble(SqueezerBank bank, TransmissionMatrix network,
                                       EnsemblePlan plan)
    : bank_(std::move(bank)), network_(std::move(network)), plan_(plan),
      classical_(bank_.classical()) {
    plan_.validate(false);
    if (network_.modes() < bank_.modes())
        throw std::invalid_argument(
            "PhaseSpaceEnsemble: network must have at least as many modes as inputs");
}

TrajectoryBlock PhaseSpaceEnsemble::trajectory(std::int64_t k) const {
    Rng rng(plan_.seed, static_cast<std::uint64_t>(k) + 1);
    InputBlock in = sample_inputs(bank_, plan_.samples_per_trajectory, rng);
    return propagate(in, network_);
}

ModeMoments mode_moments(const PhaseSpaceEnsemble& ens) {
    ens.plan().validate(true);
    const int m = ens.modes();
    const std::int64_t n_r = ens.plan().trajectories;
    const std::int64_t n_s = ens.plan().samples_per_trajectory;

    auto part = detail::make_groups(n_r, m);
    Eigen::MatrixXd gsum = Eigen::MatrixXd::Zero(m, part.groups);
    Eigen::MatrixXd gsumsq = Eigen::MatrixXd::Zero(m, part.groups);
    Eigen::MatrixXd gsum2 = Eigen::MatrixXd::Zero(m, part.groups); // second moments

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t g = 0; g < part.groups; ++g) {
        Eigen::VectorXd tmean(m), tsecond(m);
        for (std::int64_t k = part.begin(g); k < part.end(g); ++k) {
            TrajectoryBlock blk = ens.trajectory(k);
            tmean.setZero();
            tsecond.setZero();
            for (std::int64_t s = 0; s < n_s; ++s) {
                for (int j = 0; j < m; ++j) {
                    const std::complex<double> np =
                        blk.alpha(j, s) * std::conj(blk.beta(j, s));
                    tmean[j] += np.real();
                    tsecond[j] += (np * np).real();
                }
            }
            tmean /= static_cast<double>(n_s);
            tsecond /= static_cast<double>(n_s);
            gsum.col(g) += tmean;
            gsumsq.col(g) += tmean.cwiseProduct(tmean);
            gsum2.col(g) += tsecond;
        }
    }

    Eigen::VectorXd sum = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd sumsq = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd sum2 = Eigen::VectorXd::Zero(m);
    for (std::int64_t g = 0; g < part.groups; ++g) {
        sum += gsum.col(g);
        sumsq += gsumsq.col(g);
        sum2 += gsum2.col(g);
    }

    ModeMoments mom;
    mom.mean = sum / static_cast<double>(n_r);
    mom.sigma_T.resize(m);
    for (int j = 0; j < m; ++j) {
        double var = (sumsq[j] - static_cast<double>(n_r) * mom.mean[j] * mom.mean[j]) /
                     static_cast<double>(n_r - 1);
        mom.sigma_T[j] = std::sqrt(std::max(var, 0.0) / static_cast<double>(n_r));
    }
    // <n'^2> from the normally ordered square plus the first moment
    mom.second_moment = sum2 / static_cast<double>(n_r) + mom.mean;
    return mom;
}

} // namespace gbsval
