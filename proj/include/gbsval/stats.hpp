#pragma once

#include "gbsval/gcp.hpp"
#include "gbsval/patterns.hpp"
#include "gbsval/phase_space.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gbsval {

struct TestReport {
    double chi2 = 0.0;
    int k = 0;
    double z = 0.0;
    std::vector<double> normalized_diff; // per bin, aligned with the spec windows
    std::vector<bool> admitted;          // bins entering chi2
    std::string label;                   // "EI", "ET", ...
    bool reliable = true;                // false when k < 10
    std::string note;

    double chi2_over_k() const { return k > 0 ? chi2 / k : 0.0; }
};

struct ChiSquareOptions {
    double min_expected = 10.0; // expected raw counts N_E * G must exceed this
    std::string label;
};

/// chi^2 = sum (G_E - G_T)^2 / sigma^2 over admitted bins, with
/// sigma^2 = G_T/N_E (Poisson, theoretical rate) + sigma_T^2. When the
/// "experimental" input is itself a simulation (carries sigma_T), its error
/// bars are used in place of the Poisson term; pass n_experimental = 0 then.
TestReport chi_square(const GcpEstimate& experimental, const GcpEstimate& theoretical,
                      std::int64_t n_experimental, const ChiSquareOptions& opts = {});

/// Z = ((chi2/k)^(1/3) - mu_N)/sigma_N with mu_N = (9k-2)/(9k),
/// sigma_N^2 = 2/(9k).
double wilson_hilferty_z(double chi2, int k);

/// (G_E,i - G_T,i)/sigma_i for every bin; bins below the admission threshold
/// are marked in the report, not dropped.
std::vector<double> normalized_difference(const GcpEstimate& experimental,
                                          const GcpEstimate& theoretical,
                                          std::int64_t n_experimental);

/// sigma of an n-th sample raw moment: sqrt((mu'_2n - mu'_n^2)/S), clamped
/// at zero when Monte Carlo noise makes the variance estimate negative.
/// Covers the multivariate case by passing the corresponding joint moments.
double raw_moment_error(double mu_2n, double mu_n, std::int64_t samples);

/// Per-mode experimental sampling errors of <n'_j> from theoretical first
/// and second moments.
Eigen::VectorXd per_mode_moment_errors(const ModeMoments& theory, std::int64_t n_samples);

/// chi^2 over modes for the mean output photon numbers, then Wilson-Hilferty.
TestReport moment_z_test(const Eigen::VectorXd& experimental_means,
                         const ModeMoments& theory, const Eigen::VectorXd& sigma_E,
                         const std::string& label = {});

struct FitOptions {
    int max_iterations = 200;
    double target_resolution = 0.0005;
    std::uint64_t eval_seed = 12345; // fixed seed for deterministic objective
    EnsemblePlan plan;               // plan used for every objective evaluation
    ChiSquareOptions chi;
    double epsilon_init = 0.05;
    double t_init = 0.99;
};

struct FitResult {
    double epsilon = 0.0;
    double t = 1.0;
    bool converged = false;
    int iterations = 0;
    double resolution_epsilon = 0.0;
    double resolution_t = 0.0;
    TestReport report;                 // re-evaluated with a fresh seed
    std::vector<double> objective_trace; // best objective after each accepted step
};

/// Nelder-Mead over (epsilon, t) in [0,1] x (0,1], coefficients
/// (1, 2, 0.5, 0.5), restart on simplex collapse; the objective is the d=1
/// GCP chi^2 with a fixed simulation seed.
FitResult fit_epsilon_t(const GcpEstimate& experimental, std::int64_t n_experimental,
                        const SqueezerBank& bank, const TransmissionMatrix& network,
                        const BinningSpec& spec, const FitOptions& opts);

FitResult fit_epsilon_t(const CountPatternSet& patterns, const SqueezerBank& bank,
                        const TransmissionMatrix& network, const BinningSpec& spec,
                        const FitOptions& opts);

} // namespace gbsval
