#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gbsval {

/// Raised when a special-function evaluation fails to converge; the CLI maps
/// this to its numerical-failure exit code.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Gauss hypergeometric 2F1(a,b;c;z) for 0 <= z < 1, relative error <= 1e-12.
/// Power series with term-ratio recurrence; Euler transformation for z > 0.5.
/// Throws NumericalError if the series does not converge within the term
/// budget rather than returning a silently wrong value.
double hyp2f1(double a, double b, double c, double z);

/// Closed-form total-count distribution over 0..m_cut.
struct ExactDistribution {
    std::vector<double> probabilities;
    std::string model;
    int modes = 0;
    double r = 0.0;
    double t = 1.0;
    double tail_bound = 0.0; // analytic bound on the truncated mass

    double sum() const {
        double s = 0.0;
        for (double p : probabilities) s += p;
        return s;
    }
    double mean() const {
        double m = 0.0;
        for (std::size_t i = 0; i < probabilities.size(); ++i)
            m += static_cast<double>(i) * probabilities[i];
        return m;
    }
};

/// Total counts of M equally squeezed modes through a uniform-amplitude-loss
/// unitary t*U. Even and odd entries follow separate closed forms; the
/// lossless t=1 limit has exactly vanishing odd entries. M must be even.
ExactDistribution lossy_squeezed_total_counts(int M, double r, double t, int m_cut);

/// Explicit lossless code path (the t=1 limit above).
ExactDistribution lossless_squeezed_total_counts(int M, double r, int m_cut);

/// Large-M lossless limit: Poissonian in the pair number.
ExactDistribution poisson_pair_limit(int M, double r, int m_cut);

/// Total counts of M thermal modes through a lossless Haar network:
/// negative binomial with p = 1/(1+sinh^2 r). M=1 is the geometric case.
ExactDistribution thermal_negative_binomial(int M, double r, int m_cut);

} // namespace gbsval
