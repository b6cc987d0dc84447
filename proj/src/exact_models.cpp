#include "gbsval/exact_models.hpp"

#include <cmath>
#include <limits>

namespace gbsval {

namespace {

constexpr long kTermBudget = 1000000;

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

double series_2f1(double a, double b, double c, double z) {
    double sum = 1.0;
    double term = 1.0;
    for (long k = 0; k < kTermBudget; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
        if (std::abs(term) <= 1e-16 * std::abs(sum)) return sum;
        if (term == 0.0) return sum; // terminating (polynomial) case
    }
    throw NumericalError("hyp2f1: series did not converge within the term budget");
}

// successive-term-ratio tail bound: if G(m+step)/G(m) <= q < 1 at the edge,
// the truncated mass is at most G(edge) * q / (1 - q)
double geometric_tail(double last, double prev) {
    if (!(prev > 0.0) || !(last > 0.0)) return 0.0;
    const double q = last / prev;
    if (q >= 1.0) return std::numeric_limits<double>::infinity();
    return last * q / (1.0 - q);
}

// shared even-entry evaluation so the lossy t=1 path and the explicit
// lossless path are bit-identical
double even_entry(int M, int m, double log_t, double p, double log_1mp, double f_half) {
    const double log_c = std::lgamma(M / 2.0 + m) - std::lgamma(m + 1.0) -
                         std::lgamma(M / 2.0);
    return std::exp(4.0 * m * log_t + log_c + (M / 2.0) * std::log(p) + m * log_1mp) *
           f_half;
}

} // namespace

double hyp2f1(double a, double b, double c, double z) {
    if (is_nonpositive_integer(c))
        throw std::invalid_argument("hyp2f1: c must not be a non-positive integer");
    if (!(z >= 0.0 && z < 1.0))
        throw std::invalid_argument("hyp2f1: z must lie in [0, 1)");
    if (z == 0.0) return 1.0;
    if (z > 0.5) {
        // Euler transformation; for the lossy-squeezed parameters c-a is a
        // non-positive integer and the transformed series terminates
        return std::pow(1.0 - z, c - a - b) * series_2f1(c - a, c - b, c, z);
    }
    return series_2f1(a, b, c, z);
}

ExactDistribution lossy_squeezed_total_counts(int M, double r, double t, int m_cut) {
    if (M < 2 || M % 2 != 0)
        throw std::invalid_argument("lossy_squeezed_total_counts: M must be even and >= 2");
    if (!(t >= 0.0 && t <= 1.0))
        throw std::invalid_argument("lossy_squeezed_total_counts: t must lie in [0,1]");
    if (m_cut < 0)
        throw std::invalid_argument("lossy_squeezed_total_counts: m_cut must be >= 0");

    const double n = std::sinh(r) * std::sinh(r);
    const double p = 1.0 / (1.0 + n);
    const double z = (1.0 - t * t) * (1.0 - t * t) * (1.0 - p);
    if (t == 0.0 || n == 0.0) {
        ExactDistribution dist;
        dist.model = "lossy-squeezed";
        dist.modes = M;
        dist.r = r;
        dist.t = t;
        dist.probabilities.assign(static_cast<std::size_t>(m_cut) + 1, 0.0);
        dist.probabilities[0] = 1.0;
        return dist;
    }
    const double log_t = (t > 0.0) ? std::log(t) : -std::numeric_limits<double>::infinity();
    const double log_1mp = (n > 0.0) ? std::log(1.0 - p) : -std::numeric_limits<double>::infinity();

    ExactDistribution dist;
    dist.model = "lossy-squeezed";
    dist.modes = M;
    dist.r = r;
    dist.t = t;
    dist.probabilities.assign(static_cast<std::size_t>(m_cut) + 1, 0.0);

    // m indexes photon pairs; entry 2m comes from the even line, entry 2m-1
    // from the odd line. The even line is extended to m=0 (its natural
    // analytic continuation), validated by the normalization checks.
    for (int m = 0; 2 * m - 1 <= m_cut; ++m) {
        const double f_half = hyp2f1(m + 0.5, M / 2.0 + m, 0.5, z);
        if (2 * m <= m_cut)
            dist.probabilities[static_cast<std::size_t>(2 * m)] =
                even_entry(M, m, log_t, p, log_1mp, f_half);
        if (m >= 1 && 2 * m - 1 <= m_cut && t < 1.0) {
            const double f_3half = hyp2f1(m + 0.5, M / 2.0 + m, 1.5, z);
            const double log_c = std::lgamma(M / 2.0 + m) - std::lgamma(m + 1.0) -
                                 std::lgamma(M / 2.0);
            dist.probabilities[static_cast<std::size_t>(2 * m - 1)] =
                2.0 * m * (1.0 - t * t) *
                std::exp((4.0 * m - 2.0) * log_t + log_c + (M / 2.0) * std::log(p) +
                         m * log_1mp) *
                f_3half;
        }
    }

    const std::size_t last = dist.probabilities.size() - 1;
    if (last >= 2)
        dist.tail_bound = geometric_tail(dist.probabilities[last],
                                         dist.probabilities[last - 2]) +
                          (last >= 3 ? geometric_tail(dist.probabilities[last - 1],
                                                      dist.probabilities[last - 3])
                                     : 0.0);
    return dist;
}

ExactDistribution lossless_squeezed_total_counts(int M, double r, int m_cut) {
    ExactDistribution dist = lossy_squeezed_total_counts(M, r, 1.0, m_cut);
    dist.model = "lossless-squeezed";
    return dist;
}

ExactDistribution poisson_pair_limit(int M, double r, int m_cut) {
    if (M < 1) throw std::invalid_argument("poisson_pair_limit: M must be >= 1");
    if (m_cut < 0) throw std::invalid_argument("poisson_pair_limit: m_cut must be >= 0");
    const double n = std::sinh(r) * std::sinh(r);
    const double lambda = M * n / 2.0;
    ExactDistribution dist;
    dist.model = "poisson-pair-limit";
    dist.modes = M;
    dist.r = r;
    dist.probabilities.assign(static_cast<std::size_t>(m_cut) + 1, 0.0);
    for (int m = 0; 2 * m <= m_cut; ++m) {
        if (lambda == 0.0) {
            dist.probabilities[0] = 1.0;
            break;
        }
        dist.probabilities[static_cast<std::size_t>(2 * m)] =
            std::exp(-lambda + m * std::log(lambda) - std::lgamma(m + 1.0));
    }
    const std::size_t last = dist.probabilities.size() - 1;
    if (last >= 2)
        dist.tail_bound =
            geometric_tail(dist.probabilities[last], dist.probabilities[last - 2]);
    return dist;
}

ExactDistribution thermal_negative_binomial(int M, double r, int m_cut) {
    if (M < 1) throw std::invalid_argument("thermal_negative_binomial: M must be >= 1");
    if (m_cut < 0) throw std::invalid_argument("thermal_negative_binomial: m_cut must be >= 0");
    const double n = std::sinh(r) * std::sinh(r);
    const double p = 1.0 / (1.0 + n);
    ExactDistribution dist;
    dist.model = "thermal-negative-binomial";
    dist.modes = M;
    dist.r = r;
    dist.probabilities.assign(static_cast<std::size_t>(m_cut) + 1, 0.0);
    for (int m = 0; m <= m_cut; ++m) {
        if (n == 0.0) {
            dist.probabilities[0] = 1.0;
            break;
        }
        dist.probabilities[static_cast<std::size_t>(m)] =
            std::exp(std::lgamma(m + static_cast<double>(M)) - std::lgamma(m + 1.0) -
                     std::lgamma(static_cast<double>(M)) + M * std::log(p) +
                     m * std::log(1.0 - p));
    }
    const std::size_t last = dist.probabilities.size() - 1;
    if (last >= 1)
        dist.tail_bound =
            geometric_tail(dist.probabilities[last], dist.probabilities[last - 1]);
    return dist;
}

} // namespace gbsval
