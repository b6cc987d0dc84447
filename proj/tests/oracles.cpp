#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracles {

std::vector<double> squeezed_vacuum_fock(double r, int n_cut) {
    std::vector<double> p(static_cast<std::size_t>(n_cut) + 1, 0.0);
    if (r == 0.0) {
        p[0] = 1.0;
        return p;
    }
    const double lt = std::log(std::tanh(std::abs(r)));
    const double lc = std::log(std::cosh(r));
    for (int k = 0; 2 * k <= n_cut; ++k) {
        // |<2k|S(r)|0>|^2 = (2k)! / (2^k k!)^2 tanh^{2k} r / cosh r
        const double logp = std::lgamma(2.0 * k + 1.0) - 2.0 * k * std::log(2.0) -
                            2.0 * std::lgamma(k + 1.0) + 2.0 * k * lt - lc;
        p[static_cast<std::size_t>(2 * k)] = std::exp(logp);
    }
    return p;
}

std::vector<double> binomial_loss(const std::vector<double>& p, double t) {
    const double eta = t * t;
    std::vector<double> q(p.size(), 0.0);
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] == 0.0) continue;
        for (std::size_t n = 0; n <= k; ++n) {
            const double logb = std::lgamma(k + 1.0) - std::lgamma(n + 1.0) -
                                std::lgamma(k - n + 1.0);
            const double keep = (n > 0) ? n * std::log(eta) : 0.0;
            const double lose = (k > n) ? (k - n) * std::log(1.0 - eta) : 0.0;
            q[n] += p[k] * std::exp(logb + keep + lose);
        }
    }
    return q;
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b,
                             int m_cut) {
    std::vector<double> out(static_cast<std::size_t>(m_cut) + 1, 0.0);
    for (std::size_t i = 0; i < a.size() && i <= static_cast<std::size_t>(m_cut); ++i) {
        if (a[i] == 0.0) continue;
        const std::size_t jmax =
            std::min(b.size(), static_cast<std::size_t>(m_cut) + 1 - i);
        for (std::size_t j = 0; j < jmax; ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

std::vector<double> fock_total_counts(int modes, double r, double t, int m_cut) {
    if (modes < 1) throw std::invalid_argument("fock_total_counts: modes >= 1");
    // enough single-mode headroom that the discarded tail is negligible
    const int n_cut = m_cut + 40;
    std::vector<double> one = squeezed_vacuum_fock(r, n_cut);
    if (t < 1.0) one = binomial_loss(one, t);
    std::vector<double> total(one.begin(),
                              one.begin() + std::min<std::size_t>(one.size(),
                                                                  static_cast<std::size_t>(m_cut) + 1));
    total.resize(static_cast<std::size_t>(m_cut) + 1, 0.0);
    for (int j = 1; j < modes; ++j) total = convolve(total, one, m_cut);
    return total;
}

long double hyp2f1_reference(long double a, long double b, long double c,
                             long double z) {
    long double sum = 1.0L, term = 1.0L;
    for (int k = 0; k < 200000; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0L)) * z;
        sum += term;
        if (fabsl(term) <= 1e-21L * fabsl(sum)) return sum;
    }
    throw std::runtime_error("hyp2f1_reference: no convergence");
}

std::vector<double> poisson_pmf(double lambda, int n_cut) {
    std::vector<double> p(static_cast<std::size_t>(n_cut) + 1, 0.0);
    double v = std::exp(-lambda);
    for (int n = 0; n <= n_cut; ++n) {
        p[static_cast<std::size_t>(n)] = v;
        v *= lambda / (n + 1.0);
    }
    return p;
}

} // namespace oracles
