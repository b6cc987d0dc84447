#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace gbsval {

/// Per-mode squeezing parameters r_j plus a global thermalization fraction
/// epsilon. Derived quantities: mean photon number n_j = sinh^2(r_j) and
/// coherence m~_j = (1-epsilon) cosh(r_j) sinh(r_j).
struct SqueezerBank {
    Eigen::VectorXd r;
    double epsilon = 0.0;

    SqueezerBank() = default;
    SqueezerBank(Eigen::VectorXd r_in, double eps);
    static SqueezerBank uniform(int n_modes, double r_value, double eps = 0.0);
    static SqueezerBank load(const std::string& path, double eps = 0.0);
    void save(const std::string& path) const;

    int modes() const { return static_cast<int>(r.size()); }
    double mean_photons(int j) const { return std::sinh(r[j]) * std::sinh(r[j]); }
    double coherence(int j) const {
        return (1.0 - epsilon) * std::cosh(r[j]) * std::sinh(r[j]);
    }
    // normally ordered quadrature variances, Gaussian-state parameterization
    double var_x(int j) const { return 2.0 * (mean_photons(j) + coherence(j)); }
    double var_y(int j) const { return 2.0 * (mean_photons(j) - coherence(j)); }

    // true when every mode has a real y-noise (var_y >= 0), i.e. the input
    // admits a diagonal-P description with beta = alpha
    bool classical() const;
};

/// Complex M x M network matrix with a scalar measurement-correction factor t
/// applied multiplicatively as t*T.
struct TransmissionMatrix {
    Eigen::MatrixXcd T;
    double t_correction = 1.0;

    int modes() const { return static_cast<int>(T.rows()); }
    Eigen::MatrixXcd effective() const { return t_correction * T; }

    static TransmissionMatrix load(const std::string& path, double t_corr = 1.0);
    void save(const std::string& path) const;
};

/// Haar-random unitary via complex Ginibre + QR with phase fixing.
TransmissionMatrix haar_unitary(int n_modes, std::uint64_t seed);

/// Scales by a uniform amplitude loss coefficient in [0, 1].
TransmissionMatrix apply_uniform_loss(const TransmissionMatrix& u, double t_amp);

struct PhysicalityCheck {
    bool physical = false;
    std::vector<double> singular_values; // descending
    std::string diagnostic;
};

/// Physical iff no singular value of t*T exceeds 1 (within tolerance).
PhysicalityCheck validate_physicality(const TransmissionMatrix& t,
                                      double tolerance = 1e-9);

} // namespace gbsval
