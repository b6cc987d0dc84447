#include "gbsval/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace gbsval {

namespace {

void check_geometry(const GcpEstimate& a, const GcpEstimate& b) {
    if (a.spec.shape() != b.spec.shape() || a.spec.m_min != b.spec.m_min)
        throw std::invalid_argument("statistics: bin geometries do not match");
}

// sigma_i^2 = sigma_E,i^2 + sigma_T,i^2; the Poisson experimental term uses
// the theoretical probability as the rate
double bin_variance(const GcpEstimate& experimental, const GcpEstimate& theoretical,
                    std::int64_t n_experimental, std::size_t i) {
    const double g_t = std::max(theoretical.probabilities[i], 0.0);
    double var = 0.0;
    if (n_experimental > 0) var += g_t / static_cast<double>(n_experimental);
    if (!theoretical.sigma.empty()) var += theoretical.sigma[i] * theoretical.sigma[i];
    if (!experimental.sigma.empty()) var += experimental.sigma[i] * experimental.sigma[i];
    return var;
}

std::int64_t effective_n(const GcpEstimate& experimental, std::int64_t n_experimental) {
    if (n_experimental > 0) return n_experimental;
    if (experimental.n_patterns > 0) return experimental.n_patterns;
    return experimental.plan.total();
}

} // namespace

double wilson_hilferty_z(double chi2, int k) {
    if (k < 1) throw std::invalid_argument("wilson_hilferty_z: k must be >= 1");
    if (chi2 < 0.0) throw std::invalid_argument("wilson_hilferty_z: chi2 must be >= 0");
    const double mu = (9.0 * k - 2.0) / (9.0 * k);
    const double sigma = std::sqrt(2.0 / (9.0 * k));
    return (std::cbrt(chi2 / k) - mu) / sigma;
}

TestReport chi_square(const GcpEstimate& experimental, const GcpEstimate& theoretical,
                      std::int64_t n_experimental, const ChiSquareOptions& opts) {
    check_geometry(experimental, theoretical);
    if (n_experimental == 0 && experimental.sigma.empty() &&
        experimental.n_patterns == 0)
        throw std::invalid_argument(
            "chi_square: pattern-based experimental input needs a sample count");

    const std::int64_t n_eff = effective_n(experimental, n_experimental);
    TestReport rep;
    rep.label = opts.label;
    rep.admitted.resize(experimental.probabilities.size(), false);
    rep.normalized_diff.resize(experimental.probabilities.size(), 0.0);

    for (std::size_t i = 0; i < experimental.probabilities.size(); ++i) {
        const double g_t = theoretical.probabilities[i];
        const double var = bin_variance(experimental, theoretical, n_experimental, i);
        const double diff = experimental.probabilities[i] - g_t;
        rep.normalized_diff[i] = (var > 0.0) ? diff / std::sqrt(var) : 0.0;
        const bool admit =
            static_cast<double>(n_eff) * g_t > opts.min_expected && var > 0.0;
        if (admit) {
            rep.admitted[i] = true;
            rep.chi2 += diff * diff / var;
            ++rep.k;
        }
    }
    if (rep.k >= 1) rep.z = wilson_hilferty_z(rep.chi2, rep.k);
    if (rep.k < 10) {
        rep.reliable = false;
        rep.note = "fewer than 10 admitted bins; Gaussian Z approximation invalid";
    }
    return rep;
}

std::vector<double> normalized_difference(const GcpEstimate& experimental,
                                          const GcpEstimate& theoretical,
                                          std::int64_t n_experimental) {
    check_geometry(experimental, theoretical);
    std::vector<double> out(experimental.probabilities.size(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double var = bin_variance(experimental, theoretical, n_experimental, i);
        if (var > 0.0)
            out[i] = (experimental.probabilities[i] - theoretical.probabilities[i]) /
                     std::sqrt(var);
    }
    return out;
}

double raw_moment_error(double mu_2n, double mu_n, std::int64_t samples) {
    if (samples < 1) throw std::invalid_argument("raw_moment_error: need samples >= 1");
    const double var = mu_2n - mu_n * mu_n;
    // Monte Carlo noise can push the estimate slightly negative
    return std::sqrt(std::max(var, 0.0) / static_cast<double>(samples));
}

Eigen::VectorXd per_mode_moment_errors(const ModeMoments& theory, std::int64_t n_samples) {
    Eigen::VectorXd out(theory.mean.size());
    for (int j = 0; j < theory.mean.size(); ++j)
        out[j] = raw_moment_error(theory.second_moment[j], theory.mean[j], n_samples);
    return out;
}

TestReport moment_z_test(const Eigen::VectorXd& experimental_means,
                         const ModeMoments& theory, const Eigen::VectorXd& sigma_E,
                         const std::string& label) {
    const int m = static_cast<int>(experimental_means.size());
    if (theory.mean.size() != m || sigma_E.size() != m)
        throw std::invalid_argument("moment_z_test: mode counts do not match");
    TestReport rep;
    rep.label = label;
    rep.normalized_diff.resize(static_cast<std::size_t>(m), 0.0);
    rep.admitted.assign(static_cast<std::size_t>(m), true);
    for (int j = 0; j < m; ++j) {
        const double var =
            sigma_E[j] * sigma_E[j] + theory.sigma_T[j] * theory.sigma_T[j];
        const double diff = experimental_means[j] - theory.mean[j];
        if (var > 0.0) {
            rep.chi2 += diff * diff / var;
            rep.normalized_diff[static_cast<std::size_t>(j)] = diff / std::sqrt(var);
        }
    }
    rep.k = m;
    rep.z = wilson_hilferty_z(rep.chi2, rep.k);
    if (m < 10) {
        rep.reliable = false;
        rep.note = "fewer than 10 modes; Gaussian Z approximation invalid";
    }
    return rep;
}

namespace {

struct Vertex {
    double eps;
    double t;
    double f;
};

} // namespace

FitResult fit_epsilon_t(const GcpEstimate& experimental, std::int64_t n_experimental,
                        const SqueezerBank& bank, const TransmissionMatrix& network,
                        const BinningSpec& spec, const FitOptions& opts) {
    auto clamp_point = [](double& eps, double& t) {
        eps = std::clamp(eps, 0.0, 1.0);
        t = std::clamp(t, 1e-6, 1.0);
    };

    auto objective = [&](double eps, double t) {
        SqueezerBank b(bank.r, eps);
        TransmissionMatrix net{network.T, t};
        EnsemblePlan plan = opts.plan;
        plan.seed = opts.eval_seed;
        PhaseSpaceEnsemble ens(b, net, plan);
        GcpEstimate theory = estimate_gcp(ens, spec);
        return chi_square(experimental, theory, n_experimental, opts.chi).chi2;
    };

    // reflection, expansion, contraction, shrink
    constexpr double kAlpha = 1.0, kGamma = 2.0, kRho = 0.5, kSigma = 0.5;
    const double step_eps = 0.02, step_t = 0.005;

    auto make_simplex = [&](double e0, double t0, double scale) {
        std::array<Vertex, 3> s;
        double pts[3][2] = {{e0, t0},
                            {e0 + scale * step_eps, t0},
                            {e0, t0 + scale * step_t}};
        for (int i = 0; i < 3; ++i) {
            clamp_point(pts[i][0], pts[i][1]);
            s[static_cast<std::size_t>(i)] = {pts[i][0], pts[i][1],
                                              objective(pts[i][0], pts[i][1])};
        }
        return s;
    };

    // Stage 1: the mean count scales as t^2 and is independent of epsilon,
    // so the experimental/theoretical mean ratio pins t directly; then a
    // short epsilon line scan at that t finds the basin of the narrow chi2
    // well that Nelder-Mead alone can miss from a distant start.
    auto window_mean = [](const GcpEstimate& est) {
        const auto sh = est.spec.shape();
        std::vector<int> idx(sh.size(), 0);
        double mean = 0.0, mass = 0.0;
        for (double p : est.probabilities) {
            double m = 0.0;
            for (std::size_t a = 0; a < sh.size(); ++a)
                m += est.spec.m_min[a] + idx[a];
            mean += m * p;
            mass += p;
            for (std::size_t a = sh.size(); a-- > 0;) {
                if (++idx[a] < sh[a]) break;
                idx[a] = 0;
            }
        }
        return mass > 0.0 ? mean / mass : 0.0;
    };

    double e0 = opts.epsilon_init, t0 = opts.t_init;
    {
        SqueezerBank b(bank.r, e0);
        TransmissionMatrix net{network.T, t0};
        EnsemblePlan plan = opts.plan;
        plan.seed = opts.eval_seed;
        GcpEstimate theory =
            estimate_gcp(PhaseSpaceEnsemble(b, net, plan), spec);
        const double mean_exp = window_mean(experimental);
        const double mean_th = window_mean(theory);
        if (mean_exp > 0.0 && mean_th > 0.0)
            t0 = std::clamp(t0 * std::sqrt(mean_exp / mean_th), 1e-6, 1.0);

        const double center = e0;
        double best_f = objective(center, t0);
        for (int s = -3; s <= 3; ++s) {
            if (s == 0) continue;
            const double e = std::clamp(center + 0.02 * s, 0.0, 1.0);
            const double f = objective(e, t0);
            if (f < best_f) {
                best_f = f;
                e0 = e;
            }
        }
    }

    FitResult res;
    auto simplex = make_simplex(e0, t0, 1.0);
    int restarts = 0;

    for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
        std::sort(simplex.begin(), simplex.end(),
                  [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
        res.objective_trace.push_back(simplex[0].f);

        const double ext_eps =
            std::max({simplex[0].eps, simplex[1].eps, simplex[2].eps}) -
            std::min({simplex[0].eps, simplex[1].eps, simplex[2].eps});
        const double ext_t = std::max({simplex[0].t, simplex[1].t, simplex[2].t}) -
                             std::min({simplex[0].t, simplex[1].t, simplex[2].t});
        res.resolution_epsilon = ext_eps;
        res.resolution_t = ext_t;
        if (ext_eps < opts.target_resolution && ext_t < opts.target_resolution) {
            const double fspread = simplex[2].f - simplex[0].f;
            if (fspread > 1e-6 * (1.0 + std::abs(simplex[0].f)) && restarts < 2) {
                // collapsed onto a line without agreeing on the value: restart
                // around the best vertex with a smaller simplex
                ++restarts;
                simplex = make_simplex(simplex[0].eps, simplex[0].t, 0.25);
                continue;
            }
            res.converged = true;
            break;
        }

        const double ce = 0.5 * (simplex[0].eps + simplex[1].eps);
        const double ct = 0.5 * (simplex[0].t + simplex[1].t);
        double re = ce + kAlpha * (ce - simplex[2].eps);
        double rt = ct + kAlpha * (ct - simplex[2].t);
        clamp_point(re, rt);
        const double fr = objective(re, rt);

        if (fr < simplex[0].f) {
            double ee = ce + kGamma * (re - ce);
            double et = ct + kGamma * (rt - ct);
            clamp_point(ee, et);
            const double fe = objective(ee, et);
            simplex[2] = (fe < fr) ? Vertex{ee, et, fe} : Vertex{re, rt, fr};
        } else if (fr < simplex[1].f) {
            simplex[2] = {re, rt, fr};
        } else {
            double oe = ce + kRho * (simplex[2].eps - ce);
            double ot = ct + kRho * (simplex[2].t - ct);
            clamp_point(oe, ot);
            const double fc = objective(oe, ot);
            if (fc < simplex[2].f) {
                simplex[2] = {oe, ot, fc};
            } else {
                for (int i = 1; i < 3; ++i) {
                    auto& v = simplex[static_cast<std::size_t>(i)];
                    v.eps = simplex[0].eps + kSigma * (v.eps - simplex[0].eps);
                    v.t = simplex[0].t + kSigma * (v.t - simplex[0].t);
                    clamp_point(v.eps, v.t);
                    v.f = objective(v.eps, v.t);
                }
            }
        }
    }

    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    res.epsilon = simplex[0].eps;
    res.t = simplex[0].t;

    // final report with a fresh seed so the quoted chi2 is not the one the
    // optimizer saw
    {
        SqueezerBank b(bank.r, res.epsilon);
        TransmissionMatrix net{network.T, res.t};
        EnsemblePlan plan = opts.plan;
        plan.seed = opts.eval_seed ^ 0x66726573685f73ULL;
        PhaseSpaceEnsemble ens(b, net, plan);
        GcpEstimate theory = estimate_gcp(ens, spec);
        ChiSquareOptions chi = opts.chi;
        if (chi.label.empty()) chi.label = "ET";
        res.report = chi_square(experimental, theory, n_experimental, chi);
        if (!res.converged && res.report.note.empty())
            res.report.note = "fit did not converge; best parameters so far";
    }
    return res;
}

FitResult fit_epsilon_t(const CountPatternSet& patterns, const SqueezerBank& bank,
                        const TransmissionMatrix& network, const BinningSpec& spec,
                        const FitOptions& opts) {
    GcpEstimate experimental = bin_patterns(patterns, spec);
    return fit_epsilon_t(experimental, patterns.size(), bank, network, spec, opts);
}

} // namespace gbsval
