#include "gbsval/commands.hpp"

#include <algorithm>
#include <cmath>

namespace gbsval {

namespace {

DetectorModel detector_from(const RunConfig& cfg) {
    DetectorModel det;
    det.c_max = cfg.c_max;
    det.tail_policy =
        cfg.tail_policy == "clamp" ? TailPolicy::Clamp : TailPolicy::Renormalize;
    return det;
}

double effective_t(const RunConfig& cfg) {
    const double corr = (cfg.ground_truth == "ideal") ? 1.0 : cfg.t_correction;
    return cfg.matrix == "haar" ? corr * cfg.loss_t : corr;
}

ExactDistribution make_exact(const RunConfig& cfg, int m_cut) {
    const double t = effective_t(cfg);
    if (cfg.model == "lossy-squeezed")
        return lossy_squeezed_total_counts(cfg.modes, cfg.r, t, m_cut);
    if (cfg.model == "lossless-squeezed")
        return lossless_squeezed_total_counts(cfg.modes, cfg.r, m_cut);
    if (cfg.model == "poisson-pair-limit")
        return poisson_pair_limit(cfg.modes, cfg.r, m_cut);
    return thermal_negative_binomial(cfg.modes, cfg.r, m_cut);
}

int resolve_m_cut(const RunConfig& cfg) {
    if (cfg.m_cut >= 0) return cfg.m_cut;
    if (cfg.windows_explicit()) return cfg.window_max[0];
    int cut = 64;
    for (;;) {
        ExactDistribution dist = make_exact(cfg, cut);
        if (dist.tail_bound < 1e-10 || cut >= (1 << 20)) return cut;
        cut *= 2;
    }
}

BinningSpec resolve_windows(const RunConfig& cfg, const PhaseSpaceEnsemble& ens) {
    if (cfg.windows_explicit()) return cfg.make_subsets();
    return default_windows(ens, BinningSpec::contiguous_split(ens.modes(), cfg.dimension),
                           cfg.auto_window_threshold);
}

Eigen::VectorXd pattern_means(const CountPatternSet& set) {
    return set.patterns.cast<double>().colwise().mean();
}

} // namespace

GcpEstimate to_estimate(const ExactDistribution& dist, const BinningSpec& spec) {
    if (spec.dimension() != 1)
        throw std::invalid_argument("to_estimate: closed forms are d=1 only");
    GcpEstimate est;
    est.spec = spec;
    const int lo = spec.m_min[0], hi = spec.m_max[0];
    est.probabilities.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (int m = lo; m <= hi; ++m)
        est.probabilities.push_back(
            m < static_cast<int>(dist.probabilities.size())
                ? dist.probabilities[static_cast<std::size_t>(m)]
                : 0.0);
    return est;
}

SimulateResult cmd_simulate(const RunConfig& cfg, const std::string& prefix) {
    PhaseSpaceEnsemble ens(cfg.make_bank(), cfg.make_network(), cfg.plan);
    SimulateResult res;
    res.windows = resolve_windows(cfg, ens);
    res.estimate = estimate_gcp(ens, res.windows);
    if (!prefix.empty()) {
        write_json_report(prefix + ".json", {cfg.hash, cfg.plan.seed, "simulate"},
                          to_json(res.estimate));
        write_plot_csv(prefix + ".csv", res.estimate);
    }
    return res;
}

ExactDistribution cmd_exact(const RunConfig& cfg, const std::string& prefix) {
    ExactDistribution dist = make_exact(cfg, resolve_m_cut(cfg));
    if (!prefix.empty()) {
        write_json_report(prefix + ".json", {cfg.hash, 0, "exact"}, to_json(dist));
        write_plot_csv(prefix + ".csv", dist);
    }
    return dist;
}

ValidateResult cmd_validate(const RunConfig& cfg, const std::string& prefix) {
    if (cfg.dataset.empty()) throw ConfigError("validate: dataset is required");
    CountPatternSet patterns = ingest_patterns(cfg.dataset);
    if (cfg.modes > 0 && patterns.modes() != cfg.modes)
        throw ConfigError("validate: dataset has " + std::to_string(patterns.modes()) +
                          " modes, config says " + std::to_string(cfg.modes));

    RunConfig ideal = cfg;
    ideal.ground_truth = "ideal";
    PhaseSpaceEnsemble ens_ideal(ideal.make_bank(), ideal.make_network(), ideal.plan);

    ValidateResult res;
    BinningSpec windows = resolve_windows(cfg, ens_ideal);
    res.experimental = bin_patterns(patterns, windows);

    if (cfg.theory == "exact") {
        RunConfig ex = cfg;
        ex.window_min = windows.m_min;
        ex.window_max = windows.m_max;
        GcpEstimate theory = to_estimate(make_exact(ex, windows.m_max[0]), windows);
        res.reports.push_back(
            chi_square(res.experimental, theory, patterns.size(), {10.0, "EI"}));
    } else {
        GcpEstimate theory_ei = estimate_gcp(ens_ideal, windows);
        res.reports.push_back(
            chi_square(res.experimental, theory_ei, patterns.size(), {10.0, "EI"}));
    }

    const bool nonideal = cfg.epsilon > 0.0 || cfg.t_correction < 1.0;
    if (cfg.fit) {
        FitOptions fopts;
        fopts.plan = cfg.plan;
        fopts.eval_seed = cfg.plan.seed ^ 0x6669745f65ULL;
        fopts.chi.label = "ET";
        fopts.epsilon_init = cfg.epsilon > 0.0 ? cfg.epsilon : 0.05;
        fopts.t_init = cfg.t_correction < 1.0 ? cfg.t_correction : 0.99;
        res.fit = fit_epsilon_t(patterns, ideal.make_bank(), ideal.make_network(),
                                windows, fopts);
        res.reports.push_back(res.fit->report);
    } else if (nonideal && cfg.theory != "exact") {
        PhaseSpaceEnsemble ens_et(cfg.make_bank(), cfg.make_network(), cfg.plan);
        GcpEstimate theory_et = estimate_gcp(ens_et, windows);
        res.reports.push_back(
            chi_square(res.experimental, theory_et, patterns.size(), {10.0, "ET"}));
    }

    {
        PhaseSpaceEnsemble ens_mom(cfg.make_bank(), cfg.make_network(), cfg.plan);
        ModeMoments theory = mode_moments(ens_mom);
        Eigen::VectorXd sigma_e = per_mode_moment_errors(theory, patterns.size());
        res.reports.push_back(
            moment_z_test(pattern_means(patterns), theory, sigma_e, "MOM"));
    }

    res.table = render_test_table(res.reports);
    if (!prefix.empty()) {
        nlohmann::json payload;
        payload["experimental"] = to_json(res.experimental);
        payload["tests"] = nlohmann::json::array();
        for (const auto& rep : res.reports) payload["tests"].push_back(to_json(rep));
        if (res.fit) payload["fit"] = to_json(*res.fit);
        write_json_report(prefix + ".json", {cfg.hash, cfg.plan.seed, "validate"},
                          payload);
    }
    return res;
}

CountPatternSet cmd_fake(const RunConfig& cfg, const std::string& prefix) {
    PhaseSpaceEnsemble ens(cfg.make_bank(), cfg.make_network(), cfg.plan);
    CountPatternSet set = generate_patterns(ens, detector_from(cfg), cfg.fake_seed);
    if (!prefix.empty()) save_patterns(set, prefix + ".patterns.txt");
    return set;
}

FitResult cmd_fit(const RunConfig& cfg, const std::string& prefix) {
    if (cfg.dataset.empty()) throw ConfigError("fit: dataset is required");
    CountPatternSet patterns = ingest_patterns(cfg.dataset);

    RunConfig ideal = cfg;
    ideal.ground_truth = "ideal";
    PhaseSpaceEnsemble ens_ideal(ideal.make_bank(), ideal.make_network(), ideal.plan);
    BinningSpec windows = resolve_windows(cfg, ens_ideal);

    FitOptions fopts;
    fopts.plan = cfg.plan;
    fopts.eval_seed = cfg.plan.seed ^ 0x6669745f65ULL;
    fopts.chi.label = "ET";
    fopts.epsilon_init = cfg.epsilon > 0.0 ? cfg.epsilon : 0.05;
    fopts.t_init = cfg.t_correction < 1.0 ? cfg.t_correction : 0.99;
    FitResult res = fit_epsilon_t(patterns, ideal.make_bank(), ideal.make_network(),
                                  windows, fopts);
    if (!prefix.empty())
        write_json_report(prefix + ".json", {cfg.hash, cfg.plan.seed, "fit"},
                          to_json(res));
    return res;
}

ModeMoments cmd_moments(const RunConfig& cfg, const std::string& prefix) {
    PhaseSpaceEnsemble ens(cfg.make_bank(), cfg.make_network(), cfg.plan);
    ModeMoments mom = mode_moments(ens);
    if (!prefix.empty())
        write_json_report(prefix + ".json", {cfg.hash, cfg.plan.seed, "moments"},
                          to_json(mom));
    return mom;
}

} // namespace gbsval
