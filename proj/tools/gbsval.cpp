#include "gbsval/commands.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <exception>

namespace {

struct Args {
    std::string config;
    std::string output;
    std::string dataset;
    std::uint64_t seed = 0;
    bool has_seed = false;
    bool fit = false;
};

void add_common(CLI::App* cmd, Args& args) {
    cmd->add_option("-c,--config", args.config, "run configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("-o,--output", args.output, "output path prefix");
    cmd->add_option("--seed", args.seed, "override the ensemble seed")
        ->each([&args](const std::string&) { args.has_seed = true; });
    cmd->add_option("--dataset", args.dataset, "pattern dataset (overrides the config)");
}

gbsval::RunConfig load(const Args& args) {
    gbsval::RunConfig cfg = gbsval::RunConfig::parse_file(args.config);
    if (args.has_seed) cfg.plan.seed = args.seed;
    if (!args.dataset.empty()) cfg.dataset = args.dataset;
    if (args.fit) cfg.fit = true;
    cfg.validate();
    return cfg;
}

std::string prefix_or(const Args& args, const char* cmd) {
    return args.output.empty() ? std::string("gbsval_") + cmd : args.output;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo simulation and statistical validation of "
                 "photon-counting experiments on Gaussian states"};
    app.require_subcommand(1);

    Args args;
    auto* sim = app.add_subcommand("simulate", "phase-space GCP estimate");
    add_common(sim, args);
    auto* exa = app.add_subcommand("exact", "closed-form count distribution");
    add_common(exa, args);
    auto* val = app.add_subcommand("validate", "test a dataset against ground truth");
    add_common(val, args);
    val->add_flag("--fit", args.fit, "fit (epsilon, t) before the ET comparison");
    auto* fak = app.add_subcommand("fake", "generate synthetic count patterns");
    add_common(fak, args);
    auto* fit = app.add_subcommand("fit", "fit (epsilon, t) to a dataset");
    add_common(fit, args);
    auto* mom = app.add_subcommand("moments", "per-mode output photon numbers");
    add_common(mom, args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            auto cfg = load(args);
            auto res = gbsval::cmd_simulate(cfg, prefix_or(args, "simulate"));
            std::printf("bins=%zu sum=%.6f windows=[%d,%d]\n",
                        res.estimate.probabilities.size(), res.estimate.sum(),
                        res.windows.m_min[0], res.windows.m_max[0]);
        } else if (exa->parsed()) {
            auto cfg = load(args);
            auto dist = gbsval::cmd_exact(cfg, prefix_or(args, "exact"));
            std::printf("model=%s entries=%zu sum=%.12f mean=%.6f tail<=%.3e\n",
                        dist.model.c_str(), dist.probabilities.size(), dist.sum(),
                        dist.mean(), dist.tail_bound);
        } else if (val->parsed()) {
            auto cfg = load(args);
            auto res = gbsval::cmd_validate(cfg, prefix_or(args, "validate"));
            std::fputs(res.table.c_str(), stdout);
            if (res.fit)
                std::printf("fit: epsilon=%.4f t=%.4f converged=%d\n",
                            res.fit->epsilon, res.fit->t, res.fit->converged);
        } else if (fak->parsed()) {
            auto cfg = load(args);
            auto set = gbsval::cmd_fake(cfg, prefix_or(args, "fake"));
            std::printf("patterns=%lld modes=%d\n",
                        static_cast<long long>(set.size()), set.modes());
        } else if (fit->parsed()) {
            auto cfg = load(args);
            auto res = gbsval::cmd_fit(cfg, prefix_or(args, "fit"));
            std::printf("epsilon=%.4f t=%.4f chi2/k=%.3f k=%d Z=%.2f converged=%d\n",
                        res.epsilon, res.t, res.report.chi2_over_k(), res.report.k,
                        res.report.z, res.converged);
        } else if (mom->parsed()) {
            auto cfg = load(args);
            auto m = gbsval::cmd_moments(cfg, prefix_or(args, "moments"));
            for (int j = 0; j < m.mean.size(); ++j)
                std::printf("%4d %12.6f +- %.3e\n", j, m.mean[j], m.sigma_T[j]);
        }
    } catch (const gbsval::IngestError& e) {
        std::fprintf(stderr, "ingestion error: %s\n", e.what());
        return 4;
    } catch (const gbsval::NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const gbsval::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
