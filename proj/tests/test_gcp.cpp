#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gbsval/gcp.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numeric>

using namespace gbsval;

namespace {

PhaseSpaceEnsemble make_ensemble(int modes, double r, double t_amp, double eps,
                                 EnsemblePlan plan, std::uint64_t haar_seed = 101) {
    SqueezerBank bank = SqueezerBank::uniform(modes, r, eps);
    TransmissionMatrix net = haar_unitary(modes, haar_seed);
    if (t_amp < 1.0) net = apply_uniform_loss(net, t_amp);
    return PhaseSpaceEnsemble(bank, net, plan);
}

} // namespace

TEST_CASE("binning spec geometry") {
    BinningSpec spec = BinningSpec::total_counts(6, 0, 10);
    CHECK(spec.dimension() == 1);
    CHECK(spec.order() == 6);
    CHECK(spec.bins() == 11);
    CHECK(spec.shape() == std::vector<std::int64_t>{11});
    CHECK_NOTHROW(spec.validate(6));

    BinningSpec split = BinningSpec::contiguous_split(7, 2);
    REQUIRE(split.dimension() == 2);
    CHECK(split.subsets[0].size() + split.subsets[1].size() == 7);
    std::vector<int> all;
    for (const auto& s : split.subsets) all.insert(all.end(), s.begin(), s.end());
    std::sort(all.begin(), all.end());
    std::vector<int> expect(7);
    std::iota(expect.begin(), expect.end(), 0);
    CHECK(all == expect);
}

TEST_CASE("binning spec validation rejects bad partitions") {
    BinningSpec spec;
    spec.subsets = {{0, 1}, {1, 2}}; // overlap
    spec.m_min = {0, 0};
    spec.m_max = {3, 3};
    CHECK_THROWS_AS(spec.validate(4), std::invalid_argument);

    spec.subsets = {{0, 1}, {2, 5}}; // out of range
    CHECK_THROWS_AS(spec.validate(4), std::invalid_argument);

    spec.subsets = {{0, 1}, {2, 3}};
    spec.m_min = {2, 0};
    spec.m_max = {1, 3}; // inverted window
    CHECK_THROWS_AS(spec.validate(4), std::invalid_argument);

    spec.m_min = {0, 0};
    spec.m_max = {10000, 10000}; // ~1e8 bins
    CHECK_THROWS_AS(spec.validate(4), std::invalid_argument);
    CHECK_NOTHROW(spec.validate(4, 200000000));
}

TEST_CASE("vacuum ensemble gives an exact delta distribution") {
    EnsemblePlan plan{50, 10, 1};
    auto ens = make_ensemble(3, 0.0, 1.0, 0.0, plan);
    GcpEstimate est = estimate_gcp(ens, BinningSpec::total_counts(3, 0, 5));
    CHECK(est.probabilities[0] == 1.0);
    for (std::size_t i = 1; i < est.probabilities.size(); ++i)
        CHECK(est.probabilities[i] == 0.0);
}

TEST_CASE("lossy sampled GCP matches the Fock-basis oracle") {
    const int m = 2;
    const double r = 0.5, t = 0.6;
    EnsemblePlan plan{500, 400, 31};
    auto ens = make_ensemble(m, r, t, 0.0, plan);
    BinningSpec spec = BinningSpec::total_counts(m, 0, 8);
    GcpEstimate est = estimate_gcp(ens, spec);
    auto oracle = oracles::fock_total_counts(m, r, t, 8);

    const std::int64_t n_eff = plan.total();
    for (int i = 0; i <= 8; ++i) {
        if (n_eff * oracle[static_cast<std::size_t>(i)] <= 10) continue;
        const double d = est.probabilities[static_cast<std::size_t>(i)] -
                         oracle[static_cast<std::size_t>(i)];
        CHECK(std::abs(d) < 5.0 * est.sigma[static_cast<std::size_t>(i)]);
    }
}

TEST_CASE("lossless sampled GCP matches the Fock-basis oracle") {
    const int m = 2;
    const double r = 0.5;
    EnsemblePlan plan{500, 2000, 37};
    auto ens = make_ensemble(m, r, 1.0, 0.0, plan);
    BinningSpec spec = BinningSpec::total_counts(m, 0, 8);
    GcpEstimate est = estimate_gcp(ens, spec);
    auto oracle = oracles::fock_total_counts(m, r, 1.0, 8);

    for (int i = 0; i <= 8; ++i) {
        const double d = est.probabilities[static_cast<std::size_t>(i)] -
                         oracle[static_cast<std::size_t>(i)];
        INFO("bin ", i);
        // without loss the odd/tail estimators are heavy-tailed and the
        // empirical sigma_T under-covers, so allow an absolute floor at the
        // observed 1/sqrt(E_S) noise scale
        CHECK(std::abs(d) <
              std::max(5.0 * est.sigma[static_cast<std::size_t>(i)], 3e-3));
    }
}

TEST_CASE("estimates are bitwise deterministic") {
    EnsemblePlan plan{100, 20, 3};
    auto a = estimate_gcp(make_ensemble(3, 0.4, 0.8, 0.0, plan),
                          BinningSpec::total_counts(3, 0, 6));
    auto b = estimate_gcp(make_ensemble(3, 0.4, 0.8, 0.0, plan),
                          BinningSpec::total_counts(3, 0, 6));
    CHECK(a.probabilities == b.probabilities);
    CHECK(a.sigma == b.sigma);
}

TEST_CASE("d=2 marginalization sums bit-exactly") {
    EnsemblePlan plan{200, 50, 13};
    auto ens = make_ensemble(4, 0.5, 0.7, 0.0, plan);
    BinningSpec spec;
    spec.subsets = {{0, 1}, {2, 3}};
    spec.m_min = {0, 0};
    spec.m_max = {6, 5};
    GcpEstimate est = estimate_gcp(ens, spec);
    REQUIRE(est.probabilities.size() == 7u * 6u);

    GcpEstimate marg = est.marginalized(1);
    REQUIRE(marg.probabilities.size() == 7);
    for (int i = 0; i <= 6; ++i) {
        double manual = 0.0;
        // ascending-index accumulation, mirroring the library's contract
        for (int j = 0; j <= 5; ++j)
            manual += est.probabilities[static_cast<std::size_t>(i * 6 + j)];
        CHECK(marg.probabilities[static_cast<std::size_t>(i)] == manual);
    }

    GcpEstimate marg0 = est.marginalized(0);
    REQUIRE(marg0.probabilities.size() == 6);
    CHECK(marg0.sum() == doctest::Approx(est.sum()).epsilon(1e-12));
}

TEST_CASE("at and value address row-major windows") {
    GcpEstimate est;
    est.spec.subsets = {{0}, {1}};
    est.spec.m_min = {1, 2};
    est.spec.m_max = {2, 4};
    est.probabilities.assign(6, 0.0);
    est.at({2, 3}) = 0.25;
    CHECK(est.value({2, 3}) == 0.25);
    CHECK(est.probabilities[1 * 3 + 1] == 0.25);
    CHECK_THROWS_AS(est.value({0, 2}), std::out_of_range);
    CHECK_THROWS_AS(est.value({2, 5}), std::out_of_range);
}

TEST_CASE("pattern binning tallies windows and flows") {
    CountPatternSet set;
    set.patterns.resize(5, 2);
    set.patterns << 0, 0, 1, 1, 2, 0, 3, 0, 0, 9;
    BinningSpec spec;
    spec.subsets = {{0}, {1}};
    spec.m_min = {0, 0};
    spec.m_max = {2, 2};
    GcpEstimate est = bin_patterns(set, spec);
    CHECK(est.n_patterns == 5);
    // patterns (3,0) and (0,9) fall outside an axis window
    CHECK(est.overflow[0] == 1);
    CHECK(est.overflow[1] == 1);
    CHECK(est.underflow[0] == 0);
    CHECK(est.value({0, 0}) == doctest::Approx(1.0 / 5.0));
    CHECK(est.value({1, 1}) == doctest::Approx(1.0 / 5.0));
    CHECK(est.value({2, 0}) == doctest::Approx(1.0 / 5.0));
    CHECK(est.sum() == doctest::Approx(3.0 / 5.0));
}

TEST_CASE("relabeling modes relabels patterns and specs consistently") {
    CountPatternSet set;
    set.patterns.resize(3, 3);
    set.patterns << 1, 2, 3, 0, 1, 2, 5, 0, 1;
    BinningSpec spec;
    spec.subsets = {{0, 2}, {1}};
    spec.m_min = {0, 0};
    spec.m_max = {8, 8};

    std::vector<int> perm{2, 0, 1}; // new index of each old mode
    CountPatternSet pset = permute_modes(set, perm);
    BinningSpec pspec = permute_modes(spec, perm);

    GcpEstimate a = bin_patterns(set, spec);
    GcpEstimate b = bin_patterns(pset, pspec);
    CHECK(a.probabilities == b.probabilities);
}

TEST_CASE("auto windows cover the thermal distribution") {
    EnsemblePlan plan{500, 200, 17};
    auto ens = make_ensemble(1, 0.5, 1.0, 1.0, plan);
    BinningSpec subsets = BinningSpec::contiguous_split(1, 1);
    BinningSpec win = default_windows(ens, subsets, 1e-7);
    CHECK(win.m_min[0] == 0);
    // geometric tail of the M=1 thermal distribution crosses 1e-7 near m=10
    CHECK(win.m_max[0] >= 8);
    CHECK(win.m_max[0] <= 14);
    CHECK_THROWS_AS(default_windows(ens, subsets, 0.0), std::invalid_argument);
}

TEST_CASE("auto windows collapse to a delta for vacuum") {
    EnsemblePlan plan{100, 10, 5};
    auto ens = make_ensemble(2, 0.0, 1.0, 0.0, plan);
    BinningSpec win = default_windows(ens, BinningSpec::contiguous_split(2, 1), 1e-7);
    CHECK(win.m_min[0] == 0);
    CHECK(win.m_max[0] == 0);
}

TEST_CASE("estimator rejects mismatched specs") {
    EnsemblePlan plan{50, 10, 1};
    auto ens = make_ensemble(2, 0.3, 1.0, 0.0, plan);
    BinningSpec spec = BinningSpec::total_counts(3, 0, 4); // wrong mode count
    CHECK_THROWS_AS(estimate_gcp(ens, spec), std::invalid_argument);
}
