#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gbsval/phase_space.hpp"

#include <cmath>
#include <complex>

using namespace gbsval;

namespace {

// plain sequential moment accumulation, independent of the library's
// group-partition reduction
struct MomentAccumulator {
    std::complex<double> ab = 0, aa = 0, apb2 = 0;
    std::int64_t n = 0;

    void add(const InputBlock& block) {
        for (std::int64_t s = 0; s < block.alpha.cols(); ++s)
            for (int j = 0; j < block.alpha.rows(); ++j) {
                const auto a = block.alpha(j, s);
                const auto b = block.beta(j, s);
                ab += a * std::conj(b);
                aa += a * a;
                const auto v = a + std::conj(b);
                apb2 += v * v;
                ++n;
            }
    }
};

} // namespace

TEST_CASE("plan validation") {
    EnsemblePlan plan;
    plan.samples_per_trajectory = 0;
    CHECK_THROWS_AS(plan.validate(false), std::invalid_argument);
    plan.samples_per_trajectory = 10;
    plan.trajectories = 1;
    CHECK_NOTHROW(plan.validate(false));
    CHECK_THROWS_AS(plan.validate(true), std::invalid_argument);
    plan.trajectories = 2;
    CHECK_NOTHROW(plan.validate(true));
    CHECK(EnsemblePlan{}.total() == 2400000);
}

TEST_CASE("input sampling reproduces the squeezed-state moments") {
    const double r = 0.89;
    SqueezerBank bank = SqueezerBank::uniform(4, r);
    Rng rng(5, 1);
    InputBlock block = sample_inputs(bank, 200000, rng);
    CHECK(block.real_valued);
    CHECK_FALSE(block.classical);

    MomentAccumulator acc;
    acc.add(block);
    const double n = std::sinh(r) * std::sinh(r);
    const double mt = std::cosh(r) * std::sinh(r);
    const double inv = 1.0 / static_cast<double>(acc.n);
    // var of the alpha beta* estimator is O(1) per draw; 5 sigma margins
    const double tol = 5.0 * 3.0 * std::sqrt(inv);
    CHECK(std::abs(acc.ab * inv - std::complex<double>(n, 0.0)) < tol);
    CHECK(std::abs(acc.aa * inv - std::complex<double>(mt, 0.0)) < tol);
    CHECK(std::abs(acc.apb2 * inv -
                   std::complex<double>(std::exp(2.0 * r) - 1.0, 0.0)) < 4.0 * tol);
}

TEST_CASE("thermalized moments scale the coherence") {
    const double r = 0.7, eps = 0.4;
    SqueezerBank bank = SqueezerBank::uniform(2, r, eps);
    Rng rng(11, 1);
    InputBlock block = sample_inputs(bank, 200000, rng);
    MomentAccumulator acc;
    acc.add(block);
    const double inv = 1.0 / static_cast<double>(acc.n);
    const double n = std::sinh(r) * std::sinh(r);
    const double mt = (1.0 - eps) * std::cosh(r) * std::sinh(r);
    const double tol = 5.0 * 2.0 * std::sqrt(inv);
    CHECK(std::abs(acc.ab * inv - std::complex<double>(n, 0.0)) < tol);
    CHECK(std::abs(acc.aa * inv - std::complex<double>(mt, 0.0)) < tol);
}

TEST_CASE("classical inputs carry beta identical to alpha") {
    SqueezerBank bank = SqueezerBank::uniform(3, 0.5, 1.0);
    Rng rng(2, 1);
    InputBlock block = sample_inputs(bank, 1000, rng);
    CHECK(block.classical);
    CHECK_FALSE(block.real_valued);
    CHECK((block.alpha - block.beta).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("vacuum inputs are exactly zero") {
    SqueezerBank bank = SqueezerBank::uniform(2, 0.0);
    Rng rng(3, 1);
    InputBlock block = sample_inputs(bank, 100, rng);
    CHECK(block.alpha.cwiseAbs().maxCoeff() == 0.0);
    CHECK(block.beta.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("real fast path agrees with the dense complex product") {
    SqueezerBank bank = SqueezerBank::uniform(3, 0.6);
    Rng rng(9, 1);
    InputBlock block = sample_inputs(bank, 64, rng);
    REQUIRE(block.real_valued);

    TransmissionMatrix net = haar_unitary(3, 21);
    net.t_correction = 0.8;
    TrajectoryBlock fast = propagate(block, net);

    InputBlock generic = block;
    generic.real_valued = false; // force the complex branch
    TrajectoryBlock slow = propagate(generic, net);
    CHECK((fast.alpha - slow.alpha).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((fast.beta - slow.beta).cwiseAbs().maxCoeff() < 1e-13);

    // and against an explicit per-entry product
    const Eigen::MatrixXcd eff = net.effective();
    CHECK((fast.alpha - eff * block.alpha).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("identity propagation preserves the inputs") {
    SqueezerBank bank = SqueezerBank::uniform(2, 0.4);
    Rng rng(4, 1);
    InputBlock block = sample_inputs(bank, 32, rng);
    TransmissionMatrix id{Eigen::MatrixXcd::Identity(2, 2), 1.0};
    TrajectoryBlock out = propagate(block, id);
    CHECK((out.alpha - block.alpha).cwiseAbs().maxCoeff() == 0.0);
    CHECK((out.beta - block.beta).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("trajectories are reproducible and independent of access order") {
    SqueezerBank bank = SqueezerBank::uniform(4, 0.5);
    TransmissionMatrix net = haar_unitary(4, 8);
    EnsemblePlan plan{50, 8, 77};
    PhaseSpaceEnsemble ens(bank, net, plan);

    TrajectoryBlock t3 = ens.trajectory(3);
    ens.trajectory(0);
    ens.trajectory(7);
    TrajectoryBlock t3_again = ens.trajectory(3);
    CHECK((t3.alpha - t3_again.alpha).cwiseAbs().maxCoeff() == 0.0);
    CHECK((t3.beta - t3_again.beta).cwiseAbs().maxCoeff() == 0.0);

    TrajectoryBlock t4 = ens.trajectory(4);
    CHECK((t3.alpha - t4.alpha).cwiseAbs().maxCoeff() > 1e-6);
}

TEST_CASE("mode moments match the loss-scaled photon number") {
    const double r = 0.5, t_amp = 0.6;
    SqueezerBank bank = SqueezerBank::uniform(6, r);
    TransmissionMatrix net = apply_uniform_loss(haar_unitary(6, 15), t_amp);
    EnsemblePlan plan{500, 400, 19};
    PhaseSpaceEnsemble ens(bank, net, plan);
    ModeMoments mom = mode_moments(ens);

    const double expect = t_amp * t_amp * std::sinh(r) * std::sinh(r);
    for (int j = 0; j < 6; ++j) {
        CHECK(std::abs(mom.mean[j] - expect) < 5.0 * mom.sigma_T[j]);
        CHECK(mom.sigma_T[j] > 0.0);
        CHECK(mom.second_moment[j] > 0.0);
    }
}

TEST_CASE("thermal second moments follow the Bose statistics") {
    const double r = 0.5;
    SqueezerBank bank = SqueezerBank::uniform(8, r, 1.0);
    TransmissionMatrix net = haar_unitary(8, 33);
    EnsemblePlan plan{500, 400, 23};
    PhaseSpaceEnsemble ens(bank, net, plan);
    ModeMoments mom = mode_moments(ens);
    const double n = std::sinh(r) * std::sinh(r);
    // thermal output: <n^2> = 2 nbar^2 + nbar
    const double expect = 2.0 * n * n + n;
    for (int j = 0; j < 8; ++j)
        CHECK(mom.second_moment[j] == doctest::Approx(expect).epsilon(0.05));
}

TEST_CASE("moments are bitwise deterministic across runs") {
    SqueezerBank bank = SqueezerBank::uniform(3, 0.3);
    TransmissionMatrix net = haar_unitary(3, 5);
    EnsemblePlan plan{100, 40, 55};
    ModeMoments a = mode_moments(PhaseSpaceEnsemble(bank, net, plan));
    ModeMoments b = mode_moments(PhaseSpaceEnsemble(bank, net, plan));
    CHECK((a.mean - b.mean).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.sigma_T - b.sigma_T).cwiseAbs().maxCoeff() == 0.0);
}
