#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gbsval/linear_network.hpp"

#include <cmath>
#include <cstdio>
#include <string>

using namespace gbsval;

namespace {

std::string temp_path(const char* name) {
    return std::string("/tmp/gbsval_test_") + name;
}

} // namespace

TEST_CASE("squeezer bank derived quantities") {
    SqueezerBank bank = SqueezerBank::uniform(3, 0.89);
    const double n = std::sinh(0.89) * std::sinh(0.89);
    const double mt = std::cosh(0.89) * std::sinh(0.89);
    for (int j = 0; j < 3; ++j) {
        CHECK(bank.mean_photons(j) == doctest::Approx(n).epsilon(1e-14));
        CHECK(bank.coherence(j) == doctest::Approx(mt).epsilon(1e-14));
        CHECK(bank.var_x(j) ==
              doctest::Approx(std::exp(2.0 * 0.89) - 1.0).epsilon(1e-13));
        CHECK(bank.var_y(j) ==
              doctest::Approx(std::exp(-2.0 * 0.89) - 1.0).epsilon(1e-13));
    }
}

TEST_CASE("thermalization scales the coherence only") {
    SqueezerBank bank = SqueezerBank::uniform(2, 0.5, 0.3);
    CHECK(bank.mean_photons(0) ==
          doctest::Approx(std::sinh(0.5) * std::sinh(0.5)).epsilon(1e-14));
    CHECK(bank.coherence(0) ==
          doctest::Approx(0.7 * std::cosh(0.5) * std::sinh(0.5)).epsilon(1e-14));
}

TEST_CASE("classicality boundary at epsilon = 1 - tanh r") {
    const double r = 0.7;
    const double eps_star = 1.0 - std::tanh(r);
    CHECK_FALSE(SqueezerBank::uniform(2, r, 0.0).classical());
    CHECK_FALSE(SqueezerBank::uniform(2, r, eps_star - 1e-6).classical());
    CHECK(SqueezerBank::uniform(2, r, eps_star + 1e-6).classical());
    CHECK(SqueezerBank::uniform(2, r, 1.0).classical());
    CHECK(SqueezerBank::uniform(2, 0.0, 0.0).classical()); // vacuum
}

TEST_CASE("squeezer bank rejects negative r and bad epsilon") {
    Eigen::VectorXd r(2);
    r << 0.5, -0.1;
    CHECK_THROWS_AS(SqueezerBank(r, 0.0), std::invalid_argument);
    Eigen::VectorXd ok(1);
    ok << 0.5;
    CHECK_THROWS_AS(SqueezerBank(ok, -0.01), std::invalid_argument);
    CHECK_THROWS_AS(SqueezerBank(ok, 1.01), std::invalid_argument);
}

TEST_CASE("haar unitary is unitary and deterministic") {
    TransmissionMatrix u = haar_unitary(12, 42);
    Eigen::MatrixXcd id = u.T.adjoint() * u.T;
    CHECK((id - Eigen::MatrixXcd::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-12);

    TransmissionMatrix v = haar_unitary(12, 42);
    CHECK((u.T - v.T).cwiseAbs().maxCoeff() == 0.0);

    TransmissionMatrix w = haar_unitary(12, 43);
    CHECK((u.T - w.T).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("haar matrix elements have the Beta(1, M-1) first moment") {
    // independent oracle: |U_ij|^2 of a Haar column is Beta(1, M-1) with
    // mean 1/M and variance (M-1)/(M^2 (M+1))
    const int m = 8;
    const int reps = 4000;
    double acc = 0.0;
    for (int s = 0; s < reps; ++s) {
        TransmissionMatrix u = haar_unitary(m, 1000 + static_cast<std::uint64_t>(s));
        acc += std::norm(u.T(0, 0));
    }
    const double mean = acc / reps;
    const double var = (m - 1.0) / (static_cast<double>(m) * m * (m + 1.0));
    const double se = std::sqrt(var / reps);
    CHECK(std::abs(mean - 1.0 / m) < 5.0 * se);
}

TEST_CASE("uniform loss scales singular values") {
    TransmissionMatrix u = haar_unitary(6, 7);
    TransmissionMatrix lossy = apply_uniform_loss(u, 0.6);
    PhysicalityCheck chk = validate_physicality(lossy);
    CHECK(chk.physical);
    for (double s : chk.singular_values) CHECK(s == doctest::Approx(0.6).epsilon(1e-10));
    CHECK_THROWS_AS(apply_uniform_loss(u, 1.2), std::invalid_argument);
    CHECK_THROWS_AS(apply_uniform_loss(u, -0.1), std::invalid_argument);
}

TEST_CASE("physicality check flags amplifying matrices") {
    TransmissionMatrix u = haar_unitary(4, 3);
    CHECK(validate_physicality(u).physical);

    TransmissionMatrix big = u;
    big.T *= 1.001;
    PhysicalityCheck chk = validate_physicality(big);
    CHECK_FALSE(chk.physical);
    CHECK(!chk.diagnostic.empty());

    // within tolerance of 1: still physical
    TransmissionMatrix edge = u;
    edge.T *= 1.0 + 1e-12;
    CHECK(validate_physicality(edge).physical);

    // t_correction participates
    TransmissionMatrix corr = u;
    corr.t_correction = 1.01;
    CHECK_FALSE(validate_physicality(corr).physical);
}

TEST_CASE("transmission matrix file round trip is exact") {
    TransmissionMatrix u = haar_unitary(5, 99);
    u.t_correction = 0.97;
    const std::string path = temp_path("matrix.txt");
    u.save(path);
    TransmissionMatrix back = TransmissionMatrix::load(path, 0.97);
    REQUIRE(back.modes() == 5);
    CHECK((u.T - back.T).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.t_correction == 0.97);
    std::remove(path.c_str());
}

TEST_CASE("squeezer file round trip is exact") {
    Eigen::VectorXd r(3);
    r << 0.1, 0.89, 1.5;
    SqueezerBank bank(r, 0.05);
    const std::string path = temp_path("r.txt");
    bank.save(path);
    SqueezerBank back = SqueezerBank::load(path, 0.05);
    REQUIRE(back.modes() == 3);
    CHECK((bank.r - back.r).cwiseAbs().maxCoeff() == 0.0);
    std::remove(path.c_str());
}

TEST_CASE("loading missing files fails loudly") {
    CHECK_THROWS(TransmissionMatrix::load("/nonexistent/matrix.txt"));
    CHECK_THROWS(SqueezerBank::load("/nonexistent/r.txt"));
}
