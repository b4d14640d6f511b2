#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tbp/jfunction.hpp"

using namespace tbp::pexit;

TEST_CASE("gauss-hermite rule invariants") {
    const auto& rule = GaussHermiteRule::standard();
    REQUIRE(rule.roots.size() == 100);
    double wsum = 0.0;
    for (double w : rule.weights) {
        CHECK(w > 0.0);
        wsum += w;
    }
    CHECK(std::abs(wsum - std::sqrt(M_PI)) < 1e-10);
    for (std::size_t i = 0; i < rule.roots.size(); ++i)
        CHECK(std::abs(rule.roots[i] + rule.roots[rule.roots.size() - 1 - i]) < 1e-10);
    // roots ascending
    for (std::size_t i = 1; i < rule.roots.size(); ++i) CHECK(rule.roots[i] > rule.roots[i - 1]);
}

TEST_CASE("j function endpoints and asymptote") {
    CHECK(j_function(0.0) == 0.0);
    // value verified against the quadrature oracle: 1 - J(10) ~ 1.24e-6
    CHECK(j_function(10.0) >= 1.0 - 2e-6);
    CHECK(std::abs(j_function(10.0) - oracle::j_quadrature(10.0)) < 1e-6);
    CHECK(j_function(40.0) == 1.0);
    CHECK_THROWS_AS(j_function(-0.1), std::domain_error);
}

TEST_CASE("j function matches direct quadrature of the capacity integral") {
    double sigma = 0.01;
    double worst = 0.0;
    for (int i = 0; i < 60; ++i) {
        const double gh = j_function(sigma);
        const double quad = oracle::j_quadrature(sigma);
        worst = std::max(worst, std::abs(gh - quad));
        sigma *= std::pow(10.0 / 0.01, 1.0 / 59.0);
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("j function is strictly increasing") {
    double prev = -1.0;
    for (double sigma = 0.0; sigma <= 12.0; sigma += 0.03) {
        const double v = j_function(sigma);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("j inverse: endpoints, round trip, oracle agreement") {
    CHECK(j_inverse(0.0) == 0.0);
    CHECK_THROWS_AS(j_inverse(1.0), std::domain_error);
    CHECK_THROWS_AS(j_inverse(-0.1), std::domain_error);

    CHECK(std::abs(j_inverse(j_function(2.5)) - 2.5) <= 1e-9);
    for (double sigma = 0.01; sigma <= 8.0; sigma *= 1.9) {
        const double back = j_inverse(j_function(sigma));
        CHECK(std::abs(back - sigma) <= 1e-9 * std::max(1.0, sigma));
    }

    const double sigma_half = j_inverse(0.5);
    CHECK(std::abs(sigma_half - oracle::j_inverse_quadrature(0.5)) < 1e-6);
    CHECK(std::abs(j_function(sigma_half) - 0.5) <= 1e-12);
}

TEST_CASE("inverse satisfies the residual contract across the range") {
    for (double mi : {1e-6, 1e-3, 0.1, 0.3, 0.7, 0.9, 0.99, 0.999999}) {
        const double sigma = j_inverse(mi);
        CHECK(std::abs(j_function(sigma) - mi) <= 1e-12);
    }
}

TEST_CASE("smaller rules are consistent with the default") {
    JFunction j20(20);
    // mu=20 is coarser; agreement only loose, but trend identical
    for (double sigma : {0.5, 1.0, 2.0, 4.0}) CHECK(std::abs(j20(sigma) - j_function(sigma)) < 1e-3);
}
