#include "doctest.h"
#include "test_helpers.hpp"

#include "quadrature.hpp"

#include <cmath>
#include <stdexcept>

using namespace subdiff;
using testutil::rel_err;

TEST_CASE("gauss rule basics") {
    for (int n : {1, 2, 5, 12, 48, 64}) {
        const GaussRule& r = gauss_legendre(n);
        REQUIRE(int(r.nodes.size()) == n);
        REQUIRE(int(r.weights.size()) == n);
        double wsum = 0.0;
        for (double w : r.weights) {
            CHECK(w > 0.0);
            wsum += w;
        }
        CHECK(rel_err(wsum, 2.0) <= 1e-14);
        // symmetry
        for (int i = 0; i < n; ++i) {
            CHECK(std::abs(r.nodes[size_t(i)] + r.nodes[size_t(n - 1 - i)]) <= 1e-14);
        }
    }
}

TEST_CASE("gauss rule is exact to degree 2n-1") {
    for (int n : {3, 8, 20}) {
        const GaussRule& r = gauss_legendre(n);
        int d = 2 * n - 2;  // highest even degree below 2n-1
        double got = 0.0;
        for (int i = 0; i < n; ++i)
            got += r.weights[size_t(i)] * std::pow(r.nodes[size_t(i)], d);
        CHECK(rel_err(got, 2.0 / (d + 1)) <= 1e-13);
        // odd powers integrate to zero
        double odd = 0.0;
        for (int i = 0; i < n; ++i)
            odd += r.weights[size_t(i)] * std::pow(r.nodes[size_t(i)], d + 1);
        CHECK(std::abs(odd) <= 1e-14);
    }
}

TEST_CASE("gauss rules are cached") {
    const GaussRule* a = &gauss_legendre(12);
    const GaussRule* b = &gauss_legendre(12);
    CHECK(a == b);
}

TEST_CASE("graded mesh integrates smooth functions to machine precision") {
    double got = integrate_graded([](double s) { return std::cos(s); }, 0.0, 1.0,
                                  4, 12, 1.0);
    CHECK(rel_err(got, std::sin(1.0)) <= 1e-14);
    got = integrate_graded([](double s) { return std::exp(-s); }, 0.0, 3.0, 8, 12, 2.0);
    CHECK(rel_err(got, 1.0 - std::exp(-3.0)) <= 1e-13);
}

TEST_CASE("graded mesh handles algebraic endpoint behavior") {
    // s^0.5 with grading 6
    double got = integrate_graded([](double s) { return std::sqrt(s); }, 0.0, 1.0,
                                  16, 12, 6.0);
    CHECK(rel_err(got, 2.0 / 3.0) <= 1e-10);
    // integrable singularity s^{-0.3} with grading 10
    got = integrate_graded([](double s) { return std::pow(s, -0.3); }, 0.0, 1.0,
                           16, 12, 10.0);
    CHECK(rel_err(got, 1.0 / 0.7) <= 1e-8);
    // shifted interval
    got = integrate_graded([](double s) { return std::sqrt(s - 2.0); }, 2.0, 3.0,
                           16, 12, 6.0);
    CHECK(rel_err(got, 2.0 / 3.0) <= 1e-10);
}

TEST_CASE("adaptive doubling converges and reports honestly") {
    QuadratureRule rule;
    rule.panels = 2;
    rule.nodes_per_panel = 8;
    QuadResult r = integrate_adaptive([](double s) { return std::sin(50.0 * s); },
                                      0.0, 1.0, rule, 1.0, 1e-12, 1e-15);
    double want = (1.0 - std::cos(50.0)) / 50.0;
    CHECK(r.converged);
    CHECK(rel_err(r.value, want) <= 1e-11);
    CHECK(std::abs(r.value - want) <= 50.0 * std::max(r.est_abs_err, 1e-16));
    CHECK(r.absmass >= std::abs(r.value) - 1e-12);
    CHECK(r.panels_used >= 2);
}

TEST_CASE("adaptive quadrature flags stalls instead of lying") {
    QuadratureRule rule;
    rule.panels = 2;
    rule.nodes_per_panel = 2;
    // strong singularity, no grading, tiny budget: must not claim convergence
    QuadResult r = integrate_adaptive(
        [](double s) { return std::pow(s, -0.9); }, 0.0, 1.0, rule, 1.0, 1e-14, 0.0, 4);
    CHECK(!r.converged);
}

TEST_CASE("rule validation") {
    QuadratureRule r;
    r.panels = 0;
    CHECK_THROWS_AS(r.validate(), std::invalid_argument);
    r = QuadratureRule{};
    r.nodes_per_panel = 1;
    CHECK_THROWS_AS(r.validate(), std::invalid_argument);
    r = QuadratureRule{};
    r.nodes_per_panel = 65;
    CHECK_THROWS_AS(r.validate(), std::invalid_argument);
    r = QuadratureRule{};
    r.grading_exponent = 0.5;
    CHECK_THROWS_AS(r.validate(), std::invalid_argument);
    r = QuadratureRule{};
    CHECK_NOTHROW(r.validate());
}

TEST_CASE("default grading exponent tracks the singularity strength") {
    QuadratureRule r;  // grading_exponent = 0: derive from rho
    CHECK(r.grading_for(1.0) == 3.0);
    CHECK(r.grading_for(0.5) == 6.0);
    CHECK(r.grading_for(0.3) == 10.0);
    CHECK(r.grading_for(0.9) == 4.0);
    r.grading_exponent = 7.0;
    CHECK(r.grading_for(0.3) == 7.0);
}
