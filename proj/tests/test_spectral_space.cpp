#include "doctest.h"
#include "test_helpers.hpp"

#include "spectral_space.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace subdiff;
using testutil::rel_err;

namespace {
const double kPi = std::acos(-1.0);
}

TEST_CASE("dirichlet laplacian eigenpairs") {
    SpectralOperator op = dirichlet_laplacian_1d(kPi, 6);
    REQUIRE(op.size() == 6);
    for (int k = 1; k <= 6; ++k) {
        CHECK(rel_err(op.lambda(k), double(k) * k) <= 1e-14);
    }
    CHECK(op.has_eigenfunctions());
    CHECK(op.domain_length == kPi);
    // L2 normalization: int_0^pi v_k^2 = 1 (midpoint scan)
    int n = 20000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = (i + 0.5) * kPi / n;
        double v = op.eigenfunction(3, x);
        s += v * v * kPi / n;
    }
    CHECK(rel_err(s, 1.0) <= 1e-6);
    // sign convention: v_k positive just right of 0
    CHECK(op.eigenfunction(1, 0.1) > 0.0);
    CHECK(op.eigenfunction(2, 0.1) > 0.0);
}

TEST_CASE("general eigenvalue length scaling") {
    SpectralOperator op = dirichlet_laplacian_1d(1.0, 3);
    CHECK(rel_err(op.lambda(1), kPi * kPi) <= 1e-14);
    CHECK(rel_err(op.lambda(3), 9.0 * kPi * kPi) <= 1e-14);
}

TEST_CASE("operator validation") {
    CHECK_THROWS_AS(explicit_operator({1.0, 0.5}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(explicit_operator({-1.0, 2.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(explicit_operator({0.0, 2.0}).validate(), std::invalid_argument);
    CHECK_NOTHROW(explicit_operator({1.0, 1.0, 2.0}).validate());  // ties allowed
    CHECK_THROWS_AS(dirichlet_laplacian_1d(-1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(dirichlet_laplacian_1d(1.0, 0), std::invalid_argument);
    SpectralOperator op = explicit_operator({1.0, 4.0});
    CHECK(!op.has_eigenfunctions());
}

TEST_CASE("projection recovers eigenfunction coefficients") {
    SpectralOperator op = dirichlet_laplacian_1d(2.0, 8);
    auto h = [&](double x) { return op.eigenfunction(3, x); };
    ProjectionResult pr = project(op, h, 256);
    CHECK(!pr.aliasing_warning);
    for (int k = 1; k <= 8; ++k) {
        double want = (k == 3) ? 1.0 : 0.0;
        CHECK(std::abs(pr.v[k] - want) <= 1e-12);
    }
}

TEST_CASE("project then reconstruct is the identity on the span") {
    SpectralOperator op = dirichlet_laplacian_1d(1.0, 10);
    std::vector<double> c = {0.7, -0.3, 0.1, 0.45, -0.2, 0.05, 0.3, -0.12, 0.08, 0.02};
    auto h = [&](double x) {
        double s = 0.0;
        for (int k = 1; k <= 10; ++k) s += c[size_t(k - 1)] * op.eigenfunction(k, x);
        return s;
    };
    ProjectionResult pr = project(op, h, 512);
    for (int k = 1; k <= 10; ++k) {
        CHECK(std::abs(pr.v[k] - c[size_t(k - 1)]) <= 1e-8);
    }
    // synthesis agrees with the original superposition pointwise
    for (double x : {0.21, 0.5, 0.837}) {
        CHECK(std::abs(reconstruct_at(op, pr.v, x) - h(x)) <= 1e-8);
    }
}

TEST_CASE("few quadrature nodes sets the aliasing flag") {
    SpectralOperator op = dirichlet_laplacian_1d(1.0, 32);
    ProjectionResult pr = project(op, [](double) { return 1.0; }, 8);
    CHECK(pr.aliasing_warning);
}

TEST_CASE("projection requires eigenfunctions") {
    SpectralOperator op = explicit_operator({1.0, 2.0});
    CHECK_THROWS_AS(project(op, [](double) { return 1.0; }, 64), std::logic_error);
    CHECK_THROWS_AS(reconstruct_at(op, SpectralVector::zeros(2), 0.5), std::logic_error);
}

TEST_CASE("fractional operator powers compose") {
    SpectralOperator op = explicit_operator({1.0, 3.0, 7.5, 22.0});
    SpectralVector v{{1.0, -2.0, 0.5, 0.25}};
    SpectralVector a = apply_power(op, 0.3, apply_power(op, 0.45, v));
    SpectralVector b = apply_power(op, 0.75, v);
    for (int k = 1; k <= 4; ++k) {
        CHECK(rel_err(a[k], b[k]) <= 1e-13);
    }
    SpectralVector id = apply_power(op, 0.0, v);
    for (int k = 1; k <= 4; ++k) CHECK(id[k] == v[k]);
    // negative powers invert
    SpectralVector inv = apply_power(op, -1.0, apply_power(op, 1.0, v));
    for (int k = 1; k <= 4; ++k) CHECK(rel_err(inv[k], v[k]) <= 1e-14);
}

TEST_CASE("graded norm by hand") {
    SpectralOperator op = explicit_operator({4.0, 9.0});
    SpectralVector v{{3.0, 2.0}};
    // tau = 1/2: sqrt(4*9 + 9*4) = sqrt(72)
    CHECK(rel_err(norm_tau(op, 0.5, v), std::sqrt(72.0)) <= 1e-14);
    CHECK(rel_err(norm_tau(op, 0.0, v), std::sqrt(13.0)) <= 1e-14);
}

TEST_CASE("tail diagnostic separates decaying from flat spectra") {
    SpectralOperator op = dirichlet_laplacian_1d(1.0, 40);
    SpectralVector dec = SpectralVector::zeros(40);
    SpectralVector flat = SpectralVector::zeros(40);
    for (int k = 1; k <= 40; ++k) {
        dec[k] = 1.0 / std::pow(op.lambda(k), 2.0);
        flat[k] = 1.0;
    }
    CHECK(tail_ratio(op, 1.0, dec) <= 1e-6);
    CHECK(tail_ratio(op, 1.0, flat) == 1.0);  // the last mode dominates
}

TEST_CASE("spectral vector indexing is one-based") {
    SpectralVector v = SpectralVector::zeros(3);
    v[1] = 5.0;
    v[3] = -1.0;
    CHECK(v.coeffs[0] == 5.0);
    CHECK(v.coeffs[2] == -1.0);
    CHECK(v.size() == 3);
}
