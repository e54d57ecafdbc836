#include "doctest.h"
#include "test_helpers.hpp"

#include "subdiff/subdiff.h"

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

using testutil::rel_err;

TEST_CASE("version and status names") {
    CHECK(std::string(sd_version()) == "1.0.0");
    CHECK(std::string(sd_status_name(SD_OK)) == "ok");
    CHECK(std::string(sd_status_name(SD_ERR_UNSOLVABLE)) == "unsolvable");
    CHECK(std::string(sd_status_name(SD_ERR_ACCURACY)) == "accuracy not certified");
}

TEST_CASE("special function entry points") {
    double v = 0.0;
    REQUIRE(sd_gamma(0.5, &v) == SD_OK);
    CHECK(rel_err(v, std::sqrt(std::acos(-1.0))) <= 1e-13);

    CHECK(sd_gamma(-1.0, &v) == SD_ERR_DOMAIN);
    CHECK(std::strlen(sd_last_error()) > 0);

    REQUIRE(sd_ml_eval(1.0, 1.0, -2.0, &v) == SD_OK);
    CHECK(rel_err(v, std::exp(-2.0)) <= 1e-12);
    CHECK(sd_last_error()[0] == '\0');  // success clears the message

    double est = -1.0;
    int route = -1;
    REQUIRE(sd_ml_eval_info(0.5, 1.0, -9.0, &v, &est, &route) == SD_OK);
    CHECK(rel_err(v, std::exp(81.0) * std::erfc(9.0)) <= 1e-10);
    CHECK(est >= 0.0);
    CHECK(est <= 1e-10);
    CHECK((route >= 0 && route <= 3));

    CHECK(sd_ml_eval(0.5, 1.0, std::nan(""), &v) == SD_ERR_INVALID);
    CHECK(sd_ml_eval(2.0, 1.0, -1.0, &v) == SD_ERR_INVALID);
    CHECK(sd_ml_eval(0.5, 1.0, -1.0, nullptr) == SD_ERR_INVALID);

    REQUIRE(sd_ml_asymptotic_leading(0.5, 1.0, 1e8, &v) == SD_OK);
    double full = 0.0;
    REQUIRE(sd_ml_eval(0.5, 1.0, -1e8, &full) == SD_OK);
    CHECK(rel_err(full, v) <= 1e-4);
}

TEST_CASE("operator handles") {
    sd_operator* op = nullptr;
    REQUIRE(sd_operator_dirichlet_1d(1.0, 4, &op) == SD_OK);
    REQUIRE(op != nullptr);
    CHECK(sd_operator_size(op) == 4);
    CHECK(sd_operator_has_eigenfunctions(op) == 1);
    double lam = 0.0;
    REQUIRE(sd_operator_eigenvalue(op, 2, &lam) == SD_OK);
    double pi = std::acos(-1.0);
    CHECK(rel_err(lam, 4.0 * pi * pi) <= 1e-14);
    CHECK(sd_operator_eigenvalue(op, 0, &lam) == SD_ERR_INVALID);
    CHECK(sd_operator_eigenvalue(op, 5, &lam) == SD_ERR_INVALID);
    double vx = 0.0;
    REQUIRE(sd_operator_eigenfunction(op, 1, 0.5, &vx) == SD_OK);
    CHECK(rel_err(vx, std::sqrt(2.0)) <= 1e-14);  // sqrt(2/L) sin(pi/2), L = 1
    sd_operator_free(op);

    double bad[] = {2.0, 1.0};
    sd_operator* op2 = nullptr;
    CHECK(sd_operator_explicit(bad, 2, &op2) == SD_ERR_INVALID);
    CHECK(op2 == nullptr);

    double good[] = {1.0, 4.0};
    REQUIRE(sd_operator_explicit(good, 2, &op2) == SD_OK);
    CHECK(sd_operator_has_eigenfunctions(op2) == 0);
    CHECK(sd_operator_eigenfunction(op2, 1, 0.5, &vx) == SD_ERR_LOGIC);
    sd_operator_free(op2);
}

TEST_CASE("projection of sampled physical data") {
    sd_operator* op = nullptr;
    double pi = std::acos(-1.0);
    REQUIRE(sd_operator_dirichlet_1d(pi, 4, &op) == SD_OK);
    int n = 2049;
    std::vector<double> samples(static_cast<size_t>(n));
    double amp = std::sqrt(2.0 / pi);
    for (int i = 0; i < n; ++i) {
        double x = pi * i / (n - 1.0);
        samples[size_t(i)] = amp * std::sin(2.0 * x);  // the second eigenfunction
    }
    double coeffs[4] = {0, 0, 0, 0};
    REQUIRE(sd_project_sampled(op, samples.data(), n, 0, coeffs) == SD_OK);
    CHECK(std::abs(coeffs[0]) <= 1e-8);
    CHECK(std::abs(coeffs[1] - 1.0) <= 1e-8);
    CHECK(std::abs(coeffs[2]) <= 1e-8);
    CHECK(std::abs(coeffs[3]) <= 1e-8);

    double few[] = {0.0};
    CHECK(sd_project_sampled(op, few, 1, 0, coeffs) == SD_ERR_INVALID);
    sd_operator_free(op);

    double eig[] = {1.0, 2.0};
    sd_operator* noeig = nullptr;
    REQUIRE(sd_operator_explicit(eig, 2, &noeig) == SD_OK);
    CHECK(sd_project_sampled(noeig, samples.data(), n, 0, coeffs) == SD_ERR_INVALID);
    sd_operator_free(noeig);
}

TEST_CASE("profile handles") {
    sd_profile* g = nullptr;
    REQUIRE(sd_profile_linear(1.0, -3.0, 1.0, &g) == SD_OK);
    double v = 0.0;
    REQUIRE(sd_profile_eval(g, 0.5, &v) == SD_OK);
    CHECK(v == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(sd_profile_eval(g, 2.0, &v) == SD_ERR_INVALID);
    sd_profile_free(g);

    double samples[] = {1.0, 0.5, 0.25, 0.125, 0.0625};
    sd_profile* gs = nullptr;
    REQUIRE(sd_profile_sampled(samples, 5, 2.0, &gs) == SD_OK);
    REQUIRE(sd_profile_eval(gs, 1.0, &v) == SD_OK);
    CHECK(v == doctest::Approx(0.25).epsilon(1e-12));  // knot value
    sd_profile_free(gs);

    sd_profile* bad = nullptr;
    CHECK(sd_profile_sampled(samples, 1, 1.0, &bad) == SD_ERR_INVALID);
    CHECK(sd_profile_const(1.0, -1.0, &bad) == SD_ERR_INVALID);
}

TEST_CASE("kernel entry points against closed forms") {
    sd_profile* g = nullptr;
    REQUIRE(sd_profile_const(1.0, 1.0, &g) == SD_OK);
    double v = 0.0;
    REQUIRE(sd_convolve_source(1.0, 2.0, g, 1.0, nullptr, &v) == SD_OK);
    CHECK(rel_err(v, 0.5 * (1.0 - std::exp(-2.0))) <= 1e-10);

    REQUIRE(sd_kernel_p(1.0, 1.0, g, 1.0, nullptr, &v) == SD_OK);
    CHECK(rel_err(v, std::exp(-1.0)) <= 1e-10);

    sd_quadrature q;
    sd_quadrature_default(&q);
    CHECK(q.panels == 16);
    CHECK(q.nodes_per_panel == 12);
    CHECK(q.grading_exponent == 0.0);
    REQUIRE(sd_kernel_p(1.0, 1.0, g, 1.0, &q, &v) == SD_OK);
    CHECK(rel_err(v, std::exp(-1.0)) <= 1e-10);

    double psi_k = 0.0;
    REQUIRE(sd_psi_coefficient(1.0, 2.0, 1.0, 0.7, -1.3, g, nullptr, &psi_k) == SD_OK);
    double decay = (1.0 - std::exp(-2.0)) / 2.0;
    double p = (1.0 - (1.0 - std::exp(-2.0)) / 2.0) / 2.0;
    CHECK(rel_err(psi_k, 0.7 * decay - 1.3 * p) <= 1e-10);

    CHECK(sd_convolve_source(0.5, 1.0, g, 0.0, nullptr, &v) == SD_ERR_INVALID);
    CHECK(sd_convolve_source(0.5, 1.0, nullptr, 0.5, nullptr, &v) == SD_ERR_INVALID);
    sd_profile_free(g);
}

TEST_CASE("forward solve through the C interface") {
    sd_operator* op = nullptr;
    double eig[] = {2.0};
    REQUIRE(sd_operator_explicit(eig, 1, &op) == SD_OK);
    sd_profile* g = nullptr;
    REQUIRE(sd_profile_const(1.0, 1.0, &g) == SD_OK);

    double phi[] = {1.0};
    double f[] = {0.0};
    double times[] = {0.0, 0.25, 0.5, 1.0};
    double u[4] = {0, 0, 0, 0};
    REQUIRE(sd_solve_forward(1.0, 1.0, op, phi, f, g, nullptr, times, 4, u) == SD_OK);
    CHECK(u[0] == 1.0);
    for (int i = 1; i < 4; ++i) {
        CHECK(rel_err(u[i], std::exp(-2.0 * times[i])) <= 1e-10);
    }

    double psi = 0.0;
    REQUIRE(sd_integrate_trajectory(1.0, 1.0, op, phi, f, g, nullptr, &psi) == SD_OK);
    CHECK(rel_err(psi, (1.0 - std::exp(-2.0)) / 2.0) <= 1e-10);
    double psi_q = 0.0;
    REQUIRE(sd_integrate_trajectory_quadrature(1.0, 1.0, op, phi, f, g, nullptr,
                                               &psi_q) == SD_OK);
    CHECK(rel_err(psi_q, psi) <= 1e-6);

    double res = 0.0;
    REQUIRE(sd_residual_per_mode(1.0, 1.0, op, phi, f, g, nullptr, 64, &res) == SD_OK);
    CHECK(res < 1e-2);

    CHECK(sd_solve_forward(1.0, 1.0, op, phi, f, g, nullptr, times, 0, u) ==
          SD_ERR_INVALID);
    sd_profile_free(g);
    sd_operator_free(op);
}

TEST_CASE("derivative helper through the C interface") {
    int n = 65;
    std::vector<double> t(static_cast<size_t>(n)), y(static_cast<size_t>(n)), d(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        t[size_t(i)] = i / (n - 1.0);
        y[size_t(i)] = t[size_t(i)];
    }
    REQUIRE(sd_caputo_l1(t.data(), y.data(), n, 0.5, d.data()) == SD_OK);
    CHECK(d[0] == 0.0);
    double g15 = 0.0;
    REQUIRE(sd_gamma(1.5, &g15) == SD_OK);
    CHECK(std::abs(d[32] - std::sqrt(0.5) / g15) <= 1e-3);
    CHECK(sd_caputo_l1(t.data(), y.data(), 2, 0.5, d.data()) == SD_ERR_INVALID);
}

TEST_CASE("inverse solve roundtrip through the C interface") {
    double pi = std::acos(-1.0);
    sd_operator* op = nullptr;
    REQUIRE(sd_operator_dirichlet_1d(pi, 6, &op) == SD_OK);
    sd_profile* g = nullptr;
    REQUIRE(sd_profile_const(1.0, 1.0, &g) == SD_OK);

    std::vector<double> phi(6), f_true(6), psi(6);
    for (int k = 1; k <= 6; ++k) {
        phi[size_t(k - 1)] = 1.0 / (k * k);
        f_true[size_t(k - 1)] = (k % 2 ? 1.0 : -0.5) / k;
    }
    REQUIRE(sd_integrate_trajectory(0.5, 1.0, op, phi.data(), f_true.data(), g,
                                    nullptr, psi.data()) == SD_OK);

    sd_inverse_result* r = nullptr;
    REQUIRE(sd_solve_inverse(0.5, 1.0, op, phi.data(), psi.data(), g, nullptr, 0.0,
                             -1.0, nullptr, nullptr, 0, &r) == SD_OK);
    REQUIRE(r != nullptr);
    CHECK(sd_inverse_solvable(r) == 1);
    CHECK(sd_inverse_size(r) == 6);
    CHECK(sd_inverse_kernel_count(r) == 0);
    std::vector<double> f_rec(6);
    REQUIRE(sd_inverse_coeffs(r, f_rec.data()) == SD_OK);
    for (int k = 0; k < 6; ++k) {
        CHECK(rel_err(f_rec[size_t(k)], f_true[size_t(k)]) <= 1e-9);
    }
    double tol = 0.0;
    REQUIRE(sd_inverse_tol_solv(r, &tol) == SD_OK);
    CHECK(tol > 0.0);
    double pv = 0.0, thr = 0.0;
    REQUIRE(sd_inverse_p_value(r, 1, &pv) == SD_OK);
    REQUIRE(sd_inverse_threshold(r, 1, &thr) == SD_OK);
    CHECK(std::abs(pv) > thr);
    CHECK(sd_inverse_in_kernel(r, 1) == 0);
    double res = 0.0;
    CHECK(sd_inverse_residual(r, 1, &res) == SD_ERR_INVALID);  // not a kernel mode
    sd_inverse_free(r);

    // an inconsistent instance: solvable stays an ordinary outcome
    // (kernel modes only appear with engineered g; here perturbing psi on a
    // nonzero mode just shifts f, so instead check error paths)
    sd_inverse_result* r2 = nullptr;
    CHECK(sd_solve_inverse(0.5, 1.0, op, phi.data(), psi.data(), g, nullptr, 0.0,
                           -1.0, nullptr, nullptr, -1, &r2) == SD_ERR_INVALID);
    sd_profile_free(g);
    sd_operator_free(op);
}

TEST_CASE("builtin property suite passes in quick mode") {
    int failed = -1;
    std::vector<char> buf(4096);
    REQUIRE(sd_selftest(1, &failed, buf.data(), int(buf.size())) == SD_OK);
    CHECK(failed == 0);
    std::string report(buf.data());
    CHECK(report.find("PASS") != std::string::npos);
    CHECK(report.find("FAIL") == std::string::npos);
}
