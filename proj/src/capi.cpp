#include "subdiff/subdiff.h"

#include "errors.hpp"
#include "forward_solver.hpp"
#include "inverse_solver.hpp"
#include "kernel.hpp"
#include "selftest.hpp"
#include "special_functions.hpp"
#include "spectral_space.hpp"
#include "time_profile.hpp"

#include <algorithm>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

namespace {

thread_local std::string g_last_error;

sd_status fail(sd_status s, const char* what) {
    g_last_error = what ? what : "";
    return s;
}

template <typename Fn>
sd_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return SD_OK;
    } catch (const subdiff::AccuracyError& e) {
        return fail(SD_ERR_ACCURACY, e.what());
    } catch (const std::domain_error& e) {
        return fail(SD_ERR_DOMAIN, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(SD_ERR_INVALID, e.what());
    } catch (const std::out_of_range& e) {
        return fail(SD_ERR_INVALID, e.what());
    } catch (const std::logic_error& e) {
        return fail(SD_ERR_LOGIC, e.what());
    } catch (const std::bad_alloc&) {
        return fail(SD_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(SD_ERR_INTERNAL, e.what());
    }
}

sd_status require(bool cond, const char* what) {
    return cond ? SD_OK : fail(SD_ERR_INVALID, what);
}

subdiff::QuadratureRule to_rule(const sd_quadrature* q) {
    subdiff::QuadratureRule r;
    if (q) {
        r.panels = q->panels;
        r.nodes_per_panel = q->nodes_per_panel;
        r.grading_exponent = q->grading_exponent;
    }
    return r;
}

subdiff::SpectralVector to_vec(const double* data, int K) {
    subdiff::SpectralVector v;
    v.coeffs.assign(data, data + K);
    return v;
}

} // namespace

struct sd_operator {
    subdiff::SpectralOperator op;
};

struct sd_profile {
    subdiff::TimeProfile g;
};

struct sd_inverse_result {
    subdiff::ModePartition part;
    subdiff::InverseSolution sol;
    int K;
};

namespace {

sd_status make_profile(sd_profile** out, subdiff::TimeProfile (*maker)(double, double),
                       double a, double T) {
    if (sd_status s = require(out != nullptr, "profile: out is null")) return s;
    *out = nullptr;
    return guarded([&] { *out = new sd_profile{maker(a, T)}; });
}

sd_status build_forward(double rho, double T, const sd_operator* op, const double* phi,
                        const double* f, const sd_profile* g, const sd_quadrature* q,
                        subdiff::ForwardProblem& pb) {
    if (sd_status s = require(op && phi && f && g, "forward: bad arguments")) return s;
    pb.rho = rho;
    pb.T = T;
    pb.op = op->op;
    pb.phi = to_vec(phi, op->op.size());
    pb.f = to_vec(f, op->op.size());
    pb.g = g->g;
    pb.rule = to_rule(q);
    return SD_OK;
}

} // namespace

extern "C" {

const char* sd_version(void) { return "1.0.0"; }

const char* sd_status_name(sd_status s) {
    switch (s) {
        case SD_OK: return "ok";
        case SD_ERR_INVALID: return "invalid argument";
        case SD_ERR_DOMAIN: return "domain error";
        case SD_ERR_ACCURACY: return "accuracy not certified";
        case SD_ERR_UNSOLVABLE: return "unsolvable";
        case SD_ERR_LOGIC: return "call sequence error";
        case SD_ERR_INTERNAL: return "internal error";
    }
    return "unknown";
}

const char* sd_last_error(void) { return g_last_error.c_str(); }

sd_status sd_gamma(double x, double* out) {
    if (sd_status s = require(out != nullptr, "sd_gamma: out is null")) return s;
    return guarded([&] { *out = subdiff::gamma_fn(x); });
}

sd_status sd_ml_eval(double rho, double mu, double z, double* out) {
    if (sd_status s = require(out != nullptr, "sd_ml_eval: out is null")) return s;
    return guarded([&] { *out = subdiff::ml_eval({rho, mu}, z); });
}

sd_status sd_ml_eval_info(double rho, double mu, double z, double* value,
                          double* est_rel_err, int* route) {
    if (sd_status s = require(value != nullptr, "sd_ml_eval_info: value is null"))
        return s;
    return guarded([&] {
        subdiff::MLResult r = subdiff::ml_eval_info({rho, mu}, z);
        *value = r.value;
        if (est_rel_err) *est_rel_err = r.est_rel_err;
        if (route) *route = int(r.route);
    });
}

sd_status sd_ml_asymptotic_leading(double rho, double mu, double t, double* out) {
    if (sd_status s = require(out != nullptr, "sd_ml_asymptotic_leading: out is null"))
        return s;
    return guarded([&] { *out = subdiff::ml_asymptotic_leading({rho, mu}, t); });
}

void sd_quadrature_default(sd_quadrature* q) {
    if (!q) return;
    subdiff::QuadratureRule r;
    q->panels = r.panels;
    q->nodes_per_panel = r.nodes_per_panel;
    q->grading_exponent = r.grading_exponent;
}

sd_status sd_operator_dirichlet_1d(double length, int K, sd_operator** out) {
    if (sd_status s = require(out != nullptr, "sd_operator_dirichlet_1d: out is null"))
        return s;
    *out = nullptr;
    return guarded([&] {
        *out = new sd_operator{subdiff::dirichlet_laplacian_1d(length, K)};
    });
}

sd_status sd_operator_explicit(const double* eigenvalues, int K, sd_operator** out) {
    if (sd_status s = require(out && eigenvalues && K >= 1,
                              "sd_operator_explicit: bad arguments"))
        return s;
    *out = nullptr;
    return guarded([&] {
        *out = new sd_operator{subdiff::explicit_operator(
            std::vector<double>(eigenvalues, eigenvalues + K))};
    });
}

int sd_operator_size(const sd_operator* op) { return op ? op->op.size() : 0; }

sd_status sd_operator_eigenvalue(const sd_operator* op, int k, double* out) {
    if (sd_status s = require(op && out && k >= 1 && k <= op->op.size(),
                              "sd_operator_eigenvalue: bad arguments"))
        return s;
    *out = op->op.lambda(k);
    g_last_error.clear();
    return SD_OK;
}

sd_status sd_operator_eigenfunction(const sd_operator* op, int k, double x,
                                    double* out) {
    if (sd_status s = require(op && out && k >= 1 && k <= op->op.size(),
                              "sd_operator_eigenfunction: bad arguments"))
        return s;
    if (!op->op.has_eigenfunctions())
        return fail(SD_ERR_LOGIC, "operator has no eigenfunction evaluator");
    return guarded([&] { *out = op->op.eigenfunction(k, x); });
}

int sd_operator_has_eigenfunctions(const sd_operator* op) {
    return (op && op->op.has_eigenfunctions()) ? 1 : 0;
}

void sd_operator_free(sd_operator* op) { delete op; }

sd_status sd_project_sampled(const sd_operator* op, const double* values, int n,
                             int quad_nodes, double* out) {
    if (sd_status s = require(op && values && out, "sd_project_sampled: bad arguments"))
        return s;
    if (sd_status s = require(n >= 2, "sd_project_sampled: need at least 2 samples"))
        return s;
    if (sd_status s = require(op->op.has_eigenfunctions(),
                              "sd_project_sampled: operator has no eigenfunction evaluator"))
        return s;
    return guarded([&] {
        const int K = op->op.size();
        if (quad_nodes <= 0) quad_nodes = std::max(1024, 32 * K);
        // Reuse the spline interpolant of the time-profile machinery; the
        // sample grid spans [0, domain_length] here instead of [0, T].
        subdiff::TimeProfile h = subdiff::TimeProfile::sampled(
            std::vector<double>(values, values + size_t(n)), op->op.domain_length);
        auto pr = subdiff::project(
            op->op, [&](double x) { return h(x); }, quad_nodes);
        for (int k = 1; k <= K; ++k) out[k - 1] = pr.v[k];
    });
}

sd_status sd_profile_const(double c, double T, sd_profile** out) {
    return make_profile(out, subdiff::profile_const, c, T);
}

sd_status sd_profile_linear(double a, double b, double T, sd_profile** out) {
    if (sd_status s = require(out != nullptr, "sd_profile_linear: out is null"))
        return s;
    *out = nullptr;
    return guarded([&] { *out = new sd_profile{subdiff::profile_linear(a, b, T)}; });
}

sd_status sd_profile_exp_decay(double rate, double T, sd_profile** out) {
    return make_profile(out, subdiff::profile_exp_decay, rate, T);
}

sd_status sd_profile_cosine(double omega, double T, sd_profile** out) {
    return make_profile(out, subdiff::profile_cosine, omega, T);
}

sd_status sd_profile_affine_exp(double beta, double T, sd_profile** out) {
    return make_profile(out, subdiff::profile_affine_exp, beta, T);
}

sd_status sd_profile_sampled(const double* values, int n, double T, sd_profile** out) {
    if (sd_status s = require(out && values && n >= 2,
                              "sd_profile_sampled: bad arguments"))
        return s;
    *out = nullptr;
    return guarded([&] {
        *out = new sd_profile{
            subdiff::TimeProfile::sampled(std::vector<double>(values, values + n), T)};
    });
}

sd_status sd_profile_eval(const sd_profile* g, double t, double* out) {
    if (sd_status s = require(g && out, "sd_profile_eval: bad arguments")) return s;
    return guarded([&] { *out = (g->g)(t); });
}

void sd_profile_free(sd_profile* g) { delete g; }

sd_status sd_convolve_source(double rho, double lambda, const sd_profile* g,
                             double t, const sd_quadrature* q, double* out) {
    if (sd_status s = require(g && out, "sd_convolve_source: bad arguments")) return s;
    return guarded([&] {
        *out = subdiff::convolve_source(rho, lambda, g->g, t, to_rule(q));
    });
}

sd_status sd_kernel_p(double rho, double lambda, const sd_profile* g, double T,
                      const sd_quadrature* q, double* out) {
    if (sd_status s = require(g && out, "sd_kernel_p: bad arguments")) return s;
    return guarded([&] { *out = subdiff::kernel_p(rho, lambda, g->g, T, to_rule(q)); });
}

sd_status sd_psi_coefficient(double rho, double lambda, double T, double phi_k,
                             double f_k, const sd_profile* g,
                             const sd_quadrature* q, double* out) {
    if (sd_status s = require(g && out, "sd_psi_coefficient: bad arguments")) return s;
    return guarded([&] {
        *out = subdiff::psi_coefficient(rho, lambda, T, phi_k, f_k, g->g, to_rule(q));
    });
}

sd_status sd_solve_forward(double rho, double T, const sd_operator* op,
                           const double* phi, const double* f, const sd_profile* g,
                           const sd_quadrature* q, const double* times, int n_times,
                           double* u) {
    subdiff::ForwardProblem pb;
    if (sd_status s = build_forward(rho, T, op, phi, f, g, q, pb)) return s;
    if (sd_status s = require(times && u && n_times >= 1,
                              "sd_solve_forward: bad time grid"))
        return s;
    return guarded([&] {
        std::vector<double> ts(times, times + n_times);
        auto traj = subdiff::solve_forward(pb, ts);
        int K = pb.op.size();
        for (int i = 0; i < n_times; ++i)
            std::memcpy(u + size_t(i) * K, traj[size_t(i)].coeffs.data(),
                        sizeof(double) * size_t(K));
    });
}

sd_status sd_integrate_trajectory(double rho, double T, const sd_operator* op,
                                  const double* phi, const double* f,
                                  const sd_profile* g, const sd_quadrature* q,
                                  double* psi_out) {
    subdiff::ForwardProblem pb;
    if (sd_status s = build_forward(rho, T, op, phi, f, g, q, pb)) return s;
    if (sd_status s = require(psi_out != nullptr, "sd_integrate_trajectory: out is null"))
        return s;
    return guarded([&] {
        subdiff::SpectralVector psi = subdiff::integrate_trajectory(pb);
        std::memcpy(psi_out, psi.coeffs.data(), sizeof(double) * psi.coeffs.size());
    });
}

sd_status sd_integrate_trajectory_quadrature(double rho, double T,
                                             const sd_operator* op, const double* phi,
                                             const double* f, const sd_profile* g,
                                             const sd_quadrature* q, double* psi_out) {
    subdiff::ForwardProblem pb;
    if (sd_status s = build_forward(rho, T, op, phi, f, g, q, pb)) return s;
    if (sd_status s = require(psi_out != nullptr,
                              "sd_integrate_trajectory_quadrature: out is null"))
        return s;
    return guarded([&] {
        subdiff::SpectralVector psi = subdiff::integrate_trajectory_quadrature(pb);
        std::memcpy(psi_out, psi.coeffs.data(), sizeof(double) * psi.coeffs.size());
    });
}

sd_status sd_caputo_l1(const double* t, const double* y, int n, double rho,
                       double* d_out) {
    if (sd_status s = require(t && y && d_out && n >= 3, "sd_caputo_l1: bad arguments"))
        return s;
    return guarded([&] {
        std::vector<double> tv(t, t + n), yv(y, y + n);
        std::vector<double> d = subdiff::caputo_l1(tv, yv, rho);
        std::memcpy(d_out, d.data(), sizeof(double) * d.size());
    });
}

sd_status sd_residual_per_mode(double rho, double T, const sd_operator* op,
                               const double* phi, const double* f,
                               const sd_profile* g, const sd_quadrature* q,
                               int grid_size, double* res_out) {
    subdiff::ForwardProblem pb;
    if (sd_status s = build_forward(rho, T, op, phi, f, g, q, pb)) return s;
    if (sd_status s = require(res_out != nullptr, "sd_residual_per_mode: out is null"))
        return s;
    return guarded([&] {
        std::vector<double> r = subdiff::residual_per_mode(pb, grid_size);
        std::memcpy(res_out, r.data(), sizeof(double) * r.size());
    });
}

sd_status sd_solve_inverse(double rho, double T, const sd_operator* op,
                           const double* phi, const double* psi, const sd_profile* g,
                           const sd_quadrature* q, double eps_b, double tol_solv,
                           const int* free_idx, const double* free_val, int n_free,
                           sd_inverse_result** out) {
    if (sd_status s = require(op && phi && psi && g && out,
                              "sd_solve_inverse: bad arguments"))
        return s;
    if (sd_status s = require(n_free == 0 || (free_idx && free_val),
                              "sd_solve_inverse: free values without indices"))
        return s;
    *out = nullptr;
    return guarded([&] {
        subdiff::InverseProblem pb;
        pb.rho = rho;
        pb.T = T;
        pb.op = op->op;
        pb.phi = to_vec(phi, op->op.size());
        pb.psi = to_vec(psi, op->op.size());
        pb.g = g->g;
        pb.rule = to_rule(q);
        if (eps_b <= 0.0) eps_b = subdiff::kDefaultEpsB;
        subdiff::ModePartition part = subdiff::partition_modes(pb, eps_b);
        std::map<int, double> fv;
        for (int i = 0; i < n_free; ++i) fv[free_idx[i]] = free_val[i];
        subdiff::InverseSolution sol =
            subdiff::solve_inverse(pb, part, n_free ? &fv : nullptr, tol_solv);
        *out = new sd_inverse_result{std::move(part), std::move(sol), op->op.size()};
    });
}

int sd_inverse_solvable(const sd_inverse_result* r) {
    return (r && r->sol.solvable) ? 1 : 0;
}

int sd_inverse_size(const sd_inverse_result* r) { return r ? r->K : 0; }

int sd_inverse_kernel_count(const sd_inverse_result* r) {
    return r ? int(r->part.kernel.size()) : 0;
}

sd_status sd_inverse_coeffs(const sd_inverse_result* r, double* f_out) {
    if (sd_status s = require(r && f_out, "sd_inverse_coeffs: bad arguments")) return s;
    if (!r->sol.solvable)
        return fail(SD_ERR_UNSOLVABLE,
                    "inverse instance failed the solvability condition");
    std::memcpy(f_out, r->sol.f.coeffs.data(), sizeof(double) * size_t(r->K));
    g_last_error.clear();
    return SD_OK;
}

sd_status sd_inverse_p_value(const sd_inverse_result* r, int k, double* out) {
    if (sd_status s = require(r && out && k >= 1 && k <= r->K,
                              "sd_inverse_p_value: bad arguments"))
        return s;
    *out = r->part.p_values[size_t(k - 1)];
    g_last_error.clear();
    return SD_OK;
}

sd_status sd_inverse_threshold(const sd_inverse_result* r, int k, double* out) {
    if (sd_status s = require(r && out && k >= 1 && k <= r->K,
                              "sd_inverse_threshold: bad arguments"))
        return s;
    *out = r->part.thresholds[size_t(k - 1)];
    g_last_error.clear();
    return SD_OK;
}

int sd_inverse_in_kernel(const sd_inverse_result* r, int k) {
    return (r && k >= 1 && k <= r->K && r->part.in_kernel(k)) ? 1 : 0;
}

sd_status sd_inverse_residual(const sd_inverse_result* r, int k, double* out) {
    if (sd_status s = require(r && out && k >= 1 && k <= r->K,
                              "sd_inverse_residual: bad arguments"))
        return s;
    for (const auto& e : r->sol.report) {
        if (e.k == k) {
            *out = e.residual;
            g_last_error.clear();
            return SD_OK;
        }
    }
    return fail(SD_ERR_INVALID, "sd_inverse_residual: mode is not a kernel mode");
}

sd_status sd_inverse_tol_solv(const sd_inverse_result* r, double* out) {
    if (sd_status s = require(r && out, "sd_inverse_tol_solv: bad arguments")) return s;
    *out = r->sol.tol_solv;
    g_last_error.clear();
    return SD_OK;
}

void sd_inverse_free(sd_inverse_result* r) { delete r; }

sd_status sd_selftest(int quick, int* n_failed, char* report_buf, int buf_len) {
    return guarded([&] {
        subdiff::SelfTestReport rep = subdiff::run_selftest(quick != 0);
        int failed = 0;
        for (const auto& e : rep.entries)
            if (!e.pass) ++failed;
        if (n_failed) *n_failed = failed;
        if (report_buf && buf_len > 0) {
            std::string text = rep.to_text();
            size_t n = std::min(size_t(buf_len - 1), text.size());
            std::memcpy(report_buf, text.data(), n);
            report_buf[n] = '\0';
        }
    });
}

} // extern "C"
