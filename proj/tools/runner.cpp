#include "runner.hpp"
#include "csv_output.hpp"

#include "subdiff/subdiff.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

namespace {

// failure carrying the exit code it should map to
struct RunError : std::runtime_error {
    RunError(int code, const std::string& msg) : std::runtime_error(msg), code(code) {}
    int code;
};

int code_for(sd_status s) {
    switch (s) {
        case SD_OK: return kExitOk;
        case SD_ERR_INVALID:
        case SD_ERR_DOMAIN: return kExitConfig;
        case SD_ERR_ACCURACY: return kExitAccuracy;
        case SD_ERR_UNSOLVABLE: return kExitUnsolvable;
        case SD_ERR_LOGIC:
        case SD_ERR_INTERNAL: return kExitFailure;
    }
    return kExitFailure;
}

void check(sd_status s, const char* what) {
    if (s != SD_OK) {
        throw RunError(code_for(s), std::string(what) + ": " + sd_status_name(s) +
                                        " (" + sd_last_error() + ")");
    }
}

using OperatorPtr = std::unique_ptr<sd_operator, decltype(&sd_operator_free)>;
using ProfilePtr = std::unique_ptr<sd_profile, decltype(&sd_profile_free)>;
using InversePtr = std::unique_ptr<sd_inverse_result, decltype(&sd_inverse_free)>;

OperatorPtr make_operator(const RunConfig& cfg) {
    sd_operator* op = nullptr;
    if (cfg.op.kind == "dirichlet_1d") {
        check(sd_operator_dirichlet_1d(cfg.op.length, cfg.K, &op), "operator");
    } else {
        check(sd_operator_explicit(cfg.op.eigenvalues.data(), cfg.K, &op), "operator");
    }
    return OperatorPtr(op, &sd_operator_free);
}

ProfilePtr make_profile(const RunConfig& cfg) {
    const ProfileSpec& g = cfg.g;
    sd_profile* p = nullptr;
    if (g.kind == "const") {
        check(sd_profile_const(g.value, cfg.T, &p), "profile");
    } else if (g.kind == "linear") {
        check(sd_profile_linear(g.a, g.b, cfg.T, &p), "profile");
    } else if (g.kind == "exp_decay") {
        check(sd_profile_exp_decay(g.rate, cfg.T, &p), "profile");
    } else if (g.kind == "cosine") {
        check(sd_profile_cosine(g.omega, cfg.T, &p), "profile");
    } else if (g.kind == "affine_exp") {
        check(sd_profile_affine_exp(g.beta, cfg.T, &p), "profile");
    } else {  // sampled
        std::string text;
        try {
            text = read_file(g.file);
        } catch (const std::exception& e) {
            throw RunError(kExitIo, e.what());
        }
        std::vector<double> vals = parse_value_lines(text);
        check(sd_profile_sampled(vals.data(), int(vals.size()), cfg.T, &p), "profile");
    }
    return ProfilePtr(p, &sd_profile_free);
}

double analytic_fn(const std::string& name, double x, double L) {
    if (name == "one") return 1.0;
    if (name == "hat") return std::min(x, L - x);
    // smooth bump centered in the domain
    double r = x / L - 0.5;
    return std::exp(-50.0 * r * r);
}

std::vector<double> resolve_vector(const VectorSpec& spec, const RunConfig& cfg,
                                   const sd_operator* op, const char* name) {
    std::vector<double> out(size_t(cfg.K), 0.0);
    if (!spec.present || spec.zero) return out;
    if (!spec.coeffs.empty()) {
        return spec.coeffs;
    }
    if (!spec.file.empty()) {
        std::string text;
        try {
            text = read_file(spec.file);
        } catch (const std::exception& e) {
            throw RunError(kExitIo, e.what());
        }
        std::vector<double> v = parse_vector_csv(text);
        if (int(v.size()) != cfg.K)
            throw RunError(kExitConfig, std::string("[") + name + "] file has " +
                                            std::to_string(v.size()) +
                                            " rows, expected K = " +
                                            std::to_string(cfg.K));
        return v;
    }
    // analytic: sample on a dense uniform grid, then project
    double L = cfg.op.length;
    int n = 2049;
    std::vector<double> samples(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        samples[size_t(i)] = analytic_fn(spec.analytic, L * i / (n - 1.0), L);
    check(sd_project_sampled(op, samples.data(), n, 0, out.data()), "projection");
    return out;
}

std::string resolve_output_dir(const RunConfig& cfg, const RunnerOptions& opt) {
    if (!opt.output_dir_flag.empty()) return opt.output_dir_flag;
    if (const char* env = std::getenv("SUBDIFF_OUTPUT_DIR"); env && *env) return env;
    if (!cfg.output.dir.empty()) return cfg.output.dir;
    return "out";
}

std::string operator_label(const RunConfig& cfg) {
    if (cfg.op.kind == "dirichlet_1d")
        return "dirichlet_1d length=" + format_double(cfg.op.length);
    return "explicit";
}

void emit(const std::string& dir, const std::string& file, const std::string& content) {
    std::string path = dir + "/" + file;
    try {
        write_file(path, content);
    } catch (const std::exception& e) {
        throw RunError(kExitIo, e.what());
    }
    std::printf("wrote %s\n", path.c_str());
}

std::vector<double> make_times(const RunConfig& cfg) {
    int n = cfg.output.n_times;
    std::vector<double> ts(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) ts[size_t(i)] = cfg.T * i / (n - 1.0);
    ts.back() = cfg.T;
    return ts;
}

void write_operator_file(const std::string& dir, const RunConfig& cfg,
                         const sd_operator* op) {
    std::vector<double> eig(static_cast<size_t>(cfg.K));
    for (int k = 1; k <= cfg.K; ++k)
        check(sd_operator_eigenvalue(op, k, &eig[size_t(k - 1)]), "eigenvalue");
    emit(dir, "operator.csv", render_operator_csv(eig, operator_label(cfg)));
}

void write_field_file(const std::string& dir, const RunConfig& cfg,
                      const sd_operator* op, const std::vector<double>& times,
                      const std::vector<double>& u) {
    int m = cfg.output.field_points;
    std::vector<double> xs(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) xs[size_t(j)] = cfg.op.length * j / (m - 1.0);
    std::vector<double> field(times.size() * size_t(m), 0.0);
    std::vector<double> basis(size_t(m) * size_t(cfg.K));
    for (int j = 0; j < m; ++j)
        for (int k = 1; k <= cfg.K; ++k)
            check(sd_operator_eigenfunction(op, k, xs[size_t(j)],
                                            &basis[size_t(j) * size_t(cfg.K) +
                                                   size_t(k - 1)]),
                  "eigenfunction");
    for (size_t i = 0; i < times.size(); ++i) {
        for (int j = 0; j < m; ++j) {
            double s = 0.0;
            for (int k = 0; k < cfg.K; ++k)
                s += u[i * size_t(cfg.K) + size_t(k)] *
                     basis[size_t(j) * size_t(cfg.K) + size_t(k)];
            field[i * size_t(m) + size_t(j)] = s;
        }
    }
    emit(dir, "field.csv", render_field_csv(times, xs, field));
}

sd_quadrature quad_of(const RunConfig& cfg) {
    sd_quadrature q;
    q.panels = cfg.quad.panels;
    q.nodes_per_panel = cfg.quad.nodes_per_panel;
    q.grading_exponent = cfg.quad.grading_exponent;
    return q;
}

struct InverseOutcome {
    InversePtr result;
    bool solvable;
    std::vector<double> f;  // empty when unsolvable
};

InverseOutcome solve_inverse_cfg(const RunConfig& cfg, const sd_operator* op,
                                 const sd_profile* g, const std::vector<double>& phi,
                                 const std::vector<double>& psi) {
    std::vector<int> free_idx;
    std::vector<double> free_val;
    for (const auto& kv : cfg.inverse.free_values) {
        free_idx.push_back(kv.first);
        free_val.push_back(kv.second);
    }
    sd_quadrature q = quad_of(cfg);
    sd_inverse_result* raw = nullptr;
    check(sd_solve_inverse(cfg.rho, cfg.T, op, phi.data(), psi.data(), g, &q,
                           cfg.inverse.eps_b, cfg.inverse.tol_solv, free_idx.data(),
                           free_val.data(), int(free_idx.size()), &raw),
          "inverse solve");
    InverseOutcome out{InversePtr(raw, &sd_inverse_free), false, {}};
    out.solvable = sd_inverse_solvable(raw) != 0;
    if (out.solvable) {
        out.f.resize(size_t(cfg.K));
        check(sd_inverse_coeffs(raw, out.f.data()), "inverse coefficients");
    }
    return out;
}

std::string render_solution_csv(const RunConfig& cfg, const sd_inverse_result* r,
                                const std::vector<double>& f) {
    std::string out = "k,f_k,in_kernel,solvability_residual\n";
    for (int k = 1; k <= cfg.K; ++k) {
        int ink = sd_inverse_in_kernel(r, k);
        double res = 0.0;
        if (ink) check(sd_inverse_residual(r, k, &res), "residual");
        out += std::to_string(k);
        out += ',';
        out += format_double(f[size_t(k - 1)]);
        out += ',';
        out += std::to_string(ink);
        out += ',';
        out += format_double(res);
        out += '\n';
    }
    return out;
}

std::string render_diagnostics(const RunConfig& cfg, const sd_inverse_result* r,
                               bool solvable) {
    double tol = 0.0;
    check(sd_inverse_tol_solv(r, &tol), "tolerance");
    double eps_b = cfg.inverse.eps_b > 0.0 ? cfg.inverse.eps_b : 1e-9;
    std::string out;
    out += "solvable = ";
    out += solvable ? "true" : "false";
    out += "\nK = " + std::to_string(cfg.K);
    out += "\nkernel_modes = " + std::to_string(sd_inverse_kernel_count(r));
    out += "\neps_b = " + format_double(eps_b);
    out += "\ntol_solv = " + format_double(tol);
    out += '\n';
    for (int k = 1; k <= cfg.K; ++k) {
        if (!sd_inverse_in_kernel(r, k)) continue;
        double p = 0.0, thr = 0.0, res = 0.0;
        check(sd_inverse_p_value(r, k, &p), "p value");
        check(sd_inverse_threshold(r, k, &thr), "threshold");
        check(sd_inverse_residual(r, k, &res), "residual");
        out += "kernel_mode k=" + std::to_string(k) + " p=" + format_double(p) +
               " threshold=" + format_double(thr) +
               " residual=" + format_double(res) + "\n";
    }
    return out;
}

int run_forward(const RunConfig& cfg, const std::string& dir) {
    OperatorPtr op = make_operator(cfg);
    ProfilePtr g = make_profile(cfg);
    std::vector<double> phi = resolve_vector(cfg.phi, cfg, op.get(), "phi");
    std::vector<double> f = resolve_vector(cfg.f, cfg, op.get(), "f");

    std::vector<double> times = make_times(cfg);
    std::vector<double> u(times.size() * size_t(cfg.K));
    sd_quadrature q = quad_of(cfg);
    check(sd_solve_forward(cfg.rho, cfg.T, op.get(), phi.data(), f.data(), g.get(),
                           &q, times.data(), int(times.size()), u.data()),
          "forward solve");
    std::vector<double> psi(static_cast<size_t>(cfg.K));
    check(sd_integrate_trajectory(cfg.rho, cfg.T, op.get(), phi.data(), f.data(),
                                  g.get(), &q, psi.data()),
          "trajectory integral");

    write_operator_file(dir, cfg, op.get());
    emit(dir, "trajectory.csv", render_trajectory_csv(times, u, cfg.K));
    emit(dir, "psi.csv", render_vector_csv(psi));
    if (cfg.output.field_points > 0)
        write_field_file(dir, cfg, op.get(), times, u);
    return kExitOk;
}

int run_inverse(const RunConfig& cfg, const std::string& dir) {
    OperatorPtr op = make_operator(cfg);
    ProfilePtr g = make_profile(cfg);
    std::vector<double> phi = resolve_vector(cfg.phi, cfg, op.get(), "phi");
    std::vector<double> psi = resolve_vector(cfg.psi, cfg, op.get(), "psi");

    InverseOutcome sol = solve_inverse_cfg(cfg, op.get(), g.get(), phi, psi);
    write_operator_file(dir, cfg, op.get());
    emit(dir, "diagnostics.txt", render_diagnostics(cfg, sol.result.get(), sol.solvable));
    if (!sol.solvable) {
        std::fprintf(stderr,
                     "inverse data fails the solvability condition; see %s\n",
                     (dir + "/diagnostics.txt").c_str());
        return kExitUnsolvable;
    }
    emit(dir, "solution.csv", render_solution_csv(cfg, sol.result.get(), sol.f));
    return kExitOk;
}

int run_roundtrip(const RunConfig& cfg, const std::string& dir) {
    OperatorPtr op = make_operator(cfg);
    ProfilePtr g = make_profile(cfg);
    std::vector<double> phi = resolve_vector(cfg.phi, cfg, op.get(), "phi");
    std::vector<double> f_true = resolve_vector(cfg.f, cfg, op.get(), "f");

    sd_quadrature q = quad_of(cfg);
    std::vector<double> psi(static_cast<size_t>(cfg.K));
    if (cfg.inverse.psi_path == "quadrature") {
        check(sd_integrate_trajectory_quadrature(cfg.rho, cfg.T, op.get(), phi.data(),
                                                 f_true.data(), g.get(), &q,
                                                 psi.data()),
              "trajectory integral");
    } else {
        check(sd_integrate_trajectory(cfg.rho, cfg.T, op.get(), phi.data(),
                                      f_true.data(), g.get(), &q, psi.data()),
              "trajectory integral");
    }

    InverseOutcome sol = solve_inverse_cfg(cfg, op.get(), g.get(), phi, psi);

    write_operator_file(dir, cfg, op.get());
    emit(dir, "f_true.csv", render_vector_csv(f_true));
    emit(dir, "psi.csv", render_vector_csv(psi));

    std::string report = "mode = roundtrip\npsi_path = " + cfg.inverse.psi_path + "\n";
    if (!sol.solvable) {
        report += "solvable = false\n";
        emit(dir, "recovery_report.txt", report);
        return kExitUnsolvable;
    }

    double num = 0.0, den = 0.0;
    for (int k = 0; k < cfg.K; ++k) {
        double d = sol.f[size_t(k)] - f_true[size_t(k)];
        num += d * d;
        den += f_true[size_t(k)] * f_true[size_t(k)];
    }
    double rel = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    report += "solvable = true\n";
    report += "kernel_modes = " + std::to_string(sd_inverse_kernel_count(sol.result.get())) + "\n";
    report += "relative_h_norm_error = " + format_double(rel) + "\n";

    emit(dir, "f_recovered.csv", render_vector_csv(sol.f));
    emit(dir, "recovery_report.txt", report);
    std::printf("relative_h_norm_error = %s\n", format_double(rel).c_str());
    return kExitOk;
}

} // namespace

int run_mode(RunMode mode, const RunnerOptions& opt) {
    try {
        RunConfig cfg = parse_config_file(opt.config_path);
        cfg.validate_for(mode);
        std::string dir = resolve_output_dir(cfg, opt);
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec)
            throw RunError(kExitIo, "cannot create output directory '" + dir +
                                        "': " + ec.message());
        switch (mode) {
            case RunMode::forward: return run_forward(cfg, dir);
            case RunMode::inverse: return run_inverse(cfg, dir);
            case RunMode::roundtrip: return run_roundtrip(cfg, dir);
        }
        return kExitFailure;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const RunError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFailure;
    }
}

int run_ml_eval(double rho, double mu, double z) {
    double value = 0.0, est = 0.0;
    int route = 0;
    sd_status s = sd_ml_eval_info(rho, mu, z, &value, &est, &route);
    if (s != SD_OK) {
        std::fprintf(stderr, "error: %s (%s)\n", sd_status_name(s), sd_last_error());
        return code_for(s);
    }
    static const char* route_names[] = {"exact", "series", "asymptotic", "contour"};
    const char* rn = (route >= 0 && route <= 3) ? route_names[route] : "?";
    std::printf("E_{%s,%s}(%s) = %s\n", format_double(rho).c_str(),
                format_double(mu).c_str(), format_double(z).c_str(),
                format_double(value).c_str());
    std::printf("estimated_relative_error = %s\nroute = %s\n",
                format_double(est).c_str(), rn);
    if (est > 1e-10) {
        std::fprintf(stderr, "error: estimate exceeds the 1e-10 target\n");
        return kExitAccuracy;
    }
    return kExitOk;
}

int run_selftest(bool quick) {
    int failed = 0;
    std::vector<char> buf(16384);
    sd_status s = sd_selftest(quick ? 1 : 0, &failed, buf.data(), int(buf.size()));
    if (s != SD_OK) {
        std::fprintf(stderr, "error: %s (%s)\n", sd_status_name(s), sd_last_error());
        return code_for(s);
    }
    std::fputs(buf.data(), stdout);
    return failed == 0 ? kExitOk : kExitFailure;
}

} // namespace cli
