#include "kernel.hpp"
#include "errors.hpp"
#include "special_functions.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace subdiff {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void validate_common(double rho, double lambda, const char* where) {
    std::ostringstream os;
    if (!(rho > 0.0) || !(rho > 0.0 && rho <= 1.0)) {
        os << where << ": rho = " << rho << " outside (0, 1]";
        throw std::invalid_argument(os.str());
    }
    if (!(lambda > 0.0)) {
        os << where << ": lambda = " << lambda << " must be positive";
        throw std::invalid_argument(os.str());
    }
}

void validate_time(double t, double T, const char* where) {
    if (!(t > 0.0) || t > T * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << where << ": t = " << t << " outside (0, " << T << "]";
        throw std::invalid_argument(os.str());
    }
}

// Accept when the doubling estimate meets rel_target against the value, with
// a floor at a fraction of the kernel's natural scale so legitimately tiny
// results (sign-changing g) are not rejected over their relative error.
double throw_or_value(const KernelEval& e, double rel_target, double scale,
                      const char* where) {
    if (e.est_abs_err <= rel_target * std::max(std::abs(e.value), 1e-3 * scale))
        return e.value;
    std::ostringstream os;
    double rel = e.est_abs_err / std::max(std::abs(e.value), 1e-300);
    os << where << ": quadrature stalled at estimated relative error " << rel
       << " (" << e.panels_used << " panels)";
    throw AccuracyError(os.str(), rel);
}

} // namespace

double kernel_p_scale(double rho, double lambda, double T) {
    double w = std::pow(T, rho);
    return T * w / (1.0 + lambda * w);
}

KernelEval convolve_source_info(double rho, double lambda, const TimeProfile& g,
                                double t, const QuadratureRule& rule) {
    validate_common(rho, lambda, "convolve_source");
    validate_time(t, g.horizon(), "convolve_source");
    rule.validate();

    double w = std::pow(t, rho);
    double gt = g(t);
    MLParams base_p{rho, rho + 1.0};
    double base = gt * w * ml_eval_info(base_p, -lambda * w).value;

    MLParams ker{rho, rho};
    auto integrand = [&](double s) {
        double sw = std::pow(s, rho);
        double e = ml_eval_info(ker, -lambda * sw).value;
        return std::pow(s, rho - 1.0) * e * (g(t - s) - gt);
    };
    double scale = (1.0 + std::abs(gt)) * w / (1.0 + lambda * w) + std::abs(base);
    QuadResult q = integrate_adaptive(integrand, 0.0, t, rule, rule.grading_for(rho),
                                      1e-10, 1e-15 * scale);
    double est = q.est_abs_err + kEps * (q.absmass + std::abs(base));
    return {base + q.value, est, q.panels_used, q.converged};
}

double convolve_source(double rho, double lambda, const TimeProfile& g, double t,
                       const QuadratureRule& rule) {
    KernelEval e = convolve_source_info(rho, lambda, g, t, rule);
    double w = std::pow(t, rho);
    double scale = (1.0 + std::abs(g(t))) * w / (1.0 + lambda * w);
    return throw_or_value(e, 1e-7, scale, "convolve_source");
}

KernelEval kernel_p_info(double rho, double lambda, const TimeProfile& g, double T,
                         const QuadratureRule& rule) {
    validate_common(rho, lambda, "kernel_p");
    if (!(T > 0.0) || T > g.horizon() * (1.0 + 1e-12))
        throw std::invalid_argument("kernel_p: T outside the profile domain");
    rule.validate();

    double w = std::pow(T, rho);
    double gT = g(T);
    MLParams base_p{rho, rho + 2.0};
    double base = gT * T * w * ml_eval_info(base_p, -lambda * w).value;

    MLParams ker{rho, rho + 1.0};
    auto integrand = [&](double s) {
        double sw = std::pow(s, rho);
        double e = ml_eval_info(ker, -lambda * sw).value;
        return std::pow(s, rho) * e * (g(T - s) - gT);
    };
    double scale = (1.0 + std::abs(gT)) * kernel_p_scale(rho, lambda, T) + std::abs(base);
    QuadResult q = integrate_adaptive(integrand, 0.0, T, rule, rule.grading_for(rho),
                                      1e-10, 1e-15 * scale);
    double est = q.est_abs_err + kEps * (q.absmass + std::abs(base));
    return {base + q.value, est, q.panels_used, q.converged};
}

double kernel_p(double rho, double lambda, const TimeProfile& g, double T,
                const QuadratureRule& rule) {
    KernelEval e = kernel_p_info(rho, lambda, g, T, rule);
    double scale = (1.0 + std::abs(g(T))) * kernel_p_scale(rho, lambda, T);
    return throw_or_value(e, 1e-8, scale, "kernel_p");
}

IdentityCheck double_integral_identity_check(double rho, double lambda,
                                             const TimeProfile& g, double T,
                                             const QuadratureRule& rule) {
    validate_common(rho, lambda, "double_integral_identity_check");
    if (!(T > 0.0) || T > g.horizon() * (1.0 + 1e-12))
        throw std::invalid_argument("double_integral_identity_check: bad T");

    double grading = rule.grading_for(rho);
    MLParams ker{rho, rho};
    // inner convolution evaluated head-on (no subtraction); adaptive, since a
    // fixed mesh leaves a systematic bias the outer error estimate cannot see
    // (sampled profiles have spline knots much denser than any fixed mesh)
    auto inner = [&](double t) {
        auto f = [&](double s) {
            double sw = std::pow(s, rho);
            return std::pow(s, rho - 1.0) * ml_eval_info(ker, -lambda * sw).value *
                   g(t - s);
        };
        double w = std::pow(t, rho);
        double scale = w / (1.0 + lambda * w);
        QuadratureRule inner_rule{8, 10, grading};
        return integrate_adaptive(f, 0.0, t, inner_rule, grading, 1e-7, 1e-14 * scale,
                                  128)
            .value;
    };
    QuadratureRule outer_rule{8, 10, grading};
    QuadResult q = integrate_adaptive(inner, 0.0, T, outer_rule, grading, 1e-7,
                                      1e-12 * kernel_p_scale(rho, lambda, T) * T, 64);
    double rhs = kernel_p(rho, lambda, g, T, rule);
    return {q.value, rhs};
}

double psi_coefficient(double rho, double lambda, double T, double phi_k, double f_k,
                       const TimeProfile& g, const QuadratureRule& rule) {
    validate_common(rho, lambda, "psi_coefficient");
    if (!(T > 0.0)) throw std::invalid_argument("psi_coefficient: T must be positive");
    double w = std::pow(T, rho);
    double decay = ml_eval(MLParams{rho, 2.0}, -lambda * w);
    double p = (f_k != 0.0) ? kernel_p(rho, lambda, g, T, rule) : 0.0;
    return phi_k * T * decay + f_k * p;
}

} // namespace subdiff
