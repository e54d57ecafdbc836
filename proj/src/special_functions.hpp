#pragma once

#include <string>

namespace subdiff {

// Relative accuracy the public Mittag-Leffler evaluator promises; if the
// internal error estimate exceeds this, ml_eval throws AccuracyError.
inline constexpr double kMLTargetRelErr = 1e-10;

struct MLParams {
    double rho;  // order, 0 < rho <= 1
    double mu;   // second parameter, mu > 0
};

enum class MLRoute {
    exact,       // closed form (exp family, z = 0, ...)
    series,      // defining power series
    asymptotic,  // large-argument expansion, optimal truncation
    contour      // Bromwich integral on a parabolic contour
};

const char* ml_route_name(MLRoute route);

struct MLResult {
    double value;
    double est_rel_err;  // evaluator's own estimate of the relative error
    MLRoute route;
};

// Gamma function for x > 0 (Lanczos), relative error <= 1e-13.
// Throws std::domain_error for x <= 0.
double gamma_fn(double x);

// Reciprocal gamma 1/Gamma(x), defined for all real x (0 at the poles).
double rgamma(double x);

// sin(pi*x) with exact integer argument reduction.
double sinpi(double x);

// Two-parameter Mittag-Leffler function E_{rho,mu}(z), real z.
// ml_eval throws AccuracyError when the estimate misses kMLTargetRelErr;
// ml_eval_info reports the estimate instead and never throws on accuracy.
double ml_eval(const MLParams& p, double z);
MLResult ml_eval_info(const MLParams& p, double z);

// Leading large-argument term t^{-1}/Gamma(mu-rho); test oracle only.
double ml_asymptotic_leading(const MLParams& p, double t);

namespace detail {

// log Gamma for x > 0, same Lanczos kernel as gamma_fn
double lgamma_pos(double x);

// Individual evaluation routes, exposed for direct testing. Each returns
// its own honest error estimate; callers pick the best one.
MLResult ml_series(double rho, double mu, double z);
MLResult ml_asymptotic(double rho, double mu, double t);  // E_{rho,mu}(-t), t > 0
MLResult ml_contour(double rho, double mu, double t);     // E_{rho,mu}(-t), t > 0

} // namespace detail

} // namespace subdiff
