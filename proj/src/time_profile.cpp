#include "time_profile.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace subdiff {

namespace {

void require_horizon(double T) {
    if (!(T > 0.0)) throw std::invalid_argument("time profile: horizon T must be positive");
}

double clamp_to_domain(double t, double T) {
    double slack = 1e-12 * T;
    if (t < -slack || t > T + slack) {
        std::ostringstream os;
        os << "time profile: t = " << t << " outside [0, " << T << "]";
        throw std::out_of_range(os.str());
    }
    if (t < 0.0) return 0.0;
    if (t > T) return T;
    return t;
}

} // namespace

TimeProfile TimeProfile::closed_form(Fn g, double T, Fn dg,
                                     std::optional<bool> sign_constant,
                                     std::string name) {
    require_horizon(T);
    if (!g) throw std::invalid_argument("time profile: missing evaluator");
    TimeProfile p;
    p.kind_ = ProfileKind::closed_form;
    p.T_ = T;
    p.g_ = std::move(g);
    p.dg_ = std::move(dg);
    p.sign_constant_ = sign_constant;
    p.name_ = std::move(name);
    p.check_declared_sign();
    return p;
}

TimeProfile TimeProfile::sampled(std::vector<double> values, double T,
                                 std::optional<bool> sign_constant,
                                 std::string name) {
    require_horizon(T);
    if (values.size() < 2)
        throw std::invalid_argument("time profile: sampled profile needs >= 2 samples");
    TimeProfile p;
    p.kind_ = ProfileKind::sampled;
    p.T_ = T;
    p.sign_constant_ = sign_constant;
    p.name_ = std::move(name);
    p.samples_ = std::move(values);
    int n = int(p.samples_.size());
    p.dt_ = T / (n - 1);

    // natural cubic spline: tridiagonal solve for second derivatives
    p.spline_m_.assign(n, 0.0);
    if (n > 2) {
        std::vector<double> c(n, 0.0), d(n, 0.0);
        // interior equations: m[i-1]/6 + 2 m[i]/3 + m[i+1]/6 = (y[i+1]-2y[i]+y[i-1])/dt^2
        double diag = 2.0 / 3.0, off = 1.0 / 6.0;
        for (int i = 1; i < n - 1; ++i)
            d[i] = (p.samples_[i + 1] - 2.0 * p.samples_[i] + p.samples_[i - 1]) /
                   (p.dt_ * p.dt_);
        // Thomas algorithm on i = 1..n-2 with natural ends m[0] = m[n-1] = 0
        c[1] = off / diag;
        d[1] = d[1] / diag;
        for (int i = 2; i < n - 1; ++i) {
            double w = diag - off * c[i - 1];
            c[i] = off / w;
            d[i] = (d[i] - off * d[i - 1]) / w;
        }
        for (int i = n - 3; i >= 1; --i) d[i] -= c[i] * d[i + 1];
        for (int i = 1; i < n - 1; ++i) p.spline_m_[i] = d[i];
    }
    p.check_declared_sign();
    return p;
}

double TimeProfile::eval_spline(double t) const {
    int n = int(samples_.size());
    int i = int(t / dt_);
    if (i >= n - 1) i = n - 2;
    double a = t / dt_ - i;  // in [0, 1]
    double b = 1.0 - a;
    return b * samples_[i] + a * samples_[i + 1] +
           ((b * b * b - b) * spline_m_[i] + (a * a * a - a) * spline_m_[i + 1]) *
               (dt_ * dt_) / 6.0;
}

double TimeProfile::eval_spline_derivative(double t) const {
    int n = int(samples_.size());
    int i = int(t / dt_);
    if (i >= n - 1) i = n - 2;
    double a = t / dt_ - i;
    double b = 1.0 - a;
    return (samples_[i + 1] - samples_[i]) / dt_ +
           ((3.0 * a * a - 1.0) * spline_m_[i + 1] - (3.0 * b * b - 1.0) * spline_m_[i]) *
               dt_ / 6.0;
}

double TimeProfile::operator()(double t) const {
    t = clamp_to_domain(t, T_);
    return kind_ == ProfileKind::closed_form ? g_(t) : eval_spline(t);
}

bool TimeProfile::has_derivative() const {
    return kind_ == ProfileKind::sampled || bool(dg_);
}

double TimeProfile::derivative(double t) const {
    t = clamp_to_domain(t, T_);
    if (kind_ == ProfileKind::sampled) return eval_spline_derivative(t);
    if (!dg_) throw std::logic_error("time profile: derivative not available");
    return dg_(t);
}

double TimeProfile::min_abs_on_grid(int n) const {
    double m = std::abs((*this)(0.0));
    for (int i = 1; i < n; ++i) {
        double v = std::abs((*this)(T_ * i / (n - 1)));
        if (v < m) m = v;
    }
    return m;
}

void TimeProfile::check_declared_sign() const {
    if (!sign_constant_.value_or(false)) return;
    const int n = 1001;
    bool pos = false, neg = false;
    for (int i = 0; i < n; ++i) {
        double v = (*this)(T_ * i / (n - 1));
        if (v > 0.0) pos = true;
        else if (v < 0.0) neg = true;
        if (v == 0.0 || (pos && neg)) {
            throw std::invalid_argument(
                "time profile '" + name_ +
                "': declared sign-constant but changes sign on the check grid");
        }
    }
}

TimeProfile profile_const(double c, double T) {
    return TimeProfile::closed_form([c](double) { return c; }, T,
                                    [](double) { return 0.0; },
                                    c != 0.0 ? std::optional<bool>(true) : std::nullopt,
                                    "const");
}

TimeProfile profile_linear(double a, double b, double T) {
    return TimeProfile::closed_form([a, b](double t) { return a + b * t; }, T,
                                    [b](double) { return b; }, std::nullopt, "linear");
}

TimeProfile profile_exp_decay(double rate, double T) {
    return TimeProfile::closed_form([rate](double t) { return std::exp(-rate * t); }, T,
                                    [rate](double t) { return -rate * std::exp(-rate * t); },
                                    true, "exp_decay");
}

TimeProfile profile_cosine(double omega, double T) {
    return TimeProfile::closed_form([omega](double t) { return std::cos(omega * t); }, T,
                                    [omega](double t) { return -omega * std::sin(omega * t); },
                                    std::nullopt, "cosine");
}

TimeProfile profile_affine_exp(double beta, double T) {
    return TimeProfile::closed_form([beta](double t) { return 1.0 + beta * std::exp(t); }, T,
                                    [beta](double t) { return beta * std::exp(t); },
                                    std::nullopt, "affine_exp");
}

} // namespace subdiff
