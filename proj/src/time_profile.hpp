#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace subdiff {

enum class ProfileKind { closed_form, sampled };

// Scalar source modulation g(t) on [0, T]. Immutable after construction.
// Sampled data is interpolated by a natural cubic spline.
class TimeProfile {
public:
    using Fn = std::function<double(double)>;

    // zero profile on [0, 1]; placeholder so problem bundles can be built
    // field by field
    TimeProfile() : g_([](double) { return 0.0; }), name_("zero") {}

    static TimeProfile closed_form(Fn g, double T, Fn dg = nullptr,
                                   std::optional<bool> sign_constant = std::nullopt,
                                   std::string name = "custom");
    static TimeProfile sampled(std::vector<double> values, double T,
                               std::optional<bool> sign_constant = std::nullopt,
                               std::string name = "sampled");

    double operator()(double t) const;
    double derivative(double t) const;  // throws std::logic_error if unavailable
    bool has_derivative() const;

    double horizon() const { return T_; }
    ProfileKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    std::optional<bool> declared_sign_constant() const { return sign_constant_; }

    // min over a dense check grid of |g|; > 0 backs a sign_constant claim
    double min_abs_on_grid(int n = 1001) const;

private:
    double eval_spline(double t) const;
    double eval_spline_derivative(double t) const;
    void check_declared_sign() const;

    ProfileKind kind_ = ProfileKind::closed_form;
    double T_ = 1.0;
    Fn g_;
    Fn dg_;
    std::optional<bool> sign_constant_;
    std::string name_;
    // spline data (sampled kind): values on the uniform grid + second derivatives
    std::vector<double> samples_;
    std::vector<double> spline_m_;
    double dt_ = 0.0;
};

// Catalog used by the CLI and tests.
TimeProfile profile_const(double c, double T);
TimeProfile profile_linear(double a, double b, double T);      // a + b*t
TimeProfile profile_exp_decay(double rate, double T);          // exp(-rate*t)
TimeProfile profile_cosine(double omega, double T);            // cos(omega*t)
TimeProfile profile_affine_exp(double beta, double T);         // 1 + beta*exp(t)

} // namespace subdiff
