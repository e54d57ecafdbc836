#include "selftest.hpp"
#include "inverse_solver.hpp"
#include "kernel.hpp"
#include "special_functions.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace subdiff {

bool SelfTestReport::all_pass() const {
    for (const auto& e : entries)
        if (!e.pass) return false;
    return true;
}

std::string SelfTestReport::to_text() const {
    std::ostringstream os;
    for (const auto& e : entries)
        os << (e.pass ? "PASS" : "FAIL") << "  " << e.name << "  (" << e.detail
           << ")\n";
    os << (all_pass() ? "all checks passed" : "some checks FAILED") << "\n";
    return os.str();
}

namespace {

std::string fmt_err(double worst) {
    std::ostringstream os;
    os << "worst rel err " << worst;
    return os.str();
}

SelfTestEntry check_exponential_consistency() {
    double worst = 0.0;
    for (double z = -700.0; z <= 10.0; z += 7.1) {
        double e = ml_eval(MLParams{1.0, 1.0}, z);
        double r = std::abs(e - std::exp(z)) / std::exp(z);
        worst = std::max(worst, r);
    }
    return {"order-1 evaluator matches exp", worst <= 1e-12, fmt_err(worst)};
}

SelfTestEntry check_closed_forms() {
    double worst = 0.0;
    auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
    worst = std::max(worst, rel(ml_eval(MLParams{1.0, 2.0}, -1.0),
                                1.0 - std::exp(-1.0)));
    worst = std::max(worst, rel(ml_eval(MLParams{0.5, 1.0}, -1.0),
                                std::exp(1.0) * std::erfc(1.0)));
    worst = std::max(worst, rel(gamma_fn(0.5), std::sqrt(3.141592653589793238463)));
    worst = std::max(worst, rel(gamma_fn(5.0), 24.0));
    return {"closed-form spot checks", worst <= 1e-10, fmt_err(worst)};
}

// int_0^t eta^{beta-1} E_{rho,beta}(lambda eta^rho) d eta
//   = t^beta E_{rho,beta+1}(lambda t^rho) for lambda < 0
SelfTestEntry check_integral_identity(bool quick) {
    std::mt19937 rng(20240817u);
    std::uniform_real_distribution<double> urho(0.3, 1.0);
    std::uniform_real_distribution<double> ulam(0.5, 40.0);
    std::uniform_real_distribution<double> ut(0.25, 2.0);
    std::uniform_int_distribution<int> ubeta(0, 3);
    int draws = quick ? 12 : 60;
    double worst = 0.0;
    for (int i = 0; i < draws; ++i) {
        double rho = urho(rng);
        double beta;
        switch (ubeta(rng)) {
            case 0: beta = rho; break;
            case 1: beta = 1.0; break;
            case 2: beta = rho + 1.0; break;
            default: beta = 2.0; break;
        }
        double lam = -ulam(rng);
        double t = ut(rng);
        auto f = [&](double eta) {
            return std::pow(eta, beta - 1.0) *
                   ml_eval_info(MLParams{rho, beta}, lam * std::pow(eta, rho)).value;
        };
        double grading = std::max(2.0, std::ceil(4.0 / std::min(beta, 1.0)));
        double lhs = integrate_graded(f, 0.0, t, 96, 12, grading);
        double rhs = std::pow(t, beta) *
                     ml_eval(MLParams{rho, beta + 1.0}, lam * std::pow(t, rho));
        double r = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-12);
        worst = std::max(worst, r);
    }
    return {"power-kernel integral identity", worst <= 1e-6, fmt_err(worst)};
}

// int_0^T E_{rho,1}(-lambda t^rho) dt = T E_{rho,2}(-lambda T^rho)
SelfTestEntry check_decay_integral(bool quick) {
    double worst = 0.0;
    std::vector<double> rhos = quick ? std::vector<double>{0.5, 1.0}
                                     : std::vector<double>{0.3, 0.5, 0.7, 0.9, 1.0};
    for (double rho : rhos) {
        for (double lam : {1.0, 25.0, 400.0}) {
            double T = 1.0;
            auto f = [&](double t) {
                return ml_eval_info(MLParams{rho, 1.0}, -lam * std::pow(t, rho)).value;
            };
            double grading = std::max(2.0, std::ceil(3.0 / rho));
            double lhs = integrate_graded(f, 0.0, T, 128, 12, grading);
            double rhs = T * ml_eval(MLParams{rho, 2.0}, -lam * std::pow(T, rho));
            double r = std::abs(lhs - rhs) / std::abs(rhs);
            worst = std::max(worst, r);
        }
    }
    return {"mode-decay time integral", worst <= 1e-6, fmt_err(worst)};
}

SelfTestEntry check_double_integral(bool quick) {
    QuadratureRule rule;
    double worst = 0.0;
    struct Case { double rho, lam, T; };
    std::vector<Case> cases = quick
        ? std::vector<Case>{{1.0, 1.0, 1.0}, {0.7, 10.0, 1.0}}
        : std::vector<Case>{{1.0, 1.0, 1.0}, {0.7, 10.0, 1.0}, {0.5, 4.0, 1.0},
                            {0.9, 50.0, 0.5}};
    for (const Case& c : cases) {
        TimeProfile g = profile_linear(1.0, -1.0, c.T);
        IdentityCheck chk = double_integral_identity_check(c.rho, c.lam, g, c.T, rule);
        double r = std::abs(chk.lhs - chk.rhs) /
                   std::max({std::abs(chk.lhs), std::abs(chk.rhs), 1e-12});
        worst = std::max(worst, r);
    }
    return {"double-integral reduction", worst <= 1e-6, fmt_err(worst)};
}

SelfTestEntry check_decay_bounds() {
    // (1+t)|E_{rho,mu}(-t)| bounded, and 0 < E_{rho,2}(-t) < 1
    double worst_bound = 0.0;
    bool in_range = true;
    for (double rho : {0.3, 0.5, 0.8, 1.0}) {
        for (double mu : {1.0, 2.0, rho, rho + 1.0}) {
            for (double lt = -2.0; lt <= 8.0; lt += 0.5) {
                double t = std::pow(10.0, lt);
                double v = ml_eval_info(MLParams{rho, mu}, -t).value;
                worst_bound = std::max(worst_bound, (1.0 + t) * std::abs(v));
                if (mu == 2.0 && !(v > 0.0 && v < 1.0)) in_range = false;
            }
        }
    }
    bool ok = in_range && worst_bound < 10.0;
    std::ostringstream os;
    os << "max (1+t)|E| = " << worst_bound << (in_range ? "" : "; order-2 value left (0,1)");
    return {"decay envelope and positivity", ok, os.str()};
}

SelfTestEntry check_roundtrip() {
    int K = 8;
    InverseProblem pb;
    pb.rho = 0.5;
    pb.T = 1.0;
    pb.op = dirichlet_laplacian_1d(3.141592653589793238463, K);
    pb.g = profile_const(1.0, 1.0);
    pb.phi = SpectralVector::zeros(K);
    SpectralVector f_true = SpectralVector::zeros(K);
    for (int k = 1; k <= K; ++k) {
        pb.phi[k] = 1.0 / (k * k);
        f_true[k] = (k % 2 ? 1.0 : -0.5) / k;
    }
    pb.psi = integrate_trajectory(to_forward(pb, f_true));
    ModePartition part = partition_modes(pb);
    InverseSolution sol = solve_inverse(pb, part);
    double num = 0.0, den = 0.0;
    for (int k = 1; k <= K; ++k) {
        num += (sol.f[k] - f_true[k]) * (sol.f[k] - f_true[k]);
        den += f_true[k] * f_true[k];
    }
    double rel = std::sqrt(num / den);
    bool ok = sol.solvable && part.kernel.empty() && rel <= 1e-10;
    std::ostringstream os;
    os << "recovery rel err " << rel;
    return {"source recovery roundtrip", ok, os.str()};
}

} // namespace

SelfTestReport run_selftest(bool quick) {
    SelfTestReport rep;
    rep.entries.push_back(check_exponential_consistency());
    rep.entries.push_back(check_closed_forms());
    rep.entries.push_back(check_integral_identity(quick));
    rep.entries.push_back(check_decay_integral(quick));
    rep.entries.push_back(check_double_integral(quick));
    rep.entries.push_back(check_decay_bounds());
    rep.entries.push_back(check_roundtrip());
    return rep;
}

} // namespace subdiff
