#include "forward_solver.hpp"
#include "special_functions.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace subdiff {

void ForwardProblem::validate() const {
    op.validate();
    rule.validate();
    std::ostringstream os;
    if (!(rho > 0.0 && rho <= 1.0)) {
        os << "forward problem: rho = " << rho << " outside (0, 1]";
        throw std::invalid_argument(os.str());
    }
    if (!(T > 0.0)) {
        os << "forward problem: T = " << T << " must be positive";
        throw std::invalid_argument(os.str());
    }
    if (phi.size() != op.size() || f.size() != op.size()) {
        os << "forward problem: phi/f truncation (" << phi.size() << ", " << f.size()
           << ") does not match operator size " << op.size();
        throw std::invalid_argument(os.str());
    }
    if (g.horizon() < T * (1.0 - 1e-12)) {
        os << "forward problem: profile horizon " << g.horizon()
           << " shorter than T = " << T;
        throw std::invalid_argument(os.str());
    }
}

std::vector<double> uniform_times(double T, int n) {
    if (n < 2) throw std::invalid_argument("uniform_times: need at least 2 points");
    std::vector<double> ts(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) ts[size_t(i)] = T * i / (n - 1);
    ts.back() = T;
    return ts;
}

std::vector<TrajectorySample> solve_forward(const ForwardProblem& pb,
                                            const std::vector<double>& times) {
    pb.validate();
    for (double t : times) {
        if (t < 0.0 || t > pb.T * (1.0 + 1e-12)) {
            std::ostringstream os;
            os << "solve_forward: time " << t << " outside [0, " << pb.T << "]";
            throw std::out_of_range(os.str());
        }
    }
    int K = pb.op.size();
    std::vector<TrajectorySample> out;
    out.reserve(times.size());
    for (double t : times) {
        TrajectorySample s;
        s.t = t;
        s.coeffs.resize(size_t(K));
        for (int k = 1; k <= K; ++k) {
            double lam = pb.op.lambda(k);
            double u;
            if (t == 0.0) {
                u = pb.phi[k];
            } else {
                double w = std::pow(t, pb.rho);
                u = 0.0;
                if (pb.phi[k] != 0.0)
                    u += pb.phi[k] * ml_eval(MLParams{pb.rho, 1.0}, -lam * w);
                if (pb.f[k] != 0.0)
                    u += pb.f[k] * convolve_source(pb.rho, lam, pb.g, t, pb.rule);
            }
            s.coeffs[size_t(k - 1)] = u;
        }
        out.push_back(std::move(s));
    }
    return out;
}

SpectralVector integrate_trajectory(const ForwardProblem& pb) {
    pb.validate();
    int K = pb.op.size();
    SpectralVector psi = SpectralVector::zeros(K);
    for (int k = 1; k <= K; ++k)
        psi[k] = psi_coefficient(pb.rho, pb.op.lambda(k), pb.T, pb.phi[k], pb.f[k],
                                 pb.g, pb.rule);
    return psi;
}

SpectralVector integrate_trajectory_quadrature(const ForwardProblem& pb) {
    pb.validate();
    int K = pb.op.size();
    SpectralVector psi = SpectralVector::zeros(K);
    double grading = pb.rule.grading_for(pb.rho);
    const double T = pb.T;
    // running integral of the modulation; g is cheap, so no caching
    auto g_cumulative = [&](double x) {
        if (x <= 0.0) return 0.0;
        return integrate_graded([&](double s) { return pb.g(s); }, 0.0, x, 16, 12, 1.0);
    };
    const double gcT = g_cumulative(T);
    const MLParams relax_p{pb.rho, 1.0};
    const MLParams ker{pb.rho, pb.rho};
    for (int k = 1; k <= K; ++k) {
        double lam = pb.op.lambda(k);
        double value = 0.0;
        if (pb.phi[k] != 0.0) {
            auto relax = [&](double t) {
                if (t <= 0.0) return 1.0;
                return ml_eval_info(relax_p, -lam * std::pow(t, pb.rho)).value;
            };
            QuadResult q = integrate_adaptive(relax, 0.0, T, pb.rule, grading, 1e-9,
                                              1e-15 * T, 256);
            value += pb.phi[k] * q.value;
        }
        if (pb.f[k] != 0.0) {
            // time integral of the source response with the order of integration
            // swapped, so the doubly-adaptive nesting collapses to one graded
            // integral per mode against the running integral of g
            auto swapped = [&](double s) {
                double sw = std::pow(s, pb.rho);
                return std::pow(s, pb.rho - 1.0) * ml_eval_info(ker, -lam * sw).value *
                       g_cumulative(T - s);
            };
            double w = std::pow(T, pb.rho);
            double scale = (1.0 + std::abs(gcT)) * T * w / (1.0 + lam * w);
            QuadResult q = integrate_adaptive(swapped, 0.0, T, pb.rule, grading, 1e-9,
                                              1e-13 * scale, 256);
            value += pb.f[k] * q.value;
        }
        psi[k] = value;
    }
    return psi;
}

std::vector<double> caputo_l1(const std::vector<double>& t,
                              const std::vector<double>& y, double rho) {
    size_t n = t.size();
    if (n < 3) throw std::invalid_argument("caputo_l1: need at least 3 grid points");
    if (y.size() != n) throw std::invalid_argument("caputo_l1: t/y size mismatch");
    if (!(rho > 0.0 && rho <= 1.0))
        throw std::invalid_argument("caputo_l1: rho outside (0, 1]");
    double dt = t[1] - t[0];
    if (!(dt > 0.0)) throw std::invalid_argument("caputo_l1: grid not increasing");
    for (size_t i = 1; i + 1 < n; ++i) {
        if (std::abs((t[i + 1] - t[i]) - dt) > 1e-10 * std::max(dt, std::abs(t[i])))
            throw std::invalid_argument("caputo_l1: non-uniform grid rejected");
    }

    std::vector<double> d(n, 0.0);
    if (rho == 1.0) {
        // second-order differences: central inside, one-sided at the ends
        d[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * dt);
        for (size_t i = 1; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i - 1]) / (2.0 * dt);
        d[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * dt);
        return d;
    }
    // weights a_m = (m+1)^{1-rho} - m^{1-rho}
    std::vector<double> a(n - 1);
    for (size_t m = 0; m + 1 < n; ++m)
        a[m] = std::pow(double(m + 1), 1.0 - rho) - std::pow(double(m), 1.0 - rho);
    double c = std::pow(dt, -rho) * rgamma(2.0 - rho);
    for (size_t i = 1; i < n; ++i) {
        double s = 0.0;
        for (size_t j = 1; j <= i; ++j) s += a[i - j] * (y[j] - y[j - 1]);
        d[i] = c * s;
    }
    return d;
}

std::vector<double> residual_per_mode(const ForwardProblem& pb, int grid_size) {
    pb.validate();
    if (grid_size < 16)
        throw std::invalid_argument("residual_per_mode: grid_size must be >= 16");
    int K = pb.op.size();
    std::vector<double> times = uniform_times(pb.T, grid_size + 1);
    std::vector<TrajectorySample> traj = solve_forward(pb, times);
    std::vector<double> g_vals(times.size());
    for (size_t i = 0; i < times.size(); ++i) g_vals[i] = pb.g(times[i]);

    double t_lo = residual_window_start(pb.T);
    std::vector<double> out(size_t(K), 0.0);
    std::vector<double> y(times.size());
    for (int k = 1; k <= K; ++k) {
        for (size_t i = 0; i < times.size(); ++i) y[i] = traj[i].coeffs[size_t(k - 1)];
        std::vector<double> d = caputo_l1(times, y, pb.rho);
        double lam = pb.op.lambda(k);
        double fk = pb.f[k];
        double worst = 0.0;
        for (size_t i = 1; i < times.size(); ++i) {
            if (times[i] < t_lo) continue;
            double r = std::abs(d[i] + lam * y[i] - fk * g_vals[i]);
            worst = std::max(worst, r);
        }
        out[size_t(k - 1)] = worst;
    }
    return out;
}

} // namespace subdiff
