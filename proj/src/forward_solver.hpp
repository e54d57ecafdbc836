#pragma once

#include "kernel.hpp"
#include "spectral_space.hpp"
#include "time_profile.hpp"

#include <vector>

namespace subdiff {

struct ForwardProblem {
    double rho = 0.5;
    double T = 1.0;
    SpectralOperator op;
    SpectralVector phi;
    SpectralVector f;
    TimeProfile g;
    QuadratureRule rule;

    void validate() const;  // shared truncation, parameter ranges
};

struct TrajectorySample {
    double t;
    std::vector<double> coeffs;  // u_k(t), k = 1..K
};

// u_k(t) = phi_k E_{rho,1}(-lambda_k t^rho) + f_k * convolve_source(...);
// u(0) = phi exactly.
std::vector<TrajectorySample> solve_forward(const ForwardProblem& pb,
                                            const std::vector<double>& times);

// default output grid: n uniform points including both endpoints
std::vector<double> uniform_times(double T, int n = 129);

// psi_k = phi_k T E_{rho,2}(-lambda_k T^rho) + f_k p_k(T)  (exact spectral image)
SpectralVector integrate_trajectory(const ForwardProblem& pb);

// independent cross-check: adaptive quadrature of the trajectory's time
// integral, with the source term integrated in convolution order against the
// running integral of g; shares no closed forms with integrate_trajectory
SpectralVector integrate_trajectory_quadrature(const ForwardProblem& pb);

// L1 discretization of the Caputo derivative of order rho on a uniform grid;
// first entry is 0 (the derivative is not evaluated at t = 0).
// rho = 1 falls back to second-order differences.
std::vector<double> caputo_l1(const std::vector<double>& t,
                              const std::vector<double>& y, double rho);

// max_i |D^rho u_k(t_i) + lambda_k u_k(t_i) - f_k g(t_i)| per mode, taken over
// grid points with t_i >= T/4 (the L1 error transient near t = 0 is excluded;
// see residual_window_start). Modes are solved on a uniform grid of
// grid_size+1 points.
std::vector<double> residual_per_mode(const ForwardProblem& pb, int grid_size);

inline double residual_window_start(double T) { return 0.25 * T; }

} // namespace subdiff
