#pragma once

#include "quadrature.hpp"
#include "time_profile.hpp"

namespace subdiff {

struct KernelEval {
    double value;
    double est_abs_err;
    int panels_used;
    bool converged;
};

// Source convolution  int_0^t (t-eta)^{rho-1} E_{rho,rho}(-lambda (t-eta)^rho) g(eta) d eta.
// The weakly singular part is removed exactly:  value = g(t) * t^rho E_{rho,rho+1}(-lambda t^rho)
// + int_0^t s^{rho-1} E_{rho,rho}(-lambda s^rho) [g(t-s) - g(t)] ds,
// and the remainder is integrated on a mesh graded toward s = 0.
double convolve_source(double rho, double lambda, const TimeProfile& g, double t,
                       const QuadratureRule& rule);  // throws AccuracyError on stall
KernelEval convolve_source_info(double rho, double lambda, const TimeProfile& g,
                                double t, const QuadratureRule& rule);

// Overdetermination kernel  p(T) = int_0^T g(eta) (T-eta)^rho E_{rho,rho+1}(-lambda (T-eta)^rho) d eta,
// same subtraction idea with base term g(T) * T^{rho+1} E_{rho,rho+2}(-lambda T^rho).
double kernel_p(double rho, double lambda, const TimeProfile& g, double T,
                const QuadratureRule& rule);
KernelEval kernel_p_info(double rho, double lambda, const TimeProfile& g, double T,
                         const QuadratureRule& rule);

// Characteristic magnitude of p at (rho, lambda, T): T^{rho+1}/(1 + lambda T^rho).
// Used for relative thresholds that stay meaningful across k.
double kernel_p_scale(double rho, double lambda, double T);

// lhs: brute-force double integral int_0^T int_0^t (t-eta)^{rho-1} E (...) g d eta dt
// (inner integral evaluated without the subtraction trick); rhs: kernel_p.
struct IdentityCheck { double lhs; double rhs; };
IdentityCheck double_integral_identity_check(double rho, double lambda,
                                             const TimeProfile& g, double T,
                                             const QuadratureRule& rule);

// psi_k = phi_k * T * E_{rho,2}(-lambda T^rho) + f_k * p(T)
double psi_coefficient(double rho, double lambda, double T, double phi_k, double f_k,
                       const TimeProfile& g, const QuadratureRule& rule);

} // namespace subdiff
