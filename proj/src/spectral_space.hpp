#pragma once

#include <functional>
#include <string>
#include <vector>

namespace subdiff {

// Self-adjoint positive operator given by its ordered eigenvalue prefix and
// an optional eigenfunction evaluator on [0, domain_length].
struct SpectralOperator {
    std::vector<double> eigenvalues;  // lambda_k, k = 1..K (stored 0-based)
    std::function<double(int, double)> eigenfunction;  // (k, x) -> v_k(x), 1-based k
    double domain_length = 0.0;       // > 0 iff eigenfunction is present
    std::string label;

    int size() const { return int(eigenvalues.size()); }
    double lambda(int k) const { return eigenvalues[size_t(k - 1)]; }  // 1-based
    bool has_eigenfunctions() const { return bool(eigenfunction); }
    void validate() const;  // positivity + ordering, throws std::invalid_argument
};

struct SpectralVector {
    std::vector<double> coeffs;

    int size() const { return int(coeffs.size()); }
    double& operator[](int k) { return coeffs[size_t(k - 1)]; }        // 1-based
    double operator[](int k) const { return coeffs[size_t(k - 1)]; }
    static SpectralVector zeros(int K) { return {std::vector<double>(size_t(K), 0.0)}; }
};

SpectralOperator dirichlet_laplacian_1d(double length, int K);
SpectralOperator explicit_operator(std::vector<double> eigenvalues,
                                   std::string label = "explicit");

struct ProjectionResult {
    SpectralVector v;
    bool aliasing_warning;  // quad_nodes < K: coefficients may alias
};

// Fourier coefficients h_k = int h(x) v_k(x) dx by composite Gauss-Legendre
// with roughly quad_nodes total nodes. Requires an eigenfunction evaluator.
ProjectionResult project(const SpectralOperator& op,
                         const std::function<double(double)>& h, int quad_nodes);

// coefficient-space A^tau: (lambda_k^tau h_k)
SpectralVector apply_power(const SpectralOperator& op, double tau,
                           const SpectralVector& v);

// norm of the D(A^tau) scale: (sum lambda_k^{2 tau} h_k^2)^{1/2}
double norm_tau(const SpectralOperator& op, double tau, const SpectralVector& v);

// tail-decay diagnostic lambda_K^{2tau} v_K^2 / max_k lambda_k^{2tau} v_k^2;
// large values mean the truncation does not capture a D(A^tau) element
double tail_ratio(const SpectralOperator& op, double tau, const SpectralVector& v);

// physical-space synthesis sum_k v_k * eigenfunction_k(x)
double reconstruct_at(const SpectralOperator& op, const SpectralVector& v, double x);

} // namespace subdiff
