#include "spectral_space.hpp"
#include "quadrature.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace subdiff {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

void SpectralOperator::validate() const {
    if (eigenvalues.empty())
        throw std::invalid_argument("operator: needs at least one eigenvalue");
    if (!(eigenvalues[0] > 0.0)) {
        std::ostringstream os;
        os << "operator: lambda_1 = " << eigenvalues[0] << " must be positive";
        throw std::invalid_argument(os.str());
    }
    for (size_t i = 1; i < eigenvalues.size(); ++i) {
        if (eigenvalues[i] < eigenvalues[i - 1]) {
            std::ostringstream os;
            os << "operator: eigenvalues must be non-decreasing (violated at k="
               << (i + 1) << ")";
            throw std::invalid_argument(os.str());
        }
    }
}

SpectralOperator dirichlet_laplacian_1d(double length, int K) {
    if (!(length > 0.0))
        throw std::invalid_argument("dirichlet_laplacian_1d: length must be positive");
    if (K < 1) throw std::invalid_argument("dirichlet_laplacian_1d: K must be >= 1");
    SpectralOperator op;
    op.eigenvalues.resize(size_t(K));
    for (int k = 1; k <= K; ++k) {
        double w = k * kPi / length;
        op.eigenvalues[size_t(k - 1)] = w * w;
    }
    double amp = std::sqrt(2.0 / length);
    op.eigenfunction = [length, amp](int k, double x) {
        return amp * std::sin(k * kPi * x / length);
    };
    op.domain_length = length;
    std::ostringstream os;
    os << "dirichlet_1d length=" << length;
    op.label = os.str();
    op.validate();
    return op;
}

SpectralOperator explicit_operator(std::vector<double> eigenvalues, std::string label) {
    SpectralOperator op;
    op.eigenvalues = std::move(eigenvalues);
    op.label = std::move(label);
    op.validate();
    return op;
}

ProjectionResult project(const SpectralOperator& op,
                         const std::function<double(double)>& h, int quad_nodes) {
    if (!op.has_eigenfunctions())
        throw std::logic_error("project: operator has no eigenfunction evaluator");
    if (!h) throw std::invalid_argument("project: missing integrand");
    if (quad_nodes < 2) throw std::invalid_argument("project: quad_nodes must be >= 2");

    int K = op.size();
    ProjectionResult out{SpectralVector::zeros(K), quad_nodes < K};
    const int nodes = 16;
    int panels = std::max(4, (quad_nodes + nodes - 1) / nodes);
    for (int k = 1; k <= K; ++k) {
        auto f = [&](double x) { return h(x) * op.eigenfunction(k, x); };
        out.v[k] = integrate_graded(f, 0.0, op.domain_length, panels, nodes, 1.0);
    }
    return out;
}

SpectralVector apply_power(const SpectralOperator& op, double tau,
                           const SpectralVector& v) {
    if (op.size() != v.size())
        throw std::invalid_argument("apply_power: truncation mismatch");
    SpectralVector out = v;
    for (int k = 1; k <= v.size(); ++k) out[k] = std::pow(op.lambda(k), tau) * v[k];
    return out;
}

double norm_tau(const SpectralOperator& op, double tau, const SpectralVector& v) {
    if (op.size() != v.size())
        throw std::invalid_argument("norm_tau: truncation mismatch");
    double s = 0.0;
    for (int k = 1; k <= v.size(); ++k) {
        double a = std::pow(op.lambda(k), tau) * v[k];
        s += a * a;
    }
    return std::sqrt(s);
}

double tail_ratio(const SpectralOperator& op, double tau, const SpectralVector& v) {
    if (op.size() != v.size())
        throw std::invalid_argument("tail_ratio: truncation mismatch");
    int K = v.size();
    double maxterm = 0.0;
    for (int k = 1; k <= K; ++k) {
        double a = std::pow(op.lambda(k), tau) * v[k];
        maxterm = std::max(maxterm, a * a);
    }
    if (maxterm == 0.0) return 0.0;
    double last = std::pow(op.lambda(K), tau) * v[K];
    return last * last / maxterm;
}

double reconstruct_at(const SpectralOperator& op, const SpectralVector& v, double x) {
    if (!op.has_eigenfunctions())
        throw std::logic_error("reconstruct_at: operator has no eigenfunction evaluator");
    if (op.size() != v.size())
        throw std::invalid_argument("reconstruct_at: truncation mismatch");
    double s = 0.0;
    for (int k = 1; k <= v.size(); ++k) s += v[k] * op.eigenfunction(k, x);
    return s;
}

} // namespace subdiff
