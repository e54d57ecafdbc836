#pragma once

#include <functional>
#include <vector>

namespace subdiff {

struct QuadratureRule {
    int panels = 16;
    int nodes_per_panel = 12;
    // mesh grading exponent toward the singular endpoint; 0 means
    // "choose from rho" (max(2, ceil(3/rho)))
    double grading_exponent = 0.0;

    void validate() const;  // throws std::invalid_argument
    double grading_for(double rho) const;
};

struct GaussRule {
    std::vector<double> nodes;    // on (-1, 1)
    std::vector<double> weights;
};

// Nodes/weights for n-point Gauss-Legendre, computed once and cached.
const GaussRule& gauss_legendre(int n);

struct QuadResult {
    double value;
    double est_abs_err;   // |last halving step|
    double absmass;       // integral of |f|, same discretization
    int panels_used;
    bool converged;
};

using Integrand = std::function<double(double)>;

// Composite Gauss on [a,b] with mesh points a + (b-a)*(j/panels)^grading,
// i.e. graded toward a.
double integrate_graded(const Integrand& f, double a, double b,
                        int panels, int nodes, double grading);

// Panel doubling until |I_2P - I_P| <= max(rel_tol*|I_2P|, abs_floor),
// starting from rule.panels and capping at max_panels.
QuadResult integrate_adaptive(const Integrand& f, double a, double b,
                              const QuadratureRule& rule, double grading,
                              double rel_tol, double abs_floor,
                              int max_panels = 512);

} // namespace subdiff
