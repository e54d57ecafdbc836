#include "quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace subdiff {

void QuadratureRule::validate() const {
    std::ostringstream os;
    if (panels < 1) {
        os << "quadrature: panels = " << panels << " must be >= 1";
        throw std::invalid_argument(os.str());
    }
    if (nodes_per_panel < 2 || nodes_per_panel > 64) {
        os << "quadrature: nodes_per_panel = " << nodes_per_panel
           << " outside [2, 64]";
        throw std::invalid_argument(os.str());
    }
    if (grading_exponent != 0.0 && grading_exponent < 1.0) {
        os << "quadrature: grading_exponent = " << grading_exponent
           << " must be >= 1 (or 0 for automatic)";
        throw std::invalid_argument(os.str());
    }
}

double QuadratureRule::grading_for(double rho) const {
    if (grading_exponent != 0.0) return grading_exponent;
    return std::max(2.0, std::ceil(3.0 / rho));
}

const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    if (n < 1 || n > 256) throw std::invalid_argument("gauss_legendre: n outside [1, 256]");
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double pi = 3.141592653589793238462643383279502884;
    int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence for P_n(x) and its derivative
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = 2.0;
    }
    auto res = cache.emplace(n, std::move(rule));
    return res.first->second;
}

namespace {

struct PassResult {
    double value;
    double absmass;
};

PassResult graded_pass(const Integrand& f, double a, double b,
                       int panels, int nodes, double grading) {
    const GaussRule& gr = gauss_legendre(nodes);
    double len = b - a;
    double acc = 0.0;
    double aacc = 0.0;
    double lo = a;
    for (int j = 1; j <= panels; ++j) {
        double hi = (j == panels) ? b : a + len * std::pow(double(j) / panels, grading);
        double c = 0.5 * (lo + hi);
        double hw = 0.5 * (hi - lo);
        if (hw > 0.0) {
            for (int q = 0; q < nodes; ++q) {
                double v = f(c + hw * gr.nodes[q]);
                acc += hw * gr.weights[q] * v;
                aacc += hw * gr.weights[q] * std::abs(v);
            }
        }
        lo = hi;
    }
    return {acc, aacc};
}

} // namespace

double integrate_graded(const Integrand& f, double a, double b,
                        int panels, int nodes, double grading) {
    if (!(b >= a)) throw std::invalid_argument("integrate_graded: b < a");
    if (a == b) return 0.0;
    return graded_pass(f, a, b, panels, nodes, grading).value;
}

QuadResult integrate_adaptive(const Integrand& f, double a, double b,
                              const QuadratureRule& rule, double grading,
                              double rel_tol, double abs_floor,
                              int max_panels) {
    rule.validate();
    if (!(b >= a)) throw std::invalid_argument("integrate_adaptive: b < a");
    if (a == b) return {0.0, 0.0, 0.0, 0, true};

    int panels = rule.panels;
    PassResult prev = graded_pass(f, a, b, panels, rule.nodes_per_panel, grading);
    while (panels < max_panels) {
        int next = panels * 2;
        PassResult cur = graded_pass(f, a, b, next, rule.nodes_per_panel, grading);
        double diff = std::abs(cur.value - prev.value);
        bool ok = diff <= std::max(rel_tol * std::abs(cur.value), abs_floor);
        if (ok) return {cur.value, diff, cur.absmass, next, true};
        prev = cur;
        panels = next;
    }
    // ran out of refinement budget: do one more halving to measure where we are
    PassResult cur = graded_pass(f, a, b, panels * 2, rule.nodes_per_panel, grading);
    double diff = std::abs(cur.value - prev.value);
    bool ok = diff <= std::max(rel_tol * std::abs(cur.value), abs_floor);
    return {cur.value, diff, cur.absmass, panels * 2, ok};
}

} // namespace subdiff
