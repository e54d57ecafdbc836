#pragma once

#include "forward_solver.hpp"

#include <map>
#include <vector>

namespace subdiff {

struct InverseProblem {
    double rho = 0.5;
    double T = 1.0;
    SpectralOperator op;
    SpectralVector phi;
    SpectralVector psi;
    TimeProfile g;
    QuadratureRule rule;

    void validate() const;
};

// Split of mode indices by whether the overdetermination kernel vanishes.
// The threshold scales like the kernel's natural magnitude (~1/lambda_k),
// so classification is uniform in k.
struct ModePartition {
    std::vector<int> nonzero;      // |p_k| above threshold; uniquely solvable modes
    std::vector<int> kernel;       // |p_k| below threshold; free modes
    std::vector<double> p_values;  // p_k for k = 1..K
    std::vector<double> thresholds;
    double eps_b = 0.0;

    bool in_kernel(int k) const;
};

struct SolvabilityEntry {
    int k;
    double residual;           // |psi_k - phi_k T E_{rho,2}(-lambda_k T^rho)|
    bool orthogonality;        // passed via phi_k = psi_k = 0
    bool ok;
};

struct InverseSolution {
    SpectralVector f;                 // empty when solvable == false
    std::vector<int> free_indices;    // kernel modes
    std::map<int, double> free_values;
    bool solvable = false;
    double tol_solv = 0.0;
    std::vector<SolvabilityEntry> report;  // one entry per kernel mode
};

inline constexpr double kDefaultEpsB = 1e-9;

// default tolerance for the solvability condition: 1e-8 * (1 + ||psi||)
double default_tol_solv(const SpectralVector& psi);

ModePartition partition_modes(const InverseProblem& pb, double eps_b = kDefaultEpsB);

std::vector<SolvabilityEntry> check_solvability(const InverseProblem& pb,
                                                const ModePartition& part,
                                                double tol_solv);

// f_k = (psi_k - phi_k T E_{rho,2}(-lambda_k T^rho)) / p_k on nonzero modes;
// kernel modes require the solvability condition and take free values
// (default 0). An unsolvable instance is a normal result, not an error.
InverseSolution solve_inverse(const InverseProblem& pb, const ModePartition& part,
                              const std::map<int, double>* free_values = nullptr,
                              double tol_solv = -1.0);

// forward evaluation with the recovered f; throws std::logic_error when
// called on an unsolvable solution
std::vector<TrajectorySample> reconstruct_u(const InverseProblem& pb,
                                            const InverseSolution& sol,
                                            const std::vector<double>& times);

ForwardProblem to_forward(const InverseProblem& pb, const SpectralVector& f);

} // namespace subdiff
