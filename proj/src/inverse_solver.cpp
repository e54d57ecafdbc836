#include "inverse_solver.hpp"
#include "special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace subdiff {

void InverseProblem::validate() const {
    op.validate();
    rule.validate();
    std::ostringstream os;
    if (!(rho > 0.0 && rho <= 1.0)) {
        os << "inverse problem: rho = " << rho << " outside (0, 1]";
        throw std::invalid_argument(os.str());
    }
    if (!(T > 0.0)) {
        os << "inverse problem: T = " << T << " must be positive";
        throw std::invalid_argument(os.str());
    }
    if (phi.size() != op.size() || psi.size() != op.size()) {
        os << "inverse problem: phi/psi truncation (" << phi.size() << ", "
           << psi.size() << ") does not match operator size " << op.size();
        throw std::invalid_argument(os.str());
    }
    if (g.horizon() < T * (1.0 - 1e-12)) {
        os << "inverse problem: profile horizon " << g.horizon()
           << " shorter than T = " << T;
        throw std::invalid_argument(os.str());
    }
}

bool ModePartition::in_kernel(int k) const {
    return std::binary_search(kernel.begin(), kernel.end(), k);
}

double default_tol_solv(const SpectralVector& psi) {
    double n = 0.0;
    for (double c : psi.coeffs) n += c * c;
    return 1e-8 * (1.0 + std::sqrt(n));
}

ModePartition partition_modes(const InverseProblem& pb, double eps_b) {
    pb.validate();
    if (!(eps_b > 0.0))
        throw std::invalid_argument("partition_modes: eps_b must be positive");
    int K = pb.op.size();
    ModePartition part;
    part.eps_b = eps_b;
    part.p_values.resize(size_t(K));
    part.thresholds.resize(size_t(K));
    for (int k = 1; k <= K; ++k) {
        double lam = pb.op.lambda(k);
        double p = kernel_p(pb.rho, lam, pb.g, pb.T, pb.rule);
        double thr = eps_b * kernel_p_scale(pb.rho, lam, pb.T);
        part.p_values[size_t(k - 1)] = p;
        part.thresholds[size_t(k - 1)] = thr;
        if (std::abs(p) > thr)
            part.nonzero.push_back(k);
        else
            part.kernel.push_back(k);
    }
    return part;
}

namespace {

double solvability_residual(const InverseProblem& pb, int k) {
    double w = std::pow(pb.T, pb.rho);
    double decay = ml_eval(MLParams{pb.rho, 2.0}, -pb.op.lambda(k) * w);
    return pb.psi[k] - pb.phi[k] * pb.T * decay;
}

} // namespace

std::vector<SolvabilityEntry> check_solvability(const InverseProblem& pb,
                                                const ModePartition& part,
                                                double tol_solv) {
    pb.validate();
    if (!(tol_solv > 0.0))
        throw std::invalid_argument("check_solvability: tol_solv must be positive");
    std::vector<SolvabilityEntry> report;
    report.reserve(part.kernel.size());
    for (int k : part.kernel) {
        SolvabilityEntry e;
        e.k = k;
        e.orthogonality = (pb.phi[k] == 0.0 && pb.psi[k] == 0.0);
        e.residual = e.orthogonality ? 0.0 : std::abs(solvability_residual(pb, k));
        e.ok = e.orthogonality || e.residual <= tol_solv;
        report.push_back(e);
    }
    return report;
}

InverseSolution solve_inverse(const InverseProblem& pb, const ModePartition& part,
                              const std::map<int, double>* free_values,
                              double tol_solv) {
    pb.validate();
    int K = pb.op.size();
    if (int(part.p_values.size()) != K)
        throw std::invalid_argument("solve_inverse: partition size mismatch");
    if (tol_solv < 0.0) tol_solv = default_tol_solv(pb.psi);

    InverseSolution sol;
    sol.tol_solv = tol_solv;
    sol.free_indices = part.kernel;
    sol.report = check_solvability(pb, part, tol_solv);
    sol.solvable = std::all_of(sol.report.begin(), sol.report.end(),
                               [](const SolvabilityEntry& e) { return e.ok; });
    if (!sol.solvable) return sol;  // f stays empty; report carries the residuals

    sol.f = SpectralVector::zeros(K);
    for (int k : part.nonzero)
        sol.f[k] = solvability_residual(pb, k) / part.p_values[size_t(k - 1)];
    for (int k : part.kernel) {
        double v = 0.0;
        if (free_values) {
            auto it = free_values->find(k);
            if (it != free_values->end()) v = it->second;
        }
        sol.f[k] = v;
        sol.free_values[k] = v;
    }
    if (free_values) {
        for (const auto& kv : *free_values) {
            if (!part.in_kernel(kv.first)) {
                std::ostringstream os;
                os << "solve_inverse: free value given for mode " << kv.first
                   << ", which is not a kernel mode";
                throw std::invalid_argument(os.str());
            }
        }
    }
    return sol;
}

ForwardProblem to_forward(const InverseProblem& pb, const SpectralVector& f) {
    ForwardProblem fp;
    fp.rho = pb.rho;
    fp.T = pb.T;
    fp.op = pb.op;
    fp.phi = pb.phi;
    fp.f = f;
    fp.g = pb.g;
    fp.rule = pb.rule;
    return fp;
}

std::vector<TrajectorySample> reconstruct_u(const InverseProblem& pb,
                                            const InverseSolution& sol,
                                            const std::vector<double>& times) {
    if (!sol.solvable)
        throw std::logic_error("reconstruct_u: instance is not solvable");
    return solve_forward(to_forward(pb, sol.f), times);
}

} // namespace subdiff
