#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace linconts {

/// One bandit arm: reward-event probability mu and known reward value r.
struct ArmParams {
    double mu = 0.0;  // in [0, 1]
    double r = 0.0;   // in (0, 1]
};

/// Thrown when the optimal support contains arms with identical means,
/// which leaves the dual system singular.
class degeneracy_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LpSolution {
    std::vector<double> x;     // selection probabilities, length N
    double objective = 0.0;    // expected reward per round
    std::vector<int> support;  // indices with x_i > tolerance
    bool feasible = false;
};

/// Lagrange multipliers for the constrained-bandit LP.
struct DualCertificate {
    double lambda = 0.0;      // coverage constraint, >= 0
    double nu = 0.0;          // simplex constraint
    std::vector<double> psi;  // nonnegativity duals, >= 0
};

struct KktCondition {
    std::string name;
    double residual = 0.0;
    bool pass = false;
};

struct KktReport {
    std::vector<KktCondition> conditions;
    bool all_pass = false;
};

inline void validate_arms(const std::vector<ArmParams>& arms) {
    if (arms.empty()) throw std::invalid_argument("arm list is empty");
    for (std::size_t i = 0; i < arms.size(); ++i) {
        const auto& a = arms[i];
        if (!std::isfinite(a.mu) || a.mu < 0.0 || a.mu > 1.0)
            throw std::invalid_argument("arm " + std::to_string(i) +
                                        ": mu must be in [0, 1]");
        if (!std::isfinite(a.r) || a.r <= 0.0 || a.r > 1.0)
            throw std::invalid_argument("arm " + std::to_string(i) +
                                        ": r must be in (0, 1]");
    }
}

/// Maximize sum_i x_i mu_i r_i over the simplex subject to sum_i x_i mu_i >= eta.
///
/// The LP has two structural rows, so every basic feasible solution has at
/// most two nonzero entries. We enumerate all single-arm solutions with
/// mu_i >= eta and all two-arm mixtures (mu_a < eta <= mu_b) that meet the
/// constraint with equality, and keep the best objective. Ties prefer the
/// smaller support, then the lexicographically smallest index pair.
inline LpSolution solve_constrained_lp(const std::vector<ArmParams>& arms,
                                       double eta, double tol = 1e-9) {
    validate_arms(arms);
    if (!std::isfinite(eta) || eta < 0.0 || eta > 1.0)
        throw std::invalid_argument("eta must be in [0, 1]");

    const int n = static_cast<int>(arms.size());
    LpSolution sol;
    sol.x.assign(n, 0.0);

    double best = -1.0;
    int best_a = -1, best_b = -1;  // b < 0 means singleton
    double best_xa = 0.0;

    for (int i = 0; i < n; ++i) {
        if (arms[i].mu < eta) continue;  // mu_i == eta counts as feasible
        const double obj = arms[i].mu * arms[i].r;
        if (obj > best + tol) {
            best = obj;
            best_a = i;
            best_b = -1;
        }
    }

    for (int a = 0; a < n; ++a) {
        if (arms[a].mu >= eta) continue;
        for (int b = 0; b < n; ++b) {
            if (arms[b].mu < eta || b == a) continue;
            const double gap = arms[b].mu - arms[a].mu;
            const double xa = (arms[b].mu - eta) / gap;
            const double xb = (eta - arms[a].mu) / gap;
            const double obj = xa * arms[a].mu * arms[a].r + xb * arms[b].mu * arms[b].r;
            if (obj > best + tol) {
                best = obj;
                best_a = a;
                best_b = b;
                best_xa = xa;
            } else if (obj > best - tol && best_b >= 0) {
                // same objective, same support size: lexicographic pair order
                const int lo = std::min(a, b), hi = std::max(a, b);
                const int blo = std::min(best_a, best_b), bhi = std::max(best_a, best_b);
                if (lo < blo || (lo == blo && hi < bhi)) {
                    best_a = a;
                    best_b = b;
                    best_xa = xa;
                }
            }
        }
    }

    if (best_a < 0) {
        sol.feasible = false;
        return sol;
    }
    sol.feasible = true;
    sol.objective = best;
    if (best_b < 0) {
        sol.x[best_a] = 1.0;
    } else {
        sol.x[best_a] = best_xa;
        sol.x[best_b] = 1.0 - best_xa;
    }
    for (int i = 0; i < n; ++i)
        if (sol.x[i] > tol) sol.support.push_back(i);
    return sol;
}

/// Optimal dual variables for a feasible, optimal LP solution.
///
/// Two-arm support {a, b}: lambda and nu solve the stationarity system
/// r_i mu_i + lambda mu_i - nu = 0 on the support. Singleton support with
/// constraint slack: lambda = 0, nu = max_i r_i mu_i. Singleton support on
/// the constraint boundary: the smallest lambda >= 0 keeping all psi_i >= 0.
inline DualCertificate compute_dual_certificate(const std::vector<ArmParams>& arms,
                                                double eta,
                                                const LpSolution& solution,
                                                double tol = 1e-9) {
    if (!solution.feasible)
        throw std::invalid_argument("dual certificate requires a feasible solution");
    const int n = static_cast<int>(arms.size());
    DualCertificate duals;

    if (solution.support.size() == 2) {
        int a = solution.support[0], b = solution.support[1];
        if (arms[a].mu > arms[b].mu) std::swap(a, b);
        const double gap = arms[b].mu - arms[a].mu;
        if (std::abs(gap) <= tol)
            throw degeneracy_error("support arms have identical means");
        duals.lambda = (arms[a].r * arms[a].mu - arms[b].r * arms[b].mu) / gap;
        duals.nu = arms[a].mu * (arms[a].r + duals.lambda);
    } else if (solution.support.size() == 1) {
        const int a = solution.support[0];
        if (arms[a].mu > eta + tol) {
            duals.lambda = 0.0;
            double nu = 0.0;
            for (const auto& arm : arms) nu = std::max(nu, arm.mu * arm.r);
            duals.nu = nu;
        } else {
            // binding singleton: lambda must dominate every lower-mean arm
            double lambda = 0.0;
            for (int i = 0; i < n; ++i) {
                if (i == a || arms[i].mu >= arms[a].mu) continue;
                const double lb = (arms[i].r * arms[i].mu - arms[a].r * arms[a].mu) /
                                  (arms[a].mu - arms[i].mu);
                lambda = std::max(lambda, lb);
            }
            duals.lambda = lambda;
            duals.nu = arms[a].mu * (arms[a].r + lambda);
        }
    } else {
        throw std::invalid_argument("support size must be 1 or 2");
    }

    duals.psi.resize(n);
    for (int i = 0; i < n; ++i)
        duals.psi[i] = duals.nu - arms[i].mu * (arms[i].r + duals.lambda);
    return duals;
}

/// Complementary-slackness threshold xi_i = nu / (r_i + lambda) for a
/// suboptimal arm. Any perturbed mean below xi_i keeps the arm out of the
/// optimal support.
inline double slack_threshold(int arm_index, const std::vector<ArmParams>& arms,
                              const DualCertificate& duals, double tol = 1e-9) {
    if (arm_index < 0 || arm_index >= static_cast<int>(arms.size()))
        throw std::invalid_argument("arm index out of range");
    if (duals.psi[arm_index] <= tol)
        throw std::domain_error("slack threshold is defined only for suboptimal arms");
    return duals.nu / (arms[arm_index].r + duals.lambda);
}

inline KktReport verify_kkt(const std::vector<ArmParams>& arms, double eta,
                            const LpSolution& solution, const DualCertificate& duals,
                            double tol = 1e-8) {
    const int n = static_cast<int>(arms.size());
    double sum_x = 0.0, sum_xmu = 0.0, min_x = 0.0;
    for (int i = 0; i < n; ++i) {
        sum_x += solution.x[i];
        sum_xmu += solution.x[i] * arms[i].mu;
        min_x = std::min(min_x, solution.x[i]);
    }

    double primal = std::max({eta - sum_xmu, std::abs(sum_x - 1.0), -min_x, 0.0});
    double dual = std::max({-duals.lambda, 0.0});
    double stationarity = 0.0;
    double comp_slack = std::abs(duals.lambda * (eta - sum_xmu));
    for (int i = 0; i < n; ++i) {
        dual = std::max(dual, -duals.psi[i]);
        stationarity = std::max(
            stationarity, std::abs(arms[i].r * arms[i].mu + duals.lambda * arms[i].mu -
                                   duals.nu + duals.psi[i]));
        comp_slack = std::max(comp_slack, std::abs(solution.x[i] * duals.psi[i]));
    }
    const double gap = std::abs(solution.objective - (duals.nu - duals.lambda * eta));

    KktReport report;
    auto add = [&](const char* name, double residual) {
        report.conditions.push_back({name, residual, residual <= tol});
    };
    add("primal_feasibility", primal);
    add("dual_feasibility", dual);
    add("stationarity", stationarity);
    add("complementary_slackness", comp_slack);
    add("duality_gap", gap);
    report.all_pass = std::all_of(report.conditions.begin(), report.conditions.end(),
                                  [](const KktCondition& c) { return c.pass; });
    return report;
}

}  // namespace linconts
