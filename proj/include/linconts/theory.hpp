#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "linconts/environment.hpp"
#include "linconts/lp.hpp"
#include "linconts/metrics.hpp"

namespace linconts {

/// Bernoulli KL divergence d(p, q) with the conventions 0 log 0 = 0 and
/// d(p, q) = +inf for q in {0, 1} with p != q.
inline double bernoulli_kl(double p, double q) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must be in [0, 1]");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("q must be in [0, 1]");
    if (q == 0.0) return p == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    if (q == 1.0) return p == 1.0 ? 0.0 : std::numeric_limits<double>::infinity();
    double v = 0.0;
    if (p > 0.0) v += p * std::log(p / q);
    if (p < 1.0) v += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
    return v;
}

struct Thresholds {
    double y = 0.0;
    double z = 0.0;
};

/// The two proof thresholds for a suboptimal arm: y solves
/// d(y, xi) = d(mu, xi)/(1+gamma) on (mu, xi), and z solves
/// d(y, z) = d(mu, xi)/(1+gamma)^2 on (y, xi). Both roots are found by
/// bisection on the monotone sections of d.
inline Thresholds choose_thresholds(double mu, double xi, double gamma,
                                    double tol = 1e-12) {
    if (!(mu > 0.0 && mu < xi && xi < 1.0))
        throw std::invalid_argument("need 0 < mu < xi < 1");
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw std::invalid_argument("gamma must be in (0, 1]");

    const double d_mu_xi = bernoulli_kl(mu, xi);
    Thresholds th;

    // d(y, xi) is strictly decreasing in y on (0, xi), from d(mu, xi) at mu to 0.
    {
        const double target = d_mu_xi / (1.0 + gamma);
        double lo = mu, hi = xi;
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            if (bernoulli_kl(mid, xi) > target)
                lo = mid;
            else
                hi = mid;
        }
        th.y = 0.5 * (lo + hi);
    }
    // d(y, z) is strictly increasing in z on (y, 1), from 0 toward d(y, xi).
    {
        const double target = d_mu_xi / ((1.0 + gamma) * (1.0 + gamma));
        double lo = th.y, hi = xi;
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            if (bernoulli_kl(th.y, mid) < target)
                lo = mid;
            else
                hi = mid;
        }
        th.z = 0.5 * (lo + hi);
    }
    return th;
}

class threshold_range_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// kappa_j = z_i (r_i - lambda*) / (r_j - lambda*), with kappa_i := z_i.
/// The chord through (z_i, z_i r_i) and (kappa_j, kappa_j r_j) then has
/// slope lambda*.
inline std::vector<double> kappa_vector(double z_i, const std::vector<double>& rewards,
                                        double lambda_star, int arm_i) {
    const int n = static_cast<int>(rewards.size());
    if (arm_i < 0 || arm_i >= n) throw std::invalid_argument("arm index out of range");
    std::vector<double> kappa(n);
    std::string bad;
    for (int j = 0; j < n; ++j) {
        if (j == arm_i) {
            kappa[j] = z_i;
            continue;
        }
        const double denom = rewards[j] - lambda_star;
        if (std::abs(denom) < 1e-12)
            throw threshold_range_error("arm " + std::to_string(j) +
                                        ": r_j equals lambda*");
        kappa[j] = z_i * (rewards[arm_i] - lambda_star) / denom;
        if (!(kappa[j] > 0.0 && kappa[j] < 1.0))
            bad += (bad.empty() ? "arm " : ", arm ") + std::to_string(j);
    }
    if (!bad.empty())
        throw threshold_range_error("kappa outside (0, 1) for " + bad);
    return kappa;
}

/// epsilon_{1,i} = (kappa_2 - eta) / (kappa_2 - kappa_1): a lower bound on
/// the mass the perturbed LP assigns to the low-mean support arm.
inline double epsilon_one(double kappa1, double kappa2, double eta) {
    if (!(kappa2 > eta))
        throw std::invalid_argument("epsilon_one requires kappa2 > eta");
    if (!(kappa2 > kappa1))
        throw std::invalid_argument("epsilon_one requires kappa2 > kappa1");
    return (kappa2 - eta) / (kappa2 - kappa1);
}

/// Per-arm analytical quantities for a suboptimal arm.
struct ArmAnalysis {
    int arm = -1;
    double xi = 0.0;           // slack threshold
    double y = 0.0, z = 0.0;   // proof thresholds, mu < y < z < xi
    double L = 0.0;            // log T / d(y, z)
    std::vector<double> kappa;
    double epsilon1 = 0.0;
    double delta_prime = 0.0;  // mu_1 - kappa_1
    double D = 0.0;            // d(z, mu_1)
    double delta_plus = 0.0;   // max{0, r* - mu_i r_i}
    double small_delta_plus = 0.0;  // max{0, eta - mu_i}
};

/// Evaluated regret and violation bound terms. The O(N/gamma^2)
/// remainder has an unspecified constant and is reported symbolically.
struct BoundReport {
    double regret_leading = 0.0;
    double regret_sqrt = 0.0;
    double violation_leading = 0.0;
    double violation_sqrt = 0.0;
    std::string remainder_note = "O(N/gamma^2)";
};

namespace detail {

struct InstanceDuals {
    LpSolution solution;
    DualCertificate duals;
    int low_arm = -1;   // support arm with the smaller mean ("arm 1")
    int high_arm = -1;  // support arm with the larger mean ("arm 2")
};

inline InstanceDuals solve_with_duals(const BanditInstance& instance) {
    InstanceDuals out;
    out.solution = stationary_optimum(instance);
    out.duals = compute_dual_certificate(instance.arms, instance.eta, out.solution);
    if (out.solution.support.size() == 2) {
        int a = out.solution.support[0], b = out.solution.support[1];
        if (instance.arms[a].mu > instance.arms[b].mu) std::swap(a, b);
        out.low_arm = a;
        out.high_arm = b;
    } else {
        out.low_arm = out.high_arm = out.solution.support[0];
    }
    return out;
}

}  // namespace detail

/// Full threshold chain (xi, y, z, kappa, epsilon1) for one suboptimal
/// arm. Requires a two-arm
/// support; kappa pathologies surface as threshold_range_error.
inline ArmAnalysis analyze_arm(const BanditInstance& instance, int arm, double gamma,
                               double horizon_T) {
    const auto id = detail::solve_with_duals(instance);
    if (id.solution.support.size() != 2)
        throw std::invalid_argument("arm analysis needs a two-arm optimal support");
    if (id.duals.psi[arm] <= 1e-9)
        throw std::domain_error("arm analysis is defined only for suboptimal arms");

    ArmAnalysis a;
    a.arm = arm;
    a.xi = slack_threshold(arm, instance.arms, id.duals);
    const double mu = instance.arms[arm].mu;
    const Thresholds th = choose_thresholds(mu, a.xi, gamma);
    a.y = th.y;
    a.z = th.z;
    a.L = horizon_T > 1.0 ? std::log(horizon_T) / bernoulli_kl(a.y, a.z) : 0.0;

    std::vector<double> rewards(instance.num_arms());
    for (int i = 0; i < instance.num_arms(); ++i) rewards[i] = instance.arms[i].r;
    a.kappa = kappa_vector(a.z, rewards, id.duals.lambda, arm);

    const double mu1 = instance.arms[id.low_arm].mu;
    a.epsilon1 = epsilon_one(a.kappa[id.low_arm], a.kappa[id.high_arm], instance.eta);
    a.delta_prime = mu1 - a.kappa[id.low_arm];
    a.D = a.z * std::log(a.z / mu1) + (1.0 - a.z) * std::log((1.0 - a.z) / (1.0 - mu1));
    const double r_star = id.solution.objective;
    a.delta_plus = std::max(0.0, r_star - mu * instance.arms[arm].r);
    a.small_delta_plus = std::max(0.0, instance.eta - mu);
    return a;
}

/// Regret and violation bounds: leading and sqrt(T) terms at gamma, T.
inline BoundReport theorem_bounds(const BanditInstance& instance, double gamma,
                                  double horizon_T) {
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw std::invalid_argument("gamma must be in (0, 1]");
    if (!(horizon_T >= 2.0)) throw std::invalid_argument("T must be >= 2");

    const auto id = detail::solve_with_duals(instance);
    const double r_star = id.solution.objective;
    const double log_t = std::log(horizon_T);
    const double sqrt_term = 18.0 * std::sqrt(2.0 * horizon_T * std::log(2.0));

    BoundReport report;
    double delta_max = 0.0, small_delta_max = 0.0;
    double regret_sum = 0.0, violation_sum = 0.0;
    for (int i = 0; i < instance.num_arms(); ++i) {
        const double delta_plus =
            std::max(0.0, r_star - instance.arms[i].mu * instance.arms[i].r);
        const double small_delta_plus = std::max(0.0, instance.eta - instance.arms[i].mu);
        delta_max = std::max(delta_max, delta_plus);
        small_delta_max = std::max(small_delta_max, small_delta_plus);
        if (id.duals.psi[i] <= 1e-9) continue;  // support arm
        const double xi = slack_threshold(i, instance.arms, id.duals);
        // xi >= 1 means no mean in [0, 1] can pull the arm into the support:
        // d(mu_i, xi) diverges and the arm's leading term vanishes.
        if (xi >= 1.0) continue;
        const double d = bernoulli_kl(instance.arms[i].mu, xi);
        const double coeff = (1.0 + gamma) * (1.0 + gamma) / d;
        regret_sum += coeff * delta_plus;
        violation_sum += coeff * small_delta_plus;
    }
    report.regret_leading = regret_sum * log_t;
    report.violation_leading = violation_sum * log_t;
    report.regret_sqrt = delta_max * sqrt_term;
    report.violation_sqrt = small_delta_max * sqrt_term;
    return report;
}

struct Lemma2Bound {
    double explicit_terms = 0.0;
    std::string omitted = "tail sum with unspecified constants excluded";
};

/// Explicit terms of the suboptimal-play bound:
/// 2 + L_i(T) + 1/d(y_i, xi_i) + 24/(epsilon_{1,i} delta'_i^2).
inline Lemma2Bound lemma2_bound(const BanditInstance& instance, int arm, double gamma,
                                double horizon_T) {
    const ArmAnalysis a = analyze_arm(instance, arm, gamma, horizon_T);
    if (a.delta_prime <= 0.0)
        throw threshold_range_error("delta'_i <= 0: bound is vacuous for this instance");
    Lemma2Bound b;
    b.explicit_terms = 2.0 + a.L + 1.0 / bernoulli_kl(a.y, a.xi) +
                       24.0 / (a.epsilon1 * a.delta_prime * a.delta_prime);
    return b;
}

}  // namespace linconts
