#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "linconts/environment.hpp"
#include "linconts/lp.hpp"
#include "linconts/policies.hpp"

namespace linconts {

/// Metric values sampled on a (possibly sparse) grid of round indices.
/// ratio entries are NaN where the cumulative violation is zero.
struct MetricSeries {
    std::vector<long> t_grid;
    std::vector<double> regret;
    std::vector<double> violation;
    std::vector<double> cum_reward;
    std::vector<double> ratio;
};

/// Undefined-ratio sentinel (cumulative violation is zero).
inline constexpr double kUndefinedRatio = std::numeric_limits<double>::quiet_NaN();

/// Stationary optimum on the true means: x* and r*.
inline LpSolution stationary_optimum(const BanditInstance& instance) {
    const LpSolution sol = solve_constrained_lp(instance.arms, instance.eta);
    if (!sol.feasible)
        throw std::runtime_error("instance '" + instance.name +
                                 "' is infeasible: no arm mean reaches eta");
    return sol;
}

/// Expected-count regret R(t) = [sum_i Delta_i k_i(t+1)]_+ for every t,
/// with Delta_i = r* - mu_i r_i. The clamp is applied at each reporting
/// point, not per round.
inline std::vector<double> regret_series(const RunTrace& trace,
                                         const BanditInstance& instance) {
    if (trace.num_arms != instance.num_arms())
        throw std::invalid_argument("trace and instance disagree on arm count");
    const double r_star = stationary_optimum(instance).objective;
    std::vector<double> delta(instance.num_arms());
    for (int i = 0; i < instance.num_arms(); ++i)
        delta[i] = r_star - instance.arms[i].mu * instance.arms[i].r;

    std::vector<double> out(trace.horizon());
    double running = 0.0;
    for (long t = 0; t < trace.horizon(); ++t) {
        running += delta[trace.arm[t]];
        out[t] = std::max(running, 0.0);
    }
    return out;
}

/// Expected-count violation V(t) = [sum_i (eta - mu_i) k_i(t+1)]_+.
inline std::vector<double> violation_series(const RunTrace& trace,
                                            const BanditInstance& instance) {
    if (trace.num_arms != instance.num_arms())
        throw std::invalid_argument("trace and instance disagree on arm count");
    std::vector<double> out(trace.horizon());
    double running = 0.0;
    for (long t = 0; t < trace.horizon(); ++t) {
        running += instance.eta - instance.arms[trace.arm[t]].mu;
        out[t] = std::max(running, 0.0);
    }
    return out;
}

inline std::vector<double> cumulative_reward(const RunTrace& trace) {
    std::vector<double> out(trace.horizon());
    double running = 0.0;
    for (long t = 0; t < trace.horizon(); ++t) {
        running += trace.collected_reward[t];
        out[t] = running;
    }
    return out;
}

/// Pointwise cum_reward / violation with zero violations mapped to NaN.
inline std::vector<double> reward_violation_ratio(const std::vector<double>& cum_reward,
                                                  const std::vector<double>& violation) {
    if (cum_reward.size() != violation.size())
        throw std::invalid_argument("series length mismatch");
    std::vector<double> out(cum_reward.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = violation[i] > 0.0 ? cum_reward[i] / violation[i] : kUndefinedRatio;
    return out;
}

/// All four metrics of one run evaluated on a grid of round indices
/// (1-based, strictly increasing, within the trace horizon).
inline MetricSeries compute_metrics(const RunTrace& trace, const BanditInstance& instance,
                                    const std::vector<long>& t_grid) {
    if (trace.num_arms != instance.num_arms())
        throw std::invalid_argument("trace and instance disagree on arm count");
    const double r_star = stationary_optimum(instance).objective;

    MetricSeries s;
    s.t_grid = t_grid;
    s.regret.reserve(t_grid.size());
    s.violation.reserve(t_grid.size());
    s.cum_reward.reserve(t_grid.size());
    s.ratio.reserve(t_grid.size());

    double run_regret = 0.0, run_violation = 0.0, run_reward = 0.0;
    std::size_t g = 0;
    for (long t = 1; t <= trace.horizon() && g < t_grid.size(); ++t) {
        const int arm = trace.arm[t - 1];
        run_regret += r_star - instance.arms[arm].mu * instance.arms[arm].r;
        run_violation += instance.eta - instance.arms[arm].mu;
        run_reward += trace.collected_reward[t - 1];
        if (t == t_grid[g]) {
            const double reg = std::max(run_regret, 0.0);
            const double vio = std::max(run_violation, 0.0);
            s.regret.push_back(reg);
            s.violation.push_back(vio);
            s.cum_reward.push_back(run_reward);
            s.ratio.push_back(vio > 0.0 ? run_reward / vio : kUndefinedRatio);
            ++g;
        }
    }
    if (g != t_grid.size())
        throw std::invalid_argument("t_grid extends past the trace horizon");
    return s;
}

/// Pointwise mean and sample standard deviation across runs. NaN ratio
/// entries are skipped; a grid point where every run is NaN stays NaN.
struct AggregateSeries {
    std::vector<long> t_grid;
    std::vector<double> regret_mean, regret_std;
    std::vector<double> violation_mean, violation_std;
    std::vector<double> cum_reward_mean, cum_reward_std;
    std::vector<double> ratio_mean, ratio_std;
};

namespace detail {

inline void mean_std(const std::vector<const std::vector<double>*>& runs, std::size_t i,
                     double& mean, double& sd) {
    double sum = 0.0;
    int n = 0;
    for (const auto* r : runs) {
        const double v = (*r)[i];
        if (std::isnan(v)) continue;
        sum += v;
        ++n;
    }
    if (n == 0) {
        mean = sd = kUndefinedRatio;
        return;
    }
    mean = sum / n;
    if (n == 1) {
        sd = 0.0;
        return;
    }
    double ss = 0.0;
    for (const auto* r : runs) {
        const double v = (*r)[i];
        if (std::isnan(v)) continue;
        ss += (v - mean) * (v - mean);
    }
    sd = std::sqrt(ss / (n - 1));
}

}  // namespace detail

inline AggregateSeries aggregate_runs(const std::vector<MetricSeries>& runs) {
    if (runs.empty()) throw std::invalid_argument("no runs to aggregate");
    for (const auto& r : runs)
        if (r.t_grid != runs.front().t_grid)
            throw std::invalid_argument("aggregate_runs: mismatched grids");

    AggregateSeries agg;
    agg.t_grid = runs.front().t_grid;
    const std::size_t m = agg.t_grid.size();

    auto collect = [&](auto member, std::vector<double>& mean_out,
                       std::vector<double>& std_out) {
        std::vector<const std::vector<double>*> cols;
        for (const auto& r : runs) cols.push_back(&(r.*member));
        mean_out.resize(m);
        std_out.resize(m);
        for (std::size_t i = 0; i < m; ++i)
            detail::mean_std(cols, i, mean_out[i], std_out[i]);
    };
    collect(&MetricSeries::regret, agg.regret_mean, agg.regret_std);
    collect(&MetricSeries::violation, agg.violation_mean, agg.violation_std);
    collect(&MetricSeries::cum_reward, agg.cum_reward_mean, agg.cum_reward_std);
    collect(&MetricSeries::ratio, agg.ratio_mean, agg.ratio_std);
    return agg;
}

}  // namespace linconts
