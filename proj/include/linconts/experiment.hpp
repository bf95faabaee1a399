#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "linconts/environment.hpp"
#include "linconts/metrics.hpp"
#include "linconts/policies.hpp"
#include "linconts/theory.hpp"

namespace linconts {

class infeasible_instance_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SyntheticSpec {
    std::string kind;  // "coupon" or "edx"
    int n = 50;
    std::uint64_t seed = 0;
};

struct ExperimentConfig {
    std::optional<std::string> instance_csv;
    std::optional<SyntheticSpec> synthetic;
    std::optional<double> eta;  // overrides the instance default
    long horizon = 50000;
    int runs = 16;
    std::uint64_t base_seed = 0;
    std::vector<Policy> algorithms = {Policy::LinConTS, Policy::LinConKLUCB};
    double klucb_c = 0.0;
    double gamma = 0.5;
    std::string output_dir = ".";
    int grid_points = 200;
    int jobs = 1;
};

inline const char* policy_name(Policy p) {
    return p == Policy::LinConTS ? "linconts" : "linconklucb";
}

/// Logarithmic grid of ~points distinct round indices in [1, horizon].
inline std::vector<long> log_grid(long horizon, int points = 200) {
    std::vector<long> grid;
    if (horizon < 1) return grid;
    const double lo = 0.0, hi = std::log(static_cast<double>(horizon));
    for (int i = 0; i < points; ++i) {
        const double f = points == 1 ? 1.0 : static_cast<double>(i) / (points - 1);
        const long t = std::lround(std::exp(lo + f * (hi - lo)));
        if (grid.empty() || t > grid.back()) grid.push_back(std::min(t, horizon));
    }
    if (grid.back() != horizon) grid.push_back(horizon);
    return grid;
}

namespace detail {

/// Shortest round-trip decimal formatting, locale-independent.
inline std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

inline void resolve_eta(BanditInstance& instance, const ExperimentConfig& config) {
    if (config.eta) instance.eta = *config.eta;
}

inline BanditInstance build_instance(const ExperimentConfig& config) {
    BanditInstance instance;
    if (config.instance_csv) {
        instance = load_arms_csv(*config.instance_csv);
        instance.eta = config.eta.value_or(0.0);
    } else if (config.synthetic) {
        Rng rng(config.synthetic->seed);
        if (config.synthetic->kind == "coupon")
            instance = synth_coupon_like(config.synthetic->n, rng);
        else if (config.synthetic->kind == "edx")
            instance = synth_edx_like(config.synthetic->n, rng);
        else
            throw std::invalid_argument("unknown synthetic kind '" +
                                        config.synthetic->kind + "'");
        resolve_eta(instance, config);
    } else {
        throw std::invalid_argument("config needs either an instance CSV or a synthetic spec");
    }
    if (!instance.feasible()) {
        double mu_max = 0.0;
        for (const auto& a : instance.arms) mu_max = std::max(mu_max, a.mu);
        throw infeasible_instance_error(
            "instance infeasible: max mu = " + fmt(mu_max) + " < eta = " +
            fmt(instance.eta));
    }
    return instance;
}

inline void write_trace_csv(const std::filesystem::path& path, const RunTrace& trace) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path.string());
    out << "t,arm,reward_event,collected_reward\n";
    for (long t = 0; t < trace.horizon(); ++t)
        out << (t + 1) << ',' << (trace.arm[t] + 1) << ','
            << static_cast<int>(trace.reward_event[t]) << ','
            << fmt(trace.collected_reward[t]) << '\n';
    if (!out) throw io_error("write failed for " + path.string());
}

inline void write_aggregate_csv(const std::filesystem::path& path,
                                const AggregateSeries& agg) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path.string());
    out << "t,regret_mean,regret_std,violation_mean,violation_std,"
           "cumreward_mean,cumreward_std,ratio_mean,ratio_std\n";
    for (std::size_t i = 0; i < agg.t_grid.size(); ++i)
        out << agg.t_grid[i] << ',' << fmt(agg.regret_mean[i]) << ','
            << fmt(agg.regret_std[i]) << ',' << fmt(agg.violation_mean[i]) << ','
            << fmt(agg.violation_std[i]) << ',' << fmt(agg.cum_reward_mean[i]) << ','
            << fmt(agg.cum_reward_std[i]) << ',' << fmt(agg.ratio_mean[i]) << ','
            << fmt(agg.ratio_std[i]) << '\n';
    if (!out) throw io_error("write failed for " + path.string());
}

inline nlohmann::ordered_json instance_json(const BanditInstance& instance) {
    nlohmann::ordered_json j;
    j["name"] = instance.name;
    j["eta"] = instance.eta;
    j["arms"] = nlohmann::ordered_json::array();
    for (const auto& a : instance.arms) j["arms"].push_back({{"mu", a.mu}, {"r", a.r}});
    return j;
}

/// Stationary optimum, duals, per-arm slack thresholds and theorem bounds.
/// xi entries for support arms are null.
inline nlohmann::ordered_json summary_json(const BanditInstance& instance, double gamma,
                                           double horizon_T) {
    const LpSolution sol = stationary_optimum(instance);
    const DualCertificate duals =
        compute_dual_certificate(instance.arms, instance.eta, sol);

    nlohmann::ordered_json j;
    j["instance"] = instance_json(instance);
    j["x_star"] = sol.x;
    j["r_star"] = sol.objective;
    j["duals"] = {{"lambda", duals.lambda}, {"nu", duals.nu}, {"psi", duals.psi}};
    auto xi = nlohmann::ordered_json::array();
    for (int i = 0; i < instance.num_arms(); ++i) {
        if (duals.psi[i] > 1e-9)
            xi.push_back(slack_threshold(i, instance.arms, duals));
        else
            xi.push_back(nullptr);
    }
    j["xi"] = xi;
    const BoundReport bounds = theorem_bounds(instance, gamma, horizon_T);
    j["bounds"] = {{"regret_leading", bounds.regret_leading},
                   {"regret_sqrt", bounds.regret_sqrt},
                   {"violation_leading", bounds.violation_leading},
                   {"violation_sqrt", bounds.violation_sqrt},
                   {"remainder", "O(N/gamma^2)"}};
    return j;
}

}  // namespace detail

struct ExperimentResult {
    BanditInstance instance;
    std::vector<std::filesystem::path> files_written;
};

/// Execute the full experiment protocol: `runs` seeded runs per algorithm
/// (seed = base_seed + run index), one trace CSV per run, one aggregate CSV
/// per algorithm, one summary JSON. Runs execute in parallel up to `jobs`;
/// every output depends only on the run index, so scheduling does not
/// affect file contents.
inline ExperimentResult run_experiment(const ExperimentConfig& config) {
    if (config.runs < 1) throw std::invalid_argument("runs must be >= 1");
    if (config.jobs < 1) throw std::invalid_argument("jobs must be >= 1");
    if (!(config.gamma > 0.0 && config.gamma <= 1.0))
        throw std::invalid_argument("gamma must be in (0, 1]");

    ExperimentResult result;
    result.instance = detail::build_instance(config);
    const BanditInstance& instance = result.instance;
    if (config.horizon < instance.num_arms())
        throw std::invalid_argument("horizon must be >= number of arms");

    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    const std::filesystem::path out_dir = config.output_dir;
    const std::vector<long> grid = log_grid(config.horizon, config.grid_points);

    for (Policy policy : config.algorithms) {
        std::vector<MetricSeries> series(config.runs);
        std::vector<std::filesystem::path> trace_paths(config.runs);
        std::exception_ptr error;
        std::mutex error_mutex;

        auto worker = [&](int first, int step) {
            try {
                for (int r = first; r < config.runs; r += step) {
                    PolicyParams params;
                    params.klucb_c = config.klucb_c;
                    const RunTrace trace = run_policy(policy, instance, config.horizon,
                                                      config.base_seed + r, params);
                    series[r] = compute_metrics(trace, instance, grid);
                    trace_paths[r] =
                        out_dir / ("trace_" + std::string(policy_name(policy)) + "_run" +
                                   std::to_string(r) + ".csv");
                    detail::write_trace_csv(trace_paths[r], trace);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        };

        const int jobs = std::min(config.jobs, config.runs);
        if (jobs == 1) {
            worker(0, 1);
        } else {
            std::vector<std::thread> threads;
            for (int j = 0; j < jobs; ++j) threads.emplace_back(worker, j, jobs);
            for (auto& th : threads) th.join();
        }
        if (error) std::rethrow_exception(error);

        const auto agg_path =
            out_dir / ("aggregate_" + std::string(policy_name(policy)) + ".csv");
        detail::write_aggregate_csv(agg_path, aggregate_runs(series));
        for (auto& p : trace_paths) result.files_written.push_back(std::move(p));
        result.files_written.push_back(agg_path);
    }

    const auto summary_path = out_dir / "summary.json";
    {
        std::ofstream out(summary_path);
        if (!out) throw io_error("cannot write " + summary_path.string());
        out << detail::summary_json(instance, config.gamma,
                                    static_cast<double>(config.horizon))
                   .dump(2)
            << '\n';
        if (!out) throw io_error("write failed for " + summary_path.string());
    }
    result.files_written.push_back(summary_path);
    return result;
}

/// Bounds-only report: the summary JSON without any simulation.
inline nlohmann::ordered_json report_bounds(const ExperimentConfig& config) {
    const BanditInstance instance = detail::build_instance(config);
    return detail::summary_json(instance, config.gamma,
                                static_cast<double>(config.horizon));
}

/// Write an instance to the CSV arm schema (arm_id starting at 1).
inline void write_arms_csv(const std::filesystem::path& path,
                           const BanditInstance& instance) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path.string());
    out << "arm_id,mu,r\n";
    for (int i = 0; i < instance.num_arms(); ++i)
        out << (i + 1) << ',' << detail::fmt(instance.arms[i].mu) << ','
            << detail::fmt(instance.arms[i].r) << '\n';
    if (!out) throw io_error("write failed for " + path.string());
}

}  // namespace linconts
