#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "linconts/metrics.hpp"

using namespace linconts;

namespace {

const BanditInstance kInstanceA{{{0.1, 1.0}, {0.9, 0.1}, {0.3, 0.2}}, 0.5, "A"};

RunTrace constant_arm_trace(int arm, long horizon, int num_arms) {
    RunTrace trace;
    trace.num_arms = num_arms;
    trace.arm.assign(horizon, arm);
    trace.reward_event.assign(horizon, 0);
    trace.collected_reward.assign(horizon, 0.0);
    return trace;
}

}  // namespace

TEST_CASE("stationary optimum of the reference instance") {
    const auto sol = stationary_optimum(kInstanceA);
    CHECK(sol.objective == Catch::Approx(0.095).margin(1e-12));

    const BanditInstance single{{{0.6, 0.7}}, 0.5, "s"};
    CHECK(stationary_optimum(single).objective == Catch::Approx(0.42).margin(1e-12));

    const BanditInstance infeasible{{{0.2, 1.0}}, 0.5, "inf"};
    CHECK_THROWS_AS(stationary_optimum(infeasible), std::runtime_error);
}

TEST_CASE("regret of constructed traces") {
    const long T = 1000;

    // exact x* mixture: alternate arms 1 and 2 equally
    RunTrace mixture = constant_arm_trace(0, T, 3);
    for (long t = 0; t < T; t += 2) mixture.arm[t] = 1;
    const auto r_mix = regret_series(mixture, kInstanceA);
    CHECK(r_mix.back() == Catch::Approx(0.0).margin(1e-9));

    // arm 3 only: Delta_3 = 0.095 - 0.06 = 0.035 per round
    const auto r3 = regret_series(constant_arm_trace(2, T, 3), kInstanceA);
    CHECK(r3.back() == Catch::Approx(0.035 * T).margin(1e-9));
    CHECK(r3[9] == Catch::Approx(0.035 * 10).margin(1e-9));

    // arm 1 only: mu r = 0.1 > r*, clamped at zero
    const auto r1 = regret_series(constant_arm_trace(0, T, 3), kInstanceA);
    CHECK(r1.back() == 0.0);
}

TEST_CASE("violation of constructed traces") {
    const long T = 1000;
    const auto v2 = violation_series(constant_arm_trace(1, T, 3), kInstanceA);
    CHECK(v2.back() == 0.0);  // mu_2 = 0.9 > eta

    const auto v1 = violation_series(constant_arm_trace(0, T, 3), kInstanceA);
    CHECK(v1.back() == Catch::Approx(0.4 * T).margin(1e-9));

    RunTrace mixture = constant_arm_trace(0, T, 3);
    for (long t = 0; t < T; t += 2) mixture.arm[t] = 1;
    const auto v_mix = violation_series(mixture, kInstanceA);
    CHECK(v_mix.back() == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("cumulative reward and the guarded ratio") {
    RunTrace trace = constant_arm_trace(1, 2, 3);
    trace.reward_event = {1, 1};
    trace.collected_reward = {0.5, 0.5};
    const auto cum = cumulative_reward(trace);
    CHECK(cum == std::vector<double>{0.5, 1.0});

    const auto zeros = cumulative_reward(constant_arm_trace(1, 5, 3));
    for (double v : zeros) CHECK(v == 0.0);

    const auto ratio = reward_violation_ratio(cum, {0.0, 2.0});
    CHECK(std::isnan(ratio[0]));
    CHECK(ratio[1] == Catch::Approx(0.5));
}

TEST_CASE("count-based regret equals the per-round-sum form") {
    Rng rng(17);
    RunTrace trace;
    trace.num_arms = 3;
    const double r_star = stationary_optimum(kInstanceA).objective;
    double per_round_sum = 0.0;
    for (long t = 0; t < 5000; ++t) {
        const int arm = static_cast<int>(rng.uniform() * 3);
        trace.arm.push_back(arm);
        trace.reward_event.push_back(0);
        trace.collected_reward.push_back(0.0);
        per_round_sum += r_star - kInstanceA.arms[arm].mu * kInstanceA.arms[arm].r;
    }
    const auto r = regret_series(trace, kInstanceA);
    CHECK(r.back() == Catch::Approx(std::max(per_round_sum, 0.0)).margin(1e-9));
}

TEST_CASE("regret and violation are invariant to joint arm relabeling") {
    const auto trace = run_policy(Policy::LinConTS, kInstanceA, 3000, 5);

    BanditInstance permuted{{kInstanceA.arms[2], kInstanceA.arms[0], kInstanceA.arms[1]},
                            kInstanceA.eta,
                            "A-perm"};
    RunTrace relabeled = trace;
    const int relabel[3] = {1, 2, 0};  // old index -> new index
    for (auto& a : relabeled.arm) a = relabel[a];

    const auto r0 = regret_series(trace, kInstanceA);
    const auto r1 = regret_series(relabeled, permuted);
    CHECK(r0.back() == Catch::Approx(r1.back()).margin(1e-9));
    const auto v0 = violation_series(trace, kInstanceA);
    const auto v1 = violation_series(relabeled, permuted);
    CHECK(v0.back() == Catch::Approx(v1.back()).margin(1e-9));
}

TEST_CASE("aggregate of identical series has zero std") {
    MetricSeries s;
    s.t_grid = {1, 10, 100};
    s.regret = {0.0, 1.0, 2.0};
    s.violation = {0.0, 0.5, 0.5};
    s.cum_reward = {0.1, 1.0, 9.0};
    s.ratio = {kUndefinedRatio, 2.0, 18.0};
    const auto agg = aggregate_runs(std::vector<MetricSeries>(16, s));
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(agg.regret_std[i] == 0.0);
        CHECK(agg.regret_mean[i] == s.regret[i]);
    }
    CHECK(std::isnan(agg.ratio_mean[0]));
    CHECK(agg.ratio_mean[1] == Catch::Approx(2.0));
}

TEST_CASE("aggregate mean of two mirrored series") {
    MetricSeries a, b;
    a.t_grid = b.t_grid = {1, 2};
    a.regret = {0.0, 2.0};
    b.regret = {2.0, 0.0};
    a.violation = b.violation = {0.0, 0.0};
    a.cum_reward = b.cum_reward = {0.0, 0.0};
    a.ratio = b.ratio = {kUndefinedRatio, kUndefinedRatio};
    const auto agg = aggregate_runs({a, b});
    CHECK(agg.regret_mean == std::vector<double>{1.0, 1.0});

    MetricSeries c = a;
    c.t_grid = {1, 3};
    CHECK_THROWS_AS(aggregate_runs({a, c}), std::invalid_argument);
}

TEST_CASE("mean regret over 16 seeded runs is nondecreasing") {
    const auto grid = std::vector<long>{100, 500, 1000, 2000, 4000};
    std::vector<MetricSeries> series;
    for (std::uint64_t seed = 0; seed < 16; ++seed)
        series.push_back(
            compute_metrics(run_policy(Policy::LinConTS, kInstanceA, 4000, seed),
                            kInstanceA, grid));
    const auto agg = aggregate_runs(series);
    for (std::size_t i = 1; i < grid.size(); ++i)
        CHECK(agg.regret_mean[i] >= agg.regret_mean[i - 1] - 1e-9);
}
