#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "linconts/environment.hpp"
#include "linconts/lp.hpp"
#include "linconts/rng.hpp"

namespace linconts {

/// Per-arm Beta posterior parameters, uniform Beta(1, 1) prior.
struct PosteriorState {
    std::vector<double> alpha;
    std::vector<double> beta;

    static PosteriorState uniform_prior(int n) {
        return {std::vector<double>(n, 1.0), std::vector<double>(n, 1.0)};
    }
    int num_arms() const { return static_cast<int>(alpha.size()); }
};

/// Per-arm play and success counts for LinCon-KL-UCB.
struct CountState {
    std::vector<long> plays;
    std::vector<long> successes;

    static CountState zeros(int n) {
        return {std::vector<long>(n, 0), std::vector<long>(n, 0)};
    }
    int num_arms() const { return static_cast<int>(plays.size()); }
};

/// Outcome of one policy round before the environment responds.
struct RoundDecision {
    std::vector<double> sampled_means;     // Thompson samples or UCB indices
    std::vector<double> selection_vector;  // sums to 1
    int chosen_arm = -1;
    bool lp_feasible = false;
    bool forced = false;  // round-robin initialization round
};

inline PosteriorState posterior_update(PosteriorState state, int arm, int reward_event) {
    if (arm < 0 || arm >= state.num_arms())
        throw std::invalid_argument("posterior_update: arm index out of range");
    if (reward_event != 0 && reward_event != 1)
        throw std::invalid_argument("posterior_update: reward event must be 0 or 1");
    state.alpha[arm] += reward_event;
    state.beta[arm] += 1 - reward_event;
    return state;
}

namespace detail {

/// Shared LP-then-sample step: solve the LP on estimated means, draw the
/// arm from the selection vector, fall back to uniform when infeasible.
inline RoundDecision select_from_means(std::vector<double> means,
                                       const std::vector<double>& rewards, double eta,
                                       Rng& rng) {
    const int n = static_cast<int>(means.size());
    RoundDecision d;
    d.sampled_means = std::move(means);

    std::vector<ArmParams> arms(n);
    for (int i = 0; i < n; ++i) arms[i] = {d.sampled_means[i], rewards[i]};
    const LpSolution sol = solve_constrained_lp(arms, eta);

    if (sol.feasible) {
        d.lp_feasible = true;
        d.selection_vector = sol.x;
    } else {
        d.lp_feasible = false;
        d.selection_vector.assign(n, 1.0 / n);
    }
    d.chosen_arm = rng.categorical(d.selection_vector);
    return d;
}

inline RoundDecision forced_round(int t, int n) {
    RoundDecision d;
    d.forced = true;
    d.chosen_arm = t - 1;  // 1-indexed round t plays arm t
    d.selection_vector.assign(n, 0.0);
    d.selection_vector[d.chosen_arm] = 1.0;
    return d;
}

}  // namespace detail

/// One LinConTS round. Rounds t = 1..N-1 play arm t deterministically;
/// afterwards one Beta sample is drawn per arm (in index order) and the LP
/// on the sampled means decides the selection vector.
inline RoundDecision linconts_round(const PosteriorState& state,
                                    const std::vector<double>& rewards, double eta,
                                    long t, Rng& rng) {
    const int n = state.num_arms();
    if (t < 1) throw std::invalid_argument("round index must be >= 1");
    if (t < n) return detail::forced_round(static_cast<int>(t), n);

    std::vector<double> samples(n);
    for (int i = 0; i < n; ++i) samples[i] = rng.beta(state.alpha[i], state.beta[i]);
    return detail::select_from_means(std::move(samples), rewards, eta, rng);
}

/// KL-UCB index: max{q in [s/k, 1) : k d(s/k, q) <= log t + c log log t}.
/// Unplayed arms get 1 (optimistic initialization). Bisection converges to
/// the machine-precision root, so the defining residual is tight.
inline double klucb_index(long s, long k, long t, double c = 0.0) {
    if (k == 0) return 1.0;
    if (s < 0 || s > k) throw std::invalid_argument("need 0 <= s <= k");
    if (c > 0.0 && t < 2)
        throw std::domain_error("log log t undefined for t < 2");

    double threshold = std::log(static_cast<double>(t));
    if (c != 0.0) threshold += c * std::log(std::log(static_cast<double>(t)));
    const double p = static_cast<double>(s) / static_cast<double>(k);
    if (threshold <= 0.0) return p;
    if (s == k) return std::exp(-threshold / static_cast<double>(k));

    // d(p, q) is strictly increasing in q on [p, 1) and diverges at q = 1.
    const double budget = threshold / static_cast<double>(k);
    auto kl = [p](double q) {
        double v = (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
        if (p > 0.0) v += p * std::log(p / q);
        return v;
    };
    double lo = p, hi = 1.0;
    for (int iter = 0; iter < 100 && hi - lo > 1e-15; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (kl(mid) <= budget)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

/// One LinCon-KL-UCB round; identical control flow to linconts_round with
/// KL-UCB indices in place of Thompson samples.
inline RoundDecision linconklucb_round(const CountState& state,
                                       const std::vector<double>& rewards, double eta,
                                       long t, double c, Rng& rng) {
    const int n = state.num_arms();
    if (t < 1) throw std::invalid_argument("round index must be >= 1");
    if (t < n) return detail::forced_round(static_cast<int>(t), n);

    std::vector<double> indices(n);
    for (int i = 0; i < n; ++i)
        indices[i] = klucb_index(state.successes[i], state.plays[i], t, c);
    return detail::select_from_means(std::move(indices), rewards, eta, rng);
}

enum class Policy { LinConTS, LinConKLUCB };

/// Per-round record of a full run. Selection vectors and samples are not
/// retained; everything downstream (metrics, traces) needs only these.
struct RunTrace {
    int num_arms = 0;
    std::vector<int> arm;                  // chosen arm per round
    std::vector<std::uint8_t> reward_event;
    std::vector<double> collected_reward;

    long horizon() const { return static_cast<long>(arm.size()); }

    std::vector<long> play_counts() const {
        std::vector<long> k(num_arms, 0);
        for (int a : arm) ++k[a];
        return k;
    }
};

struct PolicyParams {
    double klucb_c = 0.0;
};

/// Run one policy for T rounds against the instance's Bernoulli reward
/// events. Deterministic given (seed, instance, params): a single rng
/// stream drives posterior sampling, arm selection and the environment.
inline RunTrace run_policy(Policy policy, const BanditInstance& instance, long horizon,
                           std::uint64_t seed, const PolicyParams& params = {}) {
    const int n = instance.num_arms();
    if (horizon < n) throw std::invalid_argument("horizon must be >= number of arms");

    std::vector<double> rewards(n);
    for (int i = 0; i < n; ++i) rewards[i] = instance.arms[i].r;

    Rng rng(seed);
    RunTrace trace;
    trace.num_arms = n;
    trace.arm.reserve(horizon);
    trace.reward_event.reserve(horizon);
    trace.collected_reward.reserve(horizon);

    PosteriorState posterior = PosteriorState::uniform_prior(n);
    CountState counts = CountState::zeros(n);

    for (long t = 1; t <= horizon; ++t) {
        RoundDecision d;
        if (policy == Policy::LinConTS)
            d = linconts_round(posterior, rewards, instance.eta, t, rng);
        else
            d = linconklucb_round(counts, rewards, instance.eta, t, params.klucb_c, rng);

        const int event = sample_reward_event(instance, d.chosen_arm, rng);
        trace.arm.push_back(d.chosen_arm);
        trace.reward_event.push_back(static_cast<std::uint8_t>(event));
        trace.collected_reward.push_back(event ? rewards[d.chosen_arm] : 0.0);

        if (policy == Policy::LinConTS) {
            posterior = posterior_update(std::move(posterior), d.chosen_arm, event);
        } else {
            ++counts.plays[d.chosen_arm];
            counts.successes[d.chosen_arm] += event;
        }
    }
    return trace;
}

}  // namespace linconts
