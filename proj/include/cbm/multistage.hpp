// Multi-stage model: exact backward induction on small systems and the
// rolling-horizon approximation driven by the two-stage heuristic.
#pragma once

#include "cbm/model.hpp"
#include "cbm/rng.hpp"
#include "cbm/two_stage.hpp"

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace cbm {

inline constexpr std::size_t kExactMaxComponents = 4;
inline constexpr int kExactMaxStates = 12;
inline constexpr int kExactMaxHorizon = 6;

/// Mixed-radix index of joint state vectors (component 0 varies fastest).
class StateSpace {
public:
    StateSpace(std::size_t n, int m) : n_(n), m_(m), size_(1) {
        for (std::size_t i = 0; i < n; ++i) size_ *= static_cast<std::size_t>(m);
    }

    std::size_t size() const { return size_; }

    std::size_t encode(const std::vector<int>& states) const {
        std::size_t idx = 0;
        for (std::size_t i = n_; i-- > 0;) idx = idx * static_cast<std::size_t>(m_) + static_cast<std::size_t>(states[i] - 1);
        return idx;
    }

    std::vector<int> decode(std::size_t idx) const {
        std::vector<int> s(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            s[i] = static_cast<int>(idx % static_cast<std::size_t>(m_)) + 1;
            idx /= static_cast<std::size_t>(m_);
        }
        return s;
    }

private:
    std::size_t n_;
    int m_;
    std::size_t size_;
};

struct MultistageSolution {
    double value = 0.0;  ///< V_1 at the instance's initial states
    int horizon = 0;
    StateSpace space{0, 2};
    std::vector<std::vector<double>> values;         ///< [t-1][state index]
    std::vector<std::vector<std::uint64_t>> policy;  ///< maintained-set bitmask per [t-1][state index]

    double value_at(int stage, const std::vector<int>& states) const {
        return values[static_cast<std::size_t>(stage - 1)][space.encode(states)];
    }

    StageDecision decision_at(int stage, const std::vector<int>& states, int m) const {
        const auto mask = policy[static_cast<std::size_t>(stage - 1)][space.encode(states)];
        return decision_for(states, m, ComponentSet::from_mask(states.size(), mask));
    }
};

namespace detail {

/// out(h) = sum_next prod_i Q_i(h_i, next_i) * v(next), via one contraction per axis.
inline std::vector<double> expected_next(const SystemInstance& inst, const StateSpace& space,
                                         const std::vector<double>& v) {
    const std::size_t n = inst.size();
    const auto m = static_cast<std::size_t>(inst.m);
    std::vector<double> cur = v;
    std::vector<double> nxt(space.size());
    std::size_t stride = 1;
    for (std::size_t axis = 0; axis < n; ++axis) {
        const auto& q = inst.components[axis].transition;
        const std::size_t block = stride * m;
        for (std::size_t base = 0; base < space.size(); base += block) {
            for (std::size_t off = 0; off < stride; ++off) {
                for (std::size_t a = 0; a < m; ++a) {
                    double acc = 0.0;
                    const double* row = q.row(static_cast<int>(a) + 1);
                    for (std::size_t b = 0; b < m; ++b) {
                        if (row[b] != 0.0) acc += row[b] * cur[base + b * stride + off];
                    }
                    nxt[base + a * stride + off] = acc;
                }
            }
        }
        std::swap(cur, nxt);
        stride = block;
    }
    return cur;
}

inline double terminal_cost(const SystemInstance& inst, const std::vector<int>& states) {
    return stage_cost(inst, second_stage_policy(states, inst.m));
}

}  // namespace detail

/**
 * @brief Exact multi-stage value by backward induction over joint states.
 *
 * At each node every feasible decision is tried (failed components are
 * forced into corrective maintenance); ties prefer fewer maintained
 * components, then the smaller bitmask.
 */
inline MultistageSolution exact_multistage(const SystemInstance& inst) {
    const std::size_t n = inst.size();
    if (n == 0) throw std::invalid_argument("exact multistage: empty instance");
    if (n > kExactMaxComponents || inst.m > kExactMaxStates || inst.horizon > kExactMaxHorizon) {
        throw GuardError("exact multistage solver is limited to n <= 4, m <= 12, T <= 6");
    }
    if (inst.horizon < 2) throw std::invalid_argument("exact multistage: horizon must be at least 2");

    MultistageSolution sol;
    sol.horizon = inst.horizon;
    sol.space = StateSpace(n, inst.m);
    const auto& space = sol.space;
    const auto T = static_cast<std::size_t>(inst.horizon);
    sol.values.assign(T, std::vector<double>(space.size(), 0.0));
    sol.policy.assign(T, std::vector<std::uint64_t>(space.size(), 0));

    for (std::size_t idx = 0; idx < space.size(); ++idx) {
        const auto s = space.decode(idx);
        const auto d = second_stage_policy(s, inst.m);
        sol.values[T - 1][idx] = stage_cost(inst, d);
        sol.policy[T - 1][idx] = d.x.mask();
    }

    // Working-component decisions ordered by (popcount, mask).
    std::vector<std::uint64_t> order(std::size_t{1} << n);
    std::iota(order.begin(), order.end(), std::uint64_t{0});
    std::stable_sort(order.begin(), order.end(), [](std::uint64_t a, std::uint64_t b) {
        return std::popcount(a) < std::popcount(b);
    });

    for (std::size_t t = T - 1; t-- > 0;) {
        const auto w = detail::expected_next(inst, space, sol.values[t + 1]);
        for (std::size_t idx = 0; idx < space.size(); ++idx) {
            const auto s = space.decode(idx);
            std::uint64_t forced = 0;
            double base = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (s[i] == inst.m) {
                    forced |= std::uint64_t{1} << i;
                    base += inst.components[i].cm_cost;
                }
            }
            double best = std::numeric_limits<double>::infinity();
            std::uint64_t best_mask = 0;
            bool first = true;
            for (auto choice : order) {
                if ((choice & forced) != 0) continue;
                const std::uint64_t x = choice | forced;
                double cost = base + (x != 0 ? inst.setup_cost : 0.0);
                std::size_t next_idx = 0;
                for (std::size_t i = n; i-- > 0;) {
                    const bool maintained = (x >> i) & 1U;
                    if (maintained && !((forced >> i) & 1U)) cost += inst.components[i].pm_cost;
                    const int h = maintained ? 1 : s[i];
                    next_idx = next_idx * static_cast<std::size_t>(inst.m) + static_cast<std::size_t>(h - 1);
                }
                cost += w[next_idx];
                if (first || cost < best - 1e-12 * std::max(1.0, std::abs(best))) {
                    first = false;
                    best = cost;
                    best_mask = x;
                }
            }
            sol.values[t][idx] = best;
            sol.policy[t][idx] = best_mask;
        }
    }
    sol.value = sol.values[0][space.encode(inst.states())];
    return sol;
}

/// First-stage decision of the two-stage problem posed at `states`.
inline StageDecision rolling_horizon_step(const SystemInstance& inst, const std::vector<int>& states,
                                          const Algo2Config& cfg, std::uint64_t substream = 0) {
    const auto local = inst.at_states(states);
    const auto sol = algorithm2(local, cfg, substream);
    return decision_for(states, inst.m, sol.partition.n1);
}

struct SimulationResult {
    double mean = 0.0;
    double std_dev = 0.0;  ///< sample standard deviation over replications
    std::size_t replications = 0;
    MaintenancePlan sample;  ///< trajectory of the first replication

    double std_error() const {
        return replications > 0 ? std_dev / std::sqrt(static_cast<double>(replications)) : 0.0;
    }
};

/// Next joint state drawn from the per-component rows (reset row if maintained).
inline std::vector<int> sample_next_states(const SystemInstance& inst, const std::vector<int>& states,
                                           const StageDecision& d, Rng& rng) {
    std::vector<int> next(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        const int from = d.x.contains(i) ? 1 : states[i];
        next[i] = rng.categorical(inst.components[i].transition.row(from), inst.m) + 1;
    }
    return next;
}

/**
 * One rolling-horizon trajectory over stages 1..T. Stage t < T takes the
 * two-stage first-stage decision; the last stage repairs failures only.
 */
inline MaintenancePlan rolling_horizon_path(const SystemInstance& inst, const Algo2Config& cfg, Rng& rng,
                                            std::uint64_t replication) {
    MaintenancePlan plan;
    auto states = inst.states();
    for (int t = 1; t <= inst.horizon; ++t) {
        StagePlan sp;
        sp.stage = t;
        sp.states = states;
        if (t < inst.horizon) {
            sp.decision = rolling_horizon_step(inst, states, cfg,
                                               replication * static_cast<std::uint64_t>(inst.horizon) +
                                                   static_cast<std::uint64_t>(t));
        } else {
            sp.decision = second_stage_policy(states, inst.m);
        }
        sp.cost = stage_cost(inst, sp.decision);
        plan.total_cost += sp.cost;
        if (t < inst.horizon) states = sample_next_states(inst, states, sp.decision, rng);
        plan.stages.push_back(std::move(sp));
    }
    return plan;
}

/// Monte Carlo estimate of the rolling-horizon policy cost; replication r uses stream (seed, r).
inline SimulationResult simulate_rolling_horizon(const SystemInstance& inst, std::size_t replications,
                                                 std::uint64_t seed, Algo2Config cfg = {}) {
    if (replications < 1) throw std::invalid_argument("simulation needs at least one replication");
    cfg.seed = seed;
    SimulationResult res;
    res.replications = replications;
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t r = 0; r < replications; ++r) {
        Rng rng(seed, r);
        auto plan = rolling_horizon_path(inst, cfg, rng, r);
        const double x = plan.total_cost;
        const double delta = x - mean;
        mean += delta / static_cast<double>(r + 1);
        m2 += delta * (x - mean);
        if (r == 0) res.sample = std::move(plan);
    }
    res.mean = mean;
    res.std_dev = replications > 1 ? std::sqrt(m2 / static_cast<double>(replications - 1)) : 0.0;
    return res;
}

}  // namespace cbm
