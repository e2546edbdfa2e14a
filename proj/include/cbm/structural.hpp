// Improvement criteria for moving component sets between the do-nothing and
// maintenance sets of a two-stage partition.
//
// Moving N from N0 to N1 changes the total cost by
//     c_s * (sum_N rho_k + [N1 empty] - p(N0, N1) * r_N),
// and moving N from N1 to N0 changes it by
//     -c_s * (sum_N rho_k + [N1 \ N empty] - p(N0, N1) * s_N).
// delta_r / delta_s are these comparisons written as ratios against 1.
#pragma once

#include "cbm/component_set.hpp"
#include "cbm/model.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace cbm {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct StandaloneDecision {
    bool maintain = false;  ///< optimal action for the current state ignoring setup sharing
    int threshold_state = 2;  ///< smallest working state where PM pays off alone, m if none
};

/**
 * Optimal action for one component maintained in isolation (it pays the
 * whole setup cost itself). PM at state g beats waiting iff
 * Q(g,m) > (c_pm + c_s) / (c_cm + c_s) + Q(1,m).
 */
inline StandaloneDecision standalone_decision(const ComponentSpec& c, double setup_cost, int m) {
    const double denom = c.cm_cost + setup_cost;
    if (!(denom > 0.0)) {
        throw std::invalid_argument("standalone decision: cm cost plus setup cost must be positive");
    }
    const double ratio = (c.pm_cost + setup_cost) / denom;
    const double q_new = c.transition.failure_prob(1);
    auto pays_off = [&](int g) { return c.transition.failure_prob(g) > ratio + q_new; };

    StandaloneDecision d;
    d.maintain = c.state == m || pays_off(c.state);
    d.threshold_state = m;
    for (int g = 2; g < m; ++g) {
        if (pays_off(g)) {
            d.threshold_state = g;
            break;
        }
    }
    return d;
}

inline StandaloneDecision standalone_decision(const SystemInstance& inst, std::size_t i) {
    return standalone_decision(inst.components[i], inst.setup_cost, inst.m);
}

/// Per-component cost advantage of PM, in units of the setup cost. May be negative.
inline double rho(const ComponentSpec& c, double setup_cost) {
    if (!(setup_cost > 0.0)) {
        throw std::invalid_argument("rho requires a positive setup cost");
    }
    return (c.pm_cost - (c.q_fail_current() - c.q_fail_new()) * c.cm_cost) / setup_cost;
}

/// Probability that no component fails before the next stage.
inline double survival_prob(const SystemInstance& inst, const Partition& p) {
    if (!p.is_partition_of(inst.size())) {
        throw std::invalid_argument("survival_prob: not a partition of the component set");
    }
    double s = 1.0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
        const auto& c = inst.components[i];
        s *= 1.0 - (p.n1.contains(i) ? c.q_fail_new() : c.q_fail_current());
    }
    return s;
}

/// Relative survival gain from maintaining N; +inf if some member fails surely when left alone.
inline double r_value(const SystemInstance& inst, const ComponentSet& n) {
    if (n.empty()) throw std::invalid_argument("r_value: set must be nonempty");
    double ratio = 1.0;
    bool certain = false;
    n.for_each([&](std::size_t i) {
        const auto& c = inst.components[i];
        const double keep = 1.0 - c.q_fail_current();
        if (keep <= 0.0) {
            certain = true;
        } else {
            ratio *= (1.0 - c.q_fail_new()) / keep;
        }
    });
    return certain ? kInfinity : ratio - 1.0;
}

/// Relative survival loss from not maintaining N.
inline double s_value(const SystemInstance& inst, const ComponentSet& n) {
    if (n.empty()) throw std::invalid_argument("s_value: set must be nonempty");
    double ratio = 1.0;
    n.for_each([&](std::size_t i) {
        const auto& c = inst.components[i];
        const double keep_new = 1.0 - c.q_fail_new();
        if (keep_new <= 0.0) {
            throw std::domain_error("s_value: a new component fails with certainty");
        }
        ratio *= (1.0 - c.q_fail_current()) / keep_new;
    });
    return 1.0 - ratio;
}

struct MoveEvaluation {
    double delta = kInfinity;
    double rho_sum = 0.0;
    double ratio_term = 0.0;  ///< r_N or s_N
    double survival = 0.0;    ///< p(N0, N1) of the partition before the move
};

/**
 * @brief Precomputed per-component quantities for fast move evaluation.
 *
 * Algorithm 1 evaluates thousands of candidate sets against the same pair of
 * reference partitions; this caches Q(g,m), Q(1,m) and rho per component.
 */
class MoveCalculus {
public:
    explicit MoveCalculus(const SystemInstance& inst) : n_(inst.size()) {
        if (!(inst.setup_cost > 0.0)) {
            throw std::invalid_argument("move criteria require a positive setup cost");
        }
        q_cur_.reserve(n_);
        q_new_.reserve(n_);
        rho_.reserve(n_);
        failed_ = inst.failed_set();
        for (const auto& c : inst.components) {
            q_cur_.push_back(c.q_fail_current());
            q_new_.push_back(c.q_fail_new());
            rho_.push_back(rho(c, inst.setup_cost));
        }
    }

    std::size_t size() const { return n_; }
    double q_current(std::size_t i) const { return q_cur_[i]; }
    double q_new(std::size_t i) const { return q_new_[i]; }
    double rho_of(std::size_t i) const { return rho_[i]; }
    const ComponentSet& failed() const { return failed_; }

    double survival(const ComponentSet& maintained) const {
        double s = 1.0;
        for (std::size_t i = 0; i < n_; ++i) s *= 1.0 - (maintained.contains(i) ? q_new_[i] : q_cur_[i]);
        return s;
    }

    /**
     * Criterion for moving `members` (all currently in N0) into N1, where
     * `maintained` is N1 and `survival` is p(N0, N1).
     */
    MoveEvaluation delta_r(const ComponentSet& maintained, double survival,
                           const std::vector<std::size_t>& members) const {
        MoveEvaluation e;
        e.survival = survival;
        double keep_cur = 1.0;
        double keep_new = 1.0;
        for (auto i : members) {
            e.rho_sum += rho_[i];
            keep_cur *= 1.0 - q_cur_[i];
            keep_new *= 1.0 - q_new_[i];
        }
        double gain;  // p(N0 \ N, N1 u N) - p(N0, N1) = p * r_N
        if (keep_cur > 0.0) {
            e.ratio_term = keep_new / keep_cur - 1.0;
            gain = survival * e.ratio_term;
        } else {
            e.ratio_term = kInfinity;
            gain = survival_without(maintained, members) * keep_new;
        }
        const double numer = e.rho_sum + (maintained.empty() ? 1.0 : 0.0);
        e.delta = (e.ratio_term > 0.0 && gain > 0.0) ? numer / gain : kInfinity;
        return e;
    }

    /**
     * Criterion for moving `members` (all currently in N1) into N0, where
     * `maintained` is N1 and `survival` is p(N0, N1). The "+1" branch applies
     * when the move empties the maintenance set.
     */
    MoveEvaluation delta_s(const ComponentSet& maintained, double survival,
                           const std::vector<std::size_t>& members) const {
        MoveEvaluation e;
        e.survival = survival;
        double ratio = 1.0;
        for (auto i : members) {
            e.rho_sum += rho_[i];
            ratio *= (1.0 - q_cur_[i]) / (1.0 - q_new_[i]);
        }
        e.ratio_term = 1.0 - ratio;
        const double loss = survival * e.ratio_term;
        const bool empties = maintained.count() == members.size();
        const double numer = e.rho_sum + (empties ? 1.0 : 0.0);
        e.delta = (e.ratio_term > 0.0 && loss > 0.0) ? numer / loss : kInfinity;
        return e;
    }

private:
    double survival_without(const ComponentSet& maintained, const std::vector<std::size_t>& members) const {
        ComponentSet skip(n_);
        for (auto i : members) skip.insert(i);
        double s = 1.0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (skip.contains(i)) continue;
            s *= 1.0 - (maintained.contains(i) ? q_new_[i] : q_cur_[i]);
        }
        return s;
    }

    std::size_t n_;
    std::vector<double> q_cur_;
    std::vector<double> q_new_;
    std::vector<double> rho_;
    ComponentSet failed_;
};

namespace detail {

inline void check_move(const SystemInstance& inst, const Partition& p, const ComponentSet& n,
                       const ComponentSet& source, const char* what) {
    if (!p.is_partition_of(inst.size())) {
        throw std::invalid_argument(std::string(what) + ": not a partition of the component set");
    }
    if (n.empty()) throw std::invalid_argument(std::string(what) + ": set must be nonempty");
    if (!n.is_subset_of(source)) {
        throw std::invalid_argument(std::string(what) + ": set is not contained in the source side");
    }
}

}  // namespace detail

/// Moving N from N0 to N1 strictly lowers total cost iff the returned delta < 1.
inline MoveEvaluation delta_r(const SystemInstance& inst, const Partition& p, const ComponentSet& n) {
    detail::check_move(inst, p, n, p.n0, "delta_r");
    MoveCalculus calc(inst);
    return calc.delta_r(p.n1, calc.survival(p.n1), n.indices());
}

/// Moving N from N1 to N0 strictly lowers total cost iff the returned delta > 1.
inline MoveEvaluation delta_s(const SystemInstance& inst, const Partition& p, const ComponentSet& n) {
    detail::check_move(inst, p, n, p.n1, "delta_s");
    if (n.intersects(inst.failed_set())) {
        throw std::invalid_argument("delta_s: moving a failed component out of N1 is infeasible");
    }
    MoveCalculus calc(inst);
    return calc.delta_s(p.n1, calc.survival(p.n1), n.indices());
}

/// All-maintain partition when every component would be maintained on its own.
inline std::optional<Partition> prop1_shortcut(const SystemInstance& inst) {
    for (std::size_t i = 0; i < inst.size(); ++i) {
        if (!standalone_decision(inst, i).maintain) return std::nullopt;
    }
    return Partition::all(inst.size());
}

}  // namespace cbm
