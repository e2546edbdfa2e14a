// System instance and the two-stage maintenance cost model.
#pragma once

#include "cbm/component_set.hpp"
#include "cbm/degradation.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cbm {

struct ComponentSpec {
    int id = 1;  ///< 1-based
    double pm_cost = 0.0;
    double cm_cost = 0.0;
    std::optional<GammaProcessParams> degradation;  ///< absent when Q was given explicitly
    TransitionMatrix transition;
    int state = 1;  ///< observed state at the first stage, 1..m

    double q_fail_current() const { return transition.failure_prob(state); }
    double q_fail_new() const { return transition.failure_prob(1); }
};

struct SystemInstance {
    std::vector<ComponentSpec> components;
    double setup_cost = 0.0;
    int m = 2;
    int horizon = 2;
    double inspection_interval = 1.0;
    double failure_threshold = 20.0;

    std::size_t size() const { return components.size(); }

    std::vector<int> states() const {
        std::vector<int> s;
        s.reserve(components.size());
        for (const auto& c : components) s.push_back(c.state);
        return s;
    }

    ComponentSet failed_set() const {
        ComponentSet f(size());
        for (std::size_t i = 0; i < size(); ++i) {
            if (components[i].state == m) f.insert(i);
        }
        return f;
    }

    /// Same system observed at different states.
    SystemInstance at_states(const std::vector<int>& s) const {
        if (s.size() != size()) {
            throw std::invalid_argument("state vector length does not match component count");
        }
        SystemInstance copy = *this;
        for (std::size_t i = 0; i < size(); ++i) copy.components[i].state = s[i];
        return copy;
    }
};

/// First-stage decision: n0 = do nothing, n1 = maintain.
struct Partition {
    ComponentSet n0;
    ComponentSet n1;

    static Partition from_maintained(std::size_t n, const ComponentSet& maintained) {
        return Partition{ComponentSet::full(n) - maintained, maintained};
    }
    static Partition none(std::size_t n) { return Partition{ComponentSet::full(n), ComponentSet(n)}; }
    static Partition all(std::size_t n) { return Partition{ComponentSet(n), ComponentSet::full(n)}; }

    bool is_partition_of(std::size_t n) const {
        return n0.universe() == n && n1.universe() == n && !n0.intersects(n1) &&
               (n0 | n1) == ComponentSet::full(n);
    }

    friend bool operator==(const Partition&, const Partition&) = default;
};

inline bool is_feasible(const SystemInstance& inst, const Partition& p) {
    return p.is_partition_of(inst.size()) && inst.failed_set().is_subset_of(p.n1);
}

inline void require_feasible(const SystemInstance& inst, const Partition& p) {
    if (!p.is_partition_of(inst.size())) {
        throw std::invalid_argument("not a partition of the component set");
    }
    if (!inst.failed_set().is_subset_of(p.n1)) {
        throw std::invalid_argument("infeasible partition: a failed component is not maintained");
    }
}

/// Actions at one decision node; y (corrective) implies x (maintain) implies z (setup).
struct StageDecision {
    ComponentSet x;
    ComponentSet y;
    bool z = false;

    friend bool operator==(const StageDecision&, const StageDecision&) = default;
};

/// Decision of maintaining exactly `maintained` at the given states (CM forced on failures).
inline StageDecision decision_for(const std::vector<int>& states, int m, const ComponentSet& maintained) {
    StageDecision d{maintained, ComponentSet(states.size()), !maintained.empty()};
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i] == m) {
            d.y.insert(i);
            d.x.insert(i);
        }
    }
    d.z = !d.x.empty();
    return d;
}

/// Cost of one stage's actions.
inline double stage_cost(const SystemInstance& inst, const StageDecision& d) {
    double c = d.z ? inst.setup_cost : 0.0;
    d.x.for_each([&](std::size_t i) { c += inst.components[i].pm_cost; });
    d.y.for_each([&](std::size_t i) { c += inst.components[i].cm_cost - inst.components[i].pm_cost; });
    return c;
}

struct StagePlan {
    int stage = 1;
    std::vector<int> states;
    StageDecision decision;
    double cost = 0.0;
};

struct MaintenancePlan {
    std::vector<StagePlan> stages;
    double total_cost = 0.0;
};

struct Finding {
    enum class Severity { violation, warning };
    Severity severity = Severity::violation;
    std::string message;
};

/**
 * Structural checks on an instance. Violations make it unusable; warnings
 * flag atypical but well-defined regimes.
 */
inline std::vector<Finding> validate_instance(const SystemInstance& inst) {
    std::vector<Finding> out;
    auto violation = [&](std::string msg) { out.push_back({Finding::Severity::violation, std::move(msg)}); };
    auto warning = [&](std::string msg) { out.push_back({Finding::Severity::warning, std::move(msg)}); };

    if (inst.components.empty()) violation("instance has no components");
    if (inst.m < 2) violation("m must be at least 2");
    if (inst.horizon < 2) violation("horizon must be at least 2");
    if (!(inst.setup_cost >= 0.0) || !std::isfinite(inst.setup_cost)) violation("setup cost must be nonnegative");
    if (!(inst.inspection_interval > 0.0)) violation("inspection interval must be positive");

    for (const auto& c : inst.components) {
        const std::string tag = "component " + std::to_string(c.id) + ": ";
        if (!(c.pm_cost >= 0.0) || !std::isfinite(c.pm_cost)) violation(tag + "pm cost must be nonnegative");
        if (!(c.cm_cost >= 0.0) || !std::isfinite(c.cm_cost)) violation(tag + "cm cost must be nonnegative");
        if (c.state < 1 || c.state > inst.m) violation(tag + "state out of range");
        if (c.transition.m() != inst.m) {
            violation(tag + "transition matrix size does not match m");
            continue;
        }
        if (auto why = c.transition.check(); !why.empty()) violation(tag + why);
        for (int g = 2; g <= inst.m; ++g) {
            for (int h = 1; h < g; ++h) {
                if (c.transition(g, h) != 0.0) {
                    violation(tag + "transition matrix allows improvement without maintenance");
                    g = inst.m + 1;
                    break;
                }
            }
        }
        if (c.cm_cost < c.pm_cost) warning(tag + "cm cost below pm cost");
        if (c.transition.failure_prob(1) > 0.5) warning(tag + "new component fails within one interval with probability above 0.5");
    }
    return out;
}

inline bool has_violations(const std::vector<Finding>& findings) {
    for (const auto& f : findings) {
        if (f.severity == Finding::Severity::violation) return true;
    }
    return false;
}

/// Optimal action when no future stage follows: repair failures only.
inline StageDecision second_stage_policy(const std::vector<int>& states, int m) {
    StageDecision d{ComponentSet(states.size()), ComponentSet(states.size()), false};
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i] / m == 1) {  // floor(g / m) is 1 only for the failed state
            d.y.insert(i);
            d.x.insert(i);
        }
    }
    d.z = !d.x.empty();
    return d;
}

/// Expected cost of the terminal stage given the first-stage partition.
inline double expected_second_stage_cost(const SystemInstance& inst, const Partition& p) {
    require_feasible(inst, p);
    double cm_part = 0.0;
    double survive = 1.0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
        const auto& c = inst.components[i];
        const double q = p.n1.contains(i) ? c.q_fail_new() : c.q_fail_current();
        cm_part += q * c.cm_cost;
        survive *= 1.0 - q;
    }
    return cm_part + (1.0 - survive) * inst.setup_cost;
}

inline double first_stage_cost(const SystemInstance& inst, const Partition& p) {
    double c = p.n1.empty() ? 0.0 : inst.setup_cost;
    p.n1.for_each([&](std::size_t i) { c += inst.components[i].pm_cost; });
    for (const auto& comp : inst.components) {
        if (comp.state == inst.m) c += comp.cm_cost - comp.pm_cost;
    }
    return c;
}

inline double two_stage_total_cost(const SystemInstance& inst, const Partition& p) {
    return first_stage_cost(inst, p) + expected_second_stage_cost(inst, p);
}

inline ComponentSpec make_gamma_component(int id, double pm_cost, double cm_cost, const GammaProcessParams& params,
                                          const StateGrid& grid, double inspection_interval, int state) {
    ComponentSpec c;
    c.id = id;
    c.pm_cost = pm_cost;
    c.cm_cost = cm_cost;
    c.degradation = params;
    c.transition = build_transition_matrix(params, grid, inspection_interval);
    c.state = state;
    return c;
}

/// Probability of moving from `states` to `next` under `decision`.
inline double node_transition_prob(const SystemInstance& inst, const std::vector<int>& states,
                                   const StageDecision& decision, const std::vector<int>& next) {
    if (states.size() != inst.size() || next.size() != inst.size()) {
        throw std::invalid_argument("state vector length does not match component count");
    }
    double p = 1.0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
        const int from = decision.x.contains(i) ? 1 : states[i];
        p *= inst.components[i].transition(from, next[i]);
    }
    return p;
}

}  // namespace cbm
