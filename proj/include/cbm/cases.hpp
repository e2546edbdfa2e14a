// Bundled field cases: wind-turbine blades and crude-oil pipelines.
#pragma once

#include "cbm/degradation.hpp"
#include "cbm/model.hpp"
#include "cbm/multistage.hpp"
#include "cbm/structural.hpp"

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace cbm {

/// Three blades, stationary gamma degradation, monthly rate with yearly inspection.
inline SystemInstance wind_case(double cm_cost = 600000.0, std::vector<int> states = {6, 5, 8}) {
    const auto params = GammaProcessParams::fixed(0.542, 1.147);
    const auto grid = make_state_grid(20.0, 11);
    SystemInstance inst;
    inst.setup_cost = 130000.0;
    inst.m = 11;
    inst.horizon = 10;
    inst.inspection_interval = 12.0;
    inst.failure_threshold = 20.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        inst.components.push_back(make_gamma_component(static_cast<int>(i) + 1, 200000.0, cm_cost, params, grid,
                                                       inst.inspection_interval, states[i]));
    }
    return inst;
}

/// 17 pipelines, gamma degradation with a gamma-distributed rate; 2 mm wall-loss budget.
inline SystemInstance pipeline_case(std::vector<int> states = {4, 8, 10, 5, 4, 9, 2, 10, 9, 9, 10, 7, 9, 1, 5, 10, 2}) {
    const auto params = GammaProcessParams::with_random_effect(1.0824, 8.556, 7.654);
    const auto grid = make_state_grid(2.0, 11);
    SystemInstance inst;
    inst.setup_cost = 200.0;
    inst.m = 11;
    inst.horizon = 5;
    inst.inspection_interval = 1.0;
    inst.failure_threshold = 2.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        inst.components.push_back(
            make_gamma_component(static_cast<int>(i) + 1, 5.0, 20.0, params, grid, inst.inspection_interval, states[i]));
    }
    return inst;
}

/// Action a single component would take on its own at `state` and stage t of T.
inline const char* standalone_action(const ComponentSpec& c, double setup_cost, int m, int state, int t, int T) {
    if (state == m) return "cm";
    if (t == T) return "none";
    ComponentSpec probe = c;
    probe.state = state;
    return standalone_decision(probe, setup_cost, m).maintain ? "pm" : "none";
}

struct CaseRow {
    int stage = 0;
    std::size_t component = 0;
    int state = 0;
    std::string action;
    std::string standalone;
    bool differs() const { return action != standalone; }
};

inline std::vector<CaseRow> case_rows(const SystemInstance& inst, const MaintenancePlan& plan) {
    std::vector<CaseRow> rows;
    for (const auto& sp : plan.stages) {
        for (std::size_t i = 0; i < sp.states.size(); ++i) {
            CaseRow r;
            r.stage = sp.stage;
            r.component = i + 1;
            r.state = sp.states[i];
            r.action = sp.decision.y.contains(i) ? "cm" : sp.decision.x.contains(i) ? "pm" : "none";
            r.standalone = standalone_action(inst.components[i], inst.setup_cost, inst.m, r.state, sp.stage,
                                             static_cast<int>(plan.stages.size()));
            rows.push_back(r);
        }
    }
    return rows;
}

namespace detail {

inline std::string case_cell(const CaseRow& r) {
    static const char* label_none = "no action";
    std::string a = r.action == "none" ? label_none : r.action == "pm" ? "PM" : "CM";
    std::string s = std::to_string(r.state) + " " + a;
    if (r.differs()) s += " *";
    return s;
}

inline std::string pad(const std::string& s, std::size_t w) {
    return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

}  // namespace detail

/**
 * Text decision table, "state action" per cell. `stages_as_rows` gives one
 * line per stage (wind layout); otherwise one line per component. Cells
 * marked * differ from the standalone decision.
 */
inline std::string render_case_table(const SystemInstance& inst, const MaintenancePlan& plan, bool stages_as_rows) {
    const auto rows = case_rows(inst, plan);
    const std::size_t n = inst.size();
    const std::size_t T = plan.stages.size();
    std::vector<int> thresholds;
    for (std::size_t i = 0; i < n; ++i) thresholds.push_back(standalone_decision(inst, i).threshold_state);

    std::ostringstream out;
    const std::size_t w = 14;
    auto at = [&](std::size_t t, std::size_t i) -> const CaseRow& { return rows[t * n + i]; };
    if (stages_as_rows) {
        out << detail::pad("t\\i", 5);
        for (std::size_t i = 0; i < n; ++i) out << detail::pad(std::to_string(i + 1), w);
        out << "xi*\n";
        for (std::size_t t = 0; t < T; ++t) {
            out << detail::pad(std::to_string(t + 1), 5);
            for (std::size_t i = 0; i < n; ++i) out << detail::pad(detail::case_cell(at(t, i)), w);
            if (t == 0) {
                for (std::size_t i = 0; i < n; ++i) out << (i ? "," : "") << thresholds[i];
            }
            out << '\n';
        }
    } else {
        out << detail::pad("i\\t", 5);
        for (std::size_t t = 0; t < T; ++t) out << detail::pad(std::to_string(t + 1), w);
        out << "xi*\n";
        for (std::size_t i = 0; i < n; ++i) {
            out << detail::pad(std::to_string(i + 1), 5);
            for (std::size_t t = 0; t < T; ++t) out << detail::pad(detail::case_cell(at(t, i)), w);
            out << thresholds[i] << '\n';
        }
    }
    out << "* differs from the decision without economic dependence\n";
    return out.str();
}

/// Q(g, m) for g = 1..m of one component, for threshold diagnostics.
inline std::vector<double> failure_column(const ComponentSpec& c) {
    std::vector<double> col;
    for (int g = 1; g <= c.transition.m(); ++g) col.push_back(c.transition.failure_prob(g));
    return col;
}

}  // namespace cbm
