// JSON/CSV formats: instance files, maintenance plans.
#pragma once

#include "cbm/degradation.hpp"
#include "cbm/model.hpp"
#include "cbm/two_stage.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cbm {

/// File could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Document parsed but does not describe a valid instance.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using json = nlohmann::json;

namespace detail {

inline double number_field(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw SchemaError(where + ": missing field \"" + key + "\"");
    if (!j.at(key).is_number()) throw SchemaError(where + ": field \"" + key + "\" must be a number");
    return j.at(key).get<double>();
}

inline int int_field(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw SchemaError(where + ": missing field \"" + key + "\"");
    if (!j.at(key).is_number_integer()) throw SchemaError(where + ": field \"" + key + "\" must be an integer");
    return j.at(key).get<int>();
}

}  // namespace detail

/**
 * Builds an instance from its JSON document. Each component needs either a
 * "gamma" block or an explicit m x m "Q"; when both are present Q wins.
 */
inline SystemInstance instance_from_json(const json& doc) {
    if (!doc.is_object()) throw SchemaError("instance: document must be an object");
    SystemInstance inst;
    inst.setup_cost = detail::number_field(doc, "setup_cost", "instance");
    inst.m = detail::int_field(doc, "m", "instance");
    inst.horizon = doc.contains("horizon") ? detail::int_field(doc, "horizon", "instance") : 2;
    inst.inspection_interval =
        doc.contains("inspection_interval") ? detail::number_field(doc, "inspection_interval", "instance") : 1.0;
    inst.failure_threshold =
        doc.contains("failure_threshold") ? detail::number_field(doc, "failure_threshold", "instance") : 20.0;
    if (inst.m < 2) throw SchemaError("instance: m must be at least 2");
    if (!doc.contains("components") || !doc.at("components").is_array()) {
        throw SchemaError("instance: \"components\" must be an array");
    }

    std::optional<StateGrid> grid;
    int next_id = 1;
    for (const auto& cj : doc.at("components")) {
        const std::string where = "component " + std::to_string(next_id);
        ComponentSpec c;
        c.id = cj.contains("id") ? detail::int_field(cj, "id", where) : next_id;
        c.pm_cost = detail::number_field(cj, "pm_cost", where);
        c.cm_cost = detail::number_field(cj, "cm_cost", where);
        c.state = detail::int_field(cj, "state", where);

        if (cj.contains("gamma")) {
            const auto& g = cj.at("gamma");
            const double alpha = detail::number_field(g, "alpha", where + " gamma");
            const bool has_rate = g.contains("rate");
            const bool has_re = g.contains("kappa") || g.contains("lambda");
            if (has_rate == has_re) {
                throw SchemaError(where + ": gamma needs exactly one of \"rate\" or \"kappa\"/\"lambda\"");
            }
            c.degradation = has_rate ? GammaProcessParams::fixed(alpha, detail::number_field(g, "rate", where))
                                     : GammaProcessParams::with_random_effect(
                                           alpha, detail::number_field(g, "kappa", where),
                                           detail::number_field(g, "lambda", where));
            try {
                c.degradation->validate();
            } catch (const std::domain_error& e) {
                throw SchemaError(where + ": " + e.what());
            }
        }

        if (cj.contains("Q")) {
            const auto& qj = cj.at("Q");
            if (!qj.is_array() || qj.size() != static_cast<std::size_t>(inst.m)) {
                throw SchemaError(where + ": Q must be an m x m array");
            }
            c.transition = TransitionMatrix(inst.m);
            for (int g = 1; g <= inst.m; ++g) {
                const auto& row = qj.at(static_cast<std::size_t>(g - 1));
                if (!row.is_array() || row.size() != static_cast<std::size_t>(inst.m)) {
                    throw SchemaError(where + ": Q must be an m x m array");
                }
                for (int h = 1; h <= inst.m; ++h) {
                    const auto& v = row.at(static_cast<std::size_t>(h - 1));
                    if (!v.is_number()) throw SchemaError(where + ": Q entries must be numbers");
                    c.transition(g, h) = v.get<double>();
                }
            }
        } else if (c.degradation) {
            if (!grid) grid = make_state_grid(inst.failure_threshold, inst.m);
            c.transition = build_transition_matrix(*c.degradation, *grid, inst.inspection_interval);
        } else {
            throw SchemaError(where + ": needs a \"gamma\" block or an explicit \"Q\"");
        }
        inst.components.push_back(std::move(c));
        ++next_id;
    }
    return inst;
}

inline json instance_to_json(const SystemInstance& inst, bool include_q = false) {
    json doc;
    doc["setup_cost"] = inst.setup_cost;
    doc["m"] = inst.m;
    doc["horizon"] = inst.horizon;
    doc["inspection_interval"] = inst.inspection_interval;
    doc["failure_threshold"] = inst.failure_threshold;
    doc["components"] = json::array();
    for (const auto& c : inst.components) {
        json cj;
        cj["id"] = c.id;
        cj["pm_cost"] = c.pm_cost;
        cj["cm_cost"] = c.cm_cost;
        cj["state"] = c.state;
        if (c.degradation) {
            json g;
            g["alpha"] = c.degradation->alpha;
            if (c.degradation->random_effect) {
                g["kappa"] = c.degradation->random_effect->kappa;
                g["lambda"] = c.degradation->random_effect->lambda;
            } else {
                g["rate"] = c.degradation->rate;
            }
            cj["gamma"] = g;
        }
        if (include_q || !c.degradation) {
            json q = json::array();
            for (int g = 1; g <= c.transition.m(); ++g) {
                json row = json::array();
                for (int h = 1; h <= c.transition.m(); ++h) row.push_back(c.transition(g, h));
                q.push_back(row);
            }
            cj["Q"] = q;
        }
        doc["components"].push_back(cj);
    }
    return doc;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error reading " + path);
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw IoError("error writing " + path);
}

inline SystemInstance load_instance(const std::string& path) {
    const auto text = read_text_file(path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(path + ": " + e.what());
    }
    return instance_from_json(doc);
}

inline json set_to_json(const ComponentSet& s) {
    json a = json::array();
    s.for_each([&](std::size_t i) { a.push_back(i + 1); });
    return a;
}

inline const char* action_name(const StageDecision& d, std::size_t i) {
    if (d.y.contains(i)) return "cm";
    if (d.x.contains(i)) return "pm";
    return "none";
}

inline json plan_to_json(const MaintenancePlan& plan) {
    json doc;
    doc["total_cost"] = plan.total_cost;
    doc["stages"] = json::array();
    for (const auto& sp : plan.stages) {
        json s;
        s["stage"] = sp.stage;
        s["states"] = sp.states;
        s["setup"] = sp.decision.z;
        s["cost"] = sp.cost;
        json actions = json::array();
        for (std::size_t i = 0; i < sp.states.size(); ++i) actions.push_back(action_name(sp.decision, i));
        s["actions"] = actions;
        doc["stages"].push_back(s);
    }
    return doc;
}

/// One row per (stage, component): stage,component,state,action,setup_flag,stage_cost.
inline std::string plan_to_csv(const MaintenancePlan& plan) {
    std::ostringstream out;
    out << "stage,component,state,action,setup_flag,stage_cost\n";
    out.precision(17);
    for (const auto& sp : plan.stages) {
        for (std::size_t i = 0; i < sp.states.size(); ++i) {
            out << sp.stage << ',' << (i + 1) << ',' << sp.states[i] << ',' << action_name(sp.decision, i) << ','
                << (sp.decision.z ? 1 : 0) << ',' << sp.cost << '\n';
        }
    }
    return out.str();
}

inline json trace_to_json(const Algo1Trace& trace) {
    json t;
    t["j_max"] = trace.j_max;
    t["sets_examined"] = trace.sets_examined;
    t["moves"] = json::array();
    for (const auto& mv : trace.moves) {
        t["moves"].push_back({{"set", set_to_json(mv.set)},
                              {"to", mv.destination == Destination::maintain ? "N1" : "N0"},
                              {"cardinality", mv.cardinality}});
    }
    return t;
}

}  // namespace cbm
