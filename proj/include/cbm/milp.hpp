// Linearized two-stage model and its CPLEX-LP text form.
//
// The survival product prod_i (b_i + a_i x_i), with b_i = 1 - Q_i(g_i,m) and
// a_i = Q_i(g_i,m) - Q_i(1,m), expands to sum over subsets S of
// prod_{i in S} a_i * prod_{r not in S} b_r * prod_{i in S} x_i. Each product of
// two or more x's gets a binary u_S with u_S <= x_i (i in S) and
// u_S >= sum_{i in S} x_i - (|S| - 1). Terms with |S| <= 1 are folded into the
// constant and the x coefficients.
//
// Variable names: x_i, y_i (component ids 1..n), z, and u_j_k for the k-th
// (1-based) subset of size j in ascending bitmask order.
#pragma once

#include "cbm/model.hpp"
#include "cbm/two_stage.hpp"

#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cbm {

inline constexpr std::size_t kMilpMaxComponents = 15;

struct MilpTerm {
    std::size_t var = 0;
    double coef = 0.0;
};

enum class RowSense { le, ge, eq };

struct MilpRow {
    std::string name;
    std::vector<MilpTerm> terms;
    RowSense sense = RowSense::le;
    double rhs = 0.0;
};

struct MilpModel {
    std::size_t n = 0;
    std::vector<std::string> var_names;
    std::vector<double> objective;  ///< one coefficient per variable
    double objective_constant = 0.0;
    std::vector<MilpRow> rows;
    std::vector<double> a;  ///< Q_i(g_i,m) - Q_i(1,m)
    std::vector<double> b;  ///< 1 - Q_i(g_i,m)
    std::vector<std::uint64_t> u_subsets;  ///< member bitmask for each u variable, in variable order

    std::size_t x_var(std::size_t i) const { return i; }
    std::size_t y_var(std::size_t i) const { return n + i; }
    std::size_t z_var() const { return 2 * n; }
    std::size_t u_var(std::size_t k) const { return 2 * n + 1 + k; }
    std::size_t u_count() const { return u_subsets.size(); }
};

/// Coefficient of prod_{i in S} x_i in the survival-product expansion.
inline double subset_coefficient(const MilpModel& model, std::uint64_t subset) {
    double c = 1.0;
    for (std::size_t i = 0; i < model.n; ++i) c *= ((subset >> i) & 1U) ? model.a[i] : model.b[i];
    return c;
}

inline MilpModel linearize(const SystemInstance& inst) {
    const std::size_t n = inst.size();
    if (n == 0) throw std::invalid_argument("linearize: empty instance");
    if (n > kMilpMaxComponents) throw GuardError("MILP export is limited to 15 components");
    if (!(inst.setup_cost >= 0.0)) throw std::invalid_argument("linearize: setup cost must be nonnegative");

    MilpModel model;
    model.n = n;
    for (std::size_t i = 0; i < n; ++i) model.var_names.push_back("x_" + std::to_string(i + 1));
    for (std::size_t i = 0; i < n; ++i) model.var_names.push_back("y_" + std::to_string(i + 1));
    model.var_names.push_back("z");

    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    for (std::size_t j = 2; j <= n; ++j) {
        std::size_t k = 0;
        for (std::uint64_t s = 0; s <= full; ++s) {
            if (static_cast<std::size_t>(std::popcount(s)) != j) continue;
            ++k;
            model.u_subsets.push_back(s);
            model.var_names.push_back("u_" + std::to_string(j) + "_" + std::to_string(k));
        }
    }
    model.objective.assign(model.var_names.size(), 0.0);

    for (const auto& c : inst.components) {
        model.b.push_back(1.0 - c.q_fail_current());
        model.a.push_back(c.q_fail_current() - c.q_fail_new());
    }

    const double cs = inst.setup_cost;
    // first stage
    for (std::size_t i = 0; i < n; ++i) {
        const auto& c = inst.components[i];
        model.objective[model.x_var(i)] += c.pm_cost;
        model.objective[model.y_var(i)] += c.cm_cost - c.pm_cost;
    }
    model.objective[model.z_var()] += cs;
    // expected corrective cost: Q_g c_cm - a_i c_cm x_i
    for (std::size_t i = 0; i < n; ++i) {
        const auto& c = inst.components[i];
        model.objective_constant += c.q_fail_current() * c.cm_cost;
        model.objective[model.x_var(i)] -= model.a[i] * c.cm_cost;
    }
    // setup risk: c_s * (1 - sum_S coef_S prod x_S)
    model.objective_constant += cs * (1.0 - subset_coefficient(model, 0));
    for (std::size_t i = 0; i < n; ++i) {
        model.objective[model.x_var(i)] -= cs * subset_coefficient(model, std::uint64_t{1} << i);
    }
    for (std::size_t k = 0; k < model.u_count(); ++k) {
        model.objective[model.u_var(k)] -= cs * subset_coefficient(model, model.u_subsets[k]);
    }

    for (std::size_t i = 0; i < n; ++i) {
        model.rows.push_back({"setup_" + std::to_string(i + 1),
                              {{model.x_var(i), 1.0}, {model.z_var(), -1.0}}, RowSense::le, 0.0});
    }
    for (std::size_t i = 0; i < n; ++i) {
        // g_i (1 - y_i) <= m - 1
        const double g = inst.components[i].state;
        model.rows.push_back({"failed_" + std::to_string(i + 1), {{model.y_var(i), -g}}, RowSense::le,
                              static_cast<double>(inst.m - 1) - g});
    }
    for (std::size_t i = 0; i < n; ++i) {
        model.rows.push_back({"cm_implies_pm_" + std::to_string(i + 1),
                              {{model.y_var(i), 1.0}, {model.x_var(i), -1.0}}, RowSense::le, 0.0});
    }
    for (std::size_t k = 0; k < model.u_count(); ++k) {
        const auto s = model.u_subsets[k];
        const auto& uname = model.var_names[model.u_var(k)];
        MilpRow lower{"link_lo_" + uname, {{model.u_var(k), 1.0}}, RowSense::ge,
                      -static_cast<double>(std::popcount(s) - 1)};
        for (std::size_t i = 0; i < n; ++i) {
            if (!((s >> i) & 1U)) continue;
            model.rows.push_back({"link_up_" + uname + "_" + std::to_string(i + 1),
                                  {{model.u_var(k), 1.0}, {model.x_var(i), -1.0}}, RowSense::le, 0.0});
            lower.terms.push_back({model.x_var(i), -1.0});
        }
        model.rows.push_back(std::move(lower));
    }
    return model;
}

struct BinaryAssignment {
    std::vector<bool> x;
    std::vector<bool> y;
    bool z = false;
};

/// Full variable vector with u set to the product of its x's.
inline std::vector<double> complete_assignment(const MilpModel& model, const BinaryAssignment& asg) {
    std::vector<double> v(model.var_names.size(), 0.0);
    std::uint64_t xmask = 0;
    for (std::size_t i = 0; i < model.n; ++i) {
        v[model.x_var(i)] = asg.x[i] ? 1.0 : 0.0;
        v[model.y_var(i)] = asg.y[i] ? 1.0 : 0.0;
        if (asg.x[i]) xmask |= std::uint64_t{1} << i;
    }
    v[model.z_var()] = asg.z ? 1.0 : 0.0;
    for (std::size_t k = 0; k < model.u_count(); ++k) {
        v[model.u_var(k)] = ((model.u_subsets[k] & xmask) == model.u_subsets[k]) ? 1.0 : 0.0;
    }
    return v;
}

inline bool row_satisfied(const MilpRow& row, const std::vector<double>& v, double tol = 1e-9) {
    double lhs = 0.0;
    for (const auto& t : row.terms) lhs += t.coef * v[t.var];
    switch (row.sense) {
        case RowSense::le: return lhs <= row.rhs + tol;
        case RowSense::ge: return lhs >= row.rhs - tol;
        case RowSense::eq: return std::abs(lhs - row.rhs) <= tol;
    }
    return false;
}

/// Objective at a feasible (x, y, z) with u_S = prod_{i in S} x_i.
inline double evaluate_linearized_objective(const MilpModel& model, const BinaryAssignment& asg) {
    if (asg.x.size() != model.n || asg.y.size() != model.n) {
        throw std::invalid_argument("assignment size does not match model");
    }
    const auto v = complete_assignment(model, asg);
    for (const auto& row : model.rows) {
        if (!row_satisfied(row, v)) throw std::invalid_argument("assignment violates row " + row.name);
    }
    double obj = model.objective_constant;
    for (std::size_t k = 0; k < v.size(); ++k) obj += model.objective[k] * v[k];
    return obj;
}

namespace detail {

inline std::string lp_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void lp_terms(std::ostringstream& out, const std::vector<MilpTerm>& terms, const MilpModel& model) {
    bool first = true;
    std::size_t on_line = 0;
    for (const auto& t : terms) {
        if (t.coef == 0.0) continue;
        if (on_line == 8) {
            out << "\n   ";
            on_line = 0;
        }
        const double mag = std::abs(t.coef);
        out << (t.coef < 0 ? " - " : (first ? " " : " + ")) << lp_number(mag) << ' ' << model.var_names[t.var];
        first = false;
        ++on_line;
    }
    if (first) out << " 0 " << model.var_names[0];
}

}  // namespace detail

/// CPLEX-LP text. Output depends only on the model, so repeated writes are identical.
inline std::string write_lp(const MilpModel& model) {
    std::ostringstream out;
    out << "\\ Linearized two-stage condition-based maintenance model\n";
    out << "\\ components: " << model.n << ", linking variables: " << model.u_count() << "\n";
    out << "Minimize\n obj:";
    std::vector<MilpTerm> obj;
    for (std::size_t k = 0; k < model.objective.size(); ++k) obj.push_back({k, model.objective[k]});
    detail::lp_terms(out, obj, model);
    if (model.objective_constant != 0.0) {
        out << (model.objective_constant < 0 ? " - " : " + ") << detail::lp_number(std::abs(model.objective_constant));
    }
    out << "\nSubject To\n";
    for (const auto& row : model.rows) {
        out << ' ' << row.name << ':';
        detail::lp_terms(out, row.terms, model);
        out << (row.sense == RowSense::le ? " <= " : row.sense == RowSense::ge ? " >= " : " = ")
            << detail::lp_number(row.rhs) << '\n';
    }
    out << "Bounds\n";
    for (std::size_t k = 0; k < model.var_names.size(); ++k) out << " 0 <= " << model.var_names[k] << " <= 1\n";
    out << "Binary\n";
    for (std::size_t k = 0; k < model.var_names.size(); ++k) out << ' ' << model.var_names[k] << '\n';
    out << "End\n";
    return out.str();
}

}  // namespace cbm
