// Random instance generation and experiment harnesses.
#pragma once

#include "cbm/degradation.hpp"
#include "cbm/io.hpp"
#include "cbm/model.hpp"
#include "cbm/multistage.hpp"
#include "cbm/rng.hpp"
#include "cbm/two_stage.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <ctime>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cbm {

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

/// Defaults are the baseline numerical-study parameters.
struct BenchConfig {
    std::vector<std::size_t> n_values{10, 11, 12};
    std::size_t instances_per_n = 100;
    Range alpha{1.0, 5.0};
    Range rate{0.2, 1.0};
    Range pm_cost{1.0, 5.0};
    Range cm_cost{10.0, 30.0};
    double setup_cost = 20.0;
    double failure_threshold = 20.0;
    int m = 11;
    double inspection_interval = 1.0;
    std::uint64_t seed = 1;

    bool run_brute_force = true;
    std::size_t brute_force_max_n = 12;
    std::vector<std::size_t> J_values{1, 2, 3};
    std::size_t M = 100;
    double time_limit_seconds = 600.0;

    // multi-stage cells (n, T)
    std::vector<std::pair<std::size_t, int>> cells{{2, 3}, {2, 4}, {2, 5}, {3, 3}, {3, 4}, {3, 5}};
    std::size_t instances_per_cell = 1;
    std::size_t replications = 1000;
    std::size_t rolling_J = 3;

    void validate() const {
        for (const auto* r : {&alpha, &rate, &pm_cost, &cm_cost}) {
            if (!(r->lo < r->hi)) throw std::invalid_argument("bench config: every range needs lo < hi");
        }
        if (!(alpha.lo > 0.0) || !(rate.lo > 0.0)) {
            throw std::invalid_argument("bench config: degradation ranges must be positive");
        }
        if (!(pm_cost.lo >= 0.0) || !(cm_cost.lo >= 0.0) || !(setup_cost >= 0.0)) {
            throw std::invalid_argument("bench config: costs must be nonnegative");
        }
        if (m < 2) throw std::invalid_argument("bench config: m must be at least 2");
        if (!(failure_threshold > 0.0) || !(inspection_interval > 0.0)) {
            throw std::invalid_argument("bench config: failure threshold and interval must be positive");
        }
        if (M < 2) throw std::invalid_argument("bench config: M must be at least 2");
        for (auto j : J_values) {
            if (j < 1) throw std::invalid_argument("bench config: J values must be at least 1");
        }
        if (replications < 1) throw std::invalid_argument("bench config: replications must be at least 1");
    }
};

inline BenchConfig bench_config_from_json(const json& j) {
    BenchConfig c;
    auto range = [&](const char* key, Range& r) {
        if (j.contains(key)) {
            const auto& a = j.at(key);
            if (!a.is_array() || a.size() != 2) throw SchemaError(std::string("bench config: ") + key + " must be [lo, hi]");
            r = {a.at(0).get<double>(), a.at(1).get<double>()};
        }
    };
    try {
        if (j.contains("n_values")) c.n_values = j.at("n_values").get<std::vector<std::size_t>>();
        if (j.contains("instances_per_n")) c.instances_per_n = j.at("instances_per_n").get<std::size_t>();
        range("alpha", c.alpha);
        range("rate", c.rate);
        range("pm_cost", c.pm_cost);
        range("cm_cost", c.cm_cost);
        if (j.contains("setup_cost")) c.setup_cost = j.at("setup_cost").get<double>();
        if (j.contains("failure_threshold")) c.failure_threshold = j.at("failure_threshold").get<double>();
        if (j.contains("m")) c.m = j.at("m").get<int>();
        if (j.contains("inspection_interval")) c.inspection_interval = j.at("inspection_interval").get<double>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("run_brute_force")) c.run_brute_force = j.at("run_brute_force").get<bool>();
        if (j.contains("brute_force_max_n")) c.brute_force_max_n = j.at("brute_force_max_n").get<std::size_t>();
        if (j.contains("J_values")) c.J_values = j.at("J_values").get<std::vector<std::size_t>>();
        if (j.contains("M")) c.M = j.at("M").get<std::size_t>();
        if (j.contains("time_limit_seconds")) c.time_limit_seconds = j.at("time_limit_seconds").get<double>();
        if (j.contains("cells")) c.cells = j.at("cells").get<std::vector<std::pair<std::size_t, int>>>();
        if (j.contains("instances_per_cell")) c.instances_per_cell = j.at("instances_per_cell").get<std::size_t>();
        if (j.contains("replications")) c.replications = j.at("replications").get<std::size_t>();
        if (j.contains("rolling_J")) c.rolling_J = j.at("rolling_J").get<std::size_t>();
    } catch (const json::exception& e) {
        throw SchemaError(std::string("bench config: ") + e.what());
    }
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw SchemaError(e.what());
    }
    return c;
}

/**
 * Instance number `index` of size n. Draw order per component: alpha, rate,
 * pm cost, cm cost, initial state (uniform on 1..m, failure included).
 */
inline SystemInstance sample_instance(const BenchConfig& cfg, std::size_t n, std::uint64_t index, int horizon = 2) {
    Rng rng(cfg.seed, index, 0x100000000ULL + n);
    const auto grid = make_state_grid(cfg.failure_threshold, cfg.m);
    SystemInstance inst;
    inst.setup_cost = cfg.setup_cost;
    inst.m = cfg.m;
    inst.horizon = horizon;
    inst.inspection_interval = cfg.inspection_interval;
    inst.failure_threshold = cfg.failure_threshold;
    for (std::size_t i = 0; i < n; ++i) {
        const double alpha = rng.uniform(cfg.alpha.lo, cfg.alpha.hi);
        const double rate = rng.uniform(cfg.rate.lo, cfg.rate.hi);
        const double pm = rng.uniform(cfg.pm_cost.lo, cfg.pm_cost.hi);
        const double cm = rng.uniform(cfg.cm_cost.lo, cfg.cm_cost.hi);
        const int state = rng.uniform_int(1, cfg.m);
        inst.components.push_back(make_gamma_component(static_cast<int>(i) + 1, pm, cm,
                                                       GammaProcessParams::fixed(alpha, rate), grid,
                                                       cfg.inspection_interval, state));
    }
    return inst;
}

namespace detail {

struct Stopwatch {
    std::chrono::steady_clock::time_point wall0 = std::chrono::steady_clock::now();
    std::clock_t cpu0 = std::clock();

    double wall() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    }
    double cpu() const { return static_cast<double>(std::clock() - cpu0) / CLOCKS_PER_SEC; }
};

inline double relative_error(double cost, double reference) {
    return std::abs(cost - reference) / std::max(1.0, std::abs(reference));
}

inline std::string csv_number(double v) {
    if (std::isnan(v)) return "";
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

}  // namespace detail

struct Algo2Run {
    std::size_t J = 0;
    double cost = 0.0;
    double error = 0.0;  ///< relative to algorithm 1
    double wall_seconds = 0.0;
};

struct TwoStageRow {
    std::size_t n = 0;
    std::uint64_t index = 0;
    double alg1_cost = 0.0;
    std::size_t j_max = 0;
    std::uint64_t sets_examined = 0;
    bool timed_out = false;
    double alg1_wall = 0.0;
    double alg1_cpu = 0.0;
    double brute_cost = std::numeric_limits<double>::quiet_NaN();
    double brute_error = std::numeric_limits<double>::quiet_NaN();
    std::vector<Algo2Run> alg2;
};

struct TwoStageSummary {
    std::size_t n = 0;
    std::size_t instances = 0;
    double avg_time = 0.0;
    double max_time = 0.0;
    double avg_cpu = 0.0;
    double avg_j_max = 0.0;
    std::size_t max_j_max = 0;
    std::size_t timeouts = 0;
    double max_brute_error = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::size_t> J;
    std::vector<double> alg2_avg_time, alg2_max_time, alg2_mean_error, alg2_max_error;
};

struct MultistageRow {
    std::size_t n = 0;
    int T = 0;
    std::uint64_t index = 0;
    double exact = 0.0;
    double rolling_mean = 0.0;
    double rolling_sd = 0.0;
    std::size_t replications = 0;
    double gap_percent = 0.0;
    bool lower_bound_ok = true;
};

struct BenchReport {
    std::vector<TwoStageRow> two_stage;
    std::vector<TwoStageSummary> two_stage_summary;
    std::vector<MultistageRow> multistage;
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

inline BenchReport run_two_stage_bench(const BenchConfig& cfg) {
    cfg.validate();
    BenchReport report;
    for (auto n : cfg.n_values) {
        TwoStageSummary sum;
        sum.n = n;
        sum.J = cfg.J_values;
        sum.alg2_avg_time.assign(cfg.J_values.size(), 0.0);
        sum.alg2_max_time.assign(cfg.J_values.size(), 0.0);
        sum.alg2_mean_error.assign(cfg.J_values.size(), 0.0);
        sum.alg2_max_error.assign(cfg.J_values.size(), 0.0);
        for (std::uint64_t k = 0; k < cfg.instances_per_n; ++k) {
            const auto inst = sample_instance(cfg, n, k);
            TwoStageRow row;
            row.n = n;
            row.index = k;

            Algo1Options opts;
            opts.deadline = std::chrono::steady_clock::now() +
                            std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                std::chrono::duration<double>(cfg.time_limit_seconds));
            detail::Stopwatch sw;
            const auto a1 = algorithm1_search(inst, opts);
            row.alg1_wall = sw.wall();
            row.alg1_cpu = sw.cpu();
            row.alg1_cost = a1.cost;
            row.j_max = a1.trace.j_max;
            row.sets_examined = a1.trace.sets_examined;
            row.timed_out = a1.trace.timed_out;
            if (row.timed_out) ++sum.timeouts;

            if (cfg.run_brute_force && n <= cfg.brute_force_max_n) {
                row.brute_cost = brute_force_two_stage(inst).cost;
                row.brute_error = detail::relative_error(row.alg1_cost, row.brute_cost);
                if (!row.timed_out && row.brute_error > 1e-9) {
                    report.violations.push_back("n=" + std::to_string(n) + " instance " + std::to_string(k) +
                                                ": algorithm 1 differs from enumeration");
                }
            }

            for (std::size_t jj = 0; jj < cfg.J_values.size(); ++jj) {
                Algo2Config a2cfg{cfg.J_values[jj], cfg.M, cfg.seed};
                detail::Stopwatch sw2;
                const auto a2 = algorithm2(inst, a2cfg, k);
                Algo2Run run{cfg.J_values[jj], a2.cost, 0.0, sw2.wall()};
                run.error = (a2.cost - row.alg1_cost) / std::max(1.0, std::abs(row.alg1_cost));
                if (!row.timed_out && run.error < -1e-9) {
                    report.violations.push_back("n=" + std::to_string(n) + " instance " + std::to_string(k) +
                                                ": algorithm 2 beat algorithm 1");
                }
                row.alg2.push_back(run);
            }
            report.two_stage.push_back(row);
        }

        const auto count = static_cast<double>(cfg.instances_per_n);
        for (const auto& row : report.two_stage) {
            if (row.n != n) continue;
            ++sum.instances;
            sum.avg_time += row.alg1_wall / count;
            sum.avg_cpu += row.alg1_cpu / count;
            sum.max_time = std::max(sum.max_time, row.alg1_wall);
            sum.avg_j_max += static_cast<double>(row.j_max) / count;
            sum.max_j_max = std::max(sum.max_j_max, row.j_max);
            if (!std::isnan(row.brute_error)) {
                sum.max_brute_error = std::isnan(sum.max_brute_error) ? row.brute_error
                                                                      : std::max(sum.max_brute_error, row.brute_error);
            }
            for (std::size_t jj = 0; jj < row.alg2.size(); ++jj) {
                sum.alg2_avg_time[jj] += row.alg2[jj].wall_seconds / count;
                sum.alg2_max_time[jj] = std::max(sum.alg2_max_time[jj], row.alg2[jj].wall_seconds);
                sum.alg2_mean_error[jj] += std::max(0.0, row.alg2[jj].error) / count;
                sum.alg2_max_error[jj] = std::max(sum.alg2_max_error[jj], row.alg2[jj].error);
            }
        }
        report.two_stage_summary.push_back(sum);
    }
    return report;
}

inline BenchReport run_multistage_bench(const BenchConfig& cfg) {
    cfg.validate();
    for (const auto& [n, T] : cfg.cells) {
        if (n < 1 || n > 3 || T < 2 || T > 5) throw GuardError("multi-stage bench cells are limited to n <= 3, T <= 5");
    }
    BenchReport report;
    for (const auto& [n, T] : cfg.cells) {
        for (std::uint64_t k = 0; k < cfg.instances_per_cell; ++k) {
            const auto inst = sample_instance(cfg, n, k, T);
            MultistageRow row;
            row.n = n;
            row.T = T;
            row.index = k;
            row.exact = exact_multistage(inst).value;
            const auto sim = simulate_rolling_horizon(inst, cfg.replications, cfg.seed + k,
                                                      Algo2Config{cfg.rolling_J, cfg.M, cfg.seed});
            row.rolling_mean = sim.mean;
            row.rolling_sd = sim.std_dev;
            row.replications = sim.replications;
            row.gap_percent = row.exact != 0.0 ? 100.0 * (sim.mean - row.exact) / row.exact : 0.0;
            row.lower_bound_ok = sim.mean >= row.exact - 3.0 * sim.std_error() - 1e-9 * std::max(1.0, row.exact);
            if (!row.lower_bound_ok) {
                report.violations.push_back("cell n=" + std::to_string(n) + " T=" + std::to_string(T) +
                                            ": rolling-horizon mean below the exact optimum");
            }
            report.multistage.push_back(row);
        }
    }
    return report;
}

/// Per-instance two-stage rows without timing columns; identical for identical configs.
inline std::string two_stage_rows_csv(const BenchReport& r) {
    std::ostringstream out;
    out << "n,instance,alg1_cost,j_max,sets_examined,timed_out,brute_cost,brute_error";
    std::vector<std::size_t> Js;
    if (!r.two_stage.empty()) {
        for (const auto& run : r.two_stage.front().alg2) Js.push_back(run.J);
    }
    for (auto J : Js) out << ",alg2_J" << J << "_cost,alg2_J" << J << "_error";
    out << '\n';
    for (const auto& row : r.two_stage) {
        out << row.n << ',' << row.index << ',' << detail::csv_number(row.alg1_cost) << ',' << row.j_max << ','
            << row.sets_examined << ',' << (row.timed_out ? 1 : 0) << ',' << detail::csv_number(row.brute_cost) << ','
            << detail::csv_number(row.brute_error);
        for (const auto& run : row.alg2) out << ',' << detail::csv_number(run.cost) << ',' << detail::csv_number(run.error);
        out << '\n';
    }
    return out.str();
}

inline std::string two_stage_summary_csv(const BenchReport& r) {
    std::ostringstream out;
    out << "n,instances,alg1_avg_time,alg1_max_time,alg1_avg_cpu,avg_j_m,max_j_m,timeouts,max_error_vs_enumeration";
    std::vector<std::size_t> Js;
    if (!r.two_stage_summary.empty()) Js = r.two_stage_summary.front().J;
    for (auto J : Js) out << ",alg2_J" << J << "_avg_time,alg2_J" << J << "_max_time,alg2_J" << J << "_mean_error,alg2_J" << J << "_max_error";
    out << '\n';
    for (const auto& s : r.two_stage_summary) {
        out << s.n << ',' << s.instances << ',' << detail::csv_number(s.avg_time) << ','
            << detail::csv_number(s.max_time) << ',' << detail::csv_number(s.avg_cpu) << ','
            << detail::csv_number(s.avg_j_max) << ',' << s.max_j_max << ',' << s.timeouts << ','
            << detail::csv_number(s.max_brute_error);
        for (std::size_t jj = 0; jj < s.J.size(); ++jj) {
            out << ',' << detail::csv_number(s.alg2_avg_time[jj]) << ',' << detail::csv_number(s.alg2_max_time[jj])
                << ',' << detail::csv_number(s.alg2_mean_error[jj]) << ',' << detail::csv_number(s.alg2_max_error[jj]);
        }
        out << '\n';
    }
    return out.str();
}

inline std::string multistage_csv(const BenchReport& r) {
    std::ostringstream out;
    out << "n,T,instance,exact_cost,rolling_mean,rolling_sd,replications,gap_percent,lower_bound_ok\n";
    for (const auto& row : r.multistage) {
        out << row.n << ',' << row.T << ',' << row.index << ',' << detail::csv_number(row.exact) << ','
            << detail::csv_number(row.rolling_mean) << ',' << detail::csv_number(row.rolling_sd) << ','
            << row.replications << ',' << detail::csv_number(row.gap_percent) << ',' << (row.lower_bound_ok ? 1 : 0)
            << '\n';
    }
    return out.str();
}

inline json report_to_json(const BenchReport& r) {
    auto num = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
    json doc;
    doc["ok"] = r.ok();
    doc["violations"] = r.violations;
    doc["two_stage_summary"] = json::array();
    for (const auto& s : r.two_stage_summary) {
        json j{{"n", s.n},
               {"instances", s.instances},
               {"alg1_avg_time", s.avg_time},
               {"alg1_max_time", s.max_time},
               {"alg1_avg_cpu", s.avg_cpu},
               {"avg_j_m", s.avg_j_max},
               {"max_j_m", s.max_j_max},
               {"timeouts", s.timeouts},
               {"max_error_vs_enumeration", num(s.max_brute_error)}};
        j["alg2"] = json::array();
        for (std::size_t jj = 0; jj < s.J.size(); ++jj) {
            j["alg2"].push_back({{"J", s.J[jj]},
                                 {"avg_time", s.alg2_avg_time[jj]},
                                 {"max_time", s.alg2_max_time[jj]},
                                 {"mean_error", s.alg2_mean_error[jj]},
                                 {"max_error", s.alg2_max_error[jj]}});
        }
        doc["two_stage_summary"].push_back(j);
    }
    doc["two_stage_rows"] = json::array();
    for (const auto& row : r.two_stage) {
        json j{{"n", row.n},
               {"instance", row.index},
               {"alg1_cost", row.alg1_cost},
               {"j_max", row.j_max},
               {"sets_examined", row.sets_examined},
               {"timed_out", row.timed_out},
               {"alg1_wall", row.alg1_wall},
               {"alg1_cpu", row.alg1_cpu},
               {"brute_cost", num(row.brute_cost)},
               {"brute_error", num(row.brute_error)}};
        j["alg2"] = json::array();
        for (const auto& run : row.alg2) {
            j["alg2"].push_back({{"J", run.J}, {"cost", run.cost}, {"error", run.error}, {"wall", run.wall_seconds}});
        }
        doc["two_stage_rows"].push_back(j);
    }
    doc["multistage"] = json::array();
    for (const auto& row : r.multistage) {
        doc["multistage"].push_back({{"n", row.n},
                                     {"T", row.T},
                                     {"instance", row.index},
                                     {"exact_cost", row.exact},
                                     {"rolling_mean", row.rolling_mean},
                                     {"rolling_sd", row.rolling_sd},
                                     {"replications", row.replications},
                                     {"gap_percent", row.gap_percent},
                                     {"lower_bound_ok", row.lower_bound_ok}});
    }
    return doc;
}

}  // namespace cbm
