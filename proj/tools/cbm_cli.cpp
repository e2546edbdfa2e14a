// cbm: command-line front end for the maintenance solvers.
#include "cbm/cbm.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

namespace {

enum Exit { kOk = 0, kValidation = 1, kGuard = 2, kIo = 3 };

struct Common {
    std::string input;
    std::string output;
    std::string config;
    std::uint64_t seed = 1;
    std::size_t J = 3;
    std::size_t M = 100;
    std::size_t replications = 1000;
    std::string format = "json";
    std::string solver = "alg1";
    bool trace = false;
    bool error_json = false;
    double cm_cost = 600000.0;
    std::string case_name;
};

void emit(const Common& c, const std::string& text) {
    if (c.output.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
    } else {
        cbm::write_text_file(c.output, text);
    }
}

std::string partition_table(const cbm::SystemInstance& inst, const cbm::Partition& p, double cost) {
    std::ostringstream out;
    out << "component  state  action\n";
    for (std::size_t i = 0; i < inst.size(); ++i) {
        const char* a = !p.n1.contains(i) ? "none" : inst.components[i].state == inst.m ? "cm" : "pm";
        out << std::setw(9) << inst.components[i].id << "  " << std::setw(5) << inst.components[i].state << "  " << a
            << '\n';
    }
    out << "expected cost " << std::setprecision(12) << cost << '\n';
    return out.str();
}

cbm::SystemInstance load_checked(const std::string& path) {
    auto inst = cbm::load_instance(path);
    const auto findings = cbm::validate_instance(inst);
    if (cbm::has_violations(findings)) {
        std::string msg = "invalid instance";
        for (const auto& f : findings) {
            if (f.severity == cbm::Finding::Severity::violation) msg += "; " + f.message;
        }
        throw cbm::SchemaError(msg);
    }
    return inst;
}

int run_solve2(const Common& c) {
    const auto inst = load_checked(c.input);
    cbm::json doc;
    cbm::Partition p;
    double cost = 0.0;
    if (c.solver == "alg1") {
        const auto r = cbm::algorithm1(inst);
        p = r.partition;
        cost = r.cost;
        if (c.trace) doc["trace"] = cbm::trace_to_json(r.trace);
    } else if (c.solver == "alg2") {
        const auto r = cbm::algorithm2(inst, cbm::Algo2Config{c.J, c.M, c.seed});
        p = r.partition;
        cost = r.cost;
        if (c.trace) doc["trace"] = cbm::trace_to_json(r.trace);
    } else {
        const auto r = cbm::brute_force_two_stage(inst);
        p = r.partition;
        cost = r.cost;
    }
    if (c.format == "table") {
        emit(c, partition_table(inst, p, cost));
        return kOk;
    }
    if (c.format == "csv") {
        cbm::MaintenancePlan plan;
        cbm::StagePlan sp{1, inst.states(), cbm::decision_for(inst.states(), inst.m, p.n1), 0.0};
        sp.cost = cbm::first_stage_cost(inst, p);
        plan.stages.push_back(sp);
        plan.total_cost = cost;
        emit(c, cbm::plan_to_csv(plan));
        return kOk;
    }
    doc["solver"] = c.solver;
    doc["do_nothing"] = cbm::set_to_json(p.n0);
    doc["maintain"] = cbm::set_to_json(p.n1);
    doc["cost"] = cost;
    emit(c, doc.dump(2));
    return kOk;
}

int run_solvem(const Common& c) {
    const auto inst = load_checked(c.input);
    const auto sol = cbm::exact_multistage(inst);
    const auto d = sol.decision_at(1, inst.states(), inst.m);
    if (c.format == "table") {
        std::ostringstream out;
        out << "exact multi-stage value " << std::setprecision(12) << sol.value << "\nfirst-stage actions:";
        for (std::size_t i = 0; i < inst.size(); ++i) out << ' ' << cbm::action_name(d, i);
        out << '\n';
        emit(c, out.str());
        return kOk;
    }
    cbm::json doc;
    doc["value"] = sol.value;
    doc["horizon"] = sol.horizon;
    cbm::json actions = cbm::json::array();
    for (std::size_t i = 0; i < inst.size(); ++i) actions.push_back(cbm::action_name(d, i));
    doc["first_stage_actions"] = actions;
    doc["first_stage_setup"] = d.z;
    emit(c, doc.dump(2));
    return kOk;
}

int run_simulate(const Common& c) {
    const auto inst = load_checked(c.input);
    const auto res = cbm::simulate_rolling_horizon(inst, c.replications, c.seed, cbm::Algo2Config{c.J, c.M, c.seed});
    if (c.format == "csv") {
        emit(c, cbm::plan_to_csv(res.sample));
        return kOk;
    }
    cbm::json doc;
    doc["mean"] = res.mean;
    doc["std_dev"] = res.std_dev;
    doc["std_error"] = res.std_error();
    doc["replications"] = res.replications;
    doc["seed"] = c.seed;
    doc["sample_plan"] = cbm::plan_to_json(res.sample);
    emit(c, doc.dump(2));
    return kOk;
}

cbm::BenchConfig bench_config(const Common& c) {
    cbm::BenchConfig cfg;
    if (!c.config.empty()) {
        cbm::json j;
        try {
            j = cbm::json::parse(cbm::read_text_file(c.config));
        } catch (const cbm::json::parse_error& e) {
            throw cbm::SchemaError(c.config + ": " + e.what());
        }
        if (!j.contains("seed")) j["seed"] = c.seed;
        cfg = cbm::bench_config_from_json(j);
    } else {
        cfg.seed = c.seed;
    }
    return cfg;
}

int write_report(const Common& c, const cbm::BenchReport& report, bool two_stage) {
    if (c.output.empty()) {
        if (c.format == "csv") {
            std::cout << (two_stage ? cbm::two_stage_summary_csv(report) : cbm::multistage_csv(report));
        } else {
            std::cout << cbm::report_to_json(report).dump(2) << '\n';
        }
    } else {
        // output names a prefix for the report files
        cbm::write_text_file(c.output + ".json", cbm::report_to_json(report).dump(2) + "\n");
        if (two_stage) {
            cbm::write_text_file(c.output + "_rows.csv", cbm::two_stage_rows_csv(report));
            cbm::write_text_file(c.output + "_summary.csv", cbm::two_stage_summary_csv(report));
        } else {
            cbm::write_text_file(c.output + ".csv", cbm::multistage_csv(report));
        }
    }
    for (const auto& v : report.violations) std::cerr << "violation: " << v << '\n';
    return report.ok() ? kOk : kValidation;
}

int run_export(const Common& c) {
    const auto inst = load_checked(c.input);
    emit(c, cbm::write_lp(cbm::linearize(inst)));
    return kOk;
}

int run_validate(const Common& c) {
    const auto inst = cbm::load_instance(c.input);
    const auto findings = cbm::validate_instance(inst);
    cbm::json doc;
    doc["valid"] = !cbm::has_violations(findings);
    doc["findings"] = cbm::json::array();
    for (const auto& f : findings) {
        doc["findings"].push_back(
            {{"severity", f.severity == cbm::Finding::Severity::violation ? "violation" : "warning"},
             {"message", f.message}});
    }
    emit(c, doc.dump(2));
    return cbm::has_violations(findings) ? kValidation : kOk;
}

int run_case(const Common& c) {
    const bool wind = c.case_name == "wind";
    const auto inst = wind ? cbm::wind_case(c.cm_cost) : cbm::pipeline_case();
    cbm::Rng rng(c.seed, 0);
    const auto plan = cbm::rolling_horizon_path(inst, cbm::Algo2Config{c.J, c.M, c.seed}, rng, 0);

    const int xi = cbm::standalone_decision(inst, 0).threshold_state;
    if (c.format == "json") {
        cbm::json doc;
        doc["case"] = c.case_name;
        doc["threshold"] = xi;
        doc["plan"] = cbm::plan_to_json(plan);
        cbm::json differs = cbm::json::array();
        for (const auto& r : cbm::case_rows(inst, plan)) {
            if (r.differs()) differs.push_back({{"stage", r.stage}, {"component", r.component}});
        }
        doc["differs_from_standalone"] = differs;
        emit(c, doc.dump(2));
        return kOk;
    }
    if (c.format == "csv") {
        emit(c, cbm::plan_to_csv(plan));
        return kOk;
    }
    std::ostringstream out;
    out << (wind ? "wind blades" : "pipelines");
    if (wind) out << ", cm cost " << std::fixed << std::setprecision(0) << c.cm_cost;
    out << "\nstandalone PM threshold xi* = " << xi << "\n\n";
    out << cbm::render_case_table(inst, plan, wind);
    out << "total cost " << std::fixed << std::setprecision(2) << plan.total_cost << '\n';
    emit(c, out.str());
    return kOk;
}

void report_error(const Common& c, const std::string& kind, const std::string& msg, int code) {
    if (c.error_json) {
        std::cerr << cbm::json{{"error", kind}, {"message", msg}, {"exit_code", code}}.dump() << '\n';
    } else {
        std::cerr << "error: " << msg << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    Common c;
    if (const char* env = std::getenv("CBM_SEED")) {
        try {
            c.seed = std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "error: CBM_SEED is not an unsigned integer\n";
            return kValidation;
        }
    }

    CLI::App app{"Condition-based maintenance planning with shared setup costs"};
    app.require_subcommand(1);
    app.add_flag("--error-json", c.error_json, "Report errors as JSON on stderr");

    auto add_seed = [&](CLI::App* s) { s->add_option("--seed", c.seed, "Random seed (default from CBM_SEED, else 1)"); };
    auto add_format = [&](CLI::App* s, std::vector<std::string> allowed) {
        s->add_option("--format", c.format, "Output format")->check(CLI::IsMember(allowed));
    };
    auto add_alg2 = [&](CLI::App* s) {
        s->add_option("-J", c.J, "Cardinality cap before sampling")->check(CLI::PositiveNumber);
        s->add_option("-M", c.M, "Sampled partitions")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 30));
    };

    auto* solve2 = app.add_subcommand("solve2", "Solve the two-stage model");
    solve2->add_option("-i,--input", c.input, "Instance JSON")->required();
    solve2->add_option("-o,--output", c.output, "Output file");
    solve2->add_option("--solver", c.solver, "alg1, alg2 or brute")->check(CLI::IsMember({"alg1", "alg2", "brute"}));
    solve2->add_flag("--trace", c.trace, "Include the move trace");
    add_seed(solve2);
    add_alg2(solve2);
    add_format(solve2, {"json", "csv", "table"});

    auto* solvem = app.add_subcommand("solvem", "Exact multi-stage value (small systems)");
    solvem->add_option("-i,--input", c.input, "Instance JSON")->required();
    solvem->add_option("-o,--output", c.output, "Output file");
    add_format(solvem, {"json", "table"});

    auto* simulate = app.add_subcommand("simulate", "Rolling-horizon Monte Carlo");
    simulate->add_option("-i,--input", c.input, "Instance JSON")->required();
    simulate->add_option("-o,--output", c.output, "Output file");
    simulate->add_option("-r,--replications", c.replications, "Replications")->check(CLI::PositiveNumber);
    add_seed(simulate);
    add_alg2(simulate);
    add_format(simulate, {"json", "csv"});

    auto* bench2 = app.add_subcommand("bench2", "Two-stage solver benchmark");
    bench2->add_option("-c,--config", c.config, "Bench config JSON");
    bench2->add_option("-o,--output", c.output, "Output prefix");
    add_seed(bench2);
    add_format(bench2, {"json", "csv"});

    auto* benchm = app.add_subcommand("benchm", "Rolling horizon vs exact multi-stage");
    benchm->add_option("-c,--config", c.config, "Bench config JSON");
    benchm->add_option("-o,--output", c.output, "Output prefix");
    add_seed(benchm);
    add_format(benchm, {"json", "csv"});

    auto* exportm = app.add_subcommand("export-milp", "Write the linearized model in LP format");
    exportm->add_option("-i,--input", c.input, "Instance JSON")->required();
    exportm->add_option("-o,--output", c.output, "LP file");

    auto* validate = app.add_subcommand("validate", "Check an instance file");
    validate->add_option("-i,--input", c.input, "Instance JSON")->required();
    validate->add_option("-o,--output", c.output, "Output file");

    auto* cs = app.add_subcommand("case", "Run a bundled field case");
    cs->add_option("name", c.case_name, "wind or pipeline")->required()->check(CLI::IsMember({"wind", "pipeline"}));
    cs->add_option("--cm", c.cm_cost, "CM cost for the wind case")->check(CLI::PositiveNumber);
    cs->add_option("-o,--output", c.output, "Output file");
    add_seed(cs);
    add_alg2(cs);
    c.format = "json";
    add_format(cs, {"json", "csv", "table"});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kValidation;
    }
    if (cs->parsed() && cs->count("--format") == 0) c.format = "table";

    try {
        if (solve2->parsed()) return run_solve2(c);
        if (solvem->parsed()) return run_solvem(c);
        if (simulate->parsed()) return run_simulate(c);
        if (bench2->parsed()) return write_report(c, cbm::run_two_stage_bench(bench_config(c)), true);
        if (benchm->parsed()) return write_report(c, cbm::run_multistage_bench(bench_config(c)), false);
        if (exportm->parsed()) return run_export(c);
        if (validate->parsed()) return run_validate(c);
        if (cs->parsed()) return run_case(c);
    } catch (const cbm::GuardError& e) {
        report_error(c, "guard", e.what(), kGuard);
        return kGuard;
    } catch (const cbm::IoError& e) {
        report_error(c, "io", e.what(), kIo);
        return kIo;
    } catch (const cbm::SchemaError& e) {
        report_error(c, "validation", e.what(), kValidation);
        return kValidation;
    } catch (const std::invalid_argument& e) {
        report_error(c, "validation", e.what(), kValidation);
        return kValidation;
    } catch (const std::domain_error& e) {
        report_error(c, "validation", e.what(), kValidation);
        return kValidation;
    }
    return kOk;
}
