// gpt-compat: joint measurability of effect pairs on polytopic state spaces.
//
// Exit codes: 0 compatible / success, 1 input error, 2 solver error,
// 3 incompatible.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gpt_compat/compat.hpp"
#include "gpt_compat/model_io.hpp"
#include "gpt_compat/models.hpp"
#include "gpt_compat/oracle.hpp"
#include "gpt_compat/report.hpp"
#include "gpt_compat/scan.hpp"

namespace {

using namespace gpt_compat;

constexpr int exit_ok = 0;
constexpr int exit_input = 1;
constexpr int exit_solver = 2;
constexpr int exit_incompatible = 3;

struct Options {
    SolverTolerances tol;
    bool json = false;
    std::string model;
    std::string e;
    std::string f;
    std::string kernel = "scaling";
    std::string range;
    std::string out;
    std::string zoo_name;
    int resolution = 51;
};

// "zoo:NAME" resolves a built-in model; anything else is a file path.
Model resolve_model(const std::string& spec, const SolverTolerances& tol) {
    if (spec.rfind("zoo:", 0) == 0)
        return zoo_model(spec.substr(4));
    return load_model(spec, tol);
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text))
        throw InputError("cannot write '" + path + "'");
}

int cmd_check(const Options& opt) {
    const Model model = resolve_model(opt.model, opt.tol);
    const Effect e = find_effect(model, opt.e);
    const Effect f = find_effect(model, opt.f);
    const CompatReport report = compute_lambda0(model.space, e, f, opt.tol);
    if (opt.json)
        std::cout << check_json(report, model.space, opt.e, opt.f).dump(2) << '\n';
    else
        std::cout << check_text(report, model.space, opt.e, opt.f);
    return report.compatible ? exit_ok : exit_incompatible;
}

int cmd_joint(const Options& opt) {
    const Model model = resolve_model(opt.model, opt.tol);
    const Effect e = find_effect(model, opt.e);
    const Effect f = find_effect(model, opt.f);
    const CompatReport report = compute_lambda0(model.space, e, f, opt.tol);
    if (!report.compatible) {
        std::cerr << "gpt-compat: " << opt.e << " and " << opt.f
                  << " are not jointly measurable (lambda0 = " << format_real(report.lambda0)
                  << " > 1)\n";
        return exit_incompatible;
    }
    const auto joint = joint_observable(model.space, e, f, opt.tol);
    if (!joint)
        throw SolverError("compatible pair produced no joint observable");
    const MarginCheck margins = check_margins(*joint, e, f, model.space, opt.tol);
    if (opt.json)
        std::cout << joint_json(*joint, margins, report, model.space, opt.e, opt.f).dump(2)
                  << '\n';
    else
        std::cout << joint_text(*joint, margins, report, model.space, opt.e, opt.f);
    return exit_ok;
}

int cmd_scan(const Options& opt) {
    const Model model = resolve_model(opt.model, opt.tol);
    const Effect e = find_effect(model, opt.e);
    const Effect f = find_effect(model, opt.f);
    const auto rows = run_scan(model.space, e, f, parse_scan_kernel(opt.kernel),
                               parse_param_range(opt.range), opt.tol);
    std::ostringstream csv;
    write_scan_csv(csv, rows);
    write_output(opt.out, csv.str());
    return exit_ok;
}

int cmd_zoo_list() {
    for (const auto& name : zoo_names())
        std::cout << name << '\n';
    return exit_ok;
}

int cmd_zoo_dump(const Options& opt) {
    write_output(opt.out, model_text(zoo_model(opt.zoo_name)));
    return exit_ok;
}

int cmd_oracle(const Options& opt) {
    const Model model = resolve_model(opt.model, opt.tol);
    const Effect e = find_effect(model, opt.e);
    const Effect f = find_effect(model, opt.f);
    const auto report = oracle::cross_check(model.space, e, f, opt.tol, opt.resolution);
    nlohmann::json out = {
        {"schema", "gpt-compat/oracle"},
        {"version", report_schema_version},
        {"model", model.space.name()},
        {"lp_lambda0", report_real(report.lp_lambda0)},
        {"grid_value", report_real(report.grid.value)},
        {"grid_lower_bound", report_real(report.grid.lower_bound)},
        {"grid_step", report_real(report.grid.step)},
        {"grid_box", report_real(report.grid.box)},
        {"grid_box_expanded", report.grid.box_expanded},
        {"closed_form", report.closed_form ? nlohmann::json(report_real(*report.closed_form))
                                           : nlohmann::json(nullptr)},
        {"discrepancies", report.discrepancies},
        {"ok", report.ok()}};
    std::cout << out.dump(2) << '\n';
    return report.ok() ? exit_ok : exit_solver;
}

void add_pair_arguments(CLI::App* cmd, Options& opt) {
    cmd->add_option("model", opt.model, "model file, or zoo:NAME for a built-in model")
        ->required();
    cmd->add_option("e", opt.e, "first effect name (u, zero, u-NAME also accepted)")->required();
    cmd->add_option("f", opt.f, "second effect name")->required();
}

} // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"Joint measurability of effect pairs on polytopic state spaces"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--eps-feas", opt.tol.eps_feas, "LP feasibility tolerance")
        ->default_val(opt.tol.eps_feas)
        ->check(CLI::PositiveNumber);
    app.add_option("--eps-compat", opt.tol.eps_compat, "slack when comparing lambda0 with 1")
        ->default_val(opt.tol.eps_compat)
        ->check(CLI::PositiveNumber);
    app.add_flag("--json", opt.json, "machine-readable output");

    auto* check = app.add_subcommand("check", "compute lambda0, sigma0 and a witness");
    add_pair_arguments(check, opt);

    auto* joint = app.add_subcommand("joint", "build the joint observable of a compatible pair");
    add_pair_arguments(joint, opt);

    auto* scan = app.add_subcommand("scan", "sweep a smearing parameter and write CSV");
    add_pair_arguments(scan, opt);
    scan->add_option("--kernel", opt.kernel, "scaling (k >= 1) or depolarizing (t in [0,1])")
        ->check(CLI::IsMember({"scaling", "depolarizing"}));
    scan->add_option("--param-range", opt.range, "a:b:steps")->required();
    scan->add_option("--out", opt.out, "CSV path (default: standard output)");

    auto* zoo = app.add_subcommand("zoo", "built-in models");
    zoo->require_subcommand(1);
    auto* zoo_list = zoo->add_subcommand("list", "list built-in model names");
    auto* zoo_dump = zoo->add_subcommand("dump", "write a built-in model file");
    zoo_dump->add_option("name", opt.zoo_name, "model name")->required();
    zoo_dump->add_option("--out", opt.out, "output path (default: standard output)");

    auto* oracle_cmd = app.add_subcommand("oracle", "cross-check lambda0 against the oracles");
    oracle_cmd->group("");
    add_pair_arguments(oracle_cmd, opt);
    oracle_cmd->add_option("--resolution", opt.resolution, "grid points per axis")
        ->default_val(51);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_input;
    }

    try {
        opt.tol.validate();
        if (*check)
            return cmd_check(opt);
        if (*joint)
            return cmd_joint(opt);
        if (*scan)
            return cmd_scan(opt);
        if (*zoo_list)
            return cmd_zoo_list();
        if (*zoo_dump)
            return cmd_zoo_dump(opt);
        if (*oracle_cmd)
            return cmd_oracle(opt);
    } catch (const InputError& err) {
        std::cerr << "gpt-compat: " << err.what() << '\n';
        return exit_input;
    } catch (const SolverError& err) {
        std::cerr << "gpt-compat: solver error: " << err.what() << '\n';
        return exit_solver;
    }
    return exit_input;
}
