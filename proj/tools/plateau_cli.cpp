// Command-line runner for the shipped scenarios and artifact emitters.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "plateau/scenario.hpp"
#include "plateau/error.hpp"
#include "plateau/serialize.hpp"

using namespace plateau;

namespace {

int do_run(const ScenarioSpec& spec) {
    const RunArtifact artifact = run_scenario(spec);
    for (const auto& row : artifact.assertions)
        std::cout << (row.pass ? "  [pass] " : "  [FAIL] ") << row.name << ": got " << row.got
                  << " expected " << row.expected << " (tol " << row.tol << ")\n";
    std::cout << (artifact.pass ? "PASS " : "FAIL ") << spec.name << " -> "
              << artifact.result_path << "\n";
    return artifact.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"variational laboratory for disc-type fillings in metric targets"};
    app.require_subcommand(1);

    ScenarioSpec spec;
    std::string config_path;

    auto* run = app.add_subcommand("run", "run a shipped scenario and write its artifacts");
    run->add_option("name", spec.name, "scenario name (see `list`)");
    run->add_option("--config", config_path, "key/value config file with a [scenario] section");
    run->add_option("--level", spec.level, "mesh level override");
    run->add_option("--seed", spec.seed, "random seed");
    run->add_option("--out", spec.out_dir, "output directory");
    run->add_option("--tol-scale", spec.tol_scale, "scale factor on assertion tolerances");
    std::string mu_name;
    run->add_option("--mu", mu_name, "volume definition override");

    auto* list = app.add_subcommand("list", "list shipped scenarios");

    auto* table = app.add_subcommand("table", "emit the volume-jacobian table");
    std::string table_out = "out";
    table->add_option("--out", table_out, "output directory");

    auto* plot = app.add_subcommand("plot", "render a stored map as svg");
    std::string map_path, svg_path = "map.svg";
    plot->add_option("map", map_path, "map json file")->required();
    plot->add_option("--out", svg_path, "output svg path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            std::cout << list_scenarios();
            return 0;
        }
        if (table->parsed()) {
            ScenarioSpec table_spec;
            table_spec.name = "jacobian-table";
            table_spec.out_dir = table_out;
            return do_run(table_spec);
        }
        if (plot->parsed()) {
            std::ifstream is(map_path, std::ios::binary);
            if (!is) throw ConfigError("cannot open " + map_path);
            std::stringstream ss;
            ss << is.rdbuf();
            const PLMap map = map_from_json(ss.str());
            std::ofstream os(svg_path, std::ios::binary);
            os << plot_map(map);
            std::cout << "wrote " << svg_path << "\n";
            return 0;
        }
        if (!config_path.empty()) {
            ScenarioSpec from_file = scenario_from_config(config_path);
            if (spec.level >= 0) from_file.level = spec.level;
            if (!spec.name.empty()) from_file.name = spec.name;
            if (run->count("--seed")) from_file.seed = spec.seed;
            if (run->count("--out")) from_file.out_dir = spec.out_dir;
            if (run->count("--tol-scale")) from_file.tol_scale = spec.tol_scale;
            spec = from_file;
        }
        if (!mu_name.empty()) spec.mu = volume_from_name(mu_name);
        if (spec.name.empty()) throw ConfigError("scenario name required (or --config)");
        return do_run(spec);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
