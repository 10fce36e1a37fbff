#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plateau/solve.hpp"

namespace plateau {

struct ScenarioSpec {
    std::string name;
    int level = -1;  // -1 keeps the scenario default
    std::optional<VolumeDefinition> mu;
    std::uint64_t seed = 17;
    std::string out_dir = "out";
    double tol_scale = 1.0;
};

struct AssertionRow {
    std::string name;
    double expected = 0.0;
    double got = 0.0;
    double tol = 0.0;
    bool pass = false;
};

struct RunArtifact {
    std::string result_path;
    std::vector<std::string> files;  // all artifacts, relative to out_dir
    std::vector<AssertionRow> assertions;
    bool pass = true;
    std::string hash;
};

struct ScenarioInfo {
    std::string name;
    std::string description;
};

const std::vector<ScenarioInfo>& scenario_registry();
std::string list_scenarios();

RunArtifact run_scenario(const ScenarioSpec& spec);

// rows = norms, columns = volume definitions, 6 significant digits; returns
// the csv text and appends assertion rows for the reference norms
std::string jacobian_table(const std::vector<std::pair<std::string, NormDescriptor>>& norms,
                           std::vector<AssertionRow>* rows = nullptr, double tol_scale = 1.0);

// domain mesh colored by the per-triangle distortion plus the image of the
// boundary trace; deterministic layout
std::string plot_map(const PLMap& map);

// spec parsed from a key/value config file with [section] headers
ScenarioSpec scenario_from_config(const std::string& path);

}  // namespace plateau
