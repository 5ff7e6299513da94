#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spfide/analysis.hpp"

namespace spfide {

// Config file rejected; `issues` lists every problem found.
struct ConfigError : Error {
    explicit ConfigError(std::vector<std::string> issues_);
    std::vector<std::string> issues;
};

struct IoError : Error {
    using Error::Error;
};

struct RunConfig {
    std::optional<int> intervals;  // N, for solve
    std::vector<double> eps_values;  // eps_list, for study/compare
    std::vector<int> N_values;       // N_list
    SchemeKind kind = SchemeKind::fitted;
    int quad_points = default_quad_points;
    std::optional<std::string> out;      // solve CSV path (stdout if absent)
    std::optional<std::string> out_dir;  // study/compare output directory
};

struct Config {
    Problem problem;
    RunConfig run;
    ValidationReport validation;
};

// Loads and fully validates a JSON problem/run config. Expressions are
// parsed eagerly; A and B may be numbers or expressions in eps (evaluated
// at load time); unknown keys are rejected. Throws IoError or ConfigError.
Config load_config(const std::string& path);

}  // namespace spfide
