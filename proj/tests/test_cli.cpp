#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spfide/cli.hpp"
#include "test_support.hpp"

using namespace spfide;
namespace fs = std::filesystem;

namespace {

fs::path config_dir() { return fs::path(SPFIDE_CONFIG_DIR); }

fs::path temp_dir(const char* name) {
    const fs::path dir = fs::temp_directory_path() / "spfide_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_temp(const char* name, const std::string& body) {
    const fs::path dir = temp_dir("configs");
    const fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    out << body;
    return path;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

int count_lines(const std::string& text) {
    int lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    return lines;
}

}  // namespace

TEST_CASE("load_config accepts the shipped layer example") {
    const Config config = load_config((config_dir() / "example1.json").string());
    CHECK(config.problem.eps == 0.015625);
    CHECK(config.problem.coupling == 1.0);
    CHECK(config.problem.left_value == 1.0);
    // B = exp(-1/eps) evaluated at load time
    CHECK(config.problem.right_value == doctest::Approx(std::exp(-64.0)).epsilon(1e-14));
    CHECK(config.problem.manufactured());
    CHECK(config.run.intervals == 64);
    CHECK(config.validation.ok());
    CHECK(config.validation.alpha_estimate == 1.0);
}

TEST_CASE("every shipped config loads cleanly") {
    for (const char* name : {"example1.json", "example1_study.json",
                             "example1_paper_forcing.json", "mms_layer_quadratic.json",
                             "compare_example1.json"})
        CHECK_NOTHROW(load_config((config_dir() / name).string()));
}

TEST_CASE("missing fields are named") {
    const auto path = write_temp("missing_eps.json", R"json({
      "problem": {"lambda": 1.0, "l": 1.0, "a": "1", "b": "0", "K": "x",
                   "f": "1", "A": 0, "B": 1}
    })json");
    try {
        load_config(path.string());
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        REQUIRE(e.issues.size() >= 1);
        CHECK(e.issues.front().find("problem.eps") != std::string::npos);
    }
}

TEST_CASE("unknown keys are rejected") {
    const auto path = write_temp("unknown_key.json", R"json({
      "problem": {"eps": 0.5, "lambda": 0.0, "l": 1.0, "a": "1", "b": "0",
                   "K": "0", "f": "1", "A": 0, "B": 1, "alpha": 2},
      "run": {"N": 8, "verbose": true}
    })json");
    try {
        load_config(path.string());
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        bool saw_problem_key = false, saw_run_key = false;
        for (const auto& issue : e.issues) {
            if (issue.find("problem.alpha") != std::string::npos) saw_problem_key = true;
            if (issue.find("run.verbose") != std::string::npos) saw_run_key = true;
        }
        CHECK(saw_problem_key);
        CHECK(saw_run_key);
    }
}

TEST_CASE("hypothesis violations surface at load time") {
    const auto path = write_temp("negative_a.json", R"json({
      "problem": {"eps": 0.5, "lambda": 0.0, "l": 1.0, "a": "-x", "b": "0",
                   "K": "0", "f": "1", "A": 0, "B": 1},
      "run": {"N": 8}
    })json");
    try {
        load_config(path.string());
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        bool saw = false;
        for (const auto& issue : e.issues)
            if (issue.find("a(x) must be positive") != std::string::npos) saw = true;
        CHECK(saw);
    }
}

TEST_CASE("expression syntax errors carry the field name") {
    const auto path = write_temp("bad_expr.json", R"json({
      "problem": {"eps": 0.5, "lambda": 0.0, "l": 1.0, "a": "1", "b": "2+*3",
                   "K": "0", "f": "1", "A": 0, "B": 1}
    })json");
    try {
        load_config(path.string());
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.issues.front().find("problem.b") != std::string::npos);
        CHECK(e.issues.front().find("syntax error") != std::string::npos);
    }
}

TEST_CASE("JSON parse errors report the position") {
    const auto path = write_temp("broken.json", "{ \"problem\": \n[,]\n}");
    try {
        load_config(path.string());
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.issues.front().find("parse error") != std::string::npos);
        CHECK(e.issues.front().find("line") != std::string::npos);
    }
    CHECK_THROWS_AS(load_config("/nonexistent/path/config.json"), IoError);
    try {
        load_config("/nonexistent/path/config.json");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/path/config.json") !=
              std::string::npos);
    }
}

TEST_CASE("eps_list range errors are reported per entry") {
    const auto path = write_temp("bad_eps_list.json", R"json({
      "problem": {"eps": 0.5, "lambda": 0.0, "l": 1.0, "a": "1", "b": "0",
                   "K": "0", "f": "1", "exact": "x", "A": 0, "B": 1},
      "run": {"eps_list": [0.5, 2.0], "N_list": [8, 16]}
    })json");
    try {
        load_config(path.string());
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.issues.front().find("eps_list[1]") != std::string::npos);
    }
}

TEST_CASE("cmd_solve writes the solution CSV with boundary row intact") {
    Config config = load_config((config_dir() / "example1.json").string());
    const fs::path dir = temp_dir("solve");
    config.run.out = (dir / "solution.csv").string();
    std::ostringstream diag;
    CHECK(cmd_solve(config, diag) == 0);

    const std::string csv = slurp(dir / "solution.csv");
    CHECK(count_lines(csv) == 66);  // header + 65 node rows
    CHECK(csv.rfind("x,u,exact,error\n", 0) == 0);
    std::istringstream in(csv);
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    CHECK(first.rfind("0,1,1,0", 0) == 0);  // u(0) = A = 1

    // residual and lambda-bound diagnostics land on the diagnostic stream
    CHECK(diag.str().find("residual") != std::string::npos);
    CHECK(diag.str().find("lambda bound") != std::string::npos);
    CHECK(diag.str().find("warning") != std::string::npos);

    // byte-identical on a rerun
    std::ostringstream diag2;
    config.run.out = (dir / "solution2.csv").string();
    CHECK(cmd_solve(config, diag2) == 0);
    CHECK(slurp(dir / "solution2.csv") == csv);
}

TEST_CASE("cmd_solve without run.N fails with exit code 1") {
    Config config = load_config((config_dir() / "example1.json").string());
    config.run.intervals.reset();
    std::ostringstream diag;
    CHECK(cmd_solve(config, diag) == 1);
    CHECK(diag.str().find("run.N") != std::string::npos);
}

TEST_CASE("cmd_study writes a grid and a table that round-trip") {
    Config config = load_config((config_dir() / "example1_study.json").string());
    config.run.eps_values = {1.0, 0.000244140625};
    config.run.N_values = {16, 32, 64};
    config.run.quad_points = 2048;
    const fs::path dir = temp_dir("study");
    config.run.out_dir = dir.string();
    std::ostringstream diag;
    CHECK(cmd_study(config, diag) == 0);

    const std::string csv = slurp(dir / "grid.csv");
    const std::string md = slurp(dir / "table.md");
    CHECK(csv.rfind("eps,N,max_error,rate\n", 0) == 0);
    CHECK(md.find("| eps | N=16 | N=32 | N=64 |") != std::string::npos);
    CHECK(md.find("| E^N |") != std::string::npos);
    CHECK(md.find("| P^N |") != std::string::npos);

    // every markdown number is a reformatting of a CSV grid value
    std::istringstream rows(csv);
    std::string line;
    std::getline(rows, line);  // header
    while (std::getline(rows, line)) {
        std::istringstream cells(line);
        std::string eps_text, n_text, error_text, rate_text;
        std::getline(cells, eps_text, ',');
        std::getline(cells, n_text, ',');
        std::getline(cells, error_text, ',');
        std::getline(cells, rate_text, ',');
        if (!error_text.empty())
            CHECK(md.find(format_scientific(std::stod(error_text))) != std::string::npos);
        if (!rate_text.empty())
            CHECK(md.find(format_rate(std::stod(rate_text))) != std::string::npos);
    }

    // determinism: identical bytes on a rerun
    const fs::path dir2 = temp_dir("study_rerun");
    config.run.out_dir = dir2.string();
    std::ostringstream diag2;
    CHECK(cmd_study(config, diag2) == 0);
    CHECK(slurp(dir2 / "grid.csv") == csv);
    CHECK(slurp(dir2 / "table.md") == md);
}

TEST_CASE("single-cell study emits a table without rate columns") {
    Config config = load_config((config_dir() / "example1_study.json").string());
    config.run.eps_values = {0.25};
    config.run.N_values = {16};
    config.run.quad_points = 2048;
    const fs::path dir = temp_dir("study_single");
    config.run.out_dir = dir.string();
    std::ostringstream diag;
    CHECK(cmd_study(config, diag) == 0);
    const std::string md = slurp(dir / "table.md");
    CHECK(md.find("| eps | N=16 |") != std::string::npos);
    CHECK(md.find("P^N") == std::string::npos);
}

TEST_CASE("cmd_study reports partial failures with exit code 2") {
    const auto path = write_temp("partial.json", R"json({
      "problem": {"eps": 0.5, "lambda": 0.0, "l": 1.0, "a": "1", "b": "0",
                   "K": "0", "exact": "x*ln(eps-0.001)", "A": 0, "B": -7.6},
      "run": {"eps_list": [0.5, 0.0005], "N_list": [8, 16]}
    })json");
    Config config = load_config(path.string());
    const fs::path dir = temp_dir("study_partial");
    config.run.out_dir = dir.string();
    std::ostringstream diag;
    CHECK(cmd_study(config, diag) == 2);
    CHECK(slurp(dir / "table.md").find("FAIL") != std::string::npos);
    CHECK(diag.str().find("failed") != std::string::npos);
}

TEST_CASE("cmd_compare writes both grids and the ratio table") {
    Config config = load_config((config_dir() / "compare_example1.json").string());
    config.run.quad_points = 2048;
    const fs::path dir = temp_dir("compare");
    config.run.out_dir = dir.string();
    std::ostringstream diag;
    CHECK(cmd_compare(config, diag) == 0);
    const std::string md = slurp(dir / "compare.md");
    CHECK(md.find("## Fitted scheme") != std::string::npos);
    CHECK(md.find("## Standard scheme") != std::string::npos);
    CHECK(md.find("## Error ratio (standard / fitted)") != std::string::npos);
    CHECK(fs::exists(dir / "fitted_grid.csv"));
    CHECK(fs::exists(dir / "standard_grid.csv"));
}

TEST_CASE("pure-diffusion config runs through both schemes identically") {
    const auto path = write_temp("diffusion.json", R"json({
      "problem": {"eps": 1.0, "lambda": 0.0, "l": 1.0, "a": "0.001", "b": "0",
                   "K": "0", "exact": "x*(1-x)", "A": 0, "B": 0},
      "run": {"eps_list": [1.0], "N_list": [16, 32]}
    })json");
    Config config = load_config(path.string());
    const fs::path dir = temp_dir("compare_diffusion");
    config.run.out_dir = dir.string();
    std::ostringstream diag;
    CHECK(cmd_compare(config, diag) == 0);
}
