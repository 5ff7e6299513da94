#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "spfide/cli.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::string scheme;
    int quad_points = 0;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("config", opts.config_path, "problem/run config (JSON)")
        ->required();
    cmd->add_option("--scheme", opts.scheme, "discretization: fitted or standard")
        ->check(CLI::IsMember({"fitted", "standard"}));
    cmd->add_option("--quad-points", opts.quad_points,
                    "quadrature subintervals for manufactured forcing (>= 1024)");
}

int with_config(const CommonOptions& opts, int (*command)(const spfide::Config&, std::ostream&),
                const std::string* out, const std::string* out_dir) {
    spfide::Config config;
    try {
        config = spfide::load_config(opts.config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    if (!opts.scheme.empty())
        config.run.kind = opts.scheme == "standard" ? spfide::SchemeKind::standard
                                                    : spfide::SchemeKind::fitted;
    if (opts.quad_points != 0) {
        if (opts.quad_points < 1024) {
            std::cerr << "error: --quad-points must be >= 1024\n";
            return 1;
        }
        config.run.quad_points = opts.quad_points;
    }
    if (out && !out->empty()) config.run.out = *out;
    if (out_dir && !out_dir->empty()) config.run.out_dir = *out_dir;
    return command(config, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solver for second-order singularly perturbed Fredholm "
                 "integro-differential boundary value problems"};
    app.require_subcommand(1);

    CommonOptions solve_opts, study_opts, compare_opts;
    std::string solve_out, study_dir, compare_dir;

    CLI::App* solve = app.add_subcommand("solve", "solve one instance and write a CSV");
    add_common(solve, solve_opts);
    solve->add_option("--out", solve_out, "solution CSV path (default: stdout)");

    CLI::App* study = app.add_subcommand("study", "run a convergence study");
    add_common(study, study_opts);
    study->add_option("--out-dir", study_dir, "output directory (default: .)");

    CLI::App* compare =
        app.add_subcommand("compare", "contrast the fitted and standard schemes");
    add_common(compare, compare_opts);
    compare->add_option("--out-dir", compare_dir, "output directory (default: .)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (solve->parsed()) return with_config(solve_opts, spfide::cmd_solve, &solve_out, nullptr);
    if (study->parsed()) return with_config(study_opts, spfide::cmd_study, nullptr, &study_dir);
    return with_config(compare_opts, spfide::cmd_compare, nullptr, &compare_dir);
}
