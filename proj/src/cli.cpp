#include "spfide/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <ostream>

namespace spfide {

namespace {

void print_lambda_diagnostic(const Problem& p, const Mesh& mesh, std::ostream& diag) {
    const LambdaBoundReport report = lambda_bound_check(p, mesh);
    if (report.unbounded) {
        diag << "lambda bound: unbounded (zero kernel); |lambda| = " << std::fabs(p.coupling)
             << " qualifies\n";
        return;
    }
    diag << "lambda bound: |lambda| = " << std::fabs(p.coupling)
         << (report.satisfied ? " < " : " >= ") << "bound = " << report.bound
         << " (margin " << report.margin << ")\n";
    if (!report.satisfied)
        diag << "warning: the coupling smallness condition for the convergence theory "
                "is violated; proceeding anyway\n";
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path.string());
    return out;
}

std::filesystem::path prepare_out_dir(const Config& config) {
    const std::filesystem::path dir = config.run.out_dir.value_or(".");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + dir.string());
    return dir;
}

ConvergenceReport study_for(const Config& config, SchemeKind kind) {
    StudyOptions options;
    options.kind = kind;
    options.quad_points = config.run.quad_points;
    return run_study(config.problem, config.run.eps_values, config.run.N_values, options);
}

}  // namespace

int cmd_solve(const Config& config, std::ostream& diag) {
    try {
        if (!config.run.intervals) {
            diag << "error: solve requires run.N\n";
            return 1;
        }
        const Problem& p = config.problem;
        const Mesh mesh = make_mesh(*config.run.intervals, p.length);
        const DiscreteSystem sys = assemble(p, mesh, config.run.kind, config.run.quad_points);
        const Solution sol = lu_solve(sys, p.left_value, p.right_value);

        diag << "scheme: " << (config.run.kind == SchemeKind::fitted ? "fitted" : "standard")
             << ", N = " << mesh.intervals << ", eps = " << p.eps << '\n';
        diag << "residual: " << sol.residual_inf << " (certificate limit "
             << residual_limit(sys, sol) << ")\n";
        print_lambda_diagnostic(p, mesh, diag);

        if (config.run.out) {
            auto out = open_output(*config.run.out);
            write_solution_csv(out, sol, p);
            diag << "wrote " << *config.run.out << '\n';
        } else {
            write_solution_csv(std::cout, sol, p);
        }
        return 0;
    } catch (const std::exception& e) {
        diag << "error: " << e.what() << '\n';
        return 1;
    }
}

int cmd_study(const Config& config, std::ostream& diag) {
    try {
        if (config.run.eps_values.empty() || config.run.N_values.empty()) {
            diag << "error: study requires run.eps_list and run.N_list\n";
            return 1;
        }
        const ConvergenceReport report = study_for(config, config.run.kind);
        const auto dir = prepare_out_dir(config);
        {
            auto out = open_output(dir / "grid.csv");
            write_report_csv(out, report);
        }
        {
            auto out = open_output(dir / "table.md");
            write_report_markdown(out, report);
        }
        diag << "wrote " << (dir / "table.md").string() << " and "
             << (dir / "grid.csv").string() << '\n';
        if (!report.complete) {
            for (std::size_t ei = 0; ei < report.eps_values.size(); ++ei)
                for (std::size_t ni = 0; ni < report.N_values.size(); ++ni)
                    if (!report.cell(ei, ni).ok)
                        diag << "cell (eps=" << report.eps_values[ei]
                             << ", N=" << report.N_values[ni]
                             << ") failed: " << report.cell(ei, ni).message << '\n';
            return 2;
        }
        return 0;
    } catch (const std::exception& e) {
        diag << "error: " << e.what() << '\n';
        return 1;
    }
}

int cmd_compare(const Config& config, std::ostream& diag) {
    try {
        if (config.run.eps_values.empty() || config.run.N_values.empty()) {
            diag << "error: compare requires run.eps_list and run.N_list\n";
            return 1;
        }
        const ConvergenceReport fitted = study_for(config, SchemeKind::fitted);
        const ConvergenceReport standard = study_for(config, SchemeKind::standard);
        const auto dir = prepare_out_dir(config);
        {
            auto out = open_output(dir / "fitted_grid.csv");
            write_report_csv(out, fitted);
        }
        {
            auto out = open_output(dir / "standard_grid.csv");
            write_report_csv(out, standard);
        }
        {
            auto out = open_output(dir / "compare.md");
            write_compare_markdown(out, fitted, standard);
        }
        diag << "wrote " << (dir / "compare.md").string() << '\n';
        return fitted.complete && standard.complete ? 0 : 2;
    } catch (const std::exception& e) {
        diag << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace spfide
