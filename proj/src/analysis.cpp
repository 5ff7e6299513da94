#include "spfide/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spfide {

double max_error(const Solution& sol, const Expr& exact, double eps) {
    Bindings b;
    b.set(Var::eps, eps);
    double worst = 0.0;
    for (std::size_t i = 0; i < sol.values.size(); ++i) {
        b.set(Var::x, sol.mesh.nodes[i]);
        worst = std::max(worst, std::fabs(sol.values[i] - eval(exact, b)));
    }
    return worst;
}

double rate(double error_coarse, double error_fine) {
    if (!(error_coarse > 0.0) || !(error_fine > 0.0))
        throw InvalidArgument("rate requires two positive errors");
    return std::log(error_coarse / error_fine) / std::log(2.0);
}

LambdaBoundReport lambda_bound_check(const Problem& p, const Mesh& mesh) {
    const ValidationReport validation = validate(p);
    const std::vector<double> weights = trapezoid_weights(mesh);
    const int N = mesh.intervals;

    double denom = 0.0;
    Bindings b;
    b.set(Var::eps, p.eps);
    for (int i = 1; i <= N; ++i) {
        b.set(Var::x, mesh.nodes[i]);
        double row = 0.0;
        for (int j = 0; j <= N; ++j) {
            b.set(Var::s, mesh.nodes[j]);
            row += weights[j] * std::fabs(eval(p.kernel, b));
        }
        denom = std::max(denom, row);
    }

    LambdaBoundReport report;
    if (denom == 0.0) {
        report.unbounded = true;
        report.bound = std::numeric_limits<double>::infinity();
        report.margin = report.bound;
        report.satisfied = true;
        return report;
    }
    report.bound = validation.alpha_estimate / denom;
    report.satisfied = std::fabs(p.coupling) < report.bound;
    report.margin = report.bound - std::fabs(p.coupling);
    return report;
}

SignReport minimum_principle_diagnostic(const DiscreteSystem& sys) {
    SignReport report;
    const int n = sys.unknowns;
    const int N = sys.mesh.intervals;
    const double coupling = sys.problem.coupling;
    const std::vector<double> weights = trapezoid_weights(sys.mesh);

    Bindings b;
    b.set(Var::eps, sys.problem.eps);
    auto kernel_part = [&](int i, int j) {
        if (coupling == 0.0) return 0.0;
        b.set(Var::x, sys.mesh.nodes[i]);
        b.set(Var::s, sys.mesh.nodes[j]);
        return coupling * weights[j] * eval(sys.problem.kernel, b);
    };

    for (int i = 1; i <= n; ++i) {
        const int r = i - 1;
        if (i >= 2) {
            const double sub = sys.entry(r, r - 1) - kernel_part(i, i - 1);
            if (!(sub >= 0.0)) report.violations.push_back({i, "sub", sub});
        }
        const double diag = sys.entry(r, r) - kernel_part(i, i);
        if (!(diag < 0.0)) report.violations.push_back({i, "diag", diag});
        if (i <= N - 2) {
            const double super = sys.entry(r, r + 1) - kernel_part(i, i + 1);
            if (!(super >= 0.0)) report.violations.push_back({i, "super", super});
        }
    }
    return report;
}

ErrorRecord ConvergenceReport::record(std::size_t ei, std::size_t ni) const {
    ErrorRecord rec;
    rec.eps = eps_values[ei];
    rec.intervals = N_values[ni];
    rec.max_error = cell(ei, ni).max_error;
    if (ni + 1 < N_values.size()) rec.rate = rate_at(ei, ni);
    return rec;
}

ConvergenceReport run_study(const Problem& p, std::span<const double> eps_values,
                            std::span<const int> N_values, StudyOptions options) {
    if (eps_values.empty()) throw InvalidArgument("eps_list must not be empty");
    if (N_values.empty()) throw InvalidArgument("N_list must not be empty");
    for (double eps : eps_values)
        if (!(eps > 0.0) || eps > 1.0)
            throw InvalidArgument("every eps in eps_list must lie in (0,1]");
    if (N_values.front() < 2) throw InvalidArgument("every N must be at least 2");
    for (std::size_t k = 0; k + 1 < N_values.size(); ++k)
        if (N_values[k + 1] != 2 * N_values[k])
            throw InvalidArgument("N_list must be successive doublings");
    if (!p.exact.has_value())
        throw InvalidArgument("study requires an exact solution (given or manufactured)");

    const std::size_t ne = eps_values.size();
    const std::size_t nn = N_values.size();

    ConvergenceReport report;
    report.eps_values.assign(eps_values.begin(), eps_values.end());
    report.N_values.assign(N_values.begin(), N_values.end());
    report.kind = options.kind;
    report.cells.assign(ne * nn, CellOutcome{});

    const int total = static_cast<int>(ne * nn);
#pragma omp parallel for schedule(dynamic, 1)
    for (int flat = 0; flat < total; ++flat) {
        const std::size_t ei = static_cast<std::size_t>(flat) / nn;
        const std::size_t ni = static_cast<std::size_t>(flat) % nn;
        CellOutcome& out = report.cells[flat];
        try {
            Problem cell_problem = p;
            cell_problem.eps = eps_values[ei];
            Bindings b;
            b.set(Var::eps, cell_problem.eps);
            b.set(Var::x, 0.0);
            cell_problem.left_value = eval(*p.exact, b);
            b.set(Var::x, p.length);
            cell_problem.right_value = eval(*p.exact, b);

            const Mesh mesh = make_mesh(report.N_values[ni], p.length);
            const DiscreteSystem sys =
                assemble(cell_problem, mesh, options.kind, options.quad_points);
            const Solution sol =
                lu_solve(sys, cell_problem.left_value, cell_problem.right_value);
            out.max_error = max_error(sol, *p.exact, cell_problem.eps);
            out.residual_inf = sol.residual_inf;
            out.residual_limit = residual_limit(sys, sol);
            out.ok = true;
        } catch (const std::exception& e) {
            out.ok = false;
            out.message = e.what();
        }
    }

    report.rates.assign(ne * (nn - 1), std::nullopt);
    for (std::size_t ei = 0; ei < ne; ++ei) {
        for (std::size_t ni = 0; ni + 1 < nn; ++ni) {
            const CellOutcome& coarse = report.cell(ei, ni);
            const CellOutcome& fine = report.cell(ei, ni + 1);
            if (coarse.ok && fine.ok && coarse.max_error > 0.0 && fine.max_error > 0.0)
                report.rates[ei * (nn - 1) + ni] = rate(coarse.max_error, fine.max_error);
        }
    }

    report.uniform_errors.assign(nn, std::nullopt);
    for (std::size_t ni = 0; ni < nn; ++ni) {
        double column_max = 0.0;
        bool column_ok = true;
        for (std::size_t ei = 0; ei < ne; ++ei) {
            const CellOutcome& c = report.cell(ei, ni);
            if (!c.ok) {
                column_ok = false;
                break;
            }
            column_max = std::max(column_max, c.max_error);
        }
        if (column_ok) report.uniform_errors[ni] = column_max;
    }

    report.uniform_rates.assign(nn - 1, std::nullopt);
    for (std::size_t ni = 0; ni + 1 < nn; ++ni) {
        const auto& coarse = report.uniform_errors[ni];
        const auto& fine = report.uniform_errors[ni + 1];
        if (coarse && fine && *coarse > 0.0 && *fine > 0.0)
            report.uniform_rates[ni] = rate(*coarse, *fine);
    }

    report.complete = true;
    for (const CellOutcome& c : report.cells)
        if (!c.ok) report.complete = false;
    return report;
}

}  // namespace spfide
