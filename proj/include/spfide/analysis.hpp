#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spfide/linsolve.hpp"

namespace spfide {

// Max pointwise error over all mesh nodes against a known solution.
double max_error(const Solution& sol, const Expr& exact, double eps);

// Observed convergence order log2(error_coarse / error_fine) between a
// mesh with N intervals and one with 2N. Both errors must be positive.
double rate(double error_coarse, double error_fine);

// Smallness condition on the integral coupling required by the convergence
// theory: |lambda| < alpha / max_i sum_j w_j |K(x_i, x_j)|. Diagnostic
// only; never blocks a solve.
struct LambdaBoundReport {
    bool satisfied = false;
    bool unbounded = false;  // zero kernel: any lambda qualifies
    double bound = 0.0;      // +inf when unbounded
    double margin = 0.0;     // bound - |lambda|
};
LambdaBoundReport lambda_bound_check(const Problem& p, const Mesh& mesh);

// Sign pattern of the differential (tridiagonal) part that the discrete
// comparison argument relies on: off-diagonals >= 0, diagonal < 0. The
// kernel contribution is subtracted from the stored entries first. Rows
// are reported with interior numbering 1..N-1.
struct SignViolation {
    int row = 0;
    const char* entry = "";  // "sub", "diag" or "super"
    double value = 0.0;
};
struct SignReport {
    std::vector<SignViolation> violations;
    bool ok() const { return violations.empty(); }
};
SignReport minimum_principle_diagnostic(const DiscreteSystem& sys);

struct ErrorRecord {
    double eps = 0.0;
    int intervals = 0;
    double max_error = 0.0;
    std::optional<double> rate;  // defined once the 2N result exists
};

struct CellOutcome {
    bool ok = false;
    double max_error = 0.0;
    double residual_inf = 0.0;
    double residual_limit = 0.0;
    std::string message;  // failure diagnostic when !ok
};

// Error/rate grid over (eps, N) plus the eps-uniform rows E^N and P^N.
struct ConvergenceReport {
    std::vector<double> eps_values;
    std::vector<int> N_values;
    SchemeKind kind = SchemeKind::fitted;
    std::vector<CellOutcome> cells;  // eps-major: cells[ei * N_values.size() + ni]
    std::vector<std::optional<double>> rates;  // eps-major, N_values.size()-1 per row
    std::vector<std::optional<double>> uniform_errors;  // per N; set when column complete
    std::vector<std::optional<double>> uniform_rates;
    bool complete = false;

    const CellOutcome& cell(std::size_t ei, std::size_t ni) const {
        return cells[ei * N_values.size() + ni];
    }
    std::optional<double> rate_at(std::size_t ei, std::size_t ni) const {
        return rates[ei * (N_values.size() - 1) + ni];
    }
    ErrorRecord record(std::size_t ei, std::size_t ni) const;
};

struct StudyOptions {
    SchemeKind kind = SchemeKind::fitted;
    int quad_points = default_quad_points;
};

// Solves every (eps, N) cell and fills the grid. Requires an exact
// solution (given or manufactured); per-cell boundary values are taken
// from it at that cell's eps, so eps-dependent boundary data stays
// consistent across the sweep. N_values must be successive doublings.
// Cells run concurrently; the report is deterministic regardless of
// completion order, and per-cell failures are recorded without aborting
// the sweep.
ConvergenceReport run_study(const Problem& p, std::span<const double> eps_values,
                            std::span<const int> N_values, StudyOptions options = {});

}  // namespace spfide
