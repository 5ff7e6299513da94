#pragma once

#include <iosfwd>

#include "spfide/config.hpp"
#include "spfide/table_io.hpp"

namespace spfide {

// Command implementations behind the spfide binary. Each returns the
// process exit code (0 success, 1 usage/config failure, 2 partial study
// failure) and writes human diagnostics to `diag` (the CLI passes stderr).

// Solves one (eps, N) instance and writes the solution CSV to run.out
// (stdout when unset). Residual and lambda-bound diagnostics go to diag.
int cmd_solve(const Config& config, std::ostream& diag);

// Runs the (eps_list x N_list) convergence study; writes table.md and
// grid.csv into run.out_dir (default ".").
int cmd_study(const Config& config, std::ostream& diag);

// Runs the study under both schemes; writes compare.md plus
// fitted_grid.csv / standard_grid.csv into run.out_dir (default ".").
int cmd_compare(const Config& config, std::ostream& diag);

}  // namespace spfide
