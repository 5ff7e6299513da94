#pragma once

#include <iosfwd>
#include <string>

#include "spfide/analysis.hpp"

namespace spfide {

// Fixed table formats: errors in scientific notation with 3 decimals,
// rates with 2 decimals, CSV cells at full (shortest round-trip) precision.
std::string format_scientific(double v);
std::string format_rate(double v);
std::string format_full(double v);

// RFC-4180 CSV, '.' decimal separator, LF line endings. Header is
// x,u plus exact,error columns when the problem carries an exact solution.
void write_solution_csv(std::ostream& os, const Solution& sol, const Problem& p);

// Raw study grid: eps,N,max_error,rate rows (eps-major), then the uniform
// rows with literal `uniform` in the eps column. Failed cells leave the
// numeric fields empty.
void write_report_csv(std::ostream& os, const ConvergenceReport& report);

// Markdown table mirroring the usual convergence-table layout: an error
// row per eps followed by its rate row, then E^N / P^N footer rows. Every
// number is a reformatting of the corresponding CSV grid value.
void write_report_markdown(std::ostream& os, const ConvergenceReport& report);

// Side-by-side fitted/standard tables plus the per-cell error ratio
// (standard / fitted).
void write_compare_markdown(std::ostream& os, const ConvergenceReport& fitted,
                            const ConvergenceReport& standard);

}  // namespace spfide
