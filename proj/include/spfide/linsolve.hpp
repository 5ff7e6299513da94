#pragma once

#include "spfide/scheme.hpp"

namespace spfide {

// No usable pivot while factorizing; `column` is the offending column.
struct SingularMatrix : Error {
    explicit SingularMatrix(int column_);
    int column;
};

// Solved mesh function with the boundary values reinserted:
// values[0] = A and values[N] = B exactly, interior from the linear solve.
struct Solution {
    Mesh mesh;
    std::vector<double> values;
    double residual_inf = 0.0;  // inf-norm of M*u_int - F
    SchemeKind kind = SchemeKind::fitted;
};

// Dense LU with partial pivoting (largest absolute column entry, ties to
// the lowest row index; pivots below 1e-300 are treated as singular),
// followed by one iterative-refinement step with an extended-precision
// residual. Deterministic; lu_solve_serial is the bit-identical reference
// for the OpenMP path.
Solution lu_solve(const DiscreteSystem& sys, double left_value, double right_value);
Solution lu_solve_serial(const DiscreteSystem& sys, double left_value, double right_value);

// Residual certificate threshold:
// 1e3 * machine_eps * ||matrix||_inf * ||values||_inf * unknowns.
double residual_limit(const DiscreteSystem& sys, const Solution& sol);

}  // namespace spfide
