#pragma once

#include <vector>

#include "spfide/problem.hpp"

namespace spfide {

// Uniform grid x_i = i*h on [0, length], i = 0..intervals.
struct Mesh {
    int intervals = 0;  // N
    double length = 0.0;
    double spacing = 0.0;  // h = length / N
    std::vector<double> nodes;
};

Mesh make_mesh(int intervals, double length);

// Fitted second-difference coefficient sigma_i = eps / psi_i^2 evaluated
// in the overflow-safe form a_i / (h * expm1(a_i h / eps)). Underflows to
// exactly 0 once a_i h / eps passes the exp overflow threshold, where the
// true value is below 1e-300.
double fitted_coefficient(double a_i, double eps, double h);

// Three-point stencil coefficients multiplying u_{i-1}, u_i, u_{i+1}.
struct Stencil3 {
    double c_minus = 0.0;
    double c_center = 0.0;
    double c_plus = 0.0;
};

// The difference stencil that is annihilated exactly by both exponential
// solutions exp(lambda_{1,2} x) of eps u'' + a u' - b u = 0 with constant
// coefficients. Throws OverflowError once an exponent passes ~709; meant
// for validation at moderate a h / eps.
Stencil3 exact_constant_stencil(double a, double b, double eps, double h);

// Composite trapezoid weights w_j = h * eta_j, eta = 1/2 at the endpoints
// and 1 inside; sums to the domain length up to roundoff.
std::vector<double> trapezoid_weights(const Mesh& mesh);

enum class SchemeKind { fitted, standard };

// Dense linear system for the interior unknowns u_1..u_{N-1}; row i and
// column j of `matrix` correspond to node x_{i+1} and unknown u_{j+1}.
// Boundary values are eliminated into `rhs` exactly.
struct DiscreteSystem {
    int unknowns = 0;  // N - 1
    std::vector<double> matrix;  // row-major unknowns x unknowns
    std::vector<double> rhs;
    Mesh mesh;
    SchemeKind kind = SchemeKind::fitted;
    Problem problem;

    double& entry(int i, int j) { return matrix[static_cast<std::size_t>(i) * unknowns + j]; }
    double entry(int i, int j) const {
        return matrix[static_cast<std::size_t>(i) * unknowns + j];
    }
};

// Builds the discretization
//   sigma_i (u_{i-1} - 2 u_i + u_{i+1}) + convection term - b_i u_i
//     + lambda sum_j w_j K(x_i, x_j) u_j = f_i
// with, for kind == fitted, sigma_i the fitted coefficient and the forward
// difference a_i (u_{i+1} - u_i)/h, and, for kind == standard, the classical
// central discretization sigma_i = eps/h^2 with a_i (u_{i+1} - u_{i-1})/(2h)
// (stable only away from the layer regime; kept as a contrast baseline).
// For manufactured problems f_i comes from manufacture_forcing with
// quad_points subintervals. Rows are filled in parallel; assemble_serial is
// the bit-identical reference implementation.
DiscreteSystem assemble(const Problem& p, const Mesh& mesh, SchemeKind kind,
                        int quad_points = default_quad_points);
DiscreteSystem assemble_serial(const Problem& p, const Mesh& mesh, SchemeKind kind,
                               int quad_points = default_quad_points);

}  // namespace spfide
