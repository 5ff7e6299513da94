#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spfide/expr.hpp"

namespace spfide {

// One boundary value problem instance:
//
//   eps u'' + a(x) u' - b(x) u + lambda * integral_0^l K(x,s) u(s) ds = f(x)
//   u(0) = A, u(l) = B
//
// on (0, l), with eps in (0,1] and a(x) >= alpha > 0. When `forcing` is
// absent the problem is manufactured: f is derived from `exact` (which is
// then mandatory) via manufacture_forcing.
struct Problem {
    double eps = 1.0;
    double coupling = 0.0;  // lambda, weight of the integral term
    double length = 1.0;    // l

    Expr convection;  // a(x)
    Expr reaction;    // b(x)
    Expr kernel;      // K(x,s)

    std::optional<Expr> forcing;  // f(x)
    std::optional<Expr> exact;    // known solution, used for error measurement

    double left_value = 0.0;   // u(0) = A
    double right_value = 0.0;  // u(l) = B

    bool manufactured() const { return !forcing.has_value(); }
};

struct ValidationReport {
    std::vector<std::string> violations;
    double alpha_estimate = 0.0;  // sampled min of a(x) on [0,l]
    double beta_estimate = 0.0;   // sampled min of b(x) on [0,l]
    bool ok() const { return violations.empty(); }
};

// Checks the problem hypotheses by dense sampling (10001 points per axis);
// expression evaluation failures are reported as violations, not thrown.
ValidationReport validate(const Problem& p);

inline constexpr int default_quad_points = 1 << 15;

// Evaluates the manufactured forcing
//   f(x) = eps u_exact''(x) + a(x) u_exact'(x) - b(x) u_exact(x) + lambda Q(x)
// where Q is a composite-trapezoid approximation of the kernel integral on
// quad_points subintervals. Requires `exact` and quad_points >= 1024.
double manufacture_forcing(const Problem& p, double x, int quad_points);

// Same computation with the exact-solution samples at the quadrature nodes
// precomputed once; used when manufacturing f along a whole mesh.
class ForcingEvaluator {
public:
    ForcingEvaluator(const Problem& p, int quad_points);
    double operator()(double x) const;

private:
    double eps_;
    double coupling_;
    Expr convection_;
    Expr reaction_;
    Expr kernel_;
    Expr exact_;
    Expr first_derivative_;
    Expr second_derivative_;
    std::vector<double> quad_nodes_;
    std::vector<double> quad_weights_;
    std::vector<double> exact_values_;
};

}  // namespace spfide
