#include "spfide/scheme.hpp"

#include <cmath>
#include <exception>
#include <sstream>
#include <utility>

namespace spfide {

namespace {

// std::exp overflows to +inf just above this exponent.
constexpr double kExpOverflow = 709.0;

}  // namespace

Mesh make_mesh(int intervals, double length) {
    if (intervals < 2)
        throw InvalidArgument("mesh needs at least 2 intervals (one interior node)");
    if (!(length > 0.0) || !std::isfinite(length))
        throw InvalidArgument("domain length must be positive");
    Mesh mesh;
    mesh.intervals = intervals;
    mesh.length = length;
    mesh.spacing = length / intervals;
    mesh.nodes.resize(intervals + 1);
    for (int i = 0; i <= intervals; ++i) mesh.nodes[i] = mesh.spacing * i;
    mesh.nodes.back() = length;
    return mesh;
}

double fitted_coefficient(double a_i, double eps, double h) {
    if (!(a_i > 0.0)) throw InvalidArgument("fitted coefficient requires a_i > 0");
    if (!(eps > 0.0)) throw InvalidArgument("fitted coefficient requires eps > 0");
    if (!(h > 0.0)) throw InvalidArgument("fitted coefficient requires h > 0");
    const double rho = a_i * h / eps;
    return a_i / (h * std::expm1(rho));
}

Stencil3 exact_constant_stencil(double a, double b, double eps, double h) {
    if (!(a > 0.0)) throw InvalidArgument("exact stencil requires a > 0");
    if (b < 0.0) throw InvalidArgument("exact stencil requires b >= 0");
    if (!(eps > 0.0)) throw InvalidArgument("exact stencil requires eps > 0");
    if (!(h > 0.0)) throw InvalidArgument("exact stencil requires h > 0");
    const double half_rho = a * h / (2.0 * eps);
    const double cosh_arg = h * std::sqrt(a * a + 4.0 * eps * b) / (2.0 * eps);
    if (half_rho > kExpOverflow || cosh_arg > kExpOverflow)
        throw OverflowError("exact stencil exponent exceeds the overflow threshold");
    Stencil3 st;
    st.c_minus = -std::exp(-half_rho);
    st.c_center = 2.0 * std::cosh(cosh_arg);
    st.c_plus = -std::exp(half_rho);
    return st;
}

std::vector<double> trapezoid_weights(const Mesh& mesh) {
    std::vector<double> w(mesh.intervals + 1, mesh.spacing);
    w.front() = w.back() = mesh.spacing / 2.0;
    return w;
}

namespace {

struct RowError {
    bool failed = false;
    std::string message;
};

DiscreteSystem assemble_impl(const Problem& p, const Mesh& mesh, SchemeKind kind,
                             int quad_points, bool parallel) {
    if (!(p.eps > 0.0)) throw InvalidArgument("eps must be positive");
    if (mesh.intervals < 2) throw InvalidArgument("mesh needs at least 2 intervals");
    if (std::fabs(mesh.length - p.length) > 1e-12 * p.length)
        throw InvalidArgument("mesh length does not match the problem domain");

    const int N = mesh.intervals;
    const int n = N - 1;
    const double h = mesh.spacing;
    const double eps = p.eps;
    const double coupling = p.coupling;

    DiscreteSystem sys;
    sys.unknowns = n;
    sys.matrix.assign(static_cast<std::size_t>(n) * n, 0.0);
    sys.rhs.assign(n, 0.0);
    sys.mesh = mesh;
    sys.kind = kind;
    sys.problem = p;

    const std::vector<double> weights = trapezoid_weights(mesh);
    std::optional<ForcingEvaluator> manufactured;
    if (p.manufactured()) manufactured.emplace(p, quad_points);

    RowError row_error;

#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 1; i <= n; ++i) {
        try {
            const double xi = mesh.nodes[i];
            Bindings at_node;
            at_node.set(Var::x, xi).set(Var::eps, eps);
            const double ai = eval(p.convection, at_node);
            const double bi = eval(p.reaction, at_node);

            double sub, diag, super;
            if (kind == SchemeKind::fitted) {
                const double sigma = fitted_coefficient(ai, eps, h);
                sub = sigma;
                super = sigma + ai / h;
                diag = -(sigma + super + bi);
            } else {
                const double sigma = eps / (h * h);
                const double advection = ai / (2.0 * h);
                sub = sigma - advection;
                super = sigma + advection;
                diag = -(2.0 * sigma + bi);
            }

            double* row = sys.matrix.data() + static_cast<std::size_t>(i - 1) * n;
            if (i >= 2) row[i - 2] += sub;
            row[i - 1] += diag;
            if (i <= n - 1) row[i] += super;

            double rhs = p.forcing ? eval(*p.forcing, at_node) : (*manufactured)(xi);
            if (coupling != 0.0) {
                Bindings at_pair;
                at_pair.set(Var::x, xi).set(Var::eps, eps);
                for (int j = 1; j <= n; ++j) {
                    at_pair.set(Var::s, mesh.nodes[j]);
                    row[j - 1] += coupling * weights[j] * eval(p.kernel, at_pair);
                }
                at_pair.set(Var::s, 0.0);
                const double k_left = eval(p.kernel, at_pair);
                at_pair.set(Var::s, mesh.nodes[N]);
                const double k_right = eval(p.kernel, at_pair);
                rhs -= coupling * (weights[0] * k_left * p.left_value +
                                   weights[N] * k_right * p.right_value);
            }
            if (i == 1) rhs -= sub * p.left_value;
            if (i == n) rhs -= super * p.right_value;
            sys.rhs[i - 1] = rhs;
        } catch (const std::exception& e) {
#pragma omp critical(spfide_assemble_error)
            if (!row_error.failed) {
                std::ostringstream out;
                out << e.what() << " (while assembling the row of node x=" << mesh.nodes[i]
                    << ")";
                row_error.failed = true;
                row_error.message = out.str();
            }
        }
    }

    if (row_error.failed) throw Error(row_error.message);
    return sys;
}

}  // namespace

DiscreteSystem assemble(const Problem& p, const Mesh& mesh, SchemeKind kind,
                        int quad_points) {
    return assemble_impl(p, mesh, kind, quad_points, true);
}

DiscreteSystem assemble_serial(const Problem& p, const Mesh& mesh, SchemeKind kind,
                               int quad_points) {
    return assemble_impl(p, mesh, kind, quad_points, false);
}

}  // namespace spfide
