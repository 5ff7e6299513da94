#include "spfide/problem.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace spfide {

namespace {

constexpr int kSamplePoints = 10001;
constexpr int kKernelSamplePoints = 101;

std::string format_location(double x) {
    std::ostringstream out;
    out << "x=" << x;
    return out.str();
}

// Samples expr(x) over [0,l]; records the first evaluation failure (or
// non-finite value) as a violation and reports the running minimum.
double sampled_min(const Expr& e, const char* what, double length, double eps,
                   std::vector<std::string>& violations) {
    double lo = std::numeric_limits<double>::infinity();
    Bindings b;
    b.set(Var::eps, eps);
    for (int i = 0; i < kSamplePoints; ++i) {
        const double x = length * static_cast<double>(i) / (kSamplePoints - 1);
        b.set(Var::x, x);
        double v;
        try {
            v = eval(e, b);
        } catch (const Error& err) {
            violations.push_back(std::string(what) + " failed to evaluate at " +
                                 format_location(x) + ": " + err.what());
            return lo;
        }
        if (!std::isfinite(v)) {
            violations.push_back(std::string(what) + " evaluates to a non-finite value at " +
                                 format_location(x));
            return lo;
        }
        if (v < lo) lo = v;
    }
    return lo;
}

void check_kernel(const Expr& kernel, double length, double eps,
                  std::vector<std::string>& violations) {
    Bindings b;
    b.set(Var::eps, eps);
    for (int i = 0; i < kKernelSamplePoints; ++i) {
        const double x = length * static_cast<double>(i) / (kKernelSamplePoints - 1);
        b.set(Var::x, x);
        for (int j = 0; j < kKernelSamplePoints; ++j) {
            const double s = length * static_cast<double>(j) / (kKernelSamplePoints - 1);
            b.set(Var::s, s);
            double v;
            try {
                v = eval(kernel, b);
            } catch (const Error& err) {
                std::ostringstream out;
                out << "K(x,s) failed to evaluate at x=" << x << ", s=" << s << ": "
                    << err.what();
                violations.push_back(out.str());
                return;
            }
            if (!std::isfinite(v)) {
                std::ostringstream out;
                out << "K(x,s) evaluates to a non-finite value at x=" << x << ", s=" << s;
                violations.push_back(out.str());
                return;
            }
        }
    }
}

}  // namespace

ValidationReport validate(const Problem& p) {
    ValidationReport report;
    auto& v = report.violations;

    const bool eps_ok = p.eps > 0.0 && p.eps <= 1.0;
    if (!eps_ok) v.push_back("eps must lie in (0,1]");
    const bool length_ok = p.length > 0.0 && std::isfinite(p.length);
    if (!length_ok) v.push_back("l must be positive");
    if (!std::isfinite(p.coupling)) v.push_back("lambda must be finite");
    if (!std::isfinite(p.left_value)) v.push_back("A must be finite");
    if (!std::isfinite(p.right_value)) v.push_back("B must be finite");
    if (!p.forcing.has_value() && !p.exact.has_value())
        v.push_back("either f or exact must be provided");

    if (!eps_ok || !length_ok) return report;

    const std::size_t before_a = v.size();
    report.alpha_estimate = sampled_min(p.convection, "a(x)", p.length, p.eps, v);
    if (v.size() == before_a && report.alpha_estimate <= 0.0)
        v.push_back("a(x) must be positive");
    report.beta_estimate = sampled_min(p.reaction, "b(x)", p.length, p.eps, v);
    if (p.forcing) sampled_min(*p.forcing, "f(x)", p.length, p.eps, v);
    if (p.exact) sampled_min(*p.exact, "exact(x)", p.length, p.eps, v);
    check_kernel(p.kernel, p.length, p.eps, v);
    return report;
}

ForcingEvaluator::ForcingEvaluator(const Problem& p, int quad_points)
    : eps_(p.eps),
      coupling_(p.coupling),
      convection_(p.convection),
      reaction_(p.reaction),
      kernel_(p.kernel) {
    if (!p.exact.has_value())
        throw InvalidArgument("manufactured forcing requires an exact solution");
    if (quad_points < 1024)
        throw InvalidArgument("manufactured forcing requires quad_points >= 1024");
    if (!(p.eps > 0.0)) throw InvalidArgument("eps must be positive");
    if (!(p.length > 0.0)) throw InvalidArgument("l must be positive");

    exact_ = *p.exact;
    first_derivative_ = differentiate(exact_, Var::x);
    second_derivative_ = differentiate(first_derivative_, Var::x);

    const int q = quad_points;
    const double h = p.length / q;
    quad_nodes_.resize(q + 1);
    quad_weights_.assign(q + 1, h);
    quad_weights_.front() = quad_weights_.back() = h / 2.0;
    exact_values_.resize(q + 1);
    Bindings b;
    b.set(Var::eps, eps_);
    for (int j = 0; j <= q; ++j) {
        const double s = (j == q) ? p.length : h * j;
        quad_nodes_[j] = s;
        b.set(Var::x, s);
        exact_values_[j] = eval(exact_, b);
    }
}

double ForcingEvaluator::operator()(double x) const {
    Bindings at_x;
    at_x.set(Var::x, x).set(Var::eps, eps_);

    double integral = 0.0;
    if (coupling_ != 0.0) {
        Bindings b;
        b.set(Var::x, x).set(Var::eps, eps_);
        for (std::size_t j = 0; j < quad_nodes_.size(); ++j) {
            b.set(Var::s, quad_nodes_[j]);
            integral += quad_weights_[j] * eval(kernel_, b) * exact_values_[j];
        }
    }
    return eps_ * eval(second_derivative_, at_x) +
           eval(convection_, at_x) * eval(first_derivative_, at_x) -
           eval(reaction_, at_x) * eval(exact_, at_x) + coupling_ * integral;
}

double manufacture_forcing(const Problem& p, double x, int quad_points) {
    return ForcingEvaluator(p, quad_points)(x);
}

}  // namespace spfide
