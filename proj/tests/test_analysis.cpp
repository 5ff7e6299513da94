#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "test_support.hpp"

using namespace spfide;

namespace {

Solution solve_example1(double eps, int N, SchemeKind kind, int quad_points = 4096) {
    const Problem p = testing::example1(eps);
    const DiscreteSystem sys = assemble(p, make_mesh(N, p.length), kind, quad_points);
    return lu_solve(sys, p.left_value, p.right_value);
}

}  // namespace

TEST_CASE("max_error") {
    const Problem p = testing::example1(0.25);
    Solution sol = solve_example1(0.25, 8, SchemeKind::fitted);

    // matching values give zero error
    Solution exact_nodal = sol;
    Bindings b;
    b.set(Var::eps, 0.25);
    for (std::size_t i = 0; i < exact_nodal.values.size(); ++i) {
        b.set(Var::x, exact_nodal.mesh.nodes[i]);
        exact_nodal.values[i] = eval(*p.exact, b);
    }
    CHECK(max_error(exact_nodal, *p.exact, 0.25) == 0.0);

    // a single perturbed interior node dominates
    exact_nodal.values[3] += 1e-3;
    CHECK(max_error(exact_nodal, *p.exact, 0.25) == doctest::Approx(1e-3).epsilon(1e-9));
}

TEST_CASE("rate") {
    CHECK(rate(4e-4, 1e-4) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rate(3.057e-3, 1.548e-3) == doctest::Approx(0.9817110807425597).epsilon(1e-12));
    CHECK(rate(1e-5, 1e-5) == 0.0);
    CHECK_THROWS_AS(rate(0.0, 1e-5), InvalidArgument);
    CHECK_THROWS_AS(rate(1e-5, 0.0), InvalidArgument);
    CHECK_THROWS_AS(rate(-1e-5, 1e-5), InvalidArgument);
}

TEST_CASE("rate of an exact halving is exactly one") {
    for (double e : {3.7e-3, 1.0, 5e-12, 0.125}) CHECK(rate(e, e / 2.0) == 1.0);
}

TEST_CASE("lambda bound diagnostic") {
    // Example 1: K = x, l = 1, alpha = 1 -> bound = 1, lambda = 1 misses it
    const Problem p = testing::example1(0.015625);
    const LambdaBoundReport report = lambda_bound_check(p, make_mesh(64, 1.0));
    CHECK_FALSE(report.unbounded);
    CHECK(std::fabs(report.bound - 1.0) <= 1e-12);
    CHECK_FALSE(report.satisfied);
    CHECK(report.margin == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

    // lambda = 0 always qualifies, margin equals the bound
    Problem q = p;
    q.coupling = 0.0;
    const LambdaBoundReport zero = lambda_bound_check(q, make_mesh(64, 1.0));
    CHECK(zero.satisfied);
    CHECK(zero.margin == zero.bound);

    // zero kernel: bound is reported as unbounded
    Problem z = p;
    z.kernel = parse_expression("0");
    const LambdaBoundReport unbounded = lambda_bound_check(z, make_mesh(16, 1.0));
    CHECK(unbounded.unbounded);
    CHECK(unbounded.satisfied);
    CHECK(std::isinf(unbounded.bound));
}

TEST_CASE("minimum principle diagnostic") {
    // lambda = 0, a = b = 1: clean sign structure
    Problem p;
    p.eps = 0.05;
    p.coupling = 0.0;
    p.length = 1.0;
    p.convection = parse_expression("1");
    p.reaction = parse_expression("1");
    p.kernel = parse_expression("0");
    p.forcing = parse_expression("1");
    DiscreteSystem sys = assemble(p, make_mesh(16, 1.0), SchemeKind::fitted);
    CHECK(minimum_principle_diagnostic(sys).ok());

    // an injected sign fault is pinpointed at interior row 1
    sys.entry(0, 0) = -sys.entry(0, 0);
    const SignReport faulty = minimum_principle_diagnostic(sys);
    REQUIRE_FALSE(faulty.ok());
    CHECK(faulty.violations.front().row == 1);
    CHECK(std::string(faulty.violations.front().entry) == "diag");

    // Example 1 with its kernel term present: the differential part is
    // still clean once the kernel contribution is subtracted
    const Problem ex = testing::example1(std::ldexp(1.0, -12));
    const DiscreteSystem layered =
        assemble(ex, make_mesh(64, 1.0), SchemeKind::fitted, 2048);
    CHECK(minimum_principle_diagnostic(layered).ok());
}

TEST_CASE("study on an exactly representable solution") {
    // u = x with b = lambda = 0 and constant a: reproduced to roundoff
    Problem p;
    p.eps = 0.5;
    p.coupling = 0.0;
    p.length = 1.0;
    p.convection = parse_expression("1");
    p.reaction = parse_expression("0");
    p.kernel = parse_expression("0");
    p.forcing = parse_expression("1");
    p.exact = parse_expression("x");
    p.left_value = 0.0;
    p.right_value = 1.0;
    const double eps_list[] = {1.0};
    const int N_list[] = {64, 128};
    const ConvergenceReport report = run_study(p, eps_list, N_list);
    REQUIRE(report.complete);
    CHECK(report.cell(0, 0).max_error <= 1e-9);
    CHECK(report.cell(0, 1).max_error <= 1e-9);
}

TEST_CASE("study rates on the layer example") {
    const Problem p = testing::example1(1.0);
    const double eps_list[] = {1.0, std::ldexp(1.0, -12)};
    const int N_list[] = {64, 128};
    StudyOptions options;
    options.quad_points = 1 << 15;
    const ConvergenceReport report = run_study(p, eps_list, N_list, options);
    REQUIRE(report.complete);
    CHECK(*report.rate_at(0, 0) == doctest::Approx(2.0).epsilon(0.05));
    CHECK(*report.rate_at(1, 0) == doctest::Approx(1.03).epsilon(0.08));

    // uniform error row is the exact columnwise max
    for (std::size_t ni = 0; ni < 2; ++ni) {
        const double expected =
            std::max(report.cell(0, ni).max_error, report.cell(1, ni).max_error);
        CHECK(*report.uniform_errors[ni] == expected);
    }

    // errors decrease with N for each eps
    for (std::size_t ei = 0; ei < 2; ++ei)
        CHECK(report.cell(ei, 1).max_error < report.cell(ei, 0).max_error);

    // residual certificate held in every cell
    for (const CellOutcome& cell : report.cells)
        CHECK(cell.residual_inf <= cell.residual_limit);

    // per-cell boundary data follows the cell eps
    const ErrorRecord record = report.record(1, 0);
    CHECK(record.eps == std::ldexp(1.0, -12));
    CHECK(record.intervals == 64);
    CHECK(record.rate.has_value());
}

TEST_CASE("study input validation") {
    const Problem p = testing::example1(0.5);
    const double good_eps[] = {0.5};
    const int good_N[] = {8, 16};
    CHECK_THROWS_AS(run_study(p, {}, good_N), InvalidArgument);
    CHECK_THROWS_AS(run_study(p, good_eps, {}), InvalidArgument);

    const double bad_eps[] = {0.5, 1.5};
    CHECK_THROWS_AS(run_study(p, bad_eps, good_N), InvalidArgument);
    const double zero_eps[] = {0.0};
    CHECK_THROWS_AS(run_study(p, zero_eps, good_N), InvalidArgument);

    const int not_doubling[] = {8, 24};
    CHECK_THROWS_AS(run_study(p, good_eps, not_doubling), InvalidArgument);
    const int too_small[] = {1, 2};
    CHECK_THROWS_AS(run_study(p, good_eps, too_small), InvalidArgument);

    Problem no_exact = p;
    no_exact.exact.reset();
    no_exact.forcing = parse_expression("1");
    CHECK_THROWS_AS(run_study(no_exact, good_eps, good_N), InvalidArgument);
}

TEST_CASE("study aggregates per-cell failures without aborting") {
    // exact = ln(eps - 0.001) evaluates fine at eps = 0.5 but fails at
    // eps = 0.0005, so exactly one eps row fails
    Problem p;
    p.eps = 0.5;
    p.coupling = 0.0;
    p.length = 1.0;
    p.convection = parse_expression("1");
    p.reaction = parse_expression("0");
    p.kernel = parse_expression("0");
    p.exact = parse_expression("x*ln(eps-0.001)");
    const double eps_list[] = {0.5, 0.0005};
    const int N_list[] = {8, 16};
    const ConvergenceReport report = run_study(p, eps_list, N_list);
    CHECK_FALSE(report.complete);
    CHECK(report.cell(0, 0).ok);
    CHECK_FALSE(report.cell(1, 0).ok);
    CHECK_FALSE(report.cell(1, 0).message.empty());
    CHECK_FALSE(report.uniform_errors[0].has_value());
}

TEST_CASE("study results are deterministic across runs") {
    const Problem p = testing::example1(1.0);
    const double eps_list[] = {1.0, 0.01};
    const int N_list[] = {16, 32};
    StudyOptions options;
    options.quad_points = 2048;
    const ConvergenceReport a = run_study(p, eps_list, N_list, options);
    const ConvergenceReport b = run_study(p, eps_list, N_list, options);
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        CHECK(a.cells[i].max_error == b.cells[i].max_error);
        CHECK(a.cells[i].residual_inf == b.cells[i].residual_inf);
    }
}

TEST_CASE("fitted and standard schemes agree in the regular regime") {
    const Solution fitted = solve_example1(1.0, 64, SchemeKind::fitted, 1 << 15);
    const Solution standard = solve_example1(1.0, 64, SchemeKind::standard, 1 << 15);
    double diff = 0.0;
    for (std::size_t i = 0; i < fitted.values.size(); ++i)
        diff = std::max(diff, std::fabs(fitted.values[i] - standard.values[i]));
    CHECK(diff <= 0.05);
}
