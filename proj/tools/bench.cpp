// Times the OpenMP kernels against their serial reference implementations
// (assembly, LU solve, manufactured-forcing assembly) and checks that the
// two paths produce identical bits.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "spfide/analysis.hpp"

using namespace spfide;

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double time_ms(F&& body, int repeats) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = Clock::now();
        body();
        const auto t1 = Clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

Problem example_problem(bool manufactured) {
    Problem p;
    p.eps = 0.015625;
    p.coupling = 1.0;
    p.length = 1.0;
    p.convection = parse_expression("1");
    p.reaction = parse_expression("0");
    p.kernel = parse_expression("x");
    p.exact = parse_expression("exp(-x/eps)");
    if (!manufactured) p.forcing = parse_expression("eps*x*(1-exp(-1/eps))");
    Bindings b;
    b.set(Var::eps, p.eps).set(Var::x, 0.0);
    p.left_value = eval(*p.exact, b);
    b.set(Var::x, p.length);
    p.right_value = eval(*p.exact, b);
    return p;
}

bool identical(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

int main(int argc, char** argv) {
    bool quick = false;
    for (int i = 1; i < argc; ++i)
        if (std::string(argv[i]) == "--quick") quick = true;

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif

    const int repeats = quick ? 1 : 3;
    const std::vector<int> sizes = quick ? std::vector<int>{64, 128}
                                         : std::vector<int>{256, 512, 1024};
    const Problem p = example_problem(false);
    const Problem mp = example_problem(true);

    bool all_identical = true;
    std::printf("%-28s %6s %12s %12s %9s\n", "kernel", "N", "serial ms", "openmp ms",
                "speedup");
    for (int N : sizes) {
        const Mesh mesh = make_mesh(N, p.length);

        DiscreteSystem sys_serial, sys_parallel;
        const double t_as = time_ms(
            [&] { sys_serial = assemble_serial(p, mesh, SchemeKind::fitted); }, repeats);
        const double t_ap =
            time_ms([&] { sys_parallel = assemble(p, mesh, SchemeKind::fitted); }, repeats);
        const bool asm_same = identical(sys_serial.matrix, sys_parallel.matrix) &&
                              identical(sys_serial.rhs, sys_parallel.rhs);
        all_identical = all_identical && asm_same;
        std::printf("%-28s %6d %12.3f %12.3f %8.2fx\n", "assemble (explicit f)", N, t_as,
                    t_ap, t_as / t_ap);

        Solution sol_serial, sol_parallel;
        const double t_ls = time_ms(
            [&] { sol_serial = lu_solve_serial(sys_serial, p.left_value, p.right_value); },
            repeats);
        const double t_lp = time_ms(
            [&] { sol_parallel = lu_solve(sys_serial, p.left_value, p.right_value); },
            repeats);
        const bool lu_same = identical(sol_serial.values, sol_parallel.values) &&
                             sol_serial.residual_inf == sol_parallel.residual_inf;
        all_identical = all_identical && lu_same;
        std::printf("%-28s %6d %12.3f %12.3f %8.2fx\n", "lu_solve", N, t_ls, t_lp,
                    t_ls / t_lp);
    }

    {
        const int N = quick ? 64 : 256;
        const int qp = quick ? 1024 : default_quad_points;
        const Mesh mesh = make_mesh(N, mp.length);
        DiscreteSystem ms, mpar;
        const double t_s = time_ms(
            [&] { ms = assemble_serial(mp, mesh, SchemeKind::fitted, qp); }, repeats);
        const double t_p =
            time_ms([&] { mpar = assemble(mp, mesh, SchemeKind::fitted, qp); }, repeats);
        const bool same = identical(ms.matrix, mpar.matrix) && identical(ms.rhs, mpar.rhs);
        all_identical = all_identical && same;
        std::printf("%-28s %6d %12.3f %12.3f %8.2fx\n", "assemble (manufactured f)", N,
                    t_s, t_p, t_s / t_p);
    }

    std::printf("serial/openmp outputs identical: %s\n", all_identical ? "yes" : "NO");
    return all_identical ? 0 : 1;
}
