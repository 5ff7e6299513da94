#include "spfide/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spfide {

SingularMatrix::SingularMatrix(int column_)
    : Error("singular matrix: no usable pivot in column " + std::to_string(column_)),
      column(column_) {}

namespace {

constexpr double kPivotFloor = 1e-300;

struct Factorization {
    int n = 0;
    std::vector<double> lu;    // multipliers below the diagonal, U on and above
    std::vector<int> pivots;   // row swapped with row k at step k
};

// Partial pivoting by largest absolute column entry, ties to the lowest
// row index. Pivots below 1e-300 count as singular so that the legitimate
// underflow of the fitted coefficient at tiny eps is not misdiagnosed.
Factorization factorize(const std::vector<double>& matrix, int n, bool parallel) {
    Factorization f;
    f.n = n;
    f.lu = matrix;
    f.pivots.resize(n);
    auto* ap = f.lu.data();

    for (int k = 0; k < n; ++k) {
        int pivot_row = k;
        double pivot_mag = std::fabs(ap[static_cast<std::size_t>(k) * n + k]);
        for (int i = k + 1; i < n; ++i) {
            const double mag = std::fabs(ap[static_cast<std::size_t>(i) * n + k]);
            if (mag > pivot_mag) {
                pivot_mag = mag;
                pivot_row = i;
            }
        }
        if (!(pivot_mag >= kPivotFloor)) throw SingularMatrix(k);
        f.pivots[k] = pivot_row;
        if (pivot_row != k)
            std::swap_ranges(ap + static_cast<std::size_t>(k) * n,
                             ap + static_cast<std::size_t>(k + 1) * n,
                             ap + static_cast<std::size_t>(pivot_row) * n);
        const double pivot = ap[static_cast<std::size_t>(k) * n + k];
        const double* pivot_row_data = ap + static_cast<std::size_t>(k) * n;

#pragma omp parallel for schedule(static) if (parallel && n - k > 64)
        for (int i = k + 1; i < n; ++i) {
            double* row = ap + static_cast<std::size_t>(i) * n;
            const double m = row[k] / pivot;
            row[k] = m;
            if (m != 0.0)
                for (int j = k + 1; j < n; ++j) row[j] -= m * pivot_row_data[j];
        }
    }
    return f;
}

std::vector<double> substitute(const Factorization& f, std::vector<double> b) {
    const int n = f.n;
    const auto* ap = f.lu.data();
    for (int k = 0; k < n; ++k) {
        if (f.pivots[k] != k) std::swap(b[k], b[f.pivots[k]]);
        const double bk = b[k];
        if (bk != 0.0)
            for (int i = k + 1; i < n; ++i)
                b[i] -= ap[static_cast<std::size_t>(i) * n + k] * bk;
    }
    for (int i = n - 1; i >= 0; --i) {
        const double* row = ap + static_cast<std::size_t>(i) * n;
        double acc = b[i];
        for (int j = i + 1; j < n; ++j) acc -= row[j] * b[j];
        b[i] = acc / row[i];
    }
    return b;
}

Solution solve_impl(const DiscreteSystem& sys, double left_value, double right_value,
                    bool parallel) {
    const int n = sys.unknowns;
    if (n < 1) throw InvalidArgument("system must have at least one unknown");
    if (static_cast<int>(sys.matrix.size()) != n * n ||
        static_cast<int>(sys.rhs.size()) != n)
        throw InvalidArgument("system storage does not match its unknown count");

    const Factorization f = factorize(sys.matrix, n, parallel);
    std::vector<double> x = substitute(f, sys.rhs);

    // One iterative-refinement step with an extended-precision residual;
    // the scheme error at fine meshes can sit near the bare solve's
    // rounding floor.
    std::vector<double> r(n);
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < n; ++i) {
        const double* row = sys.matrix.data() + static_cast<std::size_t>(i) * n;
        long double acc = -static_cast<long double>(sys.rhs[i]);
        for (int j = 0; j < n; ++j)
            acc += static_cast<long double>(row[j]) * x[j];
        r[i] = static_cast<double>(acc);
    }
    const std::vector<double> correction = substitute(f, std::move(r));
    for (int i = 0; i < n; ++i) x[i] -= correction[i];

    double residual = 0.0;
#pragma omp parallel for schedule(static) reduction(max : residual) if (parallel)
    for (int i = 0; i < n; ++i) {
        const double* row = sys.matrix.data() + static_cast<std::size_t>(i) * n;
        double acc = -sys.rhs[i];
        for (int j = 0; j < n; ++j) acc += row[j] * x[j];
        residual = std::max(residual, std::fabs(acc));
    }

    Solution sol;
    sol.mesh = sys.mesh;
    sol.kind = sys.kind;
    sol.residual_inf = residual;
    sol.values.assign(sys.mesh.intervals + 1, 0.0);
    sol.values.front() = left_value;
    sol.values.back() = right_value;
    std::copy(x.begin(), x.end(), sol.values.begin() + 1);
    return sol;
}

}  // namespace

Solution lu_solve(const DiscreteSystem& sys, double left_value, double right_value) {
    return solve_impl(sys, left_value, right_value, true);
}

Solution lu_solve_serial(const DiscreteSystem& sys, double left_value,
                         double right_value) {
    return solve_impl(sys, left_value, right_value, false);
}

double residual_limit(const DiscreteSystem& sys, const Solution& sol) {
    const int n = sys.unknowns;
    double matrix_norm = 0.0;
    for (int i = 0; i < n; ++i) {
        double row_sum = 0.0;
        const double* row = sys.matrix.data() + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) row_sum += std::fabs(row[j]);
        matrix_norm = std::max(matrix_norm, row_sum);
    }
    double values_norm = 0.0;
    for (double v : sol.values) values_norm = std::max(values_norm, std::fabs(v));
    return 1e3 * std::numeric_limits<double>::epsilon() * matrix_norm * values_norm * n;
}

}  // namespace spfide
