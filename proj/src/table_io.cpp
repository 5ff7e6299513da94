#include "spfide/table_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace spfide {

std::string format_scientific(double v) {
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.3e", v);
    return buf.data();
}

std::string format_rate(double v) {
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.2f", v);
    return buf.data();
}

std::string format_full(double v) {
    std::array<char, 40> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), ptr);
}

void write_solution_csv(std::ostream& os, const Solution& sol, const Problem& p) {
    const bool with_exact = p.exact.has_value();
    os << (with_exact ? "x,u,exact,error\n" : "x,u\n");
    Bindings b;
    if (with_exact) b.set(Var::eps, p.eps);
    for (std::size_t i = 0; i < sol.values.size(); ++i) {
        os << format_full(sol.mesh.nodes[i]) << ',' << format_full(sol.values[i]);
        if (with_exact) {
            b.set(Var::x, sol.mesh.nodes[i]);
            const double exact_value = eval(*p.exact, b);
            os << ',' << format_full(exact_value) << ','
               << format_full(std::fabs(sol.values[i] - exact_value));
        }
        os << '\n';
    }
}

void write_report_csv(std::ostream& os, const ConvergenceReport& report) {
    os << "eps,N,max_error,rate\n";
    const std::size_t nn = report.N_values.size();
    for (std::size_t ei = 0; ei < report.eps_values.size(); ++ei) {
        for (std::size_t ni = 0; ni < nn; ++ni) {
            const CellOutcome& c = report.cell(ei, ni);
            os << format_full(report.eps_values[ei]) << ',' << report.N_values[ni] << ',';
            if (c.ok) os << format_full(c.max_error);
            os << ',';
            if (ni + 1 < nn) {
                if (auto r = report.rate_at(ei, ni)) os << format_full(*r);
            }
            os << '\n';
        }
    }
    for (std::size_t ni = 0; ni < nn; ++ni) {
        os << "uniform," << report.N_values[ni] << ',';
        if (report.uniform_errors[ni]) os << format_full(*report.uniform_errors[ni]);
        os << ',';
        if (ni + 1 < nn && report.uniform_rates[ni])
            os << format_full(*report.uniform_rates[ni]);
        os << '\n';
    }
}

namespace {

void write_table(std::ostream& os, const ConvergenceReport& report) {
    const std::size_t nn = report.N_values.size();
    os << "| eps |";
    for (int N : report.N_values) os << " N=" << N << " |";
    os << '\n';
    os << "| --- |";
    for (std::size_t ni = 0; ni < nn; ++ni) os << " --- |";
    os << '\n';
    for (std::size_t ei = 0; ei < report.eps_values.size(); ++ei) {
        os << "| " << format_scientific(report.eps_values[ei]) << " |";
        for (std::size_t ni = 0; ni < nn; ++ni) {
            const CellOutcome& c = report.cell(ei, ni);
            if (c.ok) os << ' ' << format_scientific(c.max_error) << " |";
            else os << " FAIL |";
        }
        os << '\n';
        if (nn > 1) {
            os << "|  |";
            for (std::size_t ni = 0; ni + 1 < nn; ++ni) {
                if (auto r = report.rate_at(ei, ni)) os << ' ' << format_rate(*r) << " |";
                else os << "  |";
            }
            os << "  |\n";
        }
    }
    os << "| E^N |";
    for (std::size_t ni = 0; ni < nn; ++ni) {
        if (report.uniform_errors[ni])
            os << ' ' << format_scientific(*report.uniform_errors[ni]) << " |";
        else os << " FAIL |";
    }
    os << '\n';
    if (nn > 1) {
        os << "| P^N |";
        for (std::size_t ni = 0; ni + 1 < nn; ++ni) {
            if (report.uniform_rates[ni])
                os << ' ' << format_rate(*report.uniform_rates[ni]) << " |";
            else os << "  |";
        }
        os << "  |\n";
    }
}

}  // namespace

void write_report_markdown(std::ostream& os, const ConvergenceReport& report) {
    os << "# Convergence study ("
       << (report.kind == SchemeKind::fitted ? "fitted" : "standard") << " scheme)\n\n";
    write_table(os, report);
}

void write_compare_markdown(std::ostream& os, const ConvergenceReport& fitted,
                            const ConvergenceReport& standard) {
    os << "# Scheme comparison\n\n## Fitted scheme\n\n";
    write_table(os, fitted);
    os << "\n## Standard scheme\n\n";
    write_table(os, standard);
    os << "\n## Error ratio (standard / fitted)\n\n";
    const std::size_t nn = fitted.N_values.size();
    os << "| eps |";
    for (int N : fitted.N_values) os << " N=" << N << " |";
    os << '\n';
    os << "| --- |";
    for (std::size_t ni = 0; ni < nn; ++ni) os << " --- |";
    os << '\n';
    for (std::size_t ei = 0; ei < fitted.eps_values.size(); ++ei) {
        os << "| " << format_scientific(fitted.eps_values[ei]) << " |";
        for (std::size_t ni = 0; ni < nn; ++ni) {
            const CellOutcome& f = fitted.cell(ei, ni);
            const CellOutcome& s = standard.cell(ei, ni);
            if (f.ok && s.ok && f.max_error > 0.0) {
                std::array<char, 40> buf{};
                std::snprintf(buf.data(), buf.size(), "%.3g", s.max_error / f.max_error);
                os << ' ' << buf.data() << " |";
            } else {
                os << " FAIL |";
            }
        }
        os << '\n';
    }
}

}  // namespace spfide
