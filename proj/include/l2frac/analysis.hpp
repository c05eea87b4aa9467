#pragma once

// Grid norms, error measurement against a manufactured solution,
// convergence orders and the refinement-study driver used to reproduce the
// published convergence tables.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <exception>
#include <istream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "l2frac/kernel.hpp"
#include "l2frac/problem.hpp"
#include "l2frac/solver.hpp"

namespace l2frac {

/// ||z||_0 = sqrt(sum_{i=1}^{N-1} z_i^2 h)
inline double norm_L2(std::span<const double> z, double h) {
    double acc = 0.0;
    for (std::size_t i = 1; i + 1 < z.size(); ++i) {
        acc += z[i] * z[i];
    }
    return std::sqrt(acc * h);
}

/// ||z_xbar]|_0 = sqrt(sum_{i=1}^{N} ((z_i - z_{i-1}) / h)^2 h)
inline double norm_grad(std::span<const double> z, double h) {
    double acc = 0.0;
    for (std::size_t i = 1; i < z.size(); ++i) {
        const double d = (z[i] - z[i - 1]) / h;
        acc += d * d;
    }
    return std::sqrt(acc * h);
}

struct ErrorReport {
    double err_L2 = 0.0;    // max_j ||z^j||_0
    double err_C = 0.0;     // max over all grid points of |z|
    double err_grad = 0.0;  // max_j ||z_xbar^j]|_0
    GridSpec grid;
    double alpha = 0.0;
};

/// Errors z = y - u over all layers j = 0..M, including the bootstrap layer.
inline ErrorReport measure_errors(const SolutionHistory& history, const Field& u_exact) {
    const GridSpec& grid = history.grid();
    ErrorReport report;
    report.grid = grid;
    report.alpha = history.alpha().value();
    std::vector<double> z(grid.N + 1);
    for (std::size_t j = 0; j <= grid.M; ++j) {
        const auto y = history.layer(j);
        const double t = grid.t(j);
        for (std::size_t i = 0; i <= grid.N; ++i) {
            z[i] = y[i] - u_exact(grid.x(i), t);
            report.err_C = std::max(report.err_C, std::abs(z[i]));
        }
        report.err_L2 = std::max(report.err_L2, norm_L2(z, grid.h));
        report.err_grad = std::max(report.err_grad, norm_grad(z, grid.h));
    }
    return report;
}

/// CO = ln(e1 / e2) / ln(s1 / s2) for step sizes s1 > s2.
inline double convergence_order(double e1, double e2, double s1, double s2) {
    if (!(e1 > 0.0) || !(e2 > 0.0)) {
        throw std::invalid_argument("convergence_order: errors must be positive");
    }
    if (!(s2 > 0.0) || !(s1 > s2)) {
        throw std::invalid_argument("convergence_order: need step sizes s1 > s2 > 0");
    }
    return std::log(e1 / e2) / std::log(s1 / s2);
}

struct ConvergenceRow {
    double tau = 0.0;
    double h = 0.0;
    double err_L2 = 0.0;
    std::optional<double> co_L2;
    double err_C = 0.0;
    std::optional<double> co_C;
    double err_grad = 0.0;
    std::optional<double> co_grad;
};

struct ConvergenceTable {
    double alpha = 0.0;
    std::vector<ConvergenceRow> rows;
};

/// Orders between consecutive rows, measured against the time step. With
/// coupled ladders (tau^{3-alpha} tied to a power of h) this is the
/// temporal order; the published tables use the same convention.
inline void fill_orders(ConvergenceTable& table) {
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        ConvergenceRow& row = table.rows[r];
        if (r == 0) {
            row.co_L2.reset();
            row.co_C.reset();
            row.co_grad.reset();
            continue;
        }
        const ConvergenceRow& prev = table.rows[r - 1];
        row.co_L2 = convergence_order(prev.err_L2, row.err_L2, prev.tau, row.tau);
        row.co_C = convergence_order(prev.err_C, row.err_C, prev.tau, row.tau);
        row.co_grad = convergence_order(prev.err_grad, row.err_grad, prev.tau, row.tau);
    }
}

struct Rung {
    std::size_t M = 0;
    std::size_t N = 0;
};

struct ExperimentSpec {
    SchemeKind scheme = SchemeKind::order2;
    double alpha = 0.5;
    CaseVariant variant = CaseVariant::variable_xt;
    std::vector<Rung> rungs;
};

enum class BenchmarkTable { table1 = 1, table2 = 2, table3 = 3, table4 = 4 };

inline SchemeKind table_scheme(BenchmarkTable table) {
    return (table == BenchmarkTable::table1 || table == BenchmarkTable::table2) ? SchemeKind::order2
                                                                        : SchemeKind::compact4;
}

inline std::vector<double> table_alphas(BenchmarkTable table) {
    if (table == BenchmarkTable::table1 || table == BenchmarkTable::table3) {
        return {0.1, 0.5, 0.9};
    }
    return {0.3, 0.5, 0.7};
}

/// Fixed spatial resolution of the temporal ladders. At N = 5000 the O(h^2)
/// spatial error (~7e-8) already bends the alpha = 0.3 orders of the
/// order-2 ladder, so the published N = 50000 is kept.
inline constexpr std::size_t kTable2N = 50000;
inline constexpr std::size_t kTable4N = 1000;

/// The (M, N) pairs listed in the published tables, if alpha is one of them.
inline std::optional<std::vector<Rung>> published_ladder(BenchmarkTable table, double alpha) {
    auto is = [alpha](double v) { return std::abs(alpha - v) < 1e-12; };
    switch (table) {
    case BenchmarkTable::table1:
        if (is(0.1)) return std::vector<Rung>{{10, 29}, {20, 78}, {40, 211}, {80, 575}, {160, 1571}};
        if (is(0.5)) return std::vector<Rung>{{10, 18}, {20, 43}, {40, 101}, {80, 240}, {160, 570}};
        if (is(0.9)) return std::vector<Rung>{{10, 12}, {20, 24}, {40, 49}, {80, 100}, {160, 207}};
        return std::nullopt;
    case BenchmarkTable::table2:
        if (is(0.3) || is(0.5) || is(0.7)) {
            return std::vector<Rung>{{10, kTable2N}, {20, kTable2N}, {40, kTable2N}, {80, kTable2N}};
        }
        return std::nullopt;
    case BenchmarkTable::table3:
        if (is(0.1)) return std::vector<Rung>{{40, 29}, {80, 47}, {160, 79}, {320, 131}, {640, 217}};
        if (is(0.5)) return std::vector<Rung>{{40, 21}, {80, 31}, {160, 47}, {320, 73}, {640, 113}};
        if (is(0.9)) return std::vector<Rung>{{40, 13}, {80, 19}, {160, 29}, {320, 41}, {640, 59}};
        return std::nullopt;
    case BenchmarkTable::table4:
        if (is(0.3) || is(0.5) || is(0.7)) {
            return std::vector<Rung>{{10, kTable4N}, {20, kTable4N}, {40, kTable4N}, {80, kTable4N},
                                     {160, kTable4N}};
        }
        return std::nullopt;
    }
    return std::nullopt;
}

/// Spatial resolution for a coupled ladder: h^2 = tau^{3-alpha} (order2)
/// gives N = ceil(l tau^{-(3-alpha)/2}); (2h)^4 = tau^{3-alpha} (compact)
/// gives N = round(2 l tau^{-(3-alpha)/4}).
inline std::size_t coupled_N(BenchmarkTable table, double alpha, std::size_t M, double length = 1.0) {
    const double tau = 1.0 / static_cast<double>(M);
    double n = 0.0;
    if (table == BenchmarkTable::table1) {
        n = std::ceil(length * std::pow(tau, -(3.0 - alpha) / 2.0) - 1e-9);
    } else if (table == BenchmarkTable::table3) {
        n = std::round(2.0 * length * std::pow(tau, -(3.0 - alpha) / 4.0));
    } else {
        return table == BenchmarkTable::table2 ? kTable2N : kTable4N;
    }
    return std::max<std::size_t>(2, static_cast<std::size_t>(n));
}

/// Ladder for a table: the published pairs when available, otherwise the
/// coupling rule on the published time steps. depth truncates the ladder or
/// extends it by further halvings of tau.
inline std::vector<Rung> table_ladder(BenchmarkTable table, double alpha,
                                      std::optional<std::size_t> depth = std::nullopt) {
    std::vector<Rung> rungs;
    if (auto listed = published_ladder(table, alpha)) {
        rungs = *listed;
    } else {
        const std::size_t first_M = (table == BenchmarkTable::table3) ? 40 : 10;
        const std::size_t count = (table == BenchmarkTable::table2) ? 4 : 5;
        for (std::size_t r = 0; r < count; ++r) {
            const std::size_t M = first_M << r;
            rungs.push_back({M, coupled_N(table, alpha, M)});
        }
    }
    if (depth) {
        if (*depth == 0) {
            throw std::invalid_argument("ladder depth must be >= 1");
        }
        while (rungs.size() < *depth) {
            const std::size_t M = rungs.back().M * 2;
            rungs.push_back({M, coupled_N(table, alpha, M)});
        }
        rungs.resize(*depth);
    }
    return rungs;
}

inline ExperimentSpec table_experiment(BenchmarkTable table, double alpha,
                                       std::optional<std::size_t> depth = std::nullopt) {
    const SchemeKind scheme = table_scheme(table);
    return ExperimentSpec{scheme, alpha,
                          scheme == SchemeKind::compact4 ? CaseVariant::time_only
                                                         : CaseVariant::variable_xt,
                          table_ladder(table, alpha, depth)};
}

/// Solves the manufactured problem on one (M, N) pair and measures errors.
inline ErrorReport run_single(SchemeKind scheme, double alpha_value, CaseVariant variant,
                              std::size_t N, std::size_t M) {
    const AlphaParam alpha(alpha_value);
    const ManufacturedCase mc = benchmark_case(alpha, variant);
    const GridSpec grid = build_grid(N, M, mc.problem.length, mc.problem.horizon);
    const SolutionHistory history = solve(mc.problem, grid, alpha, scheme);
    return measure_errors(history, mc.u_exact);
}

/// Runs every rung (up to `jobs` concurrently) and assembles the table in
/// rung order.
inline ConvergenceTable run_experiment(const ExperimentSpec& spec, std::size_t jobs = 1) {
    const std::size_t count = spec.rungs.size();
    std::vector<ErrorReport> reports(count);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t r = next++; r < count; r = next++) {
            try {
                reports[r] = run_single(spec.scheme, spec.alpha, spec.variant, spec.rungs[r].N,
                                        spec.rungs[r].M);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(count, 1));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    ConvergenceTable table;
    table.alpha = spec.alpha;
    for (const ErrorReport& rep : reports) {
        table.rows.push_back(ConvergenceRow{rep.grid.tau, rep.grid.h, rep.err_L2, std::nullopt,
                                            rep.err_C, std::nullopt, rep.err_grad, std::nullopt});
    }
    fill_orders(table);
    return table;
}

// ---------------------------------------------------------------------------
// Output

/// Scientific notation with six decimals and a compact exponent: 4.556026e-3.
inline std::string format_sci(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6e", value);
    std::string s(buf);
    const auto e = s.find('e');
    if (e == std::string::npos) {
        return s;
    }
    std::string mantissa = s.substr(0, e);
    std::string exponent = s.substr(e + 1);
    std::string sign;
    if (!exponent.empty() && (exponent[0] == '+' || exponent[0] == '-')) {
        if (exponent[0] == '-') {
            sign = "-";
        }
        exponent.erase(0, 1);
    }
    exponent.erase(0, std::min(exponent.find_first_not_of('0'), exponent.size() - 1));
    return mantissa + "e" + sign + exponent;
}

inline std::string format_order(const std::optional<double>& co) {
    if (!co) {
        return "";
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", *co);
    return buf;
}

/// "1/N" when value is the reciprocal of an integer, scientific otherwise.
inline std::string format_step(double value) {
    const double inv = 1.0 / value;
    const double r = std::round(inv);
    if (r >= 1.0 && std::abs(inv - r) < 1e-9 * r) {
        return "1/" + std::to_string(static_cast<long long>(r));
    }
    return format_sci(value);
}

inline const char* kCsvHeader = "alpha,tau,h,err_L2,co_L2,err_C,co_C,err_grad,co_grad";

inline void write_csv(std::ostream& out, const std::vector<ConvergenceTable>& tables) {
    out << kCsvHeader << '\n';
    for (const ConvergenceTable& table : tables) {
        for (const ConvergenceRow& row : table.rows) {
            char alpha_buf[32];
            std::snprintf(alpha_buf, sizeof(alpha_buf), "%g", table.alpha);
            out << alpha_buf << ',' << format_sci(row.tau) << ',' << format_sci(row.h) << ','
                << format_sci(row.err_L2) << ',' << format_order(row.co_L2) << ','
                << format_sci(row.err_C) << ',' << format_order(row.co_C) << ','
                << format_sci(row.err_grad) << ',' << format_order(row.co_grad) << '\n';
        }
    }
}

inline void write_markdown(std::ostream& out, const std::vector<ConvergenceTable>& tables) {
    out << "| alpha | tau | h | max ||z||_0 | CO | max |z|_C | CO | max ||z_x||_0 | CO |\n";
    out << "|---|---|---|---|---|---|---|---|---|\n";
    for (const ConvergenceTable& table : tables) {
        bool first = true;
        for (const ConvergenceRow& row : table.rows) {
            char alpha_buf[32];
            std::snprintf(alpha_buf, sizeof(alpha_buf), "%g", table.alpha);
            out << "| " << (first ? alpha_buf : "") << " | " << format_step(row.tau) << " | "
                << format_step(row.h) << " | " << format_sci(row.err_L2) << " | "
                << format_order(row.co_L2) << " | " << format_sci(row.err_C) << " | "
                << format_order(row.co_C) << " | " << format_sci(row.err_grad) << " | "
                << format_order(row.co_grad) << " |\n";
            first = false;
        }
    }
}

/// Reads back a table written by write_csv.
inline std::vector<ConvergenceTable> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw std::invalid_argument("read_csv: missing or unexpected header");
    }
    std::vector<ConvergenceTable> tables;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        if (!line.empty() && line.back() == ',') {
            cells.emplace_back();
        }
        if (cells.size() != 9) {
            throw std::invalid_argument("read_csv: expected 9 columns in line: " + line);
        }
        auto opt = [](const std::string& s) -> std::optional<double> {
            if (s.empty()) {
                return std::nullopt;
            }
            return std::stod(s);
        };
        const double alpha = std::stod(cells[0]);
        if (tables.empty() || tables.back().alpha != alpha) {
            tables.push_back(ConvergenceTable{alpha, {}});
        }
        tables.back().rows.push_back(ConvergenceRow{std::stod(cells[1]), std::stod(cells[2]),
                                                    std::stod(cells[3]), opt(cells[4]),
                                                    std::stod(cells[5]), opt(cells[6]),
                                                    std::stod(cells[7]), opt(cells[8])});
    }
    return tables;
}

}  // namespace l2frac
