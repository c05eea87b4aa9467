#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace l2frac {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A x = rhs with A given by its three diagonals:
/// lower[i] = A(i+1, i), diag[i] = A(i, i), upper[i] = A(i, i+1).
struct TridiagonalSystem {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;
    std::vector<double> rhs;

    explicit TridiagonalSystem(std::size_t n = 0)
        : lower(n > 0 ? n - 1 : 0), diag(n), upper(n > 0 ? n - 1 : 0), rhs(n) {}

    std::size_t size() const noexcept { return diag.size(); }
};

/// Row-wise diagonal dominance |d_i| >= |l_{i-1}| + |u_i|, strict in at least one row.
inline bool is_diagonally_dominant(const TridiagonalSystem& sys) {
    const std::size_t n = sys.size();
    bool strict = false;
    for (std::size_t i = 0; i < n; ++i) {
        double off = 0.0;
        if (i > 0) {
            off += std::abs(sys.lower[i - 1]);
        }
        if (i + 1 < n) {
            off += std::abs(sys.upper[i]);
        }
        const double d = std::abs(sys.diag[i]);
        if (d < off) {
            return false;
        }
        strict = strict || d > off;
    }
    return strict;
}

/// Thomas algorithm. Throws SolverError when a pivot vanishes.
inline std::vector<double> thomas_solve(const TridiagonalSystem& sys) {
    const std::size_t n = sys.size();
    if (sys.rhs.size() != n || (n > 0 && (sys.lower.size() != n - 1 || sys.upper.size() != n - 1))) {
        throw std::invalid_argument("thomas_solve: inconsistent diagonal sizes");
    }
    if (n == 0) {
        return {};
    }
    std::vector<double> c_star(n);
    std::vector<double> x(n);

    auto check_pivot = [&](double pivot, std::size_t row, double scale) {
        if (!(std::abs(pivot) > 1e-300) || std::abs(pivot) <= 1e-14 * scale) {
            throw SolverError("thomas_solve: zero pivot at row " + std::to_string(row));
        }
    };

    double pivot = sys.diag[0];
    check_pivot(pivot, 0, std::abs(sys.diag[0]) + (n > 1 ? std::abs(sys.upper[0]) : 0.0));
    c_star[0] = n > 1 ? sys.upper[0] / pivot : 0.0;
    x[0] = sys.rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = sys.diag[i] - sys.lower[i - 1] * c_star[i - 1];
        const double scale = std::abs(sys.diag[i]) + std::abs(sys.lower[i - 1]) +
                             (i + 1 < n ? std::abs(sys.upper[i]) : 0.0);
        check_pivot(pivot, i, scale);
        c_star[i] = i + 1 < n ? sys.upper[i] / pivot : 0.0;
        x[i] = (sys.rhs[i] - sys.lower[i - 1] * x[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] -= c_star[i] * x[i + 1];
    }
    return x;
}

}  // namespace l2frac
