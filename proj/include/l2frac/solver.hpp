#pragma once

// Time stepping for the fractional diffusion problem. Layer 1 comes from
// an implicit L1 sub-integration over [0, tau]; every later layer solves
//
//   order2:   K c_0 y^{j+1} - Lambda y^{j+1} = phi + K [c_0 y^j - hist_j]
//   compact4: (K c_0 + d) H y^{j+1} - a y_xx^{j+1} = H (phi + K [c_0 y^j - hist_j])
//
// with K = tau^{-alpha} / Gamma(2 - alpha) and
// hist_j = sum_{s=0}^{j-1} c_{j-s} (y^{s+1} - y^s).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "l2frac/kernel.hpp"
#include "l2frac/problem.hpp"
#include "l2frac/tridiagonal.hpp"

namespace l2frac {

enum class SchemeKind { order2, compact4 };

inline const char* to_string(SchemeKind kind) {
    return kind == SchemeKind::order2 ? "order2" : "compact";
}

/// All computed layers y^0..y^M, row j holding y_0^j..y_N^j.
class SolutionHistory {
public:
    SolutionHistory(GridSpec grid, AlphaParam alpha)
        : grid_(grid), alpha_(alpha), data_((grid.M + 1) * (grid.N + 1), 0.0) {}

    const GridSpec& grid() const noexcept { return grid_; }
    const AlphaParam& alpha() const noexcept { return alpha_; }
    std::size_t num_layers() const noexcept { return grid_.M + 1; }

    std::span<double> layer(std::size_t j) {
        return {data_.data() + j * (grid_.N + 1), grid_.N + 1};
    }
    std::span<const double> layer(std::size_t j) const {
        return {data_.data() + j * (grid_.N + 1), grid_.N + 1};
    }

    double operator()(std::size_t j, std::size_t i) const { return data_[j * (grid_.N + 1) + i]; }

private:
    GridSpec grid_;
    AlphaParam alpha_;
    std::vector<double> data_;
};

namespace detail {

inline void check_layer_size(std::span<const double> y, const GridSpec& grid, const char* who) {
    if (y.size() != grid.N + 1) {
        throw std::invalid_argument(std::string(who) + ": expected " + std::to_string(grid.N + 1) +
                                    " grid values, got " + std::to_string(y.size()));
    }
}

}  // namespace detail

/// (Lambda y)_i = (a_{i+1} y_{i+1} - (a_{i+1} + a_i) y_i + a_i y_{i-1}) / h^2 - d_i y_i
/// with a_i = k(x_{i-1/2}, t), d_i = q(x_i, t); zero at the boundary nodes.
inline std::vector<double> apply_lambda_at(std::span<const double> y, double t,
                                           const DiffusionProblem& problem, const GridSpec& grid) {
    detail::check_layer_size(y, grid, "apply_lambda");
    const std::size_t N = grid.N;
    const double inv_h2 = 1.0 / (grid.h * grid.h);
    std::vector<double> out(N + 1, 0.0);
    double a_left = problem.k(grid.x(1) - 0.5 * grid.h, t);
    for (std::size_t i = 1; i < N; ++i) {
        const double a_right = problem.k(grid.x(i + 1) - 0.5 * grid.h, t);
        out[i] = (a_right * y[i + 1] - (a_right + a_left) * y[i] + a_left * y[i - 1]) * inv_h2 -
                 problem.q(grid.x(i), t) * y[i];
        a_left = a_right;
    }
    return out;
}

/// Lambda with coefficients taken at t_{j+1}.
inline std::vector<double> apply_lambda(std::span<const double> y, std::size_t j,
                                        const DiffusionProblem& problem, const GridSpec& grid) {
    return apply_lambda_at(y, grid.t(j + 1), problem, grid);
}

/// H v_i = v_i + (v_{i+1} - 2 v_i + v_{i-1}) / 12 in the interior; endpoints copied.
inline std::vector<double> apply_compact_H(std::span<const double> v, const GridSpec& grid) {
    detail::check_layer_size(v, grid, "apply_compact_H");
    std::vector<double> out(v.begin(), v.end());
    for (std::size_t i = 1; i < grid.N; ++i) {
        out[i] = v[i] + (v[i + 1] - 2.0 * v[i] + v[i - 1]) / 12.0;
    }
    return out;
}

/// Interior tridiagonal matrix of the implicit step at time t for the given
/// mass coefficient (K w_0). Row r corresponds to node i = r + 1.
inline TridiagonalSystem assemble_step_matrix(double mass, double t, const DiffusionProblem& problem,
                                              const GridSpec& grid, SchemeKind scheme) {
    const std::size_t n = grid.N - 1;
    const double inv_h2 = 1.0 / (grid.h * grid.h);
    TridiagonalSystem sys(n);
    if (scheme == SchemeKind::order2) {
        std::vector<double> a(grid.N + 1);
        for (std::size_t i = 1; i <= grid.N; ++i) {
            a[i] = problem.k(grid.x(i) - 0.5 * grid.h, t) * inv_h2;
        }
        for (std::size_t r = 0; r < n; ++r) {
            const std::size_t i = r + 1;
            sys.diag[r] = mass + a[i] + a[i + 1] + problem.q(grid.x(i), t);
            if (r > 0) {
                sys.lower[r - 1] = -a[i];
            }
            if (r + 1 < n) {
                sys.upper[r] = -a[i + 1];
            }
        }
    } else {
        const double a = problem.k(0.0, t) * inv_h2;
        const double m = mass + problem.q(0.0, t);
        const double off = m / 12.0 - a;
        const double mid = m * 10.0 / 12.0 + 2.0 * a;
        std::fill(sys.diag.begin(), sys.diag.end(), mid);
        std::fill(sys.lower.begin(), sys.lower.end(), off);
        std::fill(sys.upper.begin(), sys.upper.end(), off);
    }
    return sys;
}

namespace detail {

/// One implicit step of a convolution-type Caputo discretisation.
/// `layer(s)` returns the already computed layer s for s = 0..j where
/// j = weights.size() - 1; weights[m] multiplies the difference
/// y^{j-m+1} - y^{j-m}, scale is the prefactor K.
template <class LayerAccess>
std::vector<double> implicit_step(const LayerAccess& layer, std::span<const double> weights,
                                  double scale, double t_next, const DiffusionProblem& problem,
                                  const GridSpec& grid, SchemeKind scheme) {
    const std::size_t N = grid.N;
    const std::size_t j = weights.size() - 1;

    // r = phi + K [w_0 y^j - sum_{s<j} w_{j-s} (y^{s+1} - y^s)]
    std::vector<double> r(N + 1, 0.0);
    for (std::size_t s = 0; s < j; ++s) {
        const double w = weights[j - s];
        const std::span<const double> lo = layer(s);
        const std::span<const double> hi = layer(s + 1);
        for (std::size_t i = 1; i < N; ++i) {
            r[i] -= w * (hi[i] - lo[i]);
        }
    }
    const std::span<const double> last = layer(j);
    for (std::size_t i = 0; i <= N; ++i) {
        r[i] = problem.f(grid.x(i), t_next) + scale * (weights[0] * last[i] + r[i]);
    }
    // boundary values of y are zero, so only the source survives there
    r[0] = problem.f(grid.x(0), t_next);
    r[N] = problem.f(grid.x(N), t_next);

    if (scheme == SchemeKind::compact4) {
        r = apply_compact_H(r, grid);
    }

    TridiagonalSystem sys = assemble_step_matrix(scale * weights[0], t_next, problem, grid, scheme);
    for (std::size_t i = 1; i < N; ++i) {
        sys.rhs[i - 1] = r[i];
    }
    const std::vector<double> interior = thomas_solve(sys);

    std::vector<double> next(N + 1, 0.0);
    std::copy(interior.begin(), interior.end(), next.begin() + 1);
    return next;
}

inline void require_compact_compatible(const DiffusionProblem& problem) {
    if (!problem.time_only_coefficients) {
        throw std::invalid_argument(
            "compact scheme requires coefficients that depend on time only (k = k(t), q = q(t))");
    }
}

}  // namespace detail

/// Number of uniform L1 substeps used on [0, tau]: ceil(tau^{-1/(2-alpha)}).
inline std::size_t bootstrap_substeps(double tau, const AlphaParam& alpha) {
    const double target = std::pow(tau, -1.0 / (2.0 - alpha.value()));
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(target - 1e-9)));
}

/// y^1 from the implicit L1 scheme on bootstrap_substeps uniform substeps of
/// [0, tau], using the same spatial operator as the main scheme.
inline std::vector<double> bootstrap_first_layer(const DiffusionProblem& problem, const GridSpec& grid,
                                                 const AlphaParam& alpha, SchemeKind scheme) {
    if (scheme == SchemeKind::compact4) {
        detail::require_compact_compatible(problem);
    }
    const std::size_t substeps = bootstrap_substeps(grid.tau, alpha);
    const double sub_tau = grid.tau / static_cast<double>(substeps);
    const double scale = alpha.scale(sub_tau);

    std::vector<double> a(substeps);
    for (std::size_t l = 0; l < substeps; ++l) {
        a[l] = a_coeff(l, alpha);
    }

    std::vector<std::vector<double>> sub;
    sub.reserve(substeps + 1);
    std::vector<double> y0(grid.N + 1, 0.0);
    for (std::size_t i = 1; i < grid.N; ++i) {
        y0[i] = problem.u0(grid.x(i));
    }
    sub.push_back(std::move(y0));

    auto layer = [&sub](std::size_t s) { return std::span<const double>(sub[s]); };
    for (std::size_t k = 0; k < substeps; ++k) {
        const double t_next = static_cast<double>(k + 1) * sub_tau;
        sub.push_back(detail::implicit_step(layer, std::span<const double>(a.data(), k + 1), scale,
                                            t_next, problem, grid, scheme));
    }
    return std::move(sub.back());
}

/// y^{j+1} of the second-order scheme; layers 0..j of history must be filled.
inline std::vector<double> step_order2(const SolutionHistory& history, std::size_t j,
                                       const DiffusionProblem& problem, const GridSpec& grid) {
    if (j == 0) {
        throw std::invalid_argument("step_order2: L2 steps start at j = 1");
    }
    const L2Weights w = c_weights(j, history.alpha());
    auto layer = [&history](std::size_t s) { return history.layer(s); };
    return detail::implicit_step(layer, w.c, history.alpha().scale(grid.tau), grid.t(j + 1), problem,
                                 grid, SchemeKind::order2);
}

/// y^{j+1} of the compact scheme; requires time-only coefficients.
inline std::vector<double> step_compact(const SolutionHistory& history, std::size_t j,
                                        const DiffusionProblem& problem, const GridSpec& grid) {
    detail::require_compact_compatible(problem);
    if (j == 0) {
        throw std::invalid_argument("step_compact: L2 steps start at j = 1");
    }
    const L2Weights w = c_weights(j, history.alpha());
    auto layer = [&history](std::size_t s) { return history.layer(s); };
    return detail::implicit_step(layer, w.c, history.alpha().scale(grid.tau), grid.t(j + 1), problem,
                                 grid, SchemeKind::compact4);
}

inline SolutionHistory solve(const DiffusionProblem& problem, const GridSpec& grid,
                             const AlphaParam& alpha, SchemeKind scheme) {
    if (scheme == SchemeKind::compact4) {
        detail::require_compact_compatible(problem);
    }
    validate(problem, grid);

    SolutionHistory history(grid, alpha);
    auto y0 = history.layer(0);
    for (std::size_t i = 1; i < grid.N; ++i) {
        y0[i] = problem.u0(grid.x(i));
    }

    const std::vector<double> y1 = bootstrap_first_layer(problem, grid, alpha, scheme);
    std::copy(y1.begin(), y1.end(), history.layer(1).begin());

    for (std::size_t j = 1; j < grid.M; ++j) {
        const std::vector<double> next = scheme == SchemeKind::order2
                                             ? step_order2(history, j, problem, grid)
                                             : step_compact(history, j, problem, grid);
        std::copy(next.begin(), next.end(), history.layer(j + 1).begin());
    }
    return history;
}

}  // namespace l2frac
