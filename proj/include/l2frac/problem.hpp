#pragma once

// Continuous problem data for
//   D^alpha_t u = (k u_x)_x - q u + f,  0 < x < l,  0 < t <= T,
//   u(0, t) = u(l, t) = 0,  u(x, 0) = u0(x),
// the uniform space-time grid, and the manufactured test cases.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "l2frac/kernel.hpp"

namespace l2frac {

using Field = std::function<double(double x, double t)>;
using Profile = std::function<double(double x)>;

struct DiffusionProblem {
    Field k;
    Field q;
    Field f;
    Profile u0;
    double length = 1.0;
    double horizon = 1.0;
    double c1_lower = 1.0;  // declared lower bound of k
    bool time_only_coefficients = false;
};

struct GridSpec {
    std::size_t N = 0;  // spatial subintervals
    std::size_t M = 0;  // time steps
    double h = 0.0;
    double tau = 0.0;
    double length = 0.0;
    double horizon = 0.0;

    double x(std::size_t i) const { return static_cast<double>(i) * h; }
    double t(std::size_t j) const { return static_cast<double>(j) * tau; }
};

inline GridSpec build_grid(std::size_t N, std::size_t M, double length, double horizon) {
    if (N < 2) {
        throw std::invalid_argument("build_grid: need N >= 2 spatial subintervals, got " +
                                    std::to_string(N));
    }
    if (M < 1) {
        throw std::invalid_argument("build_grid: need M >= 1 time steps");
    }
    if (!(length > 0.0) || !(horizon > 0.0)) {
        throw std::invalid_argument("build_grid: domain length and horizon must be positive");
    }
    return GridSpec{N, M, length / static_cast<double>(N), horizon / static_cast<double>(M),
                    length, horizon};
}

/// Checks the sampled coefficient bounds and boundary compatibility of u0.
inline void validate(const DiffusionProblem& problem, const GridSpec& grid) {
    const double u0_scale = 1e-12;
    if (std::abs(problem.u0(0.0)) > u0_scale || std::abs(problem.u0(grid.length)) > u0_scale) {
        throw std::invalid_argument("initial profile must vanish at both ends of the domain");
    }
    for (std::size_t j = 0; j <= grid.M; ++j) {
        const double t = grid.t(j);
        for (std::size_t i = 1; i <= grid.N; ++i) {
            const double kv = problem.k(grid.x(i) - 0.5 * grid.h, t);
            if (kv < problem.c1_lower) {
                throw std::invalid_argument("coefficient k falls below its declared lower bound at x=" +
                                            std::to_string(grid.x(i) - 0.5 * grid.h) +
                                            ", t=" + std::to_string(t));
            }
        }
        for (std::size_t i = 0; i <= grid.N; ++i) {
            if (problem.q(grid.x(i), t) < 0.0) {
                throw std::invalid_argument("coefficient q is negative at x=" +
                                            std::to_string(grid.x(i)) + ", t=" + std::to_string(t));
            }
        }
    }
}

/// Coefficient field backed by a table sampled at x = (i + x_shift) h,
/// t = j tau, row-major in j with N + 1 entries per row. Lookups snap to the
/// nearest sample, so the field is meant to be evaluated at those nodes
/// (x_shift = -0.5 gives the half-integer nodes where k is sampled).
inline Field tabulated_field(const GridSpec& grid, std::vector<double> samples, double x_shift) {
    if (samples.size() != (grid.M + 1) * (grid.N + 1)) {
        throw std::invalid_argument("tabulated_field: expected (M+1)*(N+1) samples");
    }
    return [grid, x_shift, table = std::move(samples)](double x, double t) {
        const auto clamp = [](double v, std::size_t hi) {
            const double r = std::round(v);
            if (r <= 0.0) {
                return std::size_t{0};
            }
            return std::min(static_cast<std::size_t>(r), hi);
        };
        const std::size_t i = clamp(x / grid.h - x_shift, grid.N);
        const std::size_t j = clamp(t / grid.tau, grid.M);
        return table[j * (grid.N + 1) + i];
    };
}

enum class CaseVariant { variable_xt, time_only };

struct ManufacturedCase {
    Field u_exact;
    Field caputo_u;
    DiffusionProblem problem;
};

/// u = sin(pi x) (t^{3+alpha} + t^2 + 1) on [0,1] x [0,1] with either
/// k = 2 - cos(x t), q = 1 - sin(x t)  or  k = 2 - cos t, q = 1 - sin t.
inline ManufacturedCase benchmark_case(const AlphaParam& alpha, CaseVariant variant) {
    constexpr double pi = std::numbers::pi;
    const double a = alpha.value();

    auto time_part = [a](double t) { return std::pow(t, 3.0 + a) + t * t + 1.0; };
    auto time_caputo = [alpha, a](double t) {
        return exact_caputo_power(3.0 + a, alpha, t) + exact_caputo_power(2.0, alpha, t);
    };

    Field u = [time_part](double x, double t) { return std::sin(pi * x) * time_part(t); };
    Field cu = [time_caputo](double x, double t) { return std::sin(pi * x) * time_caputo(t); };

    Field k;
    Field k_x;
    Field q;
    if (variant == CaseVariant::variable_xt) {
        k = [](double x, double t) { return 2.0 - std::cos(x * t); };
        k_x = [](double x, double t) { return t * std::sin(x * t); };
        q = [](double x, double t) { return 1.0 - std::sin(x * t); };
    } else {
        k = [](double, double t) { return 2.0 - std::cos(t); };
        k_x = [](double, double) { return 0.0; };
        q = [](double, double t) { return 1.0 - std::sin(t); };
    }

    Field f = [=](double x, double t) {
        const double g = time_part(t);
        const double ux = pi * std::cos(pi * x) * g;
        const double uxx = -pi * pi * std::sin(pi * x) * g;
        const double spatial = k_x(x, t) * ux + k(x, t) * uxx - q(x, t) * std::sin(pi * x) * g;
        return cu(x, t) - spatial;
    };

    DiffusionProblem problem{
        .k = k,
        .q = q,
        .f = f,
        .u0 = [u](double x) { return u(x, 0.0); },
        .length = 1.0,
        .horizon = 1.0,
        .c1_lower = 1.0,
        .time_only_coefficients = variant == CaseVariant::time_only,
    };
    return ManufacturedCase{u, cu, std::move(problem)};
}

}  // namespace l2frac
