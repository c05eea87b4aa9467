#pragma once

// Numerical checks of the coefficient lemmas, the exactness and truncation
// behaviour of the discrete Caputo operators, the energy inequalities and
// the norm equivalence of the compact averaging operator. Each check
// returns a PropertyResult; the CLI `--properties` mode prints them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "l2frac/analysis.hpp"
#include "l2frac/kernel.hpp"
#include "l2frac/solver.hpp"

namespace l2frac {

struct PropertyResult {
    explicit PropertyResult(std::string label) : name(std::move(label)) {}

    std::string name;
    bool passed = true;
    std::size_t checked = 0;
    std::size_t violations = 0;
    std::string detail;

    void record(bool ok) {
        ++checked;
        if (!ok) {
            ++violations;
            passed = false;
        }
    }
};

/// alpha in {0.05, 0.10, ..., 0.95}
inline std::vector<double> alpha_sweep() {
    std::vector<double> out;
    for (int k = 1; k <= 19; ++k) {
        out.push_back(0.05 * k);
    }
    return out;
}

/// Bounds on a_s, a_s - a_{s+1} and b_s for 1 <= s <= s_max.
inline PropertyResult check_ab_bounds(std::size_t s_max = 10'000) {
    PropertyResult res{"a/b coefficient bounds"};
    for (double av : alpha_sweep()) {
        const AlphaParam alpha(av);
        const double a = av;
        double a_next = a_coeff(1, alpha);
        for (std::size_t s = 1; s <= s_max; ++s) {
            const double sd = static_cast<double>(s);
            const double a_s = a_next;
            a_next = a_coeff(s + 1, alpha);
            const double b_s = b_coeff(s, alpha);
            res.record((1 - a) / std::pow(sd + 1, a) < a_s && a_s < (1 - a) / std::pow(sd, a));
            const double diff = a_s - a_next;
            res.record(a * (1 - a) / std::pow(sd + 2, a + 1) < diff &&
                       diff < a * (1 - a) / std::pow(sd, a + 1));
            res.record(a * (1 - a) / (12 * std::pow(sd + 1, a + 1)) < b_s &&
                       b_s < a * (1 - a) / (12 * std::pow(sd, a + 1)));
        }
    }
    res.detail = "alpha in {0.05..0.95}, 1 <= s <= " + std::to_string(s_max);
    return res;
}

/// Bounds on c_j, the monotone chain c_0 > c_2 > ... > c_j and
/// c_0 + 3 c_1 - 4 c_2 > 0 for 2 <= j <= j_max.
inline PropertyResult check_c_bounds(std::size_t j_max = 1'000) {
    PropertyResult res{"c coefficient bounds"};
    for (double av : alpha_sweep()) {
        const AlphaParam alpha(av);
        const double a = av;
        for (std::size_t j = 2; j <= j_max; ++j) {
            const L2Weights w = c_weights(j, alpha);
            const double jd = static_cast<double>(j);
            res.record(11.0 / 16.0 * (1 - a) / std::pow(jd + 1, a) < w[j] &&
                       w[j] < (1 - a) / std::pow(jd, a));
            bool chain = w[0] > w[2];
            for (std::size_t s = 2; s < j; ++s) {
                chain = chain && w[s] > w[s + 1];
            }
            res.record(chain);
            res.record(w[0] + 3 * w[1] - 4 * w[2] > 0);
        }
        const L2Weights w1 = c_weights(1, alpha);
        res.record(w1[0] + 3 * w1[1] > 0);
    }
    res.detail = "alpha in {0.05..0.95}, 2 <= j <= " + std::to_string(j_max);
    return res;
}

/// Bar weights satisfy the hypotheses of the weighted energy inequality:
/// positive and non-increasing in s.
inline PropertyResult check_bar_weight_hypotheses(std::size_t j_max = 1'000) {
    PropertyResult res{"bar weights positive and non-increasing"};
    for (double av : alpha_sweep()) {
        const AlphaParam alpha(av);
        for (std::size_t j = 2; j <= j_max; ++j) {
            const std::vector<double> bar = bar_weights(j, alpha);
            bool ok = bar[j] > 0.0;
            for (std::size_t s = 0; s < j; ++s) {
                ok = ok && bar[s] >= bar[s + 1];
            }
            res.record(ok);
        }
    }
    res.detail = "alpha in {0.05..0.95}, 2 <= j <= " + std::to_string(j_max);
    return res;
}

/// L2 is exact on t^2 and L1 is exact on t, to relative 1e-12.
inline PropertyResult check_exactness(double tol = 1e-12) {
    PropertyResult res{"exactness on t^2 (L2) and t (L1)"};
    double worst = 0.0;
    for (double av : {0.1, 0.5, 0.9}) {
        const AlphaParam alpha(av);
        for (std::size_t M : {10u, 100u}) {
            const double tau = 1.0 / static_cast<double>(M);
            const TimeSeries quad = TimeSeries::sample([](double t) { return t * t; }, tau, M);
            for (std::size_t j = 1; j + 1 <= M; ++j) {
                const double exact = exact_caputo_power(2.0, alpha, static_cast<double>(j + 1) * tau);
                const double rel = std::abs(l2_caputo(quad, j, alpha) - exact) / exact;
                worst = std::max(worst, rel);
                res.record(rel <= tol);
            }
            for (std::size_t j = 0; j + 1 <= M; ++j) {
                NonuniformSeries lin;
                for (std::size_t s = 0; s <= j + 1; ++s) {
                    lin.times.push_back(static_cast<double>(s) * tau);
                    lin.values.push_back(static_cast<double>(s) * tau);
                }
                const double exact = exact_caputo_power(1.0, alpha, lin.times.back());
                const double rel = std::abs(l1_caputo(lin, alpha) - exact) / exact;
                worst = std::max(worst, rel);
                res.record(rel <= tol);
            }
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "worst relative error %.3e (tolerance %.0e)", worst, tol);
    res.detail = buf;
    return res;
}

/// Error of the L2 operator at t = 1 for u = t^3 with step 1/M.
inline double l2_error_cubic(const AlphaParam& alpha, std::size_t M) {
    const double tau = 1.0 / static_cast<double>(M);
    const TimeSeries u = TimeSeries::sample([](double t) { return t * t * t; }, tau, M);
    return std::abs(l2_caputo(u, M - 1, alpha) - exact_caputo_power(3.0, alpha, 1.0));
}

/// Pairwise observed orders of the t^3 error under tau-halving from
/// 1/20 to 1/320 must lie within 3 - alpha +- band.
inline PropertyResult check_truncation_order(std::vector<double> alphas = {0.1, 0.5, 0.9},
                                             double band = 0.05) {
    PropertyResult res{"L2 truncation order on t^3"};
    std::string detail;
    for (double av : alphas) {
        const AlphaParam alpha(av);
        char head[48];
        std::snprintf(head, sizeof(head), "%salpha=%g:", detail.empty() ? "" : "; ", av);
        detail += head;
        double prev = l2_error_cubic(alpha, 20);
        for (std::size_t M = 40; M <= 320; M *= 2) {
            const double err = l2_error_cubic(alpha, M);
            const double order = std::log2(prev / err);
            res.record(std::abs(order - (3.0 - av)) <= band);
            char buf[16];
            std::snprintf(buf, sizeof(buf), " %.4f", order);
            detail += buf;
            prev = err;
        }
    }
    res.detail = detail + " (target 3-alpha +- " + std::to_string(band).substr(0, 4) + ")";
    return res;
}

/// v_{j+1}(c0 v_{j+1} - (c0 - c1) v_j - c1 v_{j-1}) >= E_{j+1} - E_j for random
/// admissible (c0, c1) and random v.
inline PropertyResult check_energy_inequality(std::size_t trials = 1000, unsigned seed = 20210) {
    PropertyResult res{"two-level energy inequality"};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> spread(0.0, 2.0);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const double c1 = unit(rng);
        const double c0 = std::max(c1, -3.0 * c1) + spread(rng);
        const double vm = unit(rng), v0 = unit(rng), vp = unit(rng);
        const double lhs = vp * (c0 * vp - (c0 - c1) * v0 - c1 * vm);
        const double rhs = energy_E(vp, v0, c0, c1) - energy_E(v0, vm, c0, c1);
        const double scale = 1e-12 * std::max(1.0, std::abs(c0) + std::abs(c1));
        res.record(lhs >= rhs - scale);
    }
    res.detail = std::to_string(trials) + " random trials";
    return res;
}

/// v_{j+1} Delta v >= K (E_{j+1} - E_j) + 1/2 barDelta(v^2) with
/// E built from (c_0 - c_2, c_1 - c_2), for random alpha, tau and sequences.
inline PropertyResult check_lemma16_inequality(std::size_t trials = 1000, unsigned seed = 16) {
    PropertyResult res{"L2 energy inequality with bar weights"};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> alpha_dist(0.01, 0.99);
    std::uniform_real_distribution<double> tau_dist(1e-3, 1.0);
    std::uniform_real_distribution<double> value(-1.0, 1.0);
    std::uniform_int_distribution<std::size_t> length(4, 50);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const AlphaParam alpha(alpha_dist(rng));
        const double tau = tau_dist(rng);
        const std::size_t len = length(rng);
        const std::size_t j = len - 2;
        std::vector<double> v(len);
        for (double& x : v) {
            x = value(rng);
        }
        std::vector<double> v2(len);
        for (std::size_t s = 0; s < len; ++s) {
            v2[s] = v[s] * v[s];
        }
        const L2Weights w = c_weights(j, alpha);
        const double K = alpha.scale(tau);
        const double lhs = v[j + 1] * K * weighted_differences(w.c, v);
        const double d0 = w[0] - w[2];
        const double d1 = w[1] - w[2];
        const double energy =
            K * (energy_E(v[j + 1], v[j], d0, d1) - energy_E(v[j], v[j - 1], d0, d1));
        const double rhs = energy + 0.5 * bar_caputo(v2, tau, j, alpha);
        double weight_sum = 0.0;
        for (double c : w.c) {
            weight_sum += std::abs(c);
        }
        res.record(lhs >= rhs - 1e-12 * K * weight_sum);
    }
    res.detail = std::to_string(trials) + " random trials, sequence lengths 4..50";
    return res;
}

/// (5/12) ||v||_0^2 <= ||H v||_0^2 <= ||v||_0^2 for random v vanishing at the ends.
inline PropertyResult check_norm_equivalence(std::size_t trials = 100, unsigned seed = 512) {
    PropertyResult res{"compact operator norm equivalence"};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> value(-1.0, 1.0);
    std::uniform_int_distribution<std::size_t> size(2, 200);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const GridSpec grid = build_grid(size(rng), 1, 1.0, 1.0);
        std::vector<double> v(grid.N + 1, 0.0);
        for (std::size_t i = 1; i < grid.N; ++i) {
            v[i] = value(rng);
        }
        const std::vector<double> hv = apply_compact_H(v, grid);
        const double n2 = std::pow(norm_L2(v, grid.h), 2);
        const double h2 = std::pow(norm_L2(hv, grid.h), 2);
        const double slack = 1e-14 * n2;
        res.record(5.0 / 12.0 * n2 <= h2 + slack && h2 <= n2 + slack);
    }
    res.detail = std::to_string(trials) + " random vectors";
    return res;
}

/// Zero-source problem with variable coefficients and a random piecewise
/// linear initial profile through `knots` interior values in [-1, 1].
inline DiffusionProblem random_homogeneous_problem(unsigned seed, std::size_t knots = 9) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> value(-1.0, 1.0);
    std::vector<double> nodes(knots + 2, 0.0);
    for (std::size_t m = 1; m <= knots; ++m) {
        nodes[m] = value(rng);
    }
    DiffusionProblem problem;
    problem.k = [](double x, double t) { return 2.0 - std::cos(x * t); };
    problem.q = [](double x, double t) { return 1.0 - std::sin(x * t); };
    problem.f = [](double, double) { return 0.0; };
    problem.u0 = [nodes](double x) {
        const double pos = std::clamp(x, 0.0, 1.0) * static_cast<double>(nodes.size() - 1);
        const std::size_t m = std::min(static_cast<std::size_t>(pos), nodes.size() - 2);
        const double w = pos - static_cast<double>(m);
        return (1.0 - w) * nodes[m] + w * nodes[m + 1];
    };
    return problem;
}

/// sum_{j=2}^{M} tau (||y^j||^2 + ||y_x^j]|^2) divided by ||y^1||^2 + ||y^0||^2.
inline double stability_ratio(const DiffusionProblem& problem, const GridSpec& grid,
                              const AlphaParam& alpha) {
    const SolutionHistory history = solve(problem, grid, alpha, SchemeKind::order2);
    double energy = 0.0;
    for (std::size_t j = 2; j <= grid.M; ++j) {
        const auto y = history.layer(j);
        energy += grid.tau * (std::pow(norm_L2(y, grid.h), 2) + std::pow(norm_grad(y, grid.h), 2));
    }
    const double initial =
        std::pow(norm_L2(history.layer(1), grid.h), 2) + std::pow(norm_L2(history.layer(0), grid.h), 2);
    return energy / initial;
}

/// Constant of the zero-source energy bound: the gradient part is at most
/// T^{1-alpha} / (c1 Gamma(2 - alpha)) times the initial terms, and the
/// discrete Poincare inequality ||y||^2 <= l^2/8 ||y_x]|^2 adds the rest.
inline double stability_constant(const AlphaParam& alpha, double c1, double length, double horizon) {
    return (1.0 + length * length / 8.0) * std::pow(horizon, 1.0 - alpha.value()) /
           (c1 * alpha.gamma_2ma());
}

/// Stability ratios for tau = 1/10 .. 1/160 at fixed h = 1/N, each checked
/// against the refinement-independent stability_constant.
inline PropertyResult check_stability(std::vector<double> alphas = {0.1, 0.9}, std::size_t N = 64,
                                      std::size_t samples = 3) {
    PropertyResult res{"zero-source energy bound"};
    std::string detail;
    for (double av : alphas) {
        const AlphaParam alpha(av);
        const double bound = stability_constant(alpha, 1.0, 1.0, 1.0);
        for (std::size_t sample = 0; sample < samples; ++sample) {
            const DiffusionProblem problem = random_homogeneous_problem(7919u * (sample + 1));
            char head[64];
            std::snprintf(head, sizeof(head), "%salpha=%g bound %.3f:", detail.empty() ? "" : "; ", av,
                          bound);
            detail += head;
            for (std::size_t M = 10; M <= 160; M *= 2) {
                const double ratio = stability_ratio(problem, build_grid(N, M, 1.0, 1.0), alpha);
                res.record(std::isfinite(ratio) && ratio <= bound);
                char buf[16];
                std::snprintf(buf, sizeof(buf), " %.4g", ratio);
                detail += buf;
            }
        }
    }
    res.detail = detail;
    return res;
}

inline std::vector<PropertyResult> run_property_suite() {
    return {check_ab_bounds(),      check_c_bounds(),          check_bar_weight_hypotheses(),
            check_exactness(),      check_truncation_order(),  check_energy_inequality(),
            check_lemma16_inequality(), check_norm_equivalence(), check_stability()};
}

}  // namespace l2frac
