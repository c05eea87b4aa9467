#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "l2frac/analysis.hpp"
#include "l2frac/solver.hpp"
#include "l2frac/tridiagonal.hpp"

using namespace l2frac;

namespace {

constexpr double pi = std::numbers::pi;

DiffusionProblem constant_problem(double k, double q, Field f, Profile u0) {
    DiffusionProblem p;
    p.k = [k](double, double) { return k; };
    p.q = [q](double, double) { return q; };
    p.f = std::move(f);
    p.u0 = std::move(u0);
    p.time_only_coefficients = true;
    return p;
}

DiffusionProblem zero_problem() {
    return constant_problem(1.5, 0.5, [](double, double) { return 0.0; }, [](double) { return 0.0; });
}

std::vector<double> dense_solve(const TridiagonalSystem& sys) {
    const std::size_t n = sys.size();
    std::vector<std::vector<double>> A(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        A[i][i] = sys.diag[i];
        if (i > 0) A[i][i - 1] = sys.lower[i - 1];
        if (i + 1 < n) A[i][i + 1] = sys.upper[i];
        A[i][n] = sys.rhs[i];
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        }
        std::swap(A[c], A[piv]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double m = A[r][c] / A[c][c];
            for (std::size_t k = c; k <= n; ++k) A[r][k] -= m * A[c][k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = A[i][n];
        for (std::size_t k = i + 1; k < n; ++k) s -= A[i][k] * x[k];
        x[i] = s / A[i][i];
    }
    return x;
}

TridiagonalSystem random_dominant(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    TridiagonalSystem sys(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) sys.lower[i - 1] = unit(rng);
        if (i + 1 < n) sys.upper[i] = unit(rng);
        const double off = (i > 0 ? std::abs(sys.lower[i - 1]) : 0.0) + (i + 1 < n ? std::abs(sys.upper[i]) : 0.0);
        sys.diag[i] = (unit(rng) < 0 ? -1 : 1) * (off + 0.1 + std::abs(unit(rng)));
        sys.rhs[i] = unit(rng);
    }
    return sys;
}

}  // namespace

TEST(ApplyLambda, ZeroInZeroOut) {
    const GridSpec g = build_grid(10, 4, 1.0, 1.0);
    const auto out = apply_lambda(std::vector<double>(11, 0.0), 0, zero_problem(), g);
    for (double v : out) EXPECT_EQ(v, 0.0);
}

TEST(ApplyLambda, SineLaplacian) {
    const GridSpec g = build_grid(100, 4, 1.0, 1.0);
    const DiffusionProblem p = constant_problem(1.0, 0.0, nullptr, nullptr);
    std::vector<double> y(101);
    for (std::size_t i = 0; i <= 100; ++i) y[i] = std::sin(pi * g.x(i));
    y[100] = 0.0;
    const auto out = apply_lambda(y, 1, p, g);
    for (std::size_t i = 1; i < 100; ++i) {
        const double want = -pi * pi * y[i];
        EXPECT_LT(std::abs(out[i] - want), 1e-2 * std::abs(want) + 1e-12) << i;
    }
    EXPECT_EQ(out[0], 0.0);
    EXPECT_EQ(out[100], 0.0);
}

TEST(ApplyLambda, ExactOnQuadratic) {
    const GridSpec g = build_grid(16, 4, 1.0, 1.0);
    const DiffusionProblem p = constant_problem(1.0, 0.0, nullptr, nullptr);
    std::vector<double> y(17);
    for (std::size_t i = 0; i <= 16; ++i) y[i] = 3 * g.x(i) * g.x(i) - g.x(i) + 1;
    const auto out = apply_lambda(y, 0, p, g);
    for (std::size_t i = 1; i < 16; ++i) EXPECT_NEAR(out[i], 6.0, 1e-12);
}

TEST(ApplyLambda, RejectsWrongSize) {
    const GridSpec g = build_grid(8, 4, 1.0, 1.0);
    EXPECT_THROW(apply_lambda(std::vector<double>(5), 0, zero_problem(), g), std::invalid_argument);
}

TEST(ApplyCompactH, Examples) {
    const GridSpec g = build_grid(6, 1, 1.0, 1.0);
    const auto c = apply_compact_H(std::vector<double>(7, 2.5), g);
    for (std::size_t i = 1; i < 6; ++i) EXPECT_DOUBLE_EQ(c[i], 2.5);
    const auto hat = apply_compact_H(std::vector<double>{0.0, 1.0, 0.0}, build_grid(2, 1, 1.0, 1.0));
    EXPECT_DOUBLE_EQ(hat[1], 5.0 / 6.0);
}

TEST(ApplyCompactH, NormEquivalence) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const GridSpec g = build_grid(2 + trial, 1, 1.0, 1.0);
        std::vector<double> v(g.N + 1, 0.0);
        for (std::size_t i = 1; i < g.N; ++i) v[i] = unit(rng);
        const double n2 = std::pow(norm_L2(v, g.h), 2);
        const double h2 = std::pow(norm_L2(apply_compact_H(v, g), g.h), 2);
        EXPECT_LE(5.0 / 12.0 * n2, h2 * (1 + 1e-14));
        EXPECT_LE(h2, n2 * (1 + 1e-14));
    }
}

TEST(Thomas, Identity) {
    TridiagonalSystem sys(4);
    sys.diag = {1, 1, 1, 1};
    sys.rhs = {3, -1, 2, 7};
    EXPECT_EQ(thomas_solve(sys), sys.rhs);
}

TEST(Thomas, ThreeByThree) {
    TridiagonalSystem sys(3);
    sys.diag = {2, 2, 2};
    sys.lower = {-1, -1};
    sys.upper = {-1, -1};
    sys.rhs = {1, 0, 1};
    const auto x = thomas_solve(sys);
    for (double v : x) EXPECT_NEAR(v, 1.0, 1e-15);
    EXPECT_TRUE(is_diagonally_dominant(sys));
}

TEST(Thomas, MatchesDenseElimination) {
    std::mt19937_64 rng(200);
    const TridiagonalSystem sys = random_dominant(200, rng);
    ASSERT_TRUE(is_diagonally_dominant(sys));
    const auto x = thomas_solve(sys);
    const auto ref = dense_solve(sys);
    for (std::size_t i = 0; i < 200; ++i) EXPECT_NEAR(x[i], ref[i], 1e-10);
}

TEST(Thomas, Errors) {
    TridiagonalSystem singular(2);
    singular.diag = {1, 1};
    singular.lower = {1};
    singular.upper = {1};
    singular.rhs = {1, 1};
    EXPECT_THROW(thomas_solve(singular), SolverError);
    TridiagonalSystem zero(1);
    EXPECT_THROW(thomas_solve(zero), SolverError);
    TridiagonalSystem bad(3);
    bad.rhs.resize(2);
    EXPECT_THROW(thomas_solve(bad), std::invalid_argument);
    EXPECT_TRUE(thomas_solve(TridiagonalSystem(0)).empty());
}

TEST(DiagonalDominance, Detects) {
    TridiagonalSystem sys(2);
    sys.diag = {1, 1};
    sys.lower = {2};
    sys.upper = {0.5};
    EXPECT_FALSE(is_diagonally_dominant(sys));
}

TEST(StepMatrix, CompactDominantOverCoefficientRanges) {
    for (double a : {0.1, 0.5, 0.9}) {
        const AlphaParam alpha(a);
        for (std::size_t M : {10u, 160u, 1000u}) {
            for (std::size_t N : {4u, 50u, 1000u}) {
                const GridSpec g = build_grid(N, M, 1.0, 1.0);
                for (double k : {1.0, 2.0, 3.0}) {
                    for (double q : {0.0, 1.0, 2.0}) {
                        const DiffusionProblem p = constant_problem(k, q, nullptr, nullptr);
                        const double mass = alpha.scale(g.tau) * c_weights(1, alpha)[0];
                        const auto sys = assemble_step_matrix(mass, 0.5, p, g, SchemeKind::compact4);
                        EXPECT_TRUE(is_diagonally_dominant(sys)) << a << " " << M << " " << N;
                        EXPECT_EQ(sys.lower.size() + 1, sys.diag.size());
                    }
                }
            }
        }
    }
}

TEST(Bootstrap, SubstepRule) {
    EXPECT_EQ(bootstrap_substeps(0.1, AlphaParam(0.5)), 5u);
    EXPECT_EQ(bootstrap_substeps(1.0, AlphaParam(0.5)), 1u);
    EXPECT_EQ(bootstrap_substeps(1.0 / 160, AlphaParam(0.9)), 101u);
}

TEST(Bootstrap, ZeroDataStaysZero) {
    const GridSpec g = build_grid(8, 10, 1.0, 1.0);
    for (auto scheme : {SchemeKind::order2, SchemeKind::compact4}) {
        for (double v : bootstrap_first_layer(zero_problem(), g, AlphaParam(0.4), scheme)) EXPECT_EQ(v, 0.0);
    }
}

TEST(Bootstrap, FirstLayerAccuracyOnCoupledGrids) {
    const AlphaParam alpha(0.5);
    const ManufacturedCase mc = benchmark_case(alpha, CaseVariant::variable_xt);
    const std::pair<std::size_t, std::size_t> rungs[] = {{20, 43}, {40, 101}, {80, 240}};
    std::vector<double> errors;
    for (auto [M, N] : rungs) {
        const GridSpec g = build_grid(N, M, 1.0, 1.0);
        const auto y1 = bootstrap_first_layer(mc.problem, g, alpha, SchemeKind::order2);
        std::vector<double> z(N + 1);
        for (std::size_t i = 0; i <= N; ++i) z[i] = y1[i] - mc.u_exact(g.x(i), g.tau);
        errors.push_back(norm_L2(z, g.h));
    }
    for (std::size_t r = 1; r < errors.size(); ++r) {
        EXPECT_GE(std::log2(errors[r - 1] / errors[r]), 2.4) << r;
    }
}

TEST(StepOrder2, ScalarOracle) {
    // N = 2: one unknown at x = 1/2
    const AlphaParam alpha(0.6);
    const GridSpec g = build_grid(2, 3, 1.0, 1.0);
    DiffusionProblem p;
    p.k = [](double x, double t) { return 1.0 + x + t; };
    p.q = [](double x, double t) { return x * t; };
    p.f = [](double x, double t) { return std::cos(x + t); };
    p.u0 = [](double x) { return std::sin(pi * x); };
    SolutionHistory h(g, alpha);
    h.layer(0)[1] = 1.0;
    h.layer(1)[1] = 0.7;
    const std::size_t j = 1;
    const double t = g.t(2);
    const L2Weights w = c_weights(j, alpha);
    const double K = alpha.scale(g.tau);
    const double a1 = 1.0 + 0.25 + t, a2 = 1.0 + 0.75 + t;
    const double hist = w[1] * (0.7 - 1.0);
    const double want = (std::cos(0.5 + t) + K * (w[0] * 0.7 - hist)) / (K * w[0] + (a1 + a2) / 0.25 + 0.5 * t);
    const auto y = step_order2(h, j, p, g);
    EXPECT_NEAR(y[1], want, 1e-14);
    EXPECT_EQ(y[0], 0.0);
    EXPECT_EQ(y[2], 0.0);
}

TEST(StepCompact, ScalarOracle) {
    const AlphaParam alpha(0.3);
    const GridSpec g = build_grid(2, 4, 1.0, 1.0);
    DiffusionProblem p = constant_problem(2.0, 0.5, [](double x, double t) { return 1.0 + x * t; },
                                          [](double x) { return std::sin(pi * x); });
    SolutionHistory h(g, alpha);
    h.layer(0)[1] = 1.0;
    h.layer(1)[1] = 0.8;
    h.layer(2)[1] = 0.65;
    const std::size_t j = 2;
    const double t = g.t(3);
    const L2Weights w = c_weights(j, alpha);
    const double K = alpha.scale(g.tau);
    const double hist = w[2] * (0.8 - 1.0) + w[1] * (0.65 - 0.8);
    const double r1 = (1.0 + 0.5 * t) + K * (w[0] * 0.65 - hist);
    const double r0 = 1.0, r2 = 1.0 + t;
    const double rhs = r1 + (r0 - 2 * r1 + r2) / 12.0;
    const double want = rhs / ((K * w[0] + 0.5) * 10.0 / 12.0 + 2 * 2.0 / 0.25);
    EXPECT_NEAR(step_compact(h, j, p, g)[1], want, 1e-14);
}

TEST(Steps, RejectLevelZeroAndIncompatibleCoefficients) {
    const AlphaParam alpha(0.5);
    const GridSpec g = build_grid(4, 4, 1.0, 1.0);
    SolutionHistory h(g, alpha);
    EXPECT_THROW(step_order2(h, 0, zero_problem(), g), std::invalid_argument);
    EXPECT_THROW(step_compact(h, 0, zero_problem(), g), std::invalid_argument);
    const ManufacturedCase mc = benchmark_case(alpha, CaseVariant::variable_xt);
    EXPECT_THROW(step_compact(h, 1, mc.problem, g), std::invalid_argument);
    EXPECT_THROW(solve(mc.problem, g, alpha, SchemeKind::compact4), std::invalid_argument);
}

TEST(Solve, SingleStepReturnsInitialAndBootstrapLayers) {
    const AlphaParam alpha(0.5);
    const ManufacturedCase mc = benchmark_case(alpha, CaseVariant::variable_xt);
    const GridSpec g = build_grid(10, 1, 1.0, 1.0);
    const SolutionHistory h = solve(mc.problem, g, alpha, SchemeKind::order2);
    ASSERT_EQ(h.num_layers(), 2u);
    const auto y1 = bootstrap_first_layer(mc.problem, g, alpha, SchemeKind::order2);
    for (std::size_t i = 0; i <= 10; ++i) {
        EXPECT_EQ(h(1, i), y1[i]);
        EXPECT_NEAR(h(0, i), i == 10 ? 0.0 : mc.problem.u0(g.x(i)), 1e-15);
    }
}

TEST(Solve, ZeroDataGivesZeroHistory) {
    const GridSpec g = build_grid(9, 12, 1.0, 1.0);
    for (auto scheme : {SchemeKind::order2, SchemeKind::compact4}) {
        const SolutionHistory h = solve(zero_problem(), g, AlphaParam(0.7), scheme);
        for (std::size_t j = 0; j <= g.M; ++j) {
            for (double v : h.layer(j)) EXPECT_EQ(v, 0.0);
        }
    }
}

TEST(Solve, BoundaryColumnsStayZero) {
    for (auto [scheme, variant] : {std::pair{SchemeKind::order2, CaseVariant::variable_xt},
                                   std::pair{SchemeKind::compact4, CaseVariant::time_only}}) {
        const AlphaParam alpha(0.4);
        const ManufacturedCase mc = benchmark_case(alpha, variant);
        const GridSpec g = build_grid(15, 20, 1.0, 1.0);
        const SolutionHistory h = solve(mc.problem, g, alpha, scheme);
        for (std::size_t j = 0; j <= g.M; ++j) {
            EXPECT_EQ(h(j, 0), 0.0);
            EXPECT_EQ(h(j, g.N), 0.0);
        }
    }
}

TEST(Solve, Superposition) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        const double a1 = unit(rng), a2 = unit(rng), b1 = unit(rng), b2 = unit(rng);
        Profile u1 = [a1](double x) { return a1 * std::sin(pi * x); };
        Profile u2 = [a2](double x) { return a2 * x * (1 - x) * (1 + x); };
        Field f1 = [b1](double x, double t) { return b1 * std::exp(x - t); };
        Field f2 = [b2](double x, double t) { return b2 * x * t; };
        const GridSpec g = build_grid(6 + trial, 8 + trial, 1.0, 1.0);
        const AlphaParam alpha(0.2 + 0.15 * trial);
        for (auto scheme : {SchemeKind::order2, SchemeKind::compact4}) {
            auto make = [](Field f, Profile u0) {
                return constant_problem(1.7, 0.4, std::move(f), std::move(u0));
            };
            const auto s1 = solve(make(f1, u1), g, alpha, scheme);
            const auto s2 = solve(make(f2, u2), g, alpha, scheme);
            const auto sum = solve(make([&](double x, double t) { return f1(x, t) + f2(x, t); },
                                        [&](double x) { return u1(x) + u2(x); }),
                                   g, alpha, scheme);
            for (std::size_t j = 0; j <= g.M; ++j) {
                for (std::size_t i = 0; i <= g.N; ++i) {
                    EXPECT_NEAR(sum(j, i), s1(j, i) + s2(j, i), 1e-10);
                }
            }
        }
    }
}

TEST(Solve, PropagatesValidationErrors) {
    DiffusionProblem p = zero_problem();
    p.u0 = [](double) { return 1.0; };
    EXPECT_THROW(solve(p, build_grid(4, 4, 1.0, 1.0), AlphaParam(0.5), SchemeKind::order2),
                 std::invalid_argument);
}
