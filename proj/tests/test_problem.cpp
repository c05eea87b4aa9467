#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "l2frac/problem.hpp"
#include "l2frac/reference.hpp"

using namespace l2frac;

namespace {

// five-point central difference
template <class F>
double d1(F f, double x, double step = 1e-3) {
    return (f(x - 2 * step) - 8 * f(x - step) + 8 * f(x + step) - f(x + 2 * step)) / (12 * step);
}

DiffusionProblem simple_problem() {
    DiffusionProblem p;
    p.k = [](double, double) { return 1.0; };
    p.q = [](double, double) { return 0.0; };
    p.f = [](double, double) { return 0.0; };
    p.u0 = [](double x) { return x * (1 - x); };
    return p;
}

}  // namespace

TEST(BuildGrid, Examples) {
    const GridSpec g = build_grid(2, 2, 1.0, 1.0);
    EXPECT_EQ(g.h, 0.5);
    EXPECT_EQ(g.tau, 0.5);
    const GridSpec t1 = build_grid(18, 10, 1.0, 1.0);
    EXPECT_DOUBLE_EQ(t1.h, 1.0 / 18);
    EXPECT_DOUBLE_EQ(t1.tau, 0.1);
    const GridSpec t3 = build_grid(29, 40, 1.0, 1.0);
    EXPECT_DOUBLE_EQ(t3.h, 1.0 / 29);
    EXPECT_DOUBLE_EQ(t3.tau, 1.0 / 40);
    EXPECT_DOUBLE_EQ(t3.x(29), 1.0);
    EXPECT_DOUBLE_EQ(t3.t(40), 1.0);
}

TEST(BuildGrid, Rejections) {
    EXPECT_THROW(build_grid(1, 10, 1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(build_grid(10, 0, 1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(build_grid(10, 10, 0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(build_grid(10, 10, 1.0, -1.0), std::invalid_argument);
    EXPECT_NO_THROW(build_grid(2, 1, 2.0, 0.5));
}

TEST(Validate, AcceptsWellPosedProblem) {
    EXPECT_NO_THROW(validate(simple_problem(), build_grid(10, 5, 1.0, 1.0)));
}

TEST(Validate, RejectsIncompatibleInitialProfile) {
    DiffusionProblem p = simple_problem();
    p.u0 = [](double x) { return 1.0 + x; };
    EXPECT_THROW(validate(p, build_grid(10, 5, 1.0, 1.0)), std::invalid_argument);
}

TEST(Validate, RejectsSmallDiffusivity) {
    DiffusionProblem p = simple_problem();
    p.k = [](double x, double) { return 0.5 + x; };
    EXPECT_THROW(validate(p, build_grid(10, 5, 1.0, 1.0)), std::invalid_argument);
    p.c1_lower = 0.5;
    EXPECT_NO_THROW(validate(p, build_grid(10, 5, 1.0, 1.0)));
}

TEST(Validate, RejectsNegativeReaction) {
    DiffusionProblem p = simple_problem();
    p.q = [](double, double t) { return 0.5 - t; };
    EXPECT_THROW(validate(p, build_grid(10, 5, 1.0, 1.0)), std::invalid_argument);
}

TEST(TabulatedField, SnapsToSamples) {
    const GridSpec g = build_grid(4, 2, 1.0, 1.0);
    std::vector<double> samples((g.M + 1) * (g.N + 1));
    for (std::size_t j = 0; j <= g.M; ++j) {
        for (std::size_t i = 0; i <= g.N; ++i) {
            samples[j * (g.N + 1) + i] = 10.0 * j + i;
        }
    }
    const Field half = tabulated_field(g, samples, -0.5);
    EXPECT_EQ(half(g.x(3) - 0.5 * g.h, g.t(1)), 13.0);
    EXPECT_EQ(half(g.x(1) - 0.5 * g.h, g.t(2)), 21.0);
    const Field nodes = tabulated_field(g, samples, 0.0);
    EXPECT_EQ(nodes(g.x(4), g.t(0)), 4.0);
    EXPECT_THROW(tabulated_field(g, std::vector<double>(3), 0.0), std::invalid_argument);
}

TEST(ManufacturedCase, Examples) {
    for (auto variant : {CaseVariant::variable_xt, CaseVariant::time_only}) {
        const AlphaParam alpha(0.5);
        const ManufacturedCase mc = benchmark_case(alpha, variant);
        EXPECT_NEAR(mc.u_exact(0.5, 1.0), 3.0, 1e-14);
        EXPECT_EQ(mc.caputo_u(0.3, 0.0), 0.0);
        // t^{3+alpha} coefficient of the Caputo derivative
        EXPECT_NEAR(mc.caputo_u(0.5, 1.0), std::tgamma(4.5) / std::tgamma(4.0) + 2.0 / std::tgamma(2.5),
                    1e-12);
        EXPECT_NEAR(mc.problem.u0(0.25), std::sin(std::numbers::pi * 0.25), 1e-15);
        EXPECT_EQ(mc.problem.time_only_coefficients, variant == CaseVariant::time_only);
        EXPECT_NO_THROW(validate(mc.problem, build_grid(20, 10, 1.0, 1.0)));
    }
}

TEST(ManufacturedCase, SourceAtInitialTime) {
    const double pi = std::numbers::pi;
    const ManufacturedCase mc = benchmark_case(AlphaParam(0.3), CaseVariant::variable_xt);
    for (double x : {0.1, 0.5, 0.9}) {
        // at t = 0: k = 1, k_x = 0, q = 1, u = sin(pi x)
        EXPECT_NEAR(mc.problem.f(x, 0.0), (pi * pi + 1) * std::sin(pi * x), 1e-12);
    }
}

TEST(ManufacturedCase, ResidualVanishesAtRandomPoints) {
    std::mt19937_64 rng(100);
    std::uniform_real_distribution<double> interior(0.01, 0.99);
    for (auto variant : {CaseVariant::variable_xt, CaseVariant::time_only}) {
        for (double a : {0.1, 0.5, 0.9}) {
            const AlphaParam alpha(a);
            const ManufacturedCase mc = benchmark_case(alpha, variant);
            for (int n = 0; n < 100; ++n) {
                const double x = interior(rng);
                const double t = interior(rng);
                auto du = [&](double s) {
                    return std::sin(std::numbers::pi * x) * ((3 + a) * std::pow(s, 2 + a) + 2 * s);
                };
                const double caputo = caputo_reference(du, t, alpha);
                auto flux = [&](double y) {
                    return mc.problem.k(y, t) * d1([&](double z) { return mc.u_exact(z, t); }, y);
                };
                const double spatial = d1(flux, x) - mc.problem.q(x, t) * mc.u_exact(x, t);
                EXPECT_NEAR(caputo - spatial, mc.problem.f(x, t), 1e-8) << a << " " << x << " " << t;
            }
        }
    }
}
