#include "isaacs/dirichlet_solver.hpp"
#include "isaacs/kernel.hpp"
#include "isaacs/nonlocal_operator.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace isaacs;

namespace {

double one_dim_amplitude(double s) { return normalizing_constant(s) / (2.0 * std::tgamma(1.0 + 2.0 * s)); }

SolveConfig<1> interval_config(double s, double h, double f)
{
    SolveConfig<1> c;
    c.s = s;
    c.h = h;
    c.f = [f](const Point<1>&) { return f; };
    c.tol = 1e-10;
    return c;
}

SolveConfig<2> disk_config(double s, double h, double f)
{
    SolveConfig<2> c;
    c.s = s;
    c.h = h;
    c.f = [f](const Point<2>&) { return f; };
    c.tol = 1e-8;
    return c;
}

} // namespace

TEST(TauRule, WeightsPositiveAndDiagonal)
{
    for (double s : {0.2, 0.5, 0.9}) {
        const auto r = make_tau_rule(s, 1.0 / 64, 2.0, 0.1, 2.0, false);
        double sum = r.tail_weight;
        for (double w : r.weight) {
            EXPECT_GT(w, 0.0);
            sum += w;
        }
        EXPECT_DOUBLE_EQ(r.diagonal, 2.0 * sum);
        EXPECT_GE(r.tau.back(), 2.0);
        // total mass beyond t0 plus near-field mass
        const double t0 = r.tau.front();
        const double mass_far = std::pow(t0, -2 * s) / (2 * s);
        EXPECT_NEAR(sum - std::pow(t0, -2 * s) / (2 - 2 * s), mass_far, 1e-9 * mass_far);
    }
}

TEST(TauRule, SamplesAreNodeAligned)
{
    const double h = 1.0 / 32;
    const auto r = make_tau_rule(0.7, h, 1.0, 0.1, 2.0, false);
    for (double t : r.tau) EXPECT_NEAR(t / h, std::round(t / h), 1e-9);
}

TEST(Discrete, ZeroGivesZero)
{
    const auto ball = DomainSpec<2>::unit_ball();
    GridFunction<2> u(ball, 1.0 / 16);
    DiscreteIsaacs<2> op(u.grid(), ball, 0.7);
    std::vector<double> out;
    op.apply(u, out);
    for (double v : out) EXPECT_EQ(v, 0.0);
}

TEST(Discrete, SweepMatchesPointwise)
{
    const auto ball = DomainSpec<2>::unit_ball();
    auto u = GridFunction<2>::sample(ball, 1.0 / 16, [](const Point<2>& x) { return std::cos(x[0] + 2 * x[1]) + x[0]; });
    StencilOptions opt;
    opt.directions = 16;
    DiscreteIsaacs<2> op(u.grid(), ball, 0.6, opt);
    std::vector<double> out;
    op.apply(u, out);
    std::mt19937_64 rng(7);
    int checked = 0;
    while (checked < 20) {
        const std::size_t k = rng() % u.size();
        if (!u.inside(k)) continue;
        const auto pv = op.apply_at(u, k);
        EXPECT_NEAR(out[k], pv.value, 1e-10 * std::max(1.0, std::abs(pv.value)));
        const double dir = directional_operator<2>(u, u.grid().position(k), op.directions()[pv.argmin], 0.6, opt);
        EXPECT_NEAR(dir, pv.inf_part, 1e-10 * std::max(1.0, std::abs(dir)));
        ++checked;
    }
}

TEST(Discrete, OneDimSweepMatchesPointwise)
{
    const DomainSpec<1> iv(Ball<1>{{0.0}, 1.0});
    auto u = GridFunction<1>::sample(iv, 1.0 / 32, [](const Point<1>& x) { return 1.0 - x[0] * x[0]; });
    DiscreteIsaacs<1> op(u.grid(), iv, 0.4);
    std::vector<double> out;
    op.apply(u, out);
    for (std::size_t k = 0; k < u.size(); ++k)
        if (u.inside(k)) {
            EXPECT_NEAR(out[k], op.apply_at(u, k).value, 1e-11);
        }
}

TEST(Discrete, UpdateIsMonotone)
{
    const auto ball = DomainSpec<2>::unit_ball();
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> U(-1.0, 1.0), P(0.0, 0.5);
    GridFunction<2> u(ball, 1.0 / 16), v(ball, 1.0 / 16);
    StencilOptions opt;
    opt.directions = 12;
    DiscreteIsaacs<2> op(u.grid(), ball, 0.8, opt);
    const double dt = 1.0 / op.lipschitz();
    for (int trial = 0; trial < 10; ++trial) {
        for (std::size_t k = 0; k < u.size(); ++k) {
            const double a = U(rng);
            u.set(k, a);
            v.set(k, a + P(rng));
        }
        std::size_t node;
        do node = rng() % u.size();
        while (!u.inside(node));
        v.set(node, u[node]);
        const double un = u[node] + dt * op.apply_at(u, node).value;
        const double vn = v[node] + dt * op.apply_at(v, node).value;
        EXPECT_LE(un, vn + 1e-14);
    }
}

TEST(Discrete, OneDimProfileConsistency)
{
    // I[(1-x^2)_+^s] = -2 Gamma(1+2s) / C_s on (-1,1)
    const double s = 0.6;
    const double expect = -2.0 * std::tgamma(1.0 + 2.0 * s) / normalizing_constant(s);
    const DomainSpec<1> iv(Ball<1>{{0.0}, 1.0});
    double prev = 1e300;
    for (int n : {64, 128, 256}) {
        auto u = GridFunction<1>::sample(iv, 1.0 / n, [s](const Point<1>& x) { return std::pow(1.0 - x[0] * x[0], s); });
        DiscreteIsaacs<1> op(u.grid(), iv, s);
        std::vector<double> out;
        op.apply(u, out);
        double err = 0.0;
        for (std::size_t k = 0; k < u.size(); ++k) {
            const double x = u.grid().position(k)[0];
            if (std::abs(x) < 0.8) err = std::max(err, std::abs(out[k] - expect) / std::abs(expect));
        }
        EXPECT_LT(err, prev);
        prev = err;
    }
    EXPECT_LT(prev, 0.02);
}

TEST(Discrete, DistancePowerNegativeNearBoundary)
{
    // nodes closer than a cell to the boundary are below the stencil's resolution
    const double s = 0.8, alpha = 0.4;
    const auto ball = DomainSpec<2>::unit_ball();
    auto u = GridFunction<2>::sample(ball, 1.0 / 32, [&](const Point<2>& x) { return distance_power<2>(ball, alpha, x); });
    DiscreteIsaacs<2> op(u.grid(), ball, s);
    std::vector<double> out;
    op.apply(u, out);
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (!u.inside(k)) continue;
        const double d = ball.distance(u.grid().position(k));
        if (d >= u.h() && d < 0.1) {
            EXPECT_LT(out[k], 0.0);
        }
    }
}

TEST(Solver, ZeroSourceGivesZero)
{
    auto c1 = interval_config(0.5, 1.0 / 64, 0.0);
    const auto r1 = solve(c1);
    EXPECT_EQ(r1.solution.sup_norm(), 0.0);
    EXPECT_TRUE(r1.converged);
    EXPECT_EQ(verify_boundary_growth(r1, 0.25), 0.0);
    for (double R : {1.0, 2.0, 4.0}) {
        auto c2 = disk_config(0.8, R / 16, 0.0);
        c2.domain = DomainSpec<2>(Ball<2>{{0.0, 0.0}, R});
        c2.directions = 16;
        EXPECT_EQ(solve(c2).solution.sup_norm(), 0.0);
    }
}

TEST(Solver, ConfigErrors)
{
    auto c = interval_config(0.5, 1.0 / 32, -1.0);
    c.tol = 0.0;
    EXPECT_THROW(solve(c), ConfigError);
    c = interval_config(0.5, 1.0 / 32, -1.0);
    c.s = 1.0;
    EXPECT_THROW(solve(c), ConfigError);
    c = interval_config(0.5, 1.0 / 32, -1.0);
    DirichletSolver<1> probe(c);
    c.dt = 1.5 / probe.lipschitz();
    EXPECT_THROW(solve(c), CFLViolation);
    c.dt = 0.5 / probe.lipschitz();
    EXPECT_NO_THROW(solve(c));
}

TEST(Solver, MaxIterationsIsAFlag)
{
    auto c = interval_config(0.5, 1.0 / 64, -1.0);
    c.method = SolveMethod::explicit_euler;
    c.max_iter = 3;
    const auto r = solve(c);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.iterations, 3);
    EXPECT_GT(r.residual, c.tol);
}

TEST(Solver, OneDimProfileOracle)
{
    const double s = 0.6;
    const double a = one_dim_amplitude(s);
    double prev = 1e300;
    for (int n : {64, 128, 256}) {
        const auto r = solve(interval_config(s, 1.0 / n, -1.0));
        ASSERT_TRUE(r.converged);
        double err = 0.0, peak = 0.0;
        const auto& u = r.solution;
        for (std::size_t k = 0; k < u.size(); ++k) {
            const double x = u.grid().position(k)[0];
            const double ex = std::abs(x) < 1.0 ? a * std::pow(1.0 - x * x, s) : 0.0;
            err = std::max(err, std::abs(u[k] - ex));
            peak = std::max(peak, ex);
            EXPECT_GE(u[k], 0.0);
            EXPECT_NEAR(u[k], u[u.size() - 1 - k], 1e-12);
            if (!u.inside(k)) {
                EXPECT_EQ(u[k], 0.0);
            }
        }
        EXPECT_LT(err / peak, prev);
        prev = err / peak;
    }
    EXPECT_LT(prev, 0.05);
}

TEST(Solver, MultigridMatchesExplicitFixedPoint)
{
    auto c = interval_config(0.7, 1.0 / 64, -1.0);
    const auto mg = solve(c);
    c.method = SolveMethod::explicit_euler;
    const auto ex = solve(c);
    ASSERT_TRUE(mg.converged);
    ASSERT_TRUE(ex.converged);
    EXPECT_EQ(mg.method, "multigrid");
    EXPECT_EQ(ex.method, "explicit");
    for (std::size_t k = 0; k < mg.solution.size(); ++k) EXPECT_NEAR(mg.solution[k], ex.solution[k], 1e-8);
}

TEST(Solver, MixingReachesSameSolutionInFewerCycles)
{
    auto c = disk_config(0.9, 1.0 / 32, 0.0);
    c.f = [](const Point<2>& x) {
        const double a = x[0] - 0.3, b = x[1] - 0.1;
        return -std::exp(-(a * a + b * b) / 0.09);
    };
    c.tol = 1e-10;
    c.anderson = 0;
    const auto plain = solve(c);
    c.anderson = 5;
    const auto mixed = solve(c);
    ASSERT_TRUE(plain.converged);
    ASSERT_TRUE(mixed.converged);
    EXPECT_LE(mixed.iterations, plain.iterations);
    double diff = 0.0;
    for (std::size_t k = 0; k < plain.solution.size(); ++k)
        diff = std::max(diff, std::abs(plain.solution[k] - mixed.solution[k]));
    EXPECT_LT(diff, 1e-9);
    c.anderson = -1;
    EXPECT_THROW(solve(c), ConfigError);
}

TEST(Solver, ResidualHistoryDecreases)
{
    const auto r = solve(disk_config(0.9, 1.0 / 32, -1.0));
    ASSERT_TRUE(r.converged);
    ASSERT_GE(r.history.size(), 3u);
    for (std::size_t i = 2; i < r.history.size(); ++i) EXPECT_LE(r.history[i], r.history[i - 1]);
}

TEST(Solver, DiskSolutionRadialAndPositive)
{
    const auto r = solve(disk_config(0.9, 1.0 / 32, -1.0));
    ASSERT_TRUE(r.converged);
    const auto& u = r.solution;
    double umax = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        EXPECT_GE(u[k], 0.0);
        if (!u.inside(k)) {
            EXPECT_EQ(u[k], 0.0);
        }
        umax = std::max(umax, u[k]);
    }
    EXPECT_DOUBLE_EQ(u.value_at({0.0, 0.0}), umax);
    for (double rad : {0.2, 0.5, 0.8}) {
        double lo = 1e300, hi = -1e300;
        for (int j = 0; j < 24; ++j) {
            const double th = 2 * std::numbers::pi * j / 24 + 0.1;
            const double v = u.value_at({rad * std::cos(th), rad * std::sin(th)});
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        EXPECT_LT((hi - lo) / hi, 0.02) << "radius " << rad;
    }
}

TEST(Solver, DiscreteOperatorHelperMatchesResidual)
{
    auto c = disk_config(0.8, 1.0 / 16, -1.0);
    c.directions = 16;
    const auto r = solve(c);
    const auto& u = r.solution;
    for (std::size_t k = 0; k < u.size(); k += 37)
        if (u.inside(k)) {
            EXPECT_NEAR(discrete_operator<2>(u, k, c), -1.0, 1e-7);
        }
}
