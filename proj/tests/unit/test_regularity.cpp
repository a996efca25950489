#include "isaacs/regularity.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace isaacs;

namespace {

const DomainSpec<1> unit_interval(Ball<1>{{0.0}, 1.0});
const DomainSpec<1> half_interval(Ball<1>{{0.0}, 0.5});

} // namespace

TEST(LineFit, ExactLine)
{
    const auto [a, b, r] = detail::line_fit({0, 1, 2, 3}, {1, 3, 5, 7});
    EXPECT_DOUBLE_EQ(a, 2.0);
    EXPECT_DOUBLE_EQ(b, 1.0);
    EXPECT_NEAR(r, 0.0, 1e-15);
}

TEST(HolderFit, ConstantIsUndefined)
{
    const auto u = GridFunction<1>::sample(unit_interval, 1.0 / 256, [](const Point<1>&) { return 2.0; });
    const auto fit = holder_fit<1>(u, half_interval);
    EXPECT_FALSE(fit.alpha_defined);
    EXPECT_TRUE(std::isnan(fit.alpha_hat));
    EXPECT_EQ(fit.seminorm_hat, 0.0);
}

TEST(HolderFit, SquareRootProfile)
{
    const auto u = GridFunction<1>::sample(unit_interval, 1.0 / 1024, [](const Point<1>& x) { return std::sqrt(std::abs(x[0])); });
    const auto fit = holder_fit<1>(u, half_interval);
    ASSERT_TRUE(fit.alpha_defined);
    EXPECT_NEAR(fit.alpha_hat, 0.5, 0.05);
    EXPECT_GE(fit.fitted_scales, 4u);
    EXPECT_LE(fit.fitted_scales, 6u);
}

TEST(HolderFit, ScaleCovariance)
{
    const double lambda = 2.0, beta = 0.35;
    auto f = [&](const Point<1>& x) { return std::pow(std::abs(x[0]), beta); };
    auto g = [&](const Point<1>& x) { return std::pow(std::abs(lambda * x[0]), beta); };
    const auto u = GridFunction<1>::sample(unit_interval, 1.0 / 1024, f);
    const auto v = GridFunction<1>::sample(unit_interval, 1.0 / 1024, g);
    const auto fu = holder_fit<1>(u, half_interval);
    const auto fv = holder_fit<1>(v, half_interval);
    EXPECT_NEAR(fu.alpha_hat, fv.alpha_hat, 1e-6);
    EXPECT_NEAR(std::log(fv.seminorm_hat) - std::log(fu.seminorm_hat), fu.alpha_hat * std::log(lambda), 0.05 * std::log(lambda));
}

TEST(HolderFit, TwoDimensionalPower)
{
    const auto ball = DomainSpec<2>::unit_ball();
    const auto u = GridFunction<2>::sample(ball, 1.0 / 128, [](const Point<2>& x) { return std::pow(norm<2>(x), 0.3); });
    HolderOptions opt;
    opt.random_pairs = 2000;
    const auto fit = holder_fit<2>(u, DomainSpec<2>(Ball<2>{{0.0, 0.0}, 0.5}), opt);
    ASSERT_TRUE(fit.alpha_defined);
    EXPECT_NEAR(fit.alpha_hat, 0.3, 0.05);
}

TEST(HolderFit, Reproducible)
{
    const auto ball = DomainSpec<2>::unit_ball();
    const auto u = GridFunction<2>::sample(ball, 1.0 / 32, [](const Point<2>& x) { return std::sin(3 * x[0]) * x[1]; });
    HolderOptions opt;
    opt.floor_cells = 1.0;
    const auto a = holder_fit<2>(u, DomainSpec<2>(Ball<2>{{0.0, 0.0}, 0.9}), opt);
    const auto b = holder_fit<2>(u, DomainSpec<2>(Ball<2>{{0.0, 0.0}, 0.9}), opt);
    EXPECT_EQ(a.oscillation, b.oscillation);
}

TEST(HolderFit, InsufficientScales)
{
    const auto u = GridFunction<1>::sample(unit_interval, 1.0 / 16, [](const Point<1>& x) { return x[0]; });
    EXPECT_THROW(holder_fit<1>(u, half_interval), InsufficientScales);
}

TEST(HolderSeminorm, AffineLipschitz)
{
    const auto ball = DomainSpec<2>::unit_ball();
    const auto u = GridFunction<2>::sample(ball, 1.0 / 16, [](const Point<2>& x) { return 3 * x[0] + 4 * x[1]; });
    EXPECT_NEAR(holder_seminorm<2>(u, DomainSpec<2>(Ball<2>{{0.0, 0.0}, 0.5}), 1.0), 5.0, 0.05);
}

TEST(Barrier, BallProductsNegative)
{
    const auto ball = DomainSpec<2>::unit_ball();
    OperatorOptions oo;
    oo.directions = 32;
    BarrierOptions bo;
    bo.op = oo;
    const auto rep = barrier_check<2>(ball, 0.8, 0.4, 0.1, 1.0 / 16, bo);
    EXPECT_TRUE(rep.all_negative);
    EXPECT_GT(rep.m_hat, 0.0);
    EXPECT_FALSE(rep.boundary_case);
    for (const auto& n : rep.nodes) {
        EXPECT_LT(n.product, 0.0);
        EXPECT_LT(n.distance, 0.1);
    }
    // shrinking the strip keeps the check passing
    const auto inner = barrier_check<2>(ball, 0.8, 0.4, 0.05, 1.0 / 16, bo);
    EXPECT_TRUE(inner.all_negative);
    EXPECT_LE(inner.nodes.size(), rep.nodes.size());
}

TEST(Barrier, DiscreteModeNegative)
{
    BarrierOptions bo;
    bo.mode = BarrierMode::discrete;
    const auto rep = barrier_check<2>(DomainSpec<2>::unit_ball(), 0.8, 0.4, 0.2, 1.0 / 32, bo);
    EXPECT_TRUE(rep.all_negative);
}

TEST(Barrier, BoundaryCaseAndDomain)
{
    const DomainSpec<1> iv = unit_interval;
    BarrierOptions bo;
    const auto rep = barrier_check<1>(iv, 0.6, 0.6, 0.1, 1.0 / 64, bo);
    EXPECT_TRUE(rep.boundary_case);
    EXPECT_THROW(barrier_check<1>(iv, 0.6, 0.7, 0.1, 1.0 / 64, bo), DomainError);
}

TEST(ExtremalLimit, NormalTangentialOblique)
{
    const auto ball = DomainSpec<2>::unit_ball();
    const double s = 0.8, alpha = 0.4;
    const Point<2> xb{1.0, 0.0};
    const auto normal = extremal_limit_check<2>(ball, s, alpha, xb, Direction<2>::axis(0));
    EXPECT_NEAR(normal.expected, eval_l(s, alpha).value, 1e-12);
    EXPECT_NEAR(normal.estimate, normal.expected, 0.02 * std::abs(normal.expected));
    const auto tangential = extremal_limit_check<2>(ball, s, alpha, xb, Direction<2>::axis(1));
    EXPECT_EQ(tangential.expected, 0.0);
    EXPECT_LT(std::abs(tangential.estimate), 0.05);
    const auto oblique = extremal_limit_check<2>(ball, s, alpha, xb, Direction<2>::angle(std::numbers::pi / 4));
    EXPECT_NEAR(oblique.expected, std::pow(2.0, -s) * eval_l(s, alpha).value, 1e-12);
    EXPECT_NEAR(oblique.extrapolated, oblique.expected, 0.05 * std::abs(oblique.expected));
    // successive estimates tighten
    EXPECT_LT(std::abs(normal.products[2] - normal.products[1]), std::abs(normal.products[1] - normal.products[0]));
}

TEST(Liouville, ZeroDataGivesZeroSeminorms)
{
    LiouvilleOptions opt;
    opt.amplitude = 0.0;
    opt.h = 1.0 / 8;
    opt.directions = 8;
    const auto tab = liouville_experiment(0.9, {1.0, 2.0}, opt);
    ASSERT_EQ(tab.rows.size(), 2u);
    for (const auto& r : tab.rows) {
        EXPECT_EQ(r.seminorm, 0.0);
        EXPECT_EQ(r.sup_norm, 0.0);
    }
}
