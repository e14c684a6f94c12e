#include "frac_hardy/asymptotics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace frac_hardy;
using namespace frac_hardy::asymptotics;

TEST(Richardson, ConstantSequence)
{
    const auto e = richardson_extrapolate({{0.4, 3.25}, {0.2, 3.25}, {0.1, 3.25}});
    EXPECT_EQ(e.value, 3.25);
    EXPECT_EQ(e.error, 0.0);
    EXPECT_EQ(e.method, Method::extrapolation);
}

TEST(Richardson, LinearModelEliminated)
{
    auto v = [](double h) { return 1.7 + 0.9 * h; };
    const auto e = richardson_extrapolate({{0.4, v(0.4)}, {0.2, v(0.2)}, {0.1, v(0.1)}});
    EXPECT_NEAR(e.value, 1.7, 1e-12);
}

TEST(Richardson, QuadraticModelEliminated)
{
    auto v = [](double h) { return -0.3 + 2.1 * h - 5.0 * h * h; };
    const auto e = richardson_extrapolate({{0.4, v(0.4)}, {0.2, v(0.2)}, {0.1, v(0.1)}});
    EXPECT_NEAR(e.value, -0.3, 1e-10);
}

TEST(Richardson, OrderHint)
{
    auto v = [](double h) { return 2.0 + std::sqrt(h) - h; };
    const auto e = richardson_extrapolate({{0.4, v(0.4)}, {0.2, v(0.2)}, {0.1, v(0.1)}, {0.05, v(0.05)}}, 0.5);
    EXPECT_NEAR(e.value, 2.0, 1e-10);
}

TEST(Richardson, Preconditions)
{
    try {
        (void)richardson_extrapolate({{0.4, 1.0}, {0.2, 1.0}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::insufficient_samples);
    }
    EXPECT_THROW((void)richardson_extrapolate({{0.1, 1.0}, {0.2, 1.0}, {0.3, 1.0}}), Error);
}

TEST(LimitS1, OneDimensionalQuadratic)
{
    const auto rep = limit_s_to_1(1, 2, {0.9, 0.95, 0.975, 0.9875});
    EXPECT_NEAR(rep.target, 0.25, 1e-15);
    for (auto [s, v] : rep.samples) {
        EXPECT_GT(v, 0.0);
        EXPECT_TRUE(std::isfinite(v));
    }
    EXPECT_TRUE(rep.converged);
    EXPECT_NEAR(rep.extrapolated.value, 0.25, 0.0025);
}

TEST(LimitS1, DefaultGridConverges)
{
    for (auto [n, p] : {std::pair{1, 2.0}, std::pair{1, 3.0}, std::pair{2, 5.0}}) {
        const auto rep = limit_s_to_1(n, p, default_s_grid());
        EXPECT_TRUE(rep.converged) << n << " " << p;
        EXPECT_LE(std::fabs(rep.extrapolated.value - rep.target), 0.01 * rep.target);
    }
}

TEST(LimitS1, RegressionGold)
{
    const auto rep = limit_s_to_1(2, 5, default_s_grid());
    EXPECT_NEAR(rep.target, 0.0331776, 1e-12);
    EXPECT_NEAR(rep.extrapolated.value, 0.03317753334, 1e-9);
}

TEST(LimitS1, RejectsBadInput)
{
    EXPECT_THROW((void)limit_s_to_1(2, 1.5, default_s_grid()), Error);
    EXPECT_THROW((void)limit_s_to_1(1, 2, {0.95, 0.9, 0.99}), Error);
    try {
        (void)limit_s_to_1(1, 2, {0.3, 0.5, 0.9});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::critical_exponent);
    }
}

TEST(CN, KnownValues)
{
    EXPECT_EQ(c_n_constant(1).value, 2.0);
    EXPECT_NEAR(c_n_constant(3).value, 2 * std::numbers::pi, 1e-12);
    // N = 2: 2 * 2 * (pi/2 - pi/6) = 4 pi / 3
    EXPECT_NEAR(c_n_constant(2).value, 4 * std::numbers::pi / 3, 1e-10);
}

TEST(Chain, ClosedFormMatchesQuadrature)
{
    for (double c : {0.1, 0.5, 0.8})
        for (double p : {2.0, 9.0, 64.0}) {
            const auto q = quad::integrate_tanh_sinh(
                [&](double r) { return std::pow(1 - std::pow(r, c), p); }, 0.0, 1.0, quad::singular({}));
            EXPECT_NEAR(chain_integral(1, c, p) / q.value, 1.0, 1e-9);
        }
}

TEST(LimitPinf, OneDimension)
{
    const auto rep = limit_p_to_inf(1, 0.75, {2, 4, 8, 16, 32, 64, 128});
    EXPECT_EQ(rep.target, 1.0);
    EXPECT_LT(std::fabs(rep.samples.back().second - 1.0), 0.1);
    const auto n = rep.samples.size();
    for (std::size_t i = n - 3; i < n; ++i)
        EXPECT_LE(std::fabs(rep.samples[i].second - 1), std::fabs(rep.samples[i - 1].second - 1));
    EXPECT_TRUE(rep.chain_bound_holds);
    for (std::size_t i = 0; i < n; ++i) EXPECT_GE(rep.samples[i].second, rep.chain_bounds[i]);
    EXPECT_NEAR(rep.samples.back().second, 0.9623790791, 1e-8);
}

TEST(LimitPinf, ChainHoldsInHigherDimension)
{
    const auto rep = limit_p_to_inf(2, 0.8, {4, 8, 16, 32});
    EXPECT_TRUE(rep.chain_bound_holds);
}
