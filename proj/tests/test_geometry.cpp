#include "frac_hardy/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace frac_hardy;
using namespace frac_hardy::geometry;

TEST(Distance, Examples)
{
    EXPECT_NEAR(distance_to_boundary(DomainModel::punctured(2, {{0, 0}}), Point{0.7, 0.0}), 0.7, 1e-15);
    EXPECT_NEAR(distance_to_boundary(DomainModel::ball(2, 2.0), Point{1, 0}), 1.0, 1e-15);
    const auto two = DomainModel::punctured(2, {{0, 0}, {1, 0}});
    const Point x{0.3, 0.4};
    EXPECT_NEAR(distance_to_boundary(two, x), std::min(0.5, std::hypot(0.7, 0.4)), 1e-15);
    EXPECT_EQ(distance_to_boundary(two, Point{1, 0}), 0.0);
    EXPECT_EQ(distance_to_boundary(DomainModel::ball(2, 1.0), Point{3, 0}), 0.0);
    EXPECT_NEAR(distance_to_boundary(DomainModel::box({1, 4}), Point{0.1, 1.5}), 0.4, 1e-15);
    EXPECT_EQ(distance_to_boundary(DomainModel::half_space(2), Point{5, -1}), 0.0);
    EXPECT_EQ(distance_to_boundary(DomainModel::half_space(2), Point{5, 2}), 2.0);
}

TEST(Distance, OneLipschitz)
{
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> u(-3, 3);
    const DomainModel domains[] = {
        DomainModel::punctured(2, {{0, 0}, {1, 0}, {0, 2}}), DomainModel::ball(2, 1.5, {0.2, -0.1}),
        DomainModel::box({1, 3}), DomainModel::half_space(2), DomainModel::ball(3, 2.0),
        DomainModel::box({2, 1, 4})};
    for (const auto& d : domains)
        for (int i = 0; i < 2000; ++i) {
            Point x(d.dim), y(d.dim);
            for (int k = 0; k < d.dim; ++k) {
                x[k] = u(gen);
                y[k] = u(gen);
            }
            EXPECT_LE(std::fabs(distance_to_boundary(d, x) - distance_to_boundary(d, y)), distance(x, y) + 1e-14);
        }
}

TEST(Inradius, Examples)
{
    EXPECT_EQ(inradius(DomainModel::ball(3, 3.0)), 3.0);
    EXPECT_EQ(inradius(DomainModel::box({1, 4})), 0.5);
    EXPECT_TRUE(std::isinf(inradius(DomainModel::punctured(1, {{0}}))));
    EXPECT_TRUE(std::isinf(inradius(DomainModel::half_space(3))));
}

TEST(Validate, RejectsMalformed)
{
    EXPECT_THROW(validate(DomainModel::punctured(1, {})), Error);
    EXPECT_THROW(validate(DomainModel::punctured(1, {{0}, {0}})), Error);
    EXPECT_THROW(validate(DomainModel::ball(2, -1.0)), Error);
    EXPECT_THROW(validate(DomainModel::box({1, 0})), Error);
}

TEST(Cheeger, Examples)
{
    EXPECT_EQ(cheeger_h1(DomainModel::ball(2, 1.0)).value, 2.0);
    const double sq = 2 + std::sqrt(std::numbers::pi);
    EXPECT_NEAR(cheeger_h1(DomainModel::box({1, 1})).value, sq, 1e-10);
    EXPECT_NEAR(cheeger_h1(DomainModel::box({2, 2})).value, sq / 2, 1e-10);
}

TEST(Cheeger, RootMatchesQuadraticFormula)
{
    // (a-2r)(b-2r) = pi r^2  <=>  (4 - pi) r^2 - 2(a+b) r + ab = 0, smaller root.
    for (auto [a, b] : {std::pair{1.0, 4.0}, std::pair{0.3, 0.7}, std::pair{5.0, 5.5}}) {
        const double k = 4 - std::numbers::pi;
        const double r = ((a + b) - std::sqrt((a + b) * (a + b) - k * a * b)) / k;
        EXPECT_NEAR(cheeger_h1(DomainModel::box({a, b})).value * r, 1.0, 1e-11);
    }
}

TEST(Cheeger, BelowInradiusBound)
{
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> u(0.1, 5);
    for (int i = 0; i < 100; ++i) {
        const auto d = DomainModel::box({u(gen), u(gen)});
        EXPECT_LE(cheeger_h1(d).value, 2 / inradius(d) + 1e-12);
    }
    for (int n = 1; n <= 4; ++n) EXPECT_EQ(cheeger_h1(DomainModel::ball(n, 1.7)).value, n / 1.7);
}

TEST(Cheeger, Unsupported)
{
    for (const auto& d : {DomainModel::punctured(2, {{0, 0}}), DomainModel::half_space(2), DomainModel::box({1, 2, 3})}) {
        try {
            (void)cheeger_h1(d);
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::unsupported_domain);
        }
    }
}

TEST(SPerimeter, OneDimensionalClosedForm)
{
    // P_s((-1,1)) = 2 * 2 * int_1^inf ... = 2^{3-s} / (s (1-s))
    for (double s : {0.2, 0.5, 0.8})
        EXPECT_NEAR(s_perimeter_ball(1, s, 1.0).value / (std::pow(2, 3 - s) / (s * (1 - s))), 1.0, 1e-10);
}

TEST(SPerimeter, MatchesDirectDoubleIntegral)
{
    // 2 * int_{-1}^{1} int_1^inf |x-y|^{-1.5} dy dx by nested quadrature (y = 1 + v/(1-v)).
    const double s = 0.5;
    auto outer = [&](double, double left, double right) {
        // left = 1 + x and right = 1 - x to full precision; clamping below 1e-150
        // moves the integral by less than 1e-70.
        left = std::max(left, 1e-150);
        right = std::max(right, 1e-150);
        auto inner = [&](double, double lg, double rg) {
            const double t = lg / rg; // y - 1
            return (std::pow(t + right, -1 - s) + std::pow(t + left, -1 - s)) / (rg * rg);
        };
        return quad::integrate_tanh_sinh(inner, 0.0, 1.0, quad::singular({1e-10, 1e-300, 8192})).value;
    };
    const auto direct = quad::integrate_tanh_sinh(outer, -1.0, 1.0, quad::singular({1e-9, 1e-300, 8192}));
    EXPECT_NEAR(s_perimeter_ball(1, s, 1.0).value / (2 * direct.value), 1.0, 1e-6);
}

// Each chord of half-length h contributes (2h)^{1-s}/(1-s), so
// P_s(B_R) = (2/s)|S^{N-1}| 2^{1-s}/(1-s) int_{B^{N-1}_R} (R^2 - |y|^2)^{(1-s)/2} dy, a Gamma-function closed form.
TEST(SPerimeter, ChordClosedForm)
{
    for (int n = 1; n <= 4; ++n)
        for (double s : {0.2, 0.5, 0.8, 0.95})
            for (double R : {0.5, 2.0}) {
                const double a = 0.5 * (1 - s);
                const double cross = std::pow(R, n - 1 + 2 * a) * std::pow(std::numbers::pi, 0.5 * (n - 1)) *
                                     std::tgamma(a + 1) / std::tgamma(a + 1 + 0.5 * (n - 1));
                const double closed = 2 / s * specfun::sphere_area(n - 1).value * std::pow(2.0, 1 - s) / (1 - s) * cross;
                EXPECT_NEAR(s_perimeter_ball(n, s, R).value / closed, 1.0, 1e-12) << n << " " << s << " " << R;
            }
}

TEST(SPerimeter, Scaling)
{
    for (int n = 1; n <= 3; ++n)
        for (double s : {0.3, 0.5, 0.9}) {
            const double one = s_perimeter_ball(n, s, 1.0).value;
            EXPECT_NEAR(s_perimeter_ball(n, s, 2.0).value / one, std::pow(2.0, n - s), 1e-12 * std::pow(2.0, n));
        }
}

TEST(SPerimeter, MonteCarloAgrees)
{
    for (int n = 1; n <= 2; ++n) {
        mc::McSpec spec;
        spec.samples = 200000;
        spec.seed = 3;
        spec.stratification = mc::Stratification::radial_shells;
        const auto m = s_perimeter_ball_mc(n, 0.5, 1.3, spec);
        const auto d = s_perimeter_ball(n, 0.5, 1.3);
        EXPECT_LE(std::fabs(m.value - d.value), m.error + d.error);
    }
}

TEST(SPerimeter, FractionalCheegerDirection)
{
    // (h_1)^s >= (1-s) s / (2 N omega_N) * P_s(B_r)/|B_r| on supported bounded domains.
    const DomainModel domains[] = {DomainModel::ball(2, 1.0), DomainModel::ball(3, 0.4), DomainModel::box({1, 1}),
                                   DomainModel::box({1, 4})};
    for (const auto& d : domains)
        for (double s : {0.2, 0.5, 0.9}) {
            const double lhs = std::pow(cheeger_h1(d).value, s);
            const double rhs = (1 - s) * s / (2 * d.dim * specfun::ball_volume(d.dim).value) * h_s_upper(d, s).value;
            EXPECT_GE(lhs, rhs - 1e-10);
        }
}
