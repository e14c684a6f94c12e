#include "frac_hardy/bounds.hpp"
#include "frac_hardy/rayleigh.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace frac_hardy;
using namespace frac_hardy::bounds;

TEST(ImprovedCheeger, Examples)
{
    EXPECT_NEAR(improved_cheeger_s1(1, 4.0, 2.0).value, 5.0625, 1e-13);
    // Close to p = N the max factor is 1 and the classical (h1/p)^p remains.
    EXPECT_NEAR(improved_cheeger_s1(2, 2.5, 3.0).value, std::pow(3.0 / 2.5, 2.5), 1e-13);
    EXPECT_THROW((void)improved_cheeger_s1(2, 2.0, 1.0), Error);
    EXPECT_THROW((void)improved_cheeger_s1(3, 1.5, 1.0), Error);
}

TEST(ImprovedCheeger, LargePRootApproachesH1OverN)
{
    for (int n : {1, 2, 3})
        for (double h1 : {0.5, 2.0, 3.772}) {
            const double root = std::pow(improved_cheeger_s1(n, 200.0, h1).value, 1.0 / 200.0);
            EXPECT_NEAR(root / (h1 / n), 1.0, 0.02) << n << " " << h1;
        }
}

TEST(LambdaSInfinity, Examples)
{
    EXPECT_EQ(lambda_s_infinity(DomainModel::ball(2, 3.0), 0.7), std::pow(3.0, -0.7));
    EXPECT_EQ(lambda_s_infinity(DomainModel::ball(1, 2.0), 1.0), 0.5);
    EXPECT_EQ(lambda_s_infinity(DomainModel::punctured(2, {{0, 0}}), 0.5), 0.0);
    EXPECT_EQ(lambda_s_infinity(DomainModel::half_space(3), 0.5), 0.0);
    EXPECT_NEAR(lambda_s_infinity(DomainModel::box({1, 4}), 0.5), std::sqrt(2.0), 1e-15);
    EXPECT_THROW((void)lambda_s_infinity(DomainModel::ball(1, 1.0), 0.0), Error);
    EXPECT_THROW((void)lambda_s_infinity(DomainModel::ball(1, 1.0), 1.5), Error);
}

TEST(LambdaSInfinity, DominatesCheegerPower)
{
    const DomainModel ds[] = {DomainModel::ball(2, 0.7), DomainModel::box({1, 1}), DomainModel::box({1, 4}),
                              DomainModel::box({0.3, 2})};
    for (const auto& d : ds)
        for (double s : {0.2, 0.5, 0.9, 1.0}) {
            const double h1 = geometry::cheeger_h1(d).value;
            EXPECT_GE(lambda_s_infinity(d, s), std::pow(h1 / d.dim, s) * (1 - 1e-12));
        }
    const auto b = DomainModel::ball(3, 2.0);
    EXPECT_NEAR(lambda_s_infinity(b, 0.6), std::pow(geometry::cheeger_h1(b).value / 3, 0.6), 1e-14);
}

TEST(EigenvalueBounds, BallEquality)
{
    for (auto [n, s, p] : {std::tuple{1, 0.9, 2.0}, {2, 0.8, 3.0}, {3, 0.75, 5.0}}) {
        const auto rep = eigenvalue_lower_bounds({n, s, p}, DomainModel::ball(n, 1.7));
        ASSERT_TRUE(rep.cheeger_bound.has_value());
        EXPECT_NEAR(rep.cheeger_bound->value / rep.inradius_bound.value, 1.0, 1e-12);
        EXPECT_GT(rep.inradius_bound.value, 0.0);
        EXPECT_GT(rep.fractional_cheeger_bound->value, 0.0);
        EXPECT_TRUE(rep.fractional_cheeger_heuristic);
        EXPECT_EQ(rep.improved_classical.has_value(), p > n);
        EXPECT_EQ(rep.lambda_s_infinity, std::pow(1.7, -s));
    }
}

TEST(EigenvalueBounds, UnitSquare)
{
    const FracParams fp{2, 0.9, 3.0};
    const auto rep = eigenvalue_lower_bounds(fp, DomainModel::box({1, 1}));
    const double h = constants::hardy_constant(fp).value.value;
    const double h1 = 2 + std::sqrt(std::numbers::pi);
    ASSERT_TRUE(rep.cheeger_bound.has_value());
    EXPECT_NEAR(rep.cheeger_bound->value / (h * std::pow(h1 / 2, fp.sp())), 1.0, 1e-10);
    EXPECT_NEAR(rep.inradius_bound.value / (h * std::pow(2.0, fp.sp())), 1.0, 1e-14);
    EXPECT_LE(rep.cheeger_bound->value, rep.inradius_bound.value);
    EXPECT_NEAR(rep.improved_classical->value, std::pow(h1 / 3, 3), 1e-10);
}

TEST(EigenvalueBounds, OrderingOnBoxes)
{
    for (auto sides : {std::vector<double>{1, 1}, {1, 4}, {0.2, 3}, {2, 2.5}}) {
        const auto rep = eigenvalue_lower_bounds({2, 0.85, 4.0}, DomainModel::box(sides));
        ASSERT_TRUE(rep.cheeger_bound.has_value());
        EXPECT_LE(rep.cheeger_bound->value, rep.inradius_bound.value * (1 + 1e-12));
    }
    // No h1 for boxes in N = 3: the Cheeger entries stay empty.
    const auto rep3 = eigenvalue_lower_bounds({3, 0.9, 4.0}, DomainModel::box({1, 2, 3}));
    EXPECT_FALSE(rep3.cheeger_bound.has_value());
    EXPECT_FALSE(rep3.improved_classical.has_value());
    EXPECT_GT(rep3.inradius_bound.value, 0.0);
}

TEST(EigenvalueBounds, Errors)
{
    try {
        (void)eigenvalue_lower_bounds({1, 0.9, 2.0}, DomainModel::punctured(1, {{0}}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::unbounded_inradius);
    }
    try {
        (void)eigenvalue_lower_bounds({2, 0.5, 3.0}, DomainModel::ball(2, 1.0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::critical_exponent);
    }
    EXPECT_THROW((void)eigenvalue_lower_bounds({2, 0.9, 3.0}, DomainModel::ball(1, 1.0)), Error);
}

TEST(EigenvalueBounds, PoincareQuotientAboveInradiusBound)
{
    const FracParams fp{1, 0.9, 2.0};
    const auto d = DomainModel::ball(1, 1.0);
    const auto rep = eigenvalue_lower_bounds(fp, d);
    for (double r : {0.3, 0.6, 0.99}) {
        const auto q = rayleigh::poincare_quotient(fp, d, TrialFunction::bump({0.0}, r));
        EXPECT_GE(q.quotient.value + q.quotient.error, rep.inradius_bound.value - rep.inradius_bound.error) << r;
    }
}
