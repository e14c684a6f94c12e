#include "frac_hardy/constants.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>

using namespace frac_hardy;
using namespace frac_hardy::constants;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

double simpson(const std::function<double(double)>& f, double a, double b, int n)
{
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
    return s * h / 3;
}

// Independent brute-force oracle for N = 1 and p = 2: the reduced integral with
// r = v^4 on [0, 1/2] and 1 - r = u^2 on [1/2, 1], composite Simpson on each piece.
double hardy_oracle_1d_p2(double s)
{
    const double sp = 2 * s, c = (sp - 1) / 2;
    auto phi = [&](double r) { return std::pow(1 - r, -1 - sp) + std::pow(1 + r, -1 - sp); };
    auto lower = [&](double v) {
        if (v == 0) return 0.0;
        const double r = std::pow(v, 4);
        return std::pow(1 - std::pow(r, c), 2) * phi(r) * 4 * v * v * v;
    };
    auto upper = [&](double u) {
        u = std::max(u, 1e-9);
        const double g = u * u;
        const double diff = std::expm1(c * std::log1p(-g));
        return diff * diff * (std::pow(g, -1 - sp) + std::pow(2 - g, -1 - sp)) * 2 * u;
    };
    return 2 * (simpson(lower, 0.0, std::pow(0.5, 0.25), 20000) + simpson(upper, 0.0, std::sqrt(0.5), 20000));
}

} // namespace

TEST(HardyConstant, RepresentationsAgree)
{
    const auto h = hardy_constant({2, 0.9, 4});
    EXPECT_EQ(h.representation, Representation::frank_seiringer);
    EXPECT_LE(std::fabs(h.value.value - h.cross_check.value), h.value.error + h.cross_check.error);
    EXPECT_GT(h.value.value, 0.0);
}

TEST(HardyConstant, MatchesSimpsonOracle)
{
    for (double s : {0.75, 0.25}) {
        const auto h = hardy_constant({1, s, 2});
        EXPECT_GT(h.value.value, 0.0);
        EXPECT_LE(rel(h.value.value, hardy_oracle_1d_p2(s)), 1e-6) << s;
    }
}

TEST(HardyConstant, MatchesHighPrecisionReference)
{
    // 30-digit quadrature of the reduced form with the hypergeometric/closed kernel.
    EXPECT_LE(rel(hardy_constant({2, 0.9, 4}).value.value, 0.213910846841544439244902594384), 1e-10);
    EXPECT_LE(rel(hardy_constant({3, 0.9, 5}).value.value, 0.0141313657885651478456649376469), 1e-10);
}

TEST(HardyConstant, RegressionValues)
{
    EXPECT_NEAR(hardy_constant({1, 0.75, 2}).value.value, 0.511988584660499, 1e-10);
    EXPECT_NEAR(hardy_constant({1, 0.25, 2}).value.value, 1.40370859976645, 1e-9);
    EXPECT_NEAR(hardy_constant({1, 0.9, 3}).value.value, 1.75098386043685, 1e-9);
}

TEST(HardyConstant, RejectsCriticalExponent)
{
    try {
        (void)hardy_constant({2, 0.5, 4});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::critical_exponent);
    }
}

TEST(HardyConstant, StableUnderTighterTolerance)
{
    for (FracParams fp : {FracParams{1, 0.8, 3}, FracParams{2, 0.7, 4}, FracParams{3, 0.95, 4}}) {
        const auto coarse = hardy_constant(fp);
        quad::QuadSpec fine;
        fine.rel_tol = 1e-12;
        const auto tight = hardy_constant(fp, fine);
        EXPECT_LE(std::fabs(coarse.value.value - tight.value.value), coarse.value.error + tight.value.error);
    }
}

TEST(CBeta, EqualsHardyAtExactExponent)
{
    const FracParams grid[] = {
        {1, 0.75, 2}, {1, 0.9, 3}, {1, 0.6, 2.5}, {1, 0.3, 5}, {1, 0.85, 7},
        {2, 0.9, 3}, {2, 0.7, 4}, {2, 0.95, 2.5}, {2, 0.55, 5}, {2, 0.8, 6},
        {3, 0.9, 4}, {3, 0.7, 5}, {3, 0.95, 3.5}, {3, 0.6, 7}, {3, 0.8, 4.5},
    };
    for (const auto& fp : grid) {
        const auto h = hardy_constant(fp).value;
        const auto c = c_beta({hardy_beta(fp), fp});
        EXPECT_LE(std::fabs(c.value - h.value), c.error + h.error) << fp.dim << " " << fp.s << " " << fp.p;
        EXPECT_LE(rel(c.value, h.value), 1e-6);
    }
}

TEST(CBeta, VanishesAsBetaShrinks)
{
    FracParams fp{1, 0.9, 3};
    EXPECT_LE(c_beta({1e-4, fp}).value, 1e-3 * c_beta({hardy_beta(fp), fp}).value);
}

TEST(CBeta, PositiveAcrossInterval)
{
    for (FracParams fp : {FracParams{1, 0.9, 3}, FracParams{2, 0.95, 4}, FracParams{3, 0.9, 5}}) {
        const double hi = beta_upper(fp);
        for (int i = 1; i <= 9; ++i) EXPECT_GT(c_beta({hi * i / 10.0, fp}).value, 0.0);
    }
}

TEST(CBeta, StableUnderNodeDoubling)
{
    FracParams fp{2, 0.95, 4};
    const double mid = 0.5 * beta_upper(fp);
    const auto a = c_beta({mid, fp});
    quad::QuadSpec tight;
    tight.rel_tol = 1e-13;
    const auto b = c_beta({mid, fp}, tight);
    EXPECT_GT(a.value, 0.0);
    EXPECT_LE(rel(a.value, b.value), 1e-8);
}

TEST(CBeta, MaximalAtHardyExponent)
{
    // C(beta) <= h_{s,p} on the admissible interval, with equality at (sp-N)/p.
    FracParams fp{1, 0.9, 3};
    const double h = hardy_constant(fp).value.value;
    const double hi = beta_upper(fp);
    for (int i = 1; i <= 9; ++i) EXPECT_LE(c_beta({hi * i / 10.0, fp}).value, h * (1 + 1e-9));
}

TEST(CBeta, RejectsOutOfRange)
{
    FracParams fp{1, 0.9, 3};
    auto kind = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::invalid_config;
    };
    EXPECT_EQ(kind([&] { (void)c_beta({0.0, fp}); }), ErrorKind::beta_out_of_range);
    EXPECT_EQ(kind([&] { (void)c_beta({beta_upper(fp), fp}); }), ErrorKind::beta_out_of_range);
    EXPECT_EQ(kind([&] { (void)c_beta({0.1, FracParams{2, 0.5, 3}}); }), ErrorKind::critical_exponent);
}

TEST(Kpn, KnownValues)
{
    EXPECT_NEAR(k_pn(1, 7).value, 2.0 / 7.0, 1e-16);
    EXPECT_NEAR(k_pn(3, 4).value, std::numbers::pi / 5, 1e-12);
    // (1/2) integral of omega_1^2 over the sphere = |S^{N-1}|/(2N) = omega_N/2
    for (int n = 1; n <= 6; ++n) EXPECT_LE(rel(k_pn(n, 2).value, specfun::ball_volume(n).value / 2), 1e-10);
    EXPECT_THROW((void)k_pn(0, 2), Error);
    EXPECT_THROW((void)k_pn(2, 1), Error);
}

TEST(Kpn, MatchesBetaClosedForm)
{
    for (int n = 2; n <= 5; ++n)
        for (double p : {1.5, 2.5, 5.0, 11.0}) {
            const double ref = specfun::sphere_area(n - 2).value / p * specfun::beta(0.5 * (p + 1), 0.5 * (n - 1)).value;
            EXPECT_LE(rel(k_pn(n, p).value, ref), 1e-10);
        }
}

TEST(LowerBound, PassThroughAndHypothesis)
{
    EXPECT_EQ(lower_bound_open_set({1, 0.9, 2}).value, hardy_constant({1, 0.9, 2}).value.value);
    EXPECT_GT(lower_bound_open_set({2, 0.8, 3}).value, 0.0);
    try {
        (void)lower_bound_open_set({2, 0.4, 3});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::critical_exponent);
    }
}
