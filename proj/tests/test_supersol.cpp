#include "frac_hardy/supersol.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace frac_hardy;
using namespace frac_hardy::supersol;

namespace {

BetaExponent fraction_of_upper(const FracParams& fp, double f) { return {f * constants::beta_upper(fp), fp}; }

} // namespace

// d^beta with beta = (sp - N)/p solves the equation with lambda = h_{s,p}: residual is zero.
TEST(Pairing, ExactSolutionSinglePuncture)
{
    const auto d = DomainModel::punctured(1, {{0.0}});
    for (auto fp : {FracParams{1, 0.9, 2.0}, FracParams{1, 0.9, 3.0}, FracParams{1, 0.75, 4.0}, FracParams{1, 0.6, 5.0}}) {
        const BetaExponent be{constants::hardy_beta(fp), fp};
        const double lambda = constants::c_beta(be).value;
        const auto r = check_pairing(fp, d, be, lambda, TrialFunction::bump({1.5}, 0.5));
        EXPECT_LE(std::fabs(r.residual.value), r.residual.error) << fp.p;
        EXPECT_LT(r.residual.error, 1e-6 * r.rhs.value);
        EXPECT_EQ(r.verdict, Verdict::supersolution_ok);
    }
}

TEST(Pairing, ExactSolutionMonteCarlo)
{
    const FracParams fp{2, 0.8, 3.0};
    const BetaExponent be{constants::hardy_beta(fp), fp};
    const auto d = DomainModel::punctured(2, {{0.0, 0.0}});
    const auto r = check_pairing(fp, d, be, constants::c_beta(be).value, TrialFunction::bump({1.0, 0.5}, 0.4));
    EXPECT_EQ(r.residual.method, Method::monte_carlo);
    EXPECT_LE(std::fabs(r.residual.value), r.residual.error);
    EXPECT_NE(r.verdict, Verdict::violation);
}

TEST(Pairing, MonteCarloDeterministic)
{
    const FracParams fp{2, 0.8, 3.0};
    const auto d = DomainModel::punctured(2, {{0.0, 0.0}, {1.0, 0.0}});
    const auto be = fraction_of_upper(fp, 0.5);
    SupersolOptions opt;
    opt.mc.samples = 20000;
    opt.mc.seed = 4;
    const auto phi = TrialFunction::bump({0.4, 0.6}, 0.3);
    const auto a = pairing_lhs(fp, d, be, phi, opt);
    const auto b = pairing_lhs(fp, d, be, phi, opt);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.error, b.error);
}

// lambda * int phi d^{-q} on (0.1, 0.4) with punctures {0, 1}; q = 1.85 for s = 0.9, p = 3, beta = 0.425.
TEST(Pairing, RhsOracleTwoPunctures)
{
    const FracParams fp{1, 0.9, 3.0};
    const BetaExponent be{0.425, fp};
    const auto d = DomainModel::punctured(1, {{0.0}, {1.0}});
    const auto phi = TrialFunction::bump({0.25}, 0.15);
    EXPECT_NEAR(rhs_weighted(fp, d, be, 1.0, phi).value, 2.79000012915989518, 1e-10 * 2.79);
    EXPECT_NEAR(rhs_weighted(fp, d, be, 3.5, phi).value, 3.5 * 2.79000012915989518, 1e-9);
    EXPECT_EQ(rhs_weighted(fp, d, be, 0.0, phi).value, 0.0);
}

TEST(Pairing, LinearInPhi)
{
    const FracParams fp{1, 0.9, 3.0};
    const auto d = DomainModel::punctured(1, {{0.0}, {1.0}});
    const auto be = fraction_of_upper(fp, 0.5);
    const auto a = pairing_lhs(fp, d, be, TrialFunction::bump({1.6}, 0.3));
    const auto b = pairing_lhs(fp, d, be, TrialFunction::bump({1.6}, 0.3, 2.5));
    EXPECT_NEAR(b.value, 2.5 * a.value, 2.5 * a.error + b.error);
    EXPECT_EQ(pairing_lhs(fp, d, be, TrialFunction::bump({1.6}, 0.3, 0.0)).value, 0.0);
}

// Where one puncture is strictly nearer, d = |x - x0| and the local term is the single-puncture one.
TEST(Pairing, MinStabilityOfRhs)
{
    const FracParams fp{1, 0.9, 3.0};
    const auto be = fraction_of_upper(fp, 0.75);
    const auto phi = TrialFunction::bump({0.8}, 0.3);
    const auto two = DomainModel::punctured(1, {{0.0}, {3.0}});
    const auto one = DomainModel::punctured(1, {{0.0}});
    EXPECT_EQ(rhs_weighted(fp, two, be, 1.3, phi).value, rhs_weighted(fp, one, be, 1.3, phi).value);
    // The nonlocal term sees the second puncture: U is smaller there, so the pairing grows.
    EXPECT_GT(pairing_lhs(fp, two, be, phi).value, pairing_lhs(fp, one, be, phi).value);
}

TEST(Pairing, InputChecks)
{
    const FracParams fp{1, 0.9, 3.0};
    const auto be = fraction_of_upper(fp, 0.5);
    const auto d = DomainModel::punctured(1, {{0.0}, {1.0}});
    try {
        (void)pairing_lhs(fp, d, be, TrialFunction::bump({0.9}, 0.3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::support_violation);
    }
    try {
        (void)pairing_lhs(fp, DomainModel::ball(1, 3.0), be, TrialFunction::bump({0.0}, 0.3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::unsupported_domain);
    }
    EXPECT_THROW((void)pairing_lhs(fp, d, be, TrialFunction::bump({2.0}, 0.3, -1.0)), Error);
    EXPECT_THROW((void)pairing_lhs(fp, d, BetaExponent{constants::beta_upper(fp), fp}, TrialFunction::bump({2.0}, 0.3)),
                 Error);
    EXPECT_THROW((void)pairing_lhs({1, 0.5, 2.0}, d, BetaExponent{0.1, {1, 0.5, 2.0}}, TrialFunction::bump({2.0}, 0.3)),
                 Error);
}

TEST(Verdicts, Rules)
{
    EXPECT_EQ(verdict({0.5, 0.01, Method::tanh_sinh}, {1.0, 0, Method::tanh_sinh}, 0.1), Verdict::supersolution_ok);
    EXPECT_EQ(verdict({-0.005, 0.01, Method::tanh_sinh}, {1.0, 0, Method::tanh_sinh}, 0.1), Verdict::supersolution_ok);
    EXPECT_EQ(verdict({-0.5, 0.01, Method::tanh_sinh}, {1.0, 0, Method::tanh_sinh}, 0.1), Verdict::violation);
    EXPECT_EQ(verdict({0.5, 0.2, Method::monte_carlo}, {1.0, 0, Method::tanh_sinh}, 0.1), Verdict::inconclusive);
    EXPECT_EQ(verdict({NAN, 0.0, Method::tanh_sinh}, {1.0, 0, Method::tanh_sinh}, 0.1), Verdict::inconclusive);
}

TEST(Corpus, SeededAndAdmissible)
{
    const auto d = DomainModel::punctured(1, {{0.0}, {1.0}, {3.0}});
    const auto a = bump_corpus(d, 20, 7);
    const auto b = bump_corpus(d, 20, 7);
    ASSERT_EQ(a.size(), 20u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].center, b[i].center);
        EXPECT_EQ(a[i].radius, b[i].radius);
        EXPECT_GE(geometry::distance_to_boundary(d, a[i].center) - a[i].radius, 0.05 - 1e-12);
        EXPECT_GE(a[i].amplitude, 0.5);
        EXPECT_LE(a[i].amplitude, 2.0);
    }
    EXPECT_NE(bump_corpus(d, 20, 8)[0].center, a[0].center);
}

TEST(Campaign, NoViolationsBelowUpperExponent)
{
    const FracParams fp{1, 0.9, 3.0};
    const auto d = DomainModel::punctured(1, {{0.0}, {1.0}});
    const auto phis = bump_corpus(d, 8, 7);
    for (double f : {0.25, 0.75}) {
        const auto res = verify_supersolution(fp, d, fraction_of_upper(fp, f), phis);
        for (const auto& r : res) {
            EXPECT_EQ(r.verdict, Verdict::supersolution_ok) << f << " " << r.residual.value;
            EXPECT_GE(r.lhs.value, r.rhs.value - r.residual.error);
        }
    }
}
