#pragma once

/**
 * @file specfun.hpp
 * @brief Log-gamma, beta, Gauss 2F1 and sphere/ball measures, each with an error estimate.
 */

#include "frac_hardy/error.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <utility>

namespace frac_hardy::specfun {

struct SpecialValue {
    double value = 0.0;
    double abs_error = 0.0;
};

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

// Lanczos approximation, g = 7, nine terms.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

[[nodiscard]] inline double lanczos_lgamma(double x) noexcept // x >= 0.5
{
    const double xm = x - 1.0;
    double acc = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) acc += kLanczos[i] / (xm + static_cast<double>(i));
    const double t = xm + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (xm + 0.5) * std::log(t) - t + std::log(acc);
}

/// sin(pi x) with exact argument reduction.
[[nodiscard]] inline double sinpi(double x) noexcept
{
    double r = std::fmod(x, 2.0);
    if (r < 0) r += 2.0;
    if (r == 0.0 || r == 1.0) return 0.0;
    if (r > 1.0) return -std::sin(std::numbers::pi * (r - 1.0));
    return std::sin(std::numbers::pi * r);
}

[[nodiscard]] inline bool is_nonpositive_integer(double x) noexcept
{
    return x <= 0.0 && x == std::floor(x);
}

/// ln|Gamma(x)| and the sign of Gamma(x). Poles give {+inf, 0}.
[[nodiscard]] inline std::pair<double, int> lgamma_signed(double x) noexcept
{
    if (is_nonpositive_integer(x)) return {std::numeric_limits<double>::infinity(), 0};
    if (x >= 0.5) return {lanczos_lgamma(x), 1};
    const double sp = sinpi(x);
    const double l = std::log(std::numbers::pi / std::fabs(sp)) - lanczos_lgamma(1.0 - x);
    return {l, sp > 0 ? 1 : -1};
}

} // namespace detail

[[nodiscard]] inline SpecialValue gamma_ln(double x)
{
    require(x > 0.0 && std::isfinite(x), ErrorKind::domain, "gamma_ln requires x > 0");
    const double v = detail::lgamma_signed(x).first;
    return {v, 1e-14 * std::max(1.0, std::fabs(v))};
}

[[nodiscard]] inline SpecialValue beta(double a, double b)
{
    require(a > 0.0 && b > 0.0, ErrorKind::domain, "beta requires positive arguments");
    const auto la = gamma_ln(a), lb = gamma_ln(b), lab = gamma_ln(a + b);
    const double v = std::exp(la.value + lb.value - lab.value);
    return {v, v * (la.abs_error + lb.abs_error + lab.abs_error + 4 * detail::kEps)};
}

/// |S^k|, the surface measure of the unit k-sphere in R^{k+1}.
[[nodiscard]] inline SpecialValue sphere_area(int k)
{
    require(k >= 0, ErrorKind::domain, "sphere_area requires k >= 0");
    const double h = 0.5 * (k + 1);
    const auto lg = gamma_ln(h);
    const double v = 2.0 * std::exp(h * std::log(std::numbers::pi) - lg.value);
    return {v, v * (lg.abs_error + 8 * detail::kEps)};
}

/// omega_N, the volume of the unit ball in R^N.
[[nodiscard]] inline SpecialValue ball_volume(int n)
{
    require(n >= 1, ErrorKind::domain, "ball_volume requires N >= 1");
    const double h = 0.5 * n;
    const auto lg = gamma_ln(h + 1.0);
    const double v = std::exp(h * std::log(std::numbers::pi) - lg.value);
    return {v, v * (lg.abs_error + 8 * detail::kEps)};
}

/// alpha_N = pi^{(N-3)/2} / Gamma((N-1)/2), so that 2 pi alpha_N = |S^{N-2}|.
[[nodiscard]] inline SpecialValue alpha_n(int n)
{
    require(n >= 2, ErrorKind::domain, "alpha_N requires N >= 2");
    const auto lg = gamma_ln(0.5 * (n - 1));
    const double v = std::exp(0.5 * (n - 3) * std::log(std::numbers::pi) - lg.value);
    return {v, v * (lg.abs_error + 8 * detail::kEps)};
}

/// Defining series of 2F1 with term-ratio stopping. Valid for |t| < 1.
[[nodiscard]] inline SpecialValue hyp2f1_series(double a, double b, double c, double t)
{
    require(!detail::is_nonpositive_integer(c), ErrorKind::domain, "2F1: c is a nonpositive integer");
    require(std::fabs(t) < 1.0, ErrorKind::domain, "2F1 series requires |t| < 1");
    double sum = 1.0, term = 1.0, abs_sum = 1.0, weighted = 0.0;
    constexpr int kMaxTerms = 200000;
    for (int k = 0; k < kMaxTerms; ++k) {
        const double kk = k;
        const double ratio = (a + kk) * (b + kk) / ((c + kk) * (kk + 1.0)) * t;
        term *= ratio;
        sum += term;
        abs_sum += std::fabs(term);
        weighted += (kk + 1.0) * std::fabs(term);
        if (term == 0.0) return {sum, 2 * detail::kEps * (abs_sum + weighted)};
        const double next = std::fabs((a + kk + 1) * (b + kk + 1) / ((c + kk + 1) * (kk + 2.0)) * t);
        const double r = std::max(next, std::fabs(t));
        if (r < 1.0 && std::fabs(term) * r / (1.0 - r) <= detail::kEps * std::fabs(sum)) {
            const double tail = std::fabs(term) * r / (1.0 - r);
            return {sum, tail + 2 * detail::kEps * (abs_sum + weighted)};
        }
    }
    fail(ErrorKind::nonconvergent, "2F1 series did not converge", Estimate{sum, std::fabs(term), Method::closed_form});
}

/// 2F1 through the linear transformation in 1 - t. Throws NearDegenerate when
/// c - a - b is within 1e-6 of an integer.
[[nodiscard]] inline SpecialValue hyp2f1_transform(double a, double b, double c, double t)
{
    require(t > 0.0 && t < 1.0, ErrorKind::domain, "2F1 transformation requires 0 < t < 1");
    const double m = c - a - b;
    if (std::fabs(m - std::round(m)) < 1e-6) fail(ErrorKind::near_degenerate, "c - a - b is near an integer");
    const double w = 1.0 - t;
    const auto [lc, sc] = detail::lgamma_signed(c);

    auto part = [&](double g1, double g2, double g3, double fa, double fb, double fc, double prefactor_log) {
        const auto [l1, s1] = detail::lgamma_signed(g1);
        const auto [l2, s2] = detail::lgamma_signed(g2);
        const auto [l3, s3] = detail::lgamma_signed(g3);
        if (s2 == 0 || s3 == 0) return std::pair<double, double>{0.0, 0.0};
        const double lg = lc + l1 - l2 - l3 + prefactor_log;
        const double coef = sc * s1 * s2 * s3 * std::exp(lg);
        const auto f = hyp2f1_series(fa, fb, fc, w);
        const double v = coef * f.value;
        const double gam_err = 1e-14 * (4.0 + std::fabs(lc) + std::fabs(l1) + std::fabs(l2) + std::fabs(l3));
        return std::pair<double, double>{v, std::fabs(coef) * f.abs_error + std::fabs(v) * gam_err};
    };
    const auto [v1, e1] = part(m, c - a, c - b, a, b, 1.0 - m, 0.0);
    const auto [v2, e2] = part(-m, a, b, c - a, c - b, m + 1.0, m * std::log(w));
    const double v = v1 + v2;
    return {v, e1 + e2 + 4 * detail::kEps * (std::fabs(v1) + std::fabs(v2))};
}

/// Fallback used when the transformation is degenerate.
using Hyp2f1Fallback = std::function<SpecialValue()>;

/// Gauss 2F1(a,b;c;t) for 0 <= t < 1: series for t <= 0.5, transformation above.
[[nodiscard]] inline SpecialValue hyp2f1(double a, double b, double c, double t,
                                         const Hyp2f1Fallback& fallback = {})
{
    require(!detail::is_nonpositive_integer(c), ErrorKind::domain, "2F1: c is a nonpositive integer");
    require(t >= 0.0 && t < 1.0, ErrorKind::domain, "2F1 requires 0 <= t < 1");
    if (t <= 0.5) return hyp2f1_series(a, b, c, t);
    try {
        return hyp2f1_transform(a, b, c, t);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::near_degenerate && fallback) return fallback();
        throw;
    }
}

} // namespace frac_hardy::specfun
