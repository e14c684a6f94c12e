#pragma once

/**
 * @file quad.hpp
 * @brief Adaptive Gauss-Kronrod and tanh-sinh quadrature.
 *
 * Integrands are called either as f(x) or as f(x, left_gap, right_gap), where the
 * gaps x - a and b - x are supplied to full relative precision. Integrands that are
 * singular at an endpoint should use the gap instead of recomputing it from x.
 */

#include "frac_hardy/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

namespace frac_hardy::quad {

enum class EndpointMode { none, left_singular, right_singular, both };

struct QuadSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_subdivisions = 2000;
    EndpointMode endpoint_mode = EndpointMode::none;
    /// Measure rel_tol against the integral of |f| instead of |integral of f| (tanh-sinh only).
    bool l1_relative = false;
};

inline void validate(const QuadSpec& spec)
{
    require(spec.rel_tol > 0 && spec.abs_tol > 0, ErrorKind::invalid_config, "quadrature tolerances must be positive");
    require(spec.max_subdivisions >= 1, ErrorKind::invalid_config, "max_subdivisions must be >= 1");
}

[[nodiscard]] inline QuadSpec singular(QuadSpec spec, EndpointMode mode = EndpointMode::both)
{
    spec.endpoint_mode = mode;
    return spec;
}

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

template <class F>
[[nodiscard]] inline double call(F& f, double x, double left_gap, double right_gap)
{
    if constexpr (std::invocable<F&, double, double, double>)
        return static_cast<double>(f(x, left_gap, right_gap));
    else
        return static_cast<double>(f(x));
}

// QUADPACK qk21 abscissae and weights.
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208977791290, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
[[nodiscard]] Segment gk21(F& f, double a, double b, double lo, double hi)
{
    const double half = 0.5 * (b - a);
    const double center = 0.5 * (a + b);
    const double lg0 = a - lo, rg0 = hi - b;
    const double fc = call(f, center, lg0 + half, rg0 + half);
    double resk = fc * kWgk[10];
    double resg = 0.0;
    double resabs = std::fabs(resk);
    std::array<double, 10> f1{}, f2{};
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        const double near = half * (1.0 - kXgk[j]);
        const double v1 = call(f, center - dx, lg0 + near, rg0 + (2 * half - near));
        const double v2 = call(f, center + dx, lg0 + (2 * half - near), rg0 + near);
        f1[j] = v1;
        f2[j] = v2;
        resk += kWgk[j] * (v1 + v2);
        resabs += kWgk[j] * (std::fabs(v1) + std::fabs(v2));
        if (j % 2 == 1) resg += kWg[j / 2] * (v1 + v2);
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[10] * std::fabs(fc - mean);
    for (int j = 0; j < 10; ++j) resasc += kWgk[j] * (std::fabs(f1[j] - mean) + std::fabs(f2[j] - mean));
    resk *= half;
    resg *= half;
    resabs *= std::fabs(half);
    resasc *= std::fabs(half);
    double err = std::fabs(resk - resg);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50 * kEps)) err = std::max(50 * kEps * resabs, err);
    if (!std::isfinite(resk)) err = std::numeric_limits<double>::infinity();
    return {a, b, resk, err};
}

} // namespace detail

/// Adaptive Gauss-Kronrod (21 points) with a global error priority queue.
template <class F>
[[nodiscard]] Estimate integrate_adaptive(F&& f, double a, double b, const QuadSpec& spec = {})
{
    validate(spec);
    require(a < b, ErrorKind::domain, "integrate requires a < b");
    std::priority_queue<detail::Segment> heap;
    auto first = detail::gk21(f, a, b, a, b);
    double total = first.value, err = first.error;
    heap.push(first);
    for (int n = 1;; ++n) {
        if (err <= std::max(spec.rel_tol * std::fabs(total), spec.abs_tol)) break;
        if (n >= spec.max_subdivisions)
            fail(ErrorKind::nonconvergent, "adaptive quadrature exhausted its subdivision budget",
                 Estimate{total, err, Method::adaptive});
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b))
            fail(ErrorKind::nonconvergent, "adaptive quadrature interval underflow",
                 Estimate{total, err, Method::adaptive});
        auto left = detail::gk21(f, worst.a, mid, a, b);
        auto right = detail::gk21(f, mid, worst.b, a, b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Recompute the sums to drop the drift of the incremental updates.
    double v = 0.0, e = 0.0;
    while (!heap.empty()) {
        v += heap.top().value;
        e += heap.top().error;
        heap.pop();
    }
    if (!std::isfinite(v)) fail(ErrorKind::domain, "integrand is not finite on the interval");
    return {v, e, Method::adaptive};
}

/// Tanh-sinh (double exponential) quadrature; endpoint singularities are absorbed
/// by the node clustering. Levels halve the step until successive sums agree.
template <class F>
[[nodiscard]] Estimate integrate_tanh_sinh(F&& f, double a, double b, const QuadSpec& spec = {})
{
    validate(spec);
    require(a < b, ErrorKind::domain, "integrate requires a < b");
    constexpr double kTmax = 6.0;
    const int max_level =
        std::clamp(static_cast<int>(std::floor(std::log2(static_cast<double>(spec.max_subdivisions)))), 3, 12);
    const double half = 0.5 * (b - a);
    // Non-finite values closer than this to an endpoint are dropped; the node
    // weight there is below 1e-270 of the interval length.
    const double drop_gap = 1e-150 * (b - a);

    double abs_sum = 0.0;
    auto node = [&](double t) {
        const double u = 0.5 * std::numbers::pi * std::sinh(t);
        const double e = std::exp(-2.0 * std::fabs(u));
        const double small = half * 2.0 * e / (1.0 + e);
        const double large = half * 2.0 / (1.0 + e);
        const double w = half * 0.5 * std::numbers::pi * std::cosh(t) * 4.0 * e / ((1.0 + e) * (1.0 + e));
        if (w == 0.0 || small == 0.0) return 0.0;
        double x, lg, rg;
        if (u >= 0) {
            rg = small;
            lg = large;
            x = b - rg;
        } else {
            lg = small;
            rg = large;
            x = a + lg;
        }
        const double v = detail::call(f, x, lg, rg);
        if (!std::isfinite(v)) {
            if (small < drop_gap) return 0.0;
            fail(ErrorKind::domain, "integrand is not finite inside the interval");
        }
        abs_sum += std::fabs(w * v);
        return w * v;
    };

    double h = 1.0;
    double raw = node(0.0);
    for (int k = 1; k <= static_cast<int>(kTmax); ++k) raw += node(k) + node(-k);
    double prev = raw * h;
    double err = std::numeric_limits<double>::infinity();
    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        double added = 0.0;
        for (double t = h; t <= kTmax; t += 2 * h) added += node(t) + node(-t);
        raw += added;
        const double cur = raw * h;
        err = std::fabs(cur - prev) + 4 * detail::kEps * abs_sum * h;
        prev = cur;
        const double scale = spec.l1_relative ? abs_sum * h : std::fabs(cur);
        if (level >= 3 && err <= std::max(spec.rel_tol * scale, spec.abs_tol))
            return {cur, err, Method::tanh_sinh};
    }
    fail(ErrorKind::nonconvergent, "tanh-sinh quadrature did not converge", Estimate{prev, err, Method::tanh_sinh});
}

/// Dispatch on endpoint_mode: tanh-sinh when an endpoint is singular, Gauss-Kronrod otherwise.
template <class F>
[[nodiscard]] Estimate integrate(F&& f, double a, double b, const QuadSpec& spec = {})
{
    if (spec.endpoint_mode == EndpointMode::none) return integrate_adaptive(f, a, b, spec);
    return integrate_tanh_sinh(f, a, b, spec);
}

/**
 * @brief Integral of g^{alpha-1} h(g) over (0, g0].
 *
 * Substitutes u = g^alpha so the algebraic endpoint factor is absorbed exactly:
 * the result is (1/alpha) * integral of h(u^{1/alpha}) over (0, g0^alpha].
 * h is called as h(g) and must accept g == 0 (underflow) returning its limit.
 */
template <class H>
[[nodiscard]] Estimate integrate_endpoint_power(H&& h, double alpha, double g0, const QuadSpec& spec = {})
{
    require(alpha > 0.0 && g0 > 0.0, ErrorKind::domain, "endpoint power integral needs alpha > 0, g0 > 0");
    const double u0 = std::pow(g0, alpha);
    const double inv = 1.0 / alpha;
    auto inner = [&](double, double left_gap, double) {
        return static_cast<double>(h(std::exp(std::log(left_gap) * inv)));
    };
    auto est = integrate_tanh_sinh(inner, 0.0, u0, singular(spec));
    return {est.value * inv, est.error * inv, est.method};
}

} // namespace frac_hardy::quad
