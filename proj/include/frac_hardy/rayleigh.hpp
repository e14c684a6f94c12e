#pragma once

/**
 * @file rayleigh.hpp
 * @brief Gagliardo seminorms and Hardy / Poincare Rayleigh quotients of trial functions.
 */

#include "frac_hardy/error.hpp"
#include "frac_hardy/geometry.hpp"
#include "frac_hardy/kernel.hpp"
#include "frac_hardy/montecarlo.hpp"
#include "frac_hardy/quad.hpp"
#include "frac_hardy/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace frac_hardy {

enum class TrialKind { power_distance, cone_s, bump, custom };

[[nodiscard]] inline std::string_view to_string(TrialKind k) noexcept
{
    switch (k) {
    case TrialKind::power_distance: return "power_distance";
    case TrialKind::cone_s: return "cone_s";
    case TrialKind::bump: return "bump";
    case TrialKind::custom: return "custom";
    }
    return "unknown";
}

/**
 * @brief Radial profile v on [0, inf) with an accurate drop v(r) - v(r - dr).
 *
 * breakpoints are increasing; v is smooth between them and vanishes beyond the
 * last one. v also vanishes on [0, zero_below].
 */
struct RadialProfile {
    std::function<double(double)> value;
    std::function<double(double, double)> drop;
    std::vector<double> breakpoints;
    double zero_below = 0.0;

    [[nodiscard]] double support() const { return breakpoints.back(); }

    /**
     * Profile from values, with an optional slope v'. Drops below 1e-4 r use the
     * midpoint slope when one is given, otherwise a one-sided difference quotient.
     */
    [[nodiscard]] static RadialProfile from_function(std::function<double(double)> v, std::vector<double> breakpoints,
                                                     std::function<double(double)> slope = {})
    {
        RadialProfile out;
        out.value = v;
        out.drop = [v, slope](double r, double dr) {
            if (dr < 1e-4 * r) {
                if (slope) return dr * slope(r - 0.5 * dr);
                const double h = 1e-7 * r;
                if (dr < h) return dr * (v(r) - v(r - h)) / h;
            }
            return v(r) - v(r - dr);
        };
        out.breakpoints = std::move(breakpoints);
        return out;
    }
};

namespace rayleigh::detail {

inline constexpr double kBumpSlope = 2.17035708571034; // max |d/dt exp(1 - 1/(1-t^2))|

/// exp(1 - 1/(1 - t^2)) for t in [0, 1), 0 beyond.
[[nodiscard]] inline double bump_shape(double t)
{
    if (t >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / ((1.0 - t) * (1.0 + t)));
}

/// bump_shape(t1) - bump_shape(t1 - dt) for dt >= 0.
[[nodiscard]] inline double bump_drop(double t1, double dt)
{
    const double t2 = t1 - dt;
    if (t1 >= 1.0) return -bump_shape(t2);
    const double a = (1.0 - t1) * (1.0 + t1), b = (1.0 - t2) * (1.0 + t2);
    // 1/a - 1/b = (t1^2 - t2^2)/(ab)
    const double arg = dt * (t1 + t2) / (a * b);
    return bump_shape(t2) * std::expm1(-arg);
}

/// x^c - (x + d)^c for x > 0, d >= 0.
[[nodiscard]] inline double power_drop(double x, double d, double c)
{
    return -std::pow(x, c) * std::expm1(c * std::log1p(d / x));
}

} // namespace rayleigh::detail

struct TrialFunction {
    TrialKind kind = TrialKind::bump;
    Point center;
    double beta = 0.0, inner = 0.0, outer = 0.0; ///< power_distance
    double radius = 0.0, eps = 0.0, exponent = 0.0; ///< cone_s (radius r); bump (radius)
    double amplitude = 1.0;                          ///< bump
    double support_radius = 0.0;
    double holder_exponent = 1.0;
    double holder_constant = 0.0;
    /// Lipschitz constant when finite; used by the importance sampler.
    double lipschitz = std::numeric_limits<double>::infinity();
    std::function<double(std::span<const double>)> callback;

    /// |x - z|^beta - a^beta on [a, R], linear ramp to 0 on [R, 2R], 0 elsewhere.
    [[nodiscard]] static TrialFunction power_distance(Point z, double beta, double a, double R)
    {
        require(0 < a && a < R && std::isfinite(R), ErrorKind::domain, "power trial needs 0 < a < R");
        require(beta != 0.0 && std::isfinite(beta), ErrorKind::domain, "power trial needs beta != 0");
        TrialFunction u;
        u.kind = TrialKind::power_distance;
        u.center = std::move(z);
        u.beta = beta;
        u.inner = a;
        u.outer = R;
        u.support_radius = 2 * R;
        const double height = std::fabs(std::pow(R, beta) - std::pow(a, beta));
        u.lipschitz = std::max({std::fabs(beta) * std::pow(a, beta - 1), std::fabs(beta) * std::pow(R, beta - 1), height / R});
        u.holder_exponent = 1.0;
        u.holder_constant = u.lipschitz;
        return u;
    }

    /// (eps + (r - |x - x0|)_+)^s - eps^s.
    [[nodiscard]] static TrialFunction cone(Point x0, double r, double eps, double s)
    {
        require(r > 0 && eps > 0, ErrorKind::domain, "cone trial needs r > 0 and eps > 0");
        require(s > 0 && s <= 1, ErrorKind::domain, "cone exponent must lie in (0,1]");
        TrialFunction u;
        u.kind = TrialKind::cone_s;
        u.center = std::move(x0);
        u.radius = r;
        u.eps = eps;
        u.exponent = s;
        u.support_radius = r;
        u.holder_exponent = s;
        u.holder_constant = 1.0;
        u.lipschitz = s * std::pow(eps, s - 1);
        return u;
    }

    /// amplitude * exp(1 - 1/(1 - |x - c|^2/radius^2)) inside the ball.
    [[nodiscard]] static TrialFunction bump(Point c, double radius, double amplitude = 1.0)
    {
        require(radius > 0 && std::isfinite(radius), ErrorKind::domain, "bump radius must be positive");
        require(std::isfinite(amplitude), ErrorKind::domain, "bump amplitude must be finite");
        TrialFunction u;
        u.kind = TrialKind::bump;
        u.center = std::move(c);
        u.radius = radius;
        u.amplitude = amplitude;
        u.support_radius = radius;
        u.lipschitz = rayleigh::detail::kBumpSlope * std::fabs(amplitude) / radius;
        u.holder_exponent = 1.0;
        u.holder_constant = u.lipschitz;
        return u;
    }

    /// Callback trial vanishing outside B(center, support_radius), with its Holder data.
    [[nodiscard]] static TrialFunction custom(Point center, double support_radius, double holder_exponent,
                                              double holder_constant, std::function<double(std::span<const double>)> f)
    {
        require(support_radius > 0, ErrorKind::domain, "custom trial needs a positive support radius");
        require(holder_exponent > 0 && holder_exponent <= 1, ErrorKind::domain, "holder exponent must lie in (0,1]");
        require(holder_constant >= 0, ErrorKind::domain, "holder constant must be >= 0");
        TrialFunction u;
        u.kind = TrialKind::custom;
        u.center = std::move(center);
        u.support_radius = support_radius;
        u.holder_exponent = holder_exponent;
        u.holder_constant = holder_constant;
        if (holder_exponent == 1.0) u.lipschitz = holder_constant;
        u.callback = std::move(f);
        return u;
    }

    [[nodiscard]] int dim() const noexcept { return static_cast<int>(center.size()); }
    [[nodiscard]] bool radial() const noexcept { return kind != TrialKind::custom; }

    [[nodiscard]] RadialProfile profile() const
    {
        require(radial(), ErrorKind::domain, "custom trials have no radial profile");
        using namespace rayleigh::detail;
        RadialProfile v;
        const TrialFunction u = *this;
        switch (kind) {
        case TrialKind::power_distance: {
            const double a = inner, R = outer, b = beta;
            const double height = std::pow(R, b) - std::pow(a, b);
            v.value = [=](double r) {
                if (r <= a || r >= 2 * R) return 0.0;
                if (r <= R) return std::pow(r, b) - std::pow(a, b);
                return height * (2.0 - r / R);
            };
            v.drop = [=](double r, double dr) {
                const double q = r - dr;
                if (q >= a && r <= R) return -power_drop(q, dr, b);
                if (q >= R && r <= 2 * R) return -height * dr / R;
                if (r <= a || q >= 2 * R) return 0.0;
                return u.profile_value(r) - u.profile_value(q);
            };
            v.breakpoints = {a, R, 2 * R};
            v.zero_below = a;
            break;
        }
        case TrialKind::cone_s: {
            const double r0 = radius, e = eps, s = exponent;
            v.value = [=](double r) { return r >= r0 ? 0.0 : std::pow(e + (r0 - r), s) - std::pow(e, s); };
            v.drop = [=](double r, double dr) {
                if (r <= r0) return power_drop(e + r0 - r, dr, s);
                if (r - dr >= r0) return 0.0;
                return -(std::pow(e + r0 - (r - dr), s) - std::pow(e, s));
            };
            v.breakpoints = {r0};
            break;
        }
        case TrialKind::bump: {
            const double rho = radius, amp = amplitude;
            v.value = [=](double r) { return amp * bump_shape(r / rho); };
            v.drop = [=](double r, double dr) {
                if (r - dr >= rho) return 0.0;
                return amp * bump_drop(r / rho, dr / rho);
            };
            v.breakpoints = {rho};
            break;
        }
        case TrialKind::custom: break;
        }
        return v;
    }

    [[nodiscard]] double profile_value(double r) const
    {
        switch (kind) {
        case TrialKind::power_distance:
            if (r <= inner || r >= 2 * outer) return 0.0;
            if (r <= outer) return std::pow(r, beta) - std::pow(inner, beta);
            return (std::pow(outer, beta) - std::pow(inner, beta)) * (2.0 - r / outer);
        case TrialKind::cone_s: return r >= radius ? 0.0 : std::pow(eps + (radius - r), exponent) - std::pow(eps, exponent);
        case TrialKind::bump: return amplitude * rayleigh::detail::bump_shape(r / radius);
        case TrialKind::custom: break;
        }
        fail(ErrorKind::domain, "custom trials have no radial profile");
    }

    [[nodiscard]] double operator()(std::span<const double> x) const
    {
        if (kind == TrialKind::custom) return geometry::distance(x, center) >= support_radius ? 0.0 : callback(x);
        return profile_value(geometry::distance(x, center));
    }

    /// u(x) - u(y), accurate when x and y are close.
    [[nodiscard]] double difference(std::span<const double> x, std::span<const double> y) const
    {
        if (kind == TrialKind::custom) return (*this)(x) - (*this)(y);
        double rx2 = 0, ry2 = 0, num = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double dx = x[i] - center[i], dy = y[i] - center[i];
            rx2 += dx * dx;
            ry2 += dy * dy;
            num += (x[i] - y[i]) * (dx + dy);
        }
        const double rx = std::sqrt(rx2), ry = std::sqrt(ry2);
        if (rx + ry == 0.0) return 0.0;
        const double dr = num / (rx + ry); // rx - ry
        if (kind == TrialKind::bump) {
            if (std::min(rx, ry) >= radius) return 0.0;
            return dr >= 0 ? amplitude * rayleigh::detail::bump_drop(rx / radius, dr / radius)
                           : -amplitude * rayleigh::detail::bump_drop(ry / radius, -dr / radius);
        }
        const auto v = profile();
        return dr >= 0 ? v.drop(rx, dr) : -v.drop(ry, -dr);
    }

    /// True when u vanishes on a neighbourhood of q.
    [[nodiscard]] bool vanishes_near(std::span<const double> q) const
    {
        const double r = geometry::distance(q, center);
        if (r > support_radius) return true;
        return kind == TrialKind::power_distance && r < inner;
    }
};

inline void validate(const TrialFunction& u)
{
    require(u.dim() >= 1, ErrorKind::domain, "trial centre is empty");
    require(u.support_radius > 0 && std::isfinite(u.support_radius), ErrorKind::domain, "trial support must be bounded");
    if (u.kind == TrialKind::custom) require(static_cast<bool>(u.callback), ErrorKind::domain, "custom trial has no callback");
}

struct QuotientResult {
    Estimate seminorm_p;
    Estimate weight_integral;
    Estimate quotient;
};

struct RayleighOptions {
    quad::QuadSpec quad{1e-9, 1e-300, 4096};
    mc::McSpec mc{};
    /// Outer truncation radius of the radial seminorm, in units of the support radius.
    double truncation_factor = 4.0;
    bool force_mc = false;
};

namespace rayleigh {

namespace detail {

/// W(x) = integral over (0, x) of t^{sp-1} Phi(t) dt, x <= 1.
[[nodiscard]] inline Estimate tail_weight(const kernel::FastPhi& phi, double x, const quad::QuadSpec& spec)
{
    const double sp = phi.sp();
    if (x < 1e-6) {
        // Phi is a function of t^2, so the relative correction is O(x^2).
        const double v = phi(0.0) * std::pow(x, sp) / sp;
        return {v, 10 * x * x * v, Method::closed_form};
    }
    auto low = [&](double t, double, double) { return std::pow(t, sp - 1) * phi(t); };
    const double mid = std::min(x, 0.5);
    auto e = quad::integrate_tanh_sinh(low, 0.0, mid, quad::singular(spec));
    if (x > 0.5) {
        // t = 1 - exp(y): integrand Phi(t) t^{sp-1} g with g = 1 - t
        auto up = [&](double y) {
            const double g = std::exp(y);
            return phi.scaled(g) * std::pow(1.0 - g, sp - 1) * std::pow(g, -sp);
        };
        const auto b = quad::integrate_tanh_sinh(up, std::log1p(-x), std::log(0.5), spec);
        e.value += b.value;
        e.error += b.error;
    }
    return e;
}

/// Runs an inner integral; on nonconvergence returns the best estimate with its error.
template <class F>
[[nodiscard]] Estimate best_effort(F&& f)
{
    try {
        return f();
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::nonconvergent || !e.best()) throw;
        return *e.best();
    }
}

/**
 * Outer integral of inner(x).value via integrate(fn, spec). The inner errors are cached
 * per node and integrated in a second pass at loose tolerance, which revisits the same nodes.
 */
template <class I, class F>
[[nodiscard]] Estimate nested(I&& integrate, F&& inner, const quad::QuadSpec& spec)
{
    std::unordered_map<double, double> errs;
    auto fv = [&](double x) {
        const Estimate e = inner(x);
        errs[x] = e.error;
        return e.value;
    };
    auto fe = [&](double x) {
        const auto it = errs.find(x);
        return it != errs.end() ? it->second : inner(x).error;
    };
    const Estimate v = integrate(fv, spec);
    quad::QuadSpec loose = spec;
    loose.rel_tol = 0.25;
    const Estimate e = best_effort([&] { return integrate(fe, loose); });
    return {v.value, v.error + std::fabs(e.value) + e.error, v.method};
}

template <class F>
[[nodiscard]] Estimate integrate_piece(F&& f, double lo, double hi, const quad::QuadSpec& spec)
{
    if (lo > 0 && hi / lo > 8.0) {
        const double l0 = std::log(lo), l1 = std::log(hi);
        auto g = [&](double y) {
            const double r = std::exp(y);
            return f(std::clamp(r, lo, hi)) * r;
        };
        return quad::integrate_tanh_sinh(g, l0, l1, spec);
    }
    auto g = [&](double, double lg, double rg) { return f(lg < rg ? lo + lg : hi - rg); };
    return quad::integrate_tanh_sinh(g, lo, hi, quad::singular(spec));
}

} // namespace detail

/**
 * @brief [u]^p for u(x) = v(|x|) on R^N.
 *
 * [u]^p = 2|S^{N-1}| int_0^inf r^{N-1-sp} int_0^1 |v(r) - v(rt)|^p t^{N-1} Phi(t) dt dr.
 * The r-integral runs to the truncation radius T; the rest equals
 * 2|S^{N-1}| int_0^S |v|^p rho^{N-1-sp} W(rho/T) drho and is added exactly.
 */
[[nodiscard]] inline Estimate seminorm_radial(const FracParams& fp, const RadialProfile& v, double truncation,
                                              const quad::QuadSpec& spec = {1e-9, 1e-300, 4096})
{
    validate(fp);
    require(!v.breakpoints.empty(), ErrorKind::domain, "radial profile needs at least one breakpoint");
    const double S = v.support();
    require(S > 0 && truncation >= S, ErrorKind::domain, "truncation radius must contain the support");
    const kernel::FastPhi phi(fp.dim, fp.sp());
    const double n = fp.dim, p = fp.p, sp = fp.sp(), alpha = p - sp;
    using detail::best_effort;

    auto inner = [&](double r) -> Estimate {
        if (r <= v.zero_below) return {};
        const double vr = v.value(r);
        std::vector<double> cuts{0.0, 0.5, 1.0};
        for (double b : v.breakpoints)
            if (b < r) cuts.push_back(b / r);
        if (v.zero_below > 0 && v.zero_below < r) cuts.push_back(v.zero_below / r);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        double sum = 0.0, err = 0.0;
        auto zero_segment = [&](double lo, double hi) {
            return vr == 0.0 && (lo * r >= S || hi * r <= v.zero_below);
        };
        for (std::size_t k = 0; k + 2 < cuts.size(); ++k) {
            const double lo = cuts[k], hi = cuts[k + 1];
            if (zero_segment(lo, hi)) continue;
            auto f = [&](double, double lg, double rg) {
                const double tt = lg < rg ? lo + lg : hi - rg;
                const double d = v.drop(r, r * (1.0 - tt));
                const double ph = tt < 0.5 ? phi(tt) : phi.scaled(1.0 - tt) * std::pow(1.0 - tt, -1.0 - sp);
                return std::pow(std::fabs(d), p) * std::pow(tt, n - 1) * ph;
            };
            const auto e = best_effort([&] { return quad::integrate_tanh_sinh(f, lo, hi, quad::singular(spec)); });
            sum += e.value;
            err += e.error;
        }
        const double tl = cuts[cuts.size() - 2];
        if (!zero_segment(tl, 1.0)) {
            auto h = [&](double g) {
                g = std::max(g, 1e-300);
                const double d = v.drop(r, r * g) / g;
                return std::pow(std::fabs(d), p) * std::pow(1.0 - g, n - 1) * phi.scaled(g);
            };
            const auto e = best_effort([&] { return quad::integrate_endpoint_power(h, alpha, 1.0 - tl, spec); });
            sum += e.value;
            err += e.error;
        }
        return {sum, err, Method::tanh_sinh};
    };

    std::vector<double> cuts{0.0};
    if (v.zero_below > 0) cuts.push_back(v.zero_below);
    for (double b : v.breakpoints)
        if (b > v.zero_below) cuts.push_back(b);
    if (truncation > S) cuts.push_back(truncation);
    double main = 0.0, main_err = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double lo = cuts[k], hi = cuts[k + 1];
        if (hi <= v.zero_below) continue;
        auto weighted = [&](double r) {
            const auto e = inner(r);
            const double w = std::pow(r, n - 1 - sp);
            // The inner integral decays like r^p, faster than w grows.
            if (!std::isfinite(w) || (e.value == 0.0 && e.error == 0.0)) return Estimate{};
            return Estimate{w * e.value, w * e.error, e.method};
        };
        const auto e = detail::nested(
            [&](auto&& fn, const quad::QuadSpec& s) { return detail::integrate_piece(fn, lo, hi, s); }, weighted, spec);
        main += e.value;
        main_err += e.error;
    }

    double tail = 0.0, tail_err = 0.0;
    double w_rel = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double lo = cuts[k], hi = std::min(cuts[k + 1], S);
        if (hi <= v.zero_below || lo >= S) continue;
        auto f = [&](double rho) {
            const double val = v.value(rho);
            if (val == 0.0) return 0.0;
            const double x = rho / truncation;
            // rho^{-sp} W(rho/T), taken from the closed form where rho^{-sp} would overflow.
            double ws = phi(0.0) * std::pow(truncation, -sp) / sp;
            if (x >= 1e-6) {
                const auto w = detail::tail_weight(phi, x, spec);
                if (w.value > 0) w_rel = std::max(w_rel, w.error / w.value);
                ws = std::pow(rho, -sp) * w.value;
            }
            return std::pow(std::fabs(val), p) * std::pow(rho, n - 1) * ws;
        };
        const auto e = detail::integrate_piece(f, lo, hi, spec);
        tail += e.value;
        tail_err += e.error;
    }
    tail_err += w_rel * tail;

    const double c = 2.0 * specfun::sphere_area(fp.dim - 1).value;
    const Estimate total{c * (main + tail), c * (main_err + tail_err) + 1e-12 * c * (main + tail), Method::tanh_sinh};
    if (tail > 0.1 * main)
        fail(ErrorKind::tail_dominates, "tail beyond the truncation radius exceeds 10% of the main term", total);
    return total;
}

/// Sampling exponent and constant used by the offset importance density.
[[nodiscard]] inline std::pair<double, double> sampling_holder(const TrialFunction& u)
{
    if (std::isfinite(u.lipschitz)) return {1.0, u.lipschitz};
    return {u.holder_exponent, u.holder_constant};
}

/**
 * @brief Monte Carlo [u]^p for N <= 3.
 *
 * x is uniform in the support ball B_S; y = x + z with |z| < 2S drawn with density
 * proportional to |z|^{gamma-N}, gamma = h p - sp. Pairs with y outside B_S count
 * twice; |z| > 2S contributes exactly 2|u(x)|^p |S^{N-1}| (2S)^{-sp}/sp.
 */
[[nodiscard]] inline Estimate seminorm_mc(const FracParams& fp, const TrialFunction& u, const mc::McSpec& spec)
{
    validate(fp);
    validate(u);
    require(fp.dim <= 3, ErrorKind::dimension_unsupported, "Monte Carlo seminorm supports N <= 3");
    require(u.dim() == fp.dim, ErrorKind::domain, "trial dimension does not match params");
    const int dim = fp.dim;
    const double sp = fp.sp(), p = fp.p;
    const auto [h, L] = sampling_holder(u);
    const double gamma = h * p - sp;
    require(gamma > 0, ErrorKind::domain, "Holder exponent too small for the offset importance density");
    const double S = u.support_radius, Z = 2.0 * S;
    const double sphere = specfun::sphere_area(dim - 1).value;
    const double vol = specfun::ball_volume(dim).value * std::pow(S, dim);
    const double near_c = sphere * std::pow(Z, gamma) / gamma;
    const double far_c = 2.0 * sphere * std::pow(Z, -sp) / sp;

    struct Pair {
        std::array<double, 3> x, y;
        double rho;
    };
    auto sampler = [&](mc::Rng& rng, double u0) {
        Pair pr{};
        std::array<double, 3> w{};
        mc::random_direction(rng, dim, w.data());
        const double rx = S * std::pow(u0, 1.0 / dim);
        pr.rho = Z * std::pow(rng.uniform(), 1.0 / gamma);
        for (int i = 0; i < dim; ++i) pr.x[i] = u.center[i] + rx * w[i];
        mc::random_direction(rng, dim, w.data());
        for (int i = 0; i < dim; ++i) pr.y[i] = pr.x[i] + pr.rho * w[i];
        return mc::Sample<Pair>{pr, 1.0 / vol};
    };
    auto f = [&](const Pair& pr) {
        const std::span<const double> x(pr.x.data(), dim), y(pr.y.data(), dim);
        const double d = std::fabs(u.difference(x, y));
        if (d > L * std::pow(pr.rho, h) * (1.0 + 1e-9) + 1e-300)
            fail(ErrorKind::variance_blowup, "observed increment exceeds the trial's Holder bound");
        const double w = geometry::distance(y, u.center) < S ? 1.0 : 2.0;
        const double ux = std::fabs(u(x));
        return w * near_c * std::pow(d, p) * std::pow(pr.rho, -sp - gamma) + far_c * std::pow(ux, p);
    };
    auto e = mc::integrate_mc(f, sampler, spec);
    return {e.value, e.error, Method::monte_carlo};
}

/// Seminorm by the radial path when available, Monte Carlo otherwise.
[[nodiscard]] inline Estimate seminorm(const FracParams& fp, const TrialFunction& u, const RayleighOptions& opt = {})
{
    validate(u);
    require(u.dim() == fp.dim, ErrorKind::domain, "trial dimension does not match params");
    if (u.radial() && !opt.force_mc)
        return seminorm_radial(fp, u.profile(), opt.truncation_factor * u.support_radius, opt.quad);
    return seminorm_mc(fp, u, opt.mc);
}

/**
 * @brief Largest sampled quotient |f(x) - f(y)| / |x - y|^h.
 *
 * x is uniform in B(center, 1.25 R) and |x - y| log-uniform in [1e-6 R, 2R].
 */
[[nodiscard]] inline double sampled_holder_max(const std::function<double(std::span<const double>)>& f, const Point& center,
                                               double R, double h, std::uint64_t samples, std::uint64_t seed)
{
    const int dim = static_cast<int>(center.size());
    double worst = 0.0;
    std::array<double, 3> x{}, y{}, w{};
    require(dim <= 3, ErrorKind::dimension_unsupported, "Holder sampling supports N <= 3");
    for (std::uint64_t i = 0; i < samples; ++i) {
        mc::Rng rng(seed, i);
        mc::random_direction(rng, dim, w.data());
        const double rx = 1.25 * R * std::pow(rng.uniform(), 1.0 / dim);
        for (int k = 0; k < dim; ++k) x[k] = center[k] + rx * w[k];
        const double len = R * 1e-6 * std::pow(2e6, rng.uniform());
        mc::random_direction(rng, dim, w.data());
        for (int k = 0; k < dim; ++k) y[k] = x[k] + len * w[k];
        const std::span<const double> xs(x.data(), dim), ys(y.data(), dim);
        const double dist = geometry::distance(xs, ys);
        worst = std::max(worst, std::fabs(f(xs) - f(ys)) / std::pow(dist, h));
    }
    return worst;
}

/// Throws SupportViolation unless u vanishes near the complement of the domain.
inline void check_support(const DomainModel& d, const TrialFunction& u)
{
    geometry::validate(d);
    validate(u);
    require(u.dim() == d.dim, ErrorKind::domain, "trial dimension does not match the domain");
    const double S = u.support_radius;
    bool ok = true;
    switch (d.kind) {
    case DomainKind::punctured_space:
        for (const auto& q : d.punctures) ok = ok && u.vanishes_near(q);
        break;
    case DomainKind::ball: ok = geometry::distance(u.center, d.center) + S < d.radius; break;
    case DomainKind::box:
        for (int i = 0; i < d.dim; ++i) ok = ok && std::fabs(u.center[i]) + S < 0.5 * d.sides[i];
        break;
    case DomainKind::half_space: ok = u.center[d.dim - 1] - S > 0; break;
    }
    require(ok, ErrorKind::support_violation, "trial support touches the boundary of the domain");
}

namespace detail {

/// Distance to the boundary along 1D, with the kinks of d inside (lo, hi).
[[nodiscard]] inline std::vector<double> distance_kinks_1d(const DomainModel& d, double lo, double hi)
{
    std::vector<double> k;
    switch (d.kind) {
    case DomainKind::punctured_space: {
        std::vector<double> q;
        for (const auto& pt : d.punctures) q.push_back(pt[0]);
        std::sort(q.begin(), q.end());
        for (std::size_t i = 0; i < q.size(); ++i) {
            k.push_back(q[i]);
            if (i + 1 < q.size()) k.push_back(0.5 * (q[i] + q[i + 1]));
        }
        break;
    }
    case DomainKind::ball: k.push_back(d.center[0]); break;
    case DomainKind::box: k.push_back(0.0); break;
    case DomainKind::half_space: break;
    }
    std::vector<double> out;
    for (double x : k)
        if (x > lo && x < hi) out.push_back(x);
    return out;
}

/// Hyperplanes n . x = offset (unit n) on which the nearest boundary piece of d switches.
[[nodiscard]] inline std::vector<std::pair<Point, double>> distance_kink_planes(const DomainModel& d)
{
    const int n = d.dim;
    std::vector<std::pair<Point, double>> planes;
    auto add = [&](Point nrm, double off) {
        const double len = geometry::norm(nrm);
        if (len == 0.0) return;
        for (auto& x : nrm) x /= len;
        planes.emplace_back(std::move(nrm), off / len);
    };
    if (d.kind == DomainKind::punctured_space) {
        for (std::size_t a = 0; a < d.punctures.size(); ++a)
            for (std::size_t b = a + 1; b < d.punctures.size(); ++b) {
                Point nrm(n);
                double off = 0.0;
                for (int k = 0; k < n; ++k) {
                    nrm[k] = d.punctures[b][k] - d.punctures[a][k];
                    off += nrm[k] * 0.5 * (d.punctures[a][k] + d.punctures[b][k]);
                }
                add(std::move(nrm), off);
            }
    } else if (d.kind == DomainKind::box) {
        for (int i = 0; i < n; ++i) {
            Point e(n, 0.0);
            e[i] = 1.0;
            add(e, 0.0);
            for (int j = i + 1; j < n; ++j)
                for (double si : {-1.0, 1.0})
                    for (double sj : {-1.0, 1.0}) {
                        Point nrm(n, 0.0);
                        nrm[i] = si;
                        nrm[j] = -sj;
                        add(std::move(nrm), 0.5 * (d.sides[i] - d.sides[j]));
                    }
        }
    }
    return planes;
}

/**
 * Radii about c at which the circle (sphere) average of a function of d stops being
 * smooth: tangency to the kink planes, and in 2D the crossings of those lines.
 * Used as cuts for the radial integral.
 */
[[nodiscard]] inline std::vector<double> distance_kink_radii(const DomainModel& d, const Point& c)
{
    if (d.kind == DomainKind::ball) return {geometry::distance(c, d.center)};
    const auto planes = distance_kink_planes(d);
    std::vector<double> out;
    for (const auto& [nrm, off] : planes) {
        double dot = 0.0;
        for (int k = 0; k < d.dim; ++k) dot += nrm[k] * c[k];
        out.push_back(std::fabs(dot - off));
    }
    if (d.dim == 2)
        for (std::size_t a = 0; a < planes.size(); ++a)
            for (std::size_t b = a + 1; b < planes.size(); ++b) {
                const auto& [na, oa] = planes[a];
                const auto& [nb, ob] = planes[b];
                const double det = na[0] * nb[1] - na[1] * nb[0];
                if (std::fabs(det) < 1e-12) continue;
                const std::array<double, 2> x{(oa * nb[1] - ob * na[1]) / det, (na[0] * ob - nb[0] * oa) / det};
                out.push_back(std::hypot(x[0] - c[0], x[1] - c[1]));
            }
    return out;
}

/// Angles in [0, 2 pi] where the circle c + r (cos t, sin t) crosses the kink lines, sorted, with both ends.
[[nodiscard]] inline std::vector<double> circle_kink_angles(const std::vector<std::pair<Point, double>>& lines,
                                                            const Point& c, double r)
{
    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> out{0.0, two_pi};
    for (const auto& [nrm, off] : lines) {
        const double k = (off - nrm[0] * c[0] - nrm[1] * c[1]) / r;
        if (std::fabs(k) >= 1.0) continue;
        const double base = std::atan2(nrm[1], nrm[0]), half = std::acos(k);
        for (double t : {base + half, base - half}) {
            t = std::fmod(t, two_pi);
            if (t < 0) t += two_pi;
            out.push_back(t);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace detail

/**
 * @brief int |u|^p d^{-q} over the domain (q = sp for Hardy, 0 for Poincare).
 *
 * Radial 1D integral when the weight is radial about the trial centre; direct
 * quadrature for N = 1; polar coordinates for radial trials with N = 2, 3; Monte
 * Carlo over the support ball otherwise.
 */
[[nodiscard]] inline Estimate weighted_lp(const FracParams& fp, const DomainModel& d, const TrialFunction& u, double q,
                                          const RayleighOptions& opt = {})
{
    const int dim = fp.dim;
    const double p = fp.p, S = u.support_radius;
    const double sphere = specfun::sphere_area(dim - 1).value;
    auto spec = opt.quad;

    enum class RadialWeight { none, constant, to_centre, to_sphere };
    RadialWeight rw = RadialWeight::none;
    if (u.radial()) {
        if (q == 0.0)
            rw = RadialWeight::constant;
        else if (d.kind == DomainKind::punctured_space && d.punctures.size() == 1 && d.punctures[0] == u.center)
            rw = RadialWeight::to_centre;
        else if (d.kind == DomainKind::ball && d.center == u.center)
            rw = RadialWeight::to_sphere;
    }
    if (rw != RadialWeight::none) {
        const auto v = u.profile();
        auto f = [&](double r) {
            const double val = v.value(r);
            if (val == 0.0) return 0.0;
            double w = 1.0;
            if (rw == RadialWeight::to_centre) w = std::pow(r, -q);
            if (rw == RadialWeight::to_sphere) w = std::pow(d.radius - r, -q);
            return std::pow(std::fabs(val), p) * std::pow(r, dim - 1) * w;
        };
        std::vector<double> cuts{0.0};
        for (double b : v.breakpoints) cuts.push_back(b);
        double sum = 0, err = 0;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            if (cuts[k + 1] <= v.zero_below) continue;
            const auto e = detail::integrate_piece(f, std::max(cuts[k], v.zero_below), cuts[k + 1], spec);
            sum += e.value;
            err += e.error;
        }
        return {sphere * sum, sphere * err + 1e-13 * sphere * sum, Method::tanh_sinh};
    }

    auto weight = [&](std::span<const double> x) {
        const double dist = geometry::distance_to_boundary(d, x);
        return q == 0.0 ? 1.0 : std::pow(dist, -q);
    };

    if (dim == 1) {
        const double c = u.center[0];
        std::vector<double> cuts{c - S, c + S};
        if (u.radial()) {
            const auto v = u.profile();
            for (double b : v.breakpoints)
                if (b < S) {
                    cuts.push_back(c - b);
                    cuts.push_back(c + b);
                }
            cuts.push_back(c);
        }
        for (double k : detail::distance_kinks_1d(d, c - S, c + S)) cuts.push_back(k);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        double sum = 0, err = 0;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            auto f = [&](double x) {
                const double val = u(std::span<const double>(&x, 1));
                return val == 0.0 ? 0.0 : std::pow(std::fabs(val), p) * weight(std::span<const double>(&x, 1));
            };
            const auto e = u.radial() ? quad::integrate_tanh_sinh(f, cuts[k], cuts[k + 1], spec)
                                      : quad::integrate_adaptive(f, cuts[k], cuts[k + 1], spec);
            sum += e.value;
            err += e.error;
        }
        return {sum, err + 1e-13 * sum, Method::tanh_sinh};
    }

    if ((dim == 2 || dim == 3) && u.radial()) {
        const auto v = u.profile();
        auto ang_spec = spec;
        ang_spec.rel_tol = std::max(spec.rel_tol, 1e-11);
        ang_spec.abs_tol = 1e-300;
        double ang_rel = 0.0;
        const double two_pi = 2.0 * std::numbers::pi;
        const auto kink_lines = dim == 2 ? detail::distance_kink_planes(d) : std::vector<std::pair<Point, double>>{};
        auto angular = [&](double r) {
            if (dim == 2) {
                auto g = [&](double th) {
                    const std::array<double, 2> x{u.center[0] + r * std::cos(th), u.center[1] + r * std::sin(th)};
                    return weight(x);
                };
                // Split where the circle crosses a kink line so each piece is smooth.
                const auto cuts = detail::circle_kink_angles(kink_lines, u.center, r);
                Estimate sum{0.0, 0.0, Method::adaptive};
                for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
                    if (!(cuts[k + 1] > cuts[k])) continue;
                    const auto e = quad::integrate_adaptive(g, cuts[k], cuts[k + 1], ang_spec);
                    sum.value += e.value;
                    sum.error += e.error;
                }
                return sum;
            }
            double rel = 0.0;
            auto outer = [&](double th) {
                const double st = std::sin(th), ct = std::cos(th);
                auto g = [&](double ph) {
                    const std::array<double, 3> x{u.center[0] + r * st * std::cos(ph), u.center[1] + r * st * std::sin(ph),
                                                  u.center[2] + r * ct};
                    return weight(x);
                };
                const auto e = quad::integrate_adaptive(g, 0.0, two_pi, ang_spec);
                if (e.value > 0) rel = std::max(rel, e.error / e.value);
                return st * e.value;
            };
            auto e = quad::integrate_adaptive(outer, 0.0, std::numbers::pi, ang_spec);
            e.error += rel * e.value;
            return e;
        };
        auto f = [&](double r) {
            const double val = v.value(r);
            if (val == 0.0) return 0.0;
            const auto a = angular(r);
            if (a.value > 0) ang_rel = std::max(ang_rel, a.error / a.value);
            return std::pow(std::fabs(val), p) * std::pow(r, dim - 1) * a.value;
        };
        std::vector<double> cuts{0.0};
        for (double b : v.breakpoints) cuts.push_back(b);
        for (double k : detail::distance_kink_radii(d, u.center))
            if (k > 1e-9 * S && k < S * (1 - 1e-9)) cuts.push_back(k);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        double sum = 0, err = 0;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            if (cuts[k + 1] <= v.zero_below) continue;
            const auto e = detail::integrate_piece(f, std::max(cuts[k], v.zero_below), cuts[k + 1], spec);
            sum += e.value;
            err += e.error;
        }
        return {sum, err + ang_rel * sum + 1e-13 * sum, Method::adaptive};
    }

    require(dim <= 3, ErrorKind::dimension_unsupported, "weighted integral of non-radial data supports N <= 3");
    const double vol = specfun::ball_volume(dim).value * std::pow(S, dim);
    auto sampler = [&](mc::Rng& rng, double u0) {
        std::array<double, 3> x{}, w{};
        mc::random_direction(rng, dim, w.data());
        const double r = S * std::pow(u0, 1.0 / dim);
        for (int i = 0; i < dim; ++i) x[i] = u.center[i] + r * w[i];
        return mc::Sample<std::array<double, 3>>{x, 1.0 / vol};
    };
    auto f = [&](const std::array<double, 3>& x) {
        const std::span<const double> xs(x.data(), dim);
        const double val = u(xs);
        return val == 0.0 ? 0.0 : std::pow(std::fabs(val), p) * weight(xs);
    };
    auto e = mc::integrate_mc(f, sampler, opt.mc);
    return {e.value, e.error, Method::monte_carlo};
}

namespace detail {

[[nodiscard]] inline QuotientResult quotient(const Estimate& n, const Estimate& w)
{
    require(w.value > 0, ErrorKind::domain, "trial function is identically zero");
    const double q = n.value / w.value;
    const double err = std::fabs(q) * (n.error / std::fabs(n.value == 0 ? 1.0 : n.value) + w.error / w.value);
    const Method m = n.method == Method::monte_carlo || w.method == Method::monte_carlo ? Method::monte_carlo : n.method;
    return {n, w, {q, n.value == 0 ? n.error / w.value : err, m}};
}

} // namespace detail

/// [u]^p / int |u|^p d^{-sp}: an upper bound for the Hardy constant of the domain.
[[nodiscard]] inline QuotientResult hardy_quotient(const FracParams& fp, const DomainModel& d, const TrialFunction& u,
                                                   const RayleighOptions& opt = {})
{
    validate(fp);
    check_support(d, u);
    require(d.dim == fp.dim, ErrorKind::domain, "domain dimension does not match params");
    const auto w = weighted_lp(fp, d, u, fp.sp(), opt);
    const auto n = seminorm(fp, u, opt);
    return detail::quotient(n, w);
}

/// [u]^p / int |u|^p: an upper bound for the first eigenvalue of the domain.
[[nodiscard]] inline QuotientResult poincare_quotient(const FracParams& fp, const DomainModel& d, const TrialFunction& u,
                                                      const RayleighOptions& opt = {})
{
    validate(fp);
    check_support(d, u);
    require(d.dim == fp.dim, ErrorKind::domain, "domain dimension does not match params");
    const auto w = weighted_lp(fp, d, u, 0.0, opt);
    const auto n = seminorm(fp, u, opt);
    return detail::quotient(n, w);
}

} // namespace rayleigh
} // namespace frac_hardy
