#pragma once

/**
 * @file geometry.hpp
 * @brief Model domains: punctured space, ball, origin-centred box, half-space {x_N > 0}.
 */

#include "frac_hardy/error.hpp"
#include "frac_hardy/kernel.hpp"
#include "frac_hardy/montecarlo.hpp"
#include "frac_hardy/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

namespace frac_hardy {

using Point = std::vector<double>;

enum class DomainKind { punctured_space, ball, box, half_space };

[[nodiscard]] inline std::string_view to_string(DomainKind k) noexcept
{
    switch (k) {
    case DomainKind::punctured_space: return "punctured_space";
    case DomainKind::ball: return "ball";
    case DomainKind::box: return "box";
    case DomainKind::half_space: return "half_space";
    }
    return "unknown";
}

struct DomainModel {
    DomainKind kind = DomainKind::punctured_space;
    int dim = 1;
    std::vector<Point> punctures; ///< punctured_space
    Point center;                 ///< ball
    double radius = 1.0;          ///< ball
    std::vector<double> sides;    ///< box, centred at the origin

    [[nodiscard]] static DomainModel punctured(int dim, std::vector<Point> pts)
    {
        DomainModel d;
        d.kind = DomainKind::punctured_space;
        d.dim = dim;
        d.punctures = std::move(pts);
        return d;
    }
    [[nodiscard]] static DomainModel ball(int dim, double r, Point c = {})
    {
        DomainModel d;
        d.kind = DomainKind::ball;
        d.dim = dim;
        d.radius = r;
        d.center = c.empty() ? Point(dim, 0.0) : std::move(c);
        return d;
    }
    [[nodiscard]] static DomainModel box(std::vector<double> sides)
    {
        DomainModel d;
        d.kind = DomainKind::box;
        d.dim = static_cast<int>(sides.size());
        d.sides = std::move(sides);
        return d;
    }
    [[nodiscard]] static DomainModel half_space(int dim)
    {
        DomainModel d;
        d.kind = DomainKind::half_space;
        d.dim = dim;
        return d;
    }
};

namespace geometry {

inline void validate(const DomainModel& d)
{
    require(d.dim >= 1, ErrorKind::domain, "domain dimension must be >= 1");
    switch (d.kind) {
    case DomainKind::punctured_space:
        require(!d.punctures.empty(), ErrorKind::domain, "puncture list is empty");
        for (std::size_t i = 0; i < d.punctures.size(); ++i) {
            require(static_cast<int>(d.punctures[i].size()) == d.dim, ErrorKind::domain, "puncture has wrong dimension");
            for (std::size_t j = 0; j < i; ++j)
                require(d.punctures[i] != d.punctures[j], ErrorKind::domain, "punctures must be distinct");
        }
        break;
    case DomainKind::ball:
        require(d.radius > 0 && std::isfinite(d.radius), ErrorKind::domain, "ball radius must be positive");
        require(static_cast<int>(d.center.size()) == d.dim, ErrorKind::domain, "ball centre has wrong dimension");
        break;
    case DomainKind::box:
        require(static_cast<int>(d.sides.size()) == d.dim, ErrorKind::domain, "box needs one side per dimension");
        for (double a : d.sides) require(a > 0 && std::isfinite(a), ErrorKind::domain, "box sides must be positive");
        break;
    case DomainKind::half_space: break;
    }
}

[[nodiscard]] inline double distance(std::span<const double> x, std::span<const double> y)
{
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
    return std::sqrt(s);
}

[[nodiscard]] inline double norm(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

/// Distance to the boundary; 0 outside the domain and at punctures.
[[nodiscard]] inline double distance_to_boundary(const DomainModel& d, std::span<const double> x)
{
    switch (d.kind) {
    case DomainKind::punctured_space: {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& q : d.punctures) m = std::min(m, distance(x, q));
        return m;
    }
    case DomainKind::ball: return std::max(0.0, d.radius - distance(x, d.center));
    case DomainKind::box: {
        double m = std::numeric_limits<double>::infinity();
        for (int i = 0; i < d.dim; ++i) m = std::min(m, 0.5 * d.sides[i] - std::fabs(x[i]));
        return std::max(0.0, m);
    }
    case DomainKind::half_space: return std::max(0.0, x[d.dim - 1]);
    }
    return 0.0;
}

[[nodiscard]] inline double inradius(const DomainModel& d)
{
    switch (d.kind) {
    case DomainKind::ball: return d.radius;
    case DomainKind::box: return 0.5 * *std::min_element(d.sides.begin(), d.sides.end());
    default: return std::numeric_limits<double>::infinity();
    }
}

/// Cheeger constant h_1: N/R for a ball, 1/r* for a planar box where (a-2r)(b-2r) = pi r^2.
[[nodiscard]] inline Estimate cheeger_h1(const DomainModel& d)
{
    validate(d);
    if (d.kind == DomainKind::ball) return {d.dim / d.radius, 0.0, Method::closed_form};
    if (d.kind != DomainKind::box || d.dim != 2)
        fail(ErrorKind::unsupported_domain, "Cheeger constant is available for balls and planar boxes only");
    const double a = d.sides[0], b = d.sides[1];
    // f(r) = (a-2r)(b-2r) - pi r^2 is decreasing on (0, min/2), positive at 0, negative at min/2.
    auto f = [&](double r) { return (a - 2 * r) * (b - 2 * r) - std::numbers::pi * r * r; };
    double lo = 0.0, hi = 0.5 * std::min(a, b);
    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0 ? lo : hi) = mid;
    }
    const double r = 0.5 * (lo + hi);
    return {1.0 / r, 1e-12 / r, Method::closed_form};
}

/// P_s(B_1) = 2|S^{N-1}|/(N-s) int_0^1 (t^{s-1} - t^{N-1}) Phi_{N,s,1}(t) dt.
[[nodiscard]] inline Estimate s_perimeter_unit_ball(int dim, double s, const quad::QuadSpec& spec = {})
{
    require(dim >= 1, ErrorKind::domain, "dimension must be >= 1");
    require(s > 0 && s < 1, ErrorKind::domain, "s must lie in (0,1)");
    const double n = dim;
    auto w = [&](double t) {
        const double lt = std::log(t);
        return -std::exp((s - 1) * lt) * std::expm1((n - s) * lt);
    };
    auto m = [&](double g) { return std::pow(1.0 - g, n - 1) * kernel::power_gap_ratio(s - n, g); };
    const auto i = kernel::weighted_integral(dim, s, w, m, 1.0, spec);
    const double c = specfun::sphere_area(dim - 1).value / (n - s);
    return {c * i.value, c * i.error, i.method};
}

/// Fractional perimeter of B_R, scaled from the unit ball.
[[nodiscard]] inline Estimate s_perimeter_ball(int dim, double s, double radius, const quad::QuadSpec& spec = {})
{
    require(radius > 0, ErrorKind::domain, "radius must be positive");
    const auto u = s_perimeter_unit_ball(dim, s, spec);
    const double k = std::pow(radius, dim - s);
    return {k * u.value, k * u.error, u.method};
}

/**
 * @brief Monte Carlo P_s(B_R) = 2 int_B |S^{N-1}| E_w[l(x,w)^{-s}]/s dx.
 *
 * l is the exit length of the ray from x along w. The depth d = 1 - |x| is drawn
 * with density (1-s) d^{-s}, which keeps the estimator bounded.
 */
[[nodiscard]] inline Estimate s_perimeter_ball_mc(int dim, double s, double radius, const mc::McSpec& spec)
{
    require(dim >= 1 && dim <= 3, ErrorKind::domain, "Monte Carlo perimeter supports N <= 3");
    require(s > 0 && s < 1, ErrorKind::domain, "s must lie in (0,1)");
    const double sphere = specfun::sphere_area(dim - 1).value;
    struct Draw {
        double d;
        std::array<double, 3> dir0, dir;
    };
    auto sampler = [&](mc::Rng& rng, double u0) {
        Draw dr{};
        dr.d = std::pow(u0, 1.0 / (1.0 - s));
        mc::random_direction(rng, dim, dr.dir0.data());
        mc::random_direction(rng, dim, dr.dir.data());
        const double density = (1.0 - s) * std::pow(dr.d, -s) / (sphere * std::pow(1.0 - dr.d, dim - 1));
        return mc::Sample<Draw>{dr, density};
    };
    auto f = [&](const Draw& dr) {
        double b = 0.0;
        for (int i = 0; i < dim; ++i) b += (1.0 - dr.d) * dr.dir0[i] * dr.dir[i];
        const double c = dr.d * (2.0 - dr.d);
        const double root = std::sqrt(b * b + c);
        const double len = b >= 0 ? c / (b + root) : root - b;
        return 2.0 * sphere * std::pow(len, -s) / s;
    };
    auto e = mc::integrate_mc(f, sampler, spec);
    const double k = std::pow(radius, dim - s);
    return {k * e.value, k * e.error, Method::monte_carlo};
}

/// Upper bound P_s(B_r)/|B_r| for h_s(Omega), with r the inradius (inscribed-ball competitor).
[[nodiscard]] inline Estimate h_s_upper(const DomainModel& d, double s)
{
    const double r = inradius(d);
    if (!std::isfinite(r)) fail(ErrorKind::unbounded_inradius, "h_s bound needs a finite inradius");
    const auto p = s_perimeter_ball(d.dim, s, r);
    const double vol = specfun::ball_volume(d.dim).value * std::pow(r, d.dim);
    return {p.value / vol, p.error / vol, p.method};
}

} // namespace geometry
} // namespace frac_hardy
