#pragma once

/**
 * @file bounds.hpp
 * @brief Lower bounds for the first eigenvalue via the Hardy constant, inradius and Cheeger constants.
 */

#include "frac_hardy/constants.hpp"
#include "frac_hardy/error.hpp"
#include "frac_hardy/geometry.hpp"
#include "frac_hardy/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace frac_hardy {

struct BoundReport {
    DomainModel domain;
    FracParams params;
    /// h_{s,p} / r^{sp}.
    Estimate inradius_bound;
    /// h_{s,p} (h_1/N)^{sp}; empty when h_1 is not available for the domain.
    std::optional<Estimate> cheeger_bound;
    /// Built from an upper bound on h_s, so it is diagnostic only (see heuristic flag).
    std::optional<Estimate> fractional_cheeger_bound;
    bool fractional_cheeger_heuristic = true;
    /// The improved s = 1 Cheeger bound, when p > N and h_1 is available.
    std::optional<Estimate> improved_classical;
    double lambda_s_infinity = 0.0;
};

namespace bounds {

/// max{((p-N)/N)^p, 1} (h_1/p)^p.
[[nodiscard]] inline Estimate improved_cheeger_s1(int dim, double p, double h1)
{
    require(dim >= 1, ErrorKind::domain, "dimension must be >= 1");
    require(p > dim && std::isfinite(p), ErrorKind::domain, "the improved Cheeger bound requires p > N");
    require(h1 > 0 && std::isfinite(h1), ErrorKind::domain, "h_1 must be positive");
    const double n = dim;
    // Both factors in logs: at p = 200 each overflows or underflows on its own.
    const double lf = std::max(p * std::log((p - n) / n), 0.0);
    const double v = std::exp(lf + p * std::log(h1 / p));
    return {v, 4 * p * std::numeric_limits<double>::epsilon() * v, Method::closed_form};
}

/// r^{-s}, and 0 for domains with infinite inradius.
[[nodiscard]] inline double lambda_s_infinity(const DomainModel& d, double s)
{
    geometry::validate(d);
    require(s > 0 && s <= 1, ErrorKind::domain, "s must lie in (0,1]");
    const double r = geometry::inradius(d);
    if (!std::isfinite(r)) return 0.0;
    return std::pow(r, -s);
}

[[nodiscard]] inline BoundReport eigenvalue_lower_bounds(const FracParams& fp, const DomainModel& d,
                                                         const quad::QuadSpec& spec = {})
{
    validate(fp);
    geometry::validate(d);
    require(d.dim == fp.dim, ErrorKind::domain, "domain dimension does not match params");
    if (!fp.supercritical()) fail(ErrorKind::critical_exponent, "the eigenvalue bounds require sp > N");
    const double r = geometry::inradius(d);
    if (!std::isfinite(r)) fail(ErrorKind::unbounded_inradius, "the eigenvalue bounds require a finite inradius");

    const double sp = fp.sp(), n = fp.dim;
    const Estimate h = constants::hardy_constant(fp, spec).value;
    BoundReport rep;
    rep.domain = d;
    rep.params = fp;
    const double rs = std::pow(r, -sp);
    rep.inradius_bound = {h.value * rs, h.error * rs, h.method};
    rep.lambda_s_infinity = lambda_s_infinity(d, fp.s);

    std::optional<double> h1;
    try {
        h1 = geometry::cheeger_h1(d).value;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::unsupported_domain) throw;
    }
    if (h1) {
        const double k = std::pow(*h1 / n, sp);
        rep.cheeger_bound = Estimate{h.value * k, h.error * k, h.method};
        if (fp.p > n) rep.improved_classical = improved_cheeger_s1(fp.dim, fp.p, *h1);
    }

    const auto hs = geometry::h_s_upper(d, fp.s);
    const double c = (1 - fp.s) * fp.s / (2 * n * specfun::ball_volume(fp.dim).value);
    const double k = std::pow(c * hs.value, fp.p) / std::pow(n, sp);
    const double rel = h.error / h.value + fp.p * hs.error / hs.value;
    rep.fractional_cheeger_bound = Estimate{h.value * k, rel * h.value * k, h.method};
    rep.fractional_cheeger_heuristic = true;
    return rep;
}

} // namespace bounds
} // namespace frac_hardy
