#pragma once

/**
 * @file supersol.hpp
 * @brief Weak-form check that U = d^beta is a supersolution of the fractional p-Laplace
 * Hardy equation with lambda = C(beta), tested against nonnegative bumps.
 */

#include "frac_hardy/constants.hpp"
#include "frac_hardy/error.hpp"
#include "frac_hardy/geometry.hpp"
#include "frac_hardy/montecarlo.hpp"
#include "frac_hardy/parallel.hpp"
#include "frac_hardy/quad.hpp"
#include "frac_hardy/rayleigh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace frac_hardy {

enum class Verdict { supersolution_ok, violation, inconclusive };

[[nodiscard]] inline std::string_view to_string(Verdict v) noexcept
{
    switch (v) {
    case Verdict::supersolution_ok: return "supersolution_ok";
    case Verdict::violation: return "violation";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

struct PairingResult {
    Estimate lhs;
    Estimate rhs;
    Estimate residual;
    Verdict verdict = Verdict::inconclusive;
};

struct SupersolOptions {
    quad::QuadSpec quad{1e-8, 1e-300, 4096};
    mc::McSpec mc{200000};
    /// Sample budget for the doubling applied to inconclusive Monte Carlo verdicts.
    std::uint64_t max_samples = 3200000;
    /// Verdicts need residual.error <= resolution * |rhs|.
    double resolution = 0.1;
};

namespace supersol {

namespace detail {

[[nodiscard]] inline double jp(double t, double p) { return std::copysign(std::pow(std::fabs(t), p - 1), t); }

/// Index of the nearest puncture.
[[nodiscard]] inline std::size_t nearest(const DomainModel& d, std::span<const double> x)
{
    std::size_t best = 0;
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < d.punctures.size(); ++i) {
        const double r = geometry::distance(x, d.punctures[i]);
        if (r < m) {
            m = r;
            best = i;
        }
    }
    return best;
}

} // namespace detail

/// U(x) = d(x)^beta.
[[nodiscard]] inline double u_value(const DomainModel& d, double beta, std::span<const double> x)
{
    return std::pow(geometry::distance_to_boundary(d, x), beta);
}

/// U(x) - U(y), accurate for close points sharing a nearest puncture.
[[nodiscard]] inline double u_difference(const DomainModel& d, double beta, std::span<const double> x,
                                         std::span<const double> y)
{
    const std::size_t i = detail::nearest(d, x), j = detail::nearest(d, y);
    if (i != j) return u_value(d, beta, x) - u_value(d, beta, y);
    const auto& q = d.punctures[i];
    double num = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) num += (y[k] - x[k]) * (y[k] + x[k] - 2.0 * q[k]);
    const double dx = geometry::distance(x, q), dy = geometry::distance(y, q);
    if (dx + dy == 0.0) return 0.0;
    const double gap = num / (dx + dy); // dy - dx
    if (dx == 0.0 || dy == 0.0) return std::pow(dx, beta) - std::pow(dy, beta);
    return gap >= 0 ? rayleigh::detail::power_drop(dx, gap, beta) : -rayleigh::detail::power_drop(dy, -gap, beta);
}

inline void check_inputs(const FracParams& fp, const DomainModel& d, const BetaExponent& be, const TrialFunction& phi)
{
    validate(fp);
    require(d.kind == DomainKind::punctured_space, ErrorKind::unsupported_domain,
            "supersolution checks support finite puncture sets only");
    require(d.dim == fp.dim, ErrorKind::domain, "domain dimension does not match params");
    require(be.params.dim == fp.dim && be.params.s == fp.s && be.params.p == fp.p, ErrorKind::domain,
            "beta exponent was built for other params");
    constants::validate(be);
    rayleigh::check_support(d, phi);
    bool nonneg = true;
    if (phi.kind == TrialKind::bump) nonneg = phi.amplitude >= 0;
    if (phi.kind == TrialKind::power_distance) nonneg = phi.beta > 0;
    require(nonneg, ErrorKind::domain, "test function must be nonnegative");
}

namespace detail {

/// Breakpoints of phi on the line: centre and centre +- profile breakpoints.
[[nodiscard]] inline std::vector<double> phi_points_1d(const TrialFunction& phi)
{
    const double c = phi.center[0];
    std::vector<double> pts{c};
    if (phi.radial())
        for (double b : phi.profile().breakpoints) {
            pts.push_back(c - b);
            pts.push_back(c + b);
        }
    else {
        pts.push_back(c - phi.support_radius);
        pts.push_back(c + phi.support_radius);
    }
    return pts;
}

[[nodiscard]] inline std::vector<double> sorted_unique(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

/**
 * N = 1 pairing. With K = [c - S, c + S] the support interval,
 * lhs = 2 int_0^{2S} z^{-1-sp} int J(U(x) - U(x+z)) (phi(x) - phi(x+z)) dx dz (x, x+z in K)
 *     + 2 int_K phi(x) int_{y outside K} J(U(x) - U(y)) |x - y|^{-1-sp} dy dx.
 */
[[nodiscard]] inline Estimate pairing_1d(const FracParams& fp, const DomainModel& d, double beta, const TrialFunction& phi,
                                         const quad::QuadSpec& spec)
{
    const double p = fp.p, sp = fp.sp(), alpha = p - sp;
    const double c = phi.center[0], S = phi.support_radius, lo = c - S, hi = c + S;
    quad::QuadSpec inner_spec = spec;
    inner_spec.l1_relative = true;
    auto U = [&](double x) { return u_value(d, beta, std::span<const double>(&x, 1)); };
    auto ph = [&](double x) { return phi(std::span<const double>(&x, 1)); };
    std::vector<double> qs;
    for (const auto& q : d.punctures) qs.push_back(q[0]);
    auto near_q = [&](double x) {
        double best = qs[0];
        for (double q : qs)
            if (std::fabs(x - q) < std::fabs(x - best)) best = q;
        return best;
    };
    // U(x) - U(x + z) and phi(x) - phi(x + z), z > 0, without forming x + z where it matters
    auto dU = [&](double x, double z) {
        const double q = near_q(x), y = x + z;
        if (near_q(y) != q || (x - q) * (y - q) <= 0) return U(x) - U(y);
        const double dx = std::fabs(x - q);
        if (x > q) return rayleigh::detail::power_drop(dx, z, beta);
        return -rayleigh::detail::power_drop(dx - z, z, beta);
    };
    const RadialProfile prof = phi.radial() ? phi.profile() : RadialProfile{};
    auto dph = [&](double x, double z) {
        const double y = x + z;
        if (!phi.radial() || (x - c) * (y - c) <= 0) return ph(x) - ph(y);
        const double rx = std::fabs(x - c);
        if (x > c) return -prof.drop(rx + z, z);
        return prof.drop(rx, z);
    };

    std::vector<double> kinks = rayleigh::detail::distance_kinks_1d(d, -std::numeric_limits<double>::infinity(),
                                                                    std::numeric_limits<double>::infinity());
    std::vector<double> inside;
    for (double k : kinks)
        if (k > lo && k < hi) inside.push_back(k);
    std::vector<double> fixed = phi_points_1d(phi);
    for (double k : inside) fixed.push_back(k);
    fixed = sorted_unique(fixed);

    // near part
    auto H = [&](double z) {
        z = std::max(z, 1e-300);
        std::vector<double> cuts{lo, hi - z};
        for (double f : fixed) {
            if (f > lo && f < hi - z) cuts.push_back(f);
            if (f - z > lo && f - z < hi - z) cuts.push_back(f - z);
        }
        cuts = sorted_unique(cuts);
        Estimate sum{};
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            auto g = [&](double x) { return jp(dU(x, z) / z, p) * (dph(x, z) / z); };
            const auto e =
                rayleigh::detail::best_effort([&] { return quad::integrate_tanh_sinh(g, cuts[k], cuts[k + 1], inner_spec); });
            sum.value += e.value;
            sum.error += e.error;
        }
        return sum;
    };
    std::vector<double> zc;
    for (std::size_t i = 0; i < fixed.size(); ++i)
        for (std::size_t j = i + 1; j < fixed.size(); ++j) {
            const double z = fixed[j] - fixed[i];
            if (z > 0 && z < 2 * S) zc.push_back(z);
        }
    zc.push_back(2 * S);
    zc = sorted_unique(zc);
    Estimate near = rayleigh::detail::nested(
        [&](auto&& fn, const quad::QuadSpec& s) { return quad::integrate_endpoint_power(fn, alpha, zc[0], s); }, H, spec);
    for (std::size_t k = 0; k + 1 < zc.size(); ++k) {
        auto g = [&](double z) {
            const auto h = H(z);
            const double w = std::pow(z, alpha - 1);
            return Estimate{w * h.value, w * h.error, h.method};
        };
        const auto e = rayleigh::detail::nested(
            [&](auto&& fn, const quad::QuadSpec& s) { return quad::integrate_tanh_sinh(fn, zc[k], zc[k + 1], s); }, g, spec);
        near.value += e.value;
        near.error += e.error;
    }

    // y outside K: pieces split at punctures and midpoints, plus the two infinite rays
    std::vector<double> right{hi}, left{lo};
    for (double k : kinks) {
        if (k > hi) right.push_back(k);
        if (k < lo) left.push_back(k);
    }
    right = sorted_unique(right);
    left = sorted_unique(left);
    std::reverse(left.begin(), left.end());
    auto F = [&](double x) {
        const double ux = U(x);
        double sum = 0.0, err = 0.0;
        auto add = [&](const Estimate& e) {
            sum += e.value;
            err += e.error;
        };
        auto piece = [&](double a, double b) {
            // |x - y| from the gap to the nearer endpoint, which lies between x and y
            auto g = [&](double y, double lg, double rg) {
                const double dist = a >= x ? (a - x) + lg : (x - b) + rg;
                return jp(ux - U(y), p) * std::pow(dist, -1.0 - sp);
            };
            add(rayleigh::detail::best_effort([&] { return quad::integrate_tanh_sinh(g, a, b, quad::singular(inner_spec)); }));
        };
        for (std::size_t k = 0; k + 1 < right.size(); ++k) piece(right[k], right[k + 1]);
        for (std::size_t k = 0; k + 1 < left.size(); ++k) piece(left[k + 1], left[k]);
        for (int side : {1, -1}) {
            const double k = side > 0 ? right.back() : left.back();
            const double L = 1.0 + std::fabs(k);
            // y = k + side * L (1 - v)/v
            auto g = [&](double, double v, double w) {
                const double t = L * w / v;
                const double y = k + side * t;
                return jp(ux - U(y), p) * std::pow(std::fabs(k - x) + t, -1.0 - sp) * L / (v * v);
            };
            add(rayleigh::detail::best_effort([&] { return quad::integrate_tanh_sinh(g, 0.0, 1.0, quad::singular(inner_spec)); }));
        }
        return Estimate{sum, err, Method::tanh_sinh};
    };
    std::vector<double> xc{lo, hi};
    for (double f : fixed)
        if (f > lo && f < hi) xc.push_back(f);
    xc = sorted_unique(xc);
    Estimate far{};
    for (std::size_t k = 0; k + 1 < xc.size(); ++k) {
        auto g = [&](double x) {
            const double w = ph(x);
            if (w == 0.0) return Estimate{};
            const auto f = F(x);
            return Estimate{w * f.value, w * f.error, f.method};
        };
        const auto e = rayleigh::detail::nested(
            [&](auto&& fn, const quad::QuadSpec& s) { return quad::integrate_tanh_sinh(fn, xc[k], xc[k + 1], s); }, g, spec);
        far.value += e.value;
        far.error += e.error;
    }
    const double v = 2.0 * (near.value + far.value);
    const double err = 2.0 * (near.error + far.error) + 1e-12 * (std::fabs(2 * near.value) + std::fabs(2 * far.value));
    return {v, err, Method::tanh_sinh};
}

/**
 * Monte Carlo pairing for N = 2, 3. x is uniform in the support ball B_S; a near
 * offset |z| < 2S is drawn with density ~ |z|^{p-sp-N} and a far offset with
 * density ~ |z|^{-N-sigma}, sigma = (sp - beta(p-1))/2.
 */
[[nodiscard]] inline Estimate pairing_mc(const FracParams& fp, const DomainModel& d, double beta, const TrialFunction& phi,
                                         const mc::McSpec& spec)
{
    const int dim = fp.dim;
    require(dim <= 3, ErrorKind::dimension_unsupported, "Monte Carlo pairing supports N <= 3");
    const double p = fp.p, sp = fp.sp();
    const double gamma = p - sp, sigma = 0.5 * (sp - beta * (p - 1));
    const double S = phi.support_radius, Z = 2.0 * S;
    const double sphere = specfun::sphere_area(dim - 1).value;
    const double vol = specfun::ball_volume(dim).value * std::pow(S, dim);
    const double near_c = sphere * std::pow(Z, gamma) / gamma;
    const double far_c = 2.0 * sphere * std::pow(Z, -sigma) / sigma;
    struct Draw {
        std::array<double, 3> x, y, yf;
        double rho, rho_f;
    };
    auto sampler = [&](mc::Rng& rng, double u0) {
        Draw dr{};
        std::array<double, 3> w{};
        mc::random_direction(rng, dim, w.data());
        const double rx = S * std::pow(u0, 1.0 / dim);
        for (int i = 0; i < dim; ++i) dr.x[i] = phi.center[i] + rx * w[i];
        dr.rho = Z * std::pow(rng.uniform(), 1.0 / gamma);
        mc::random_direction(rng, dim, w.data());
        for (int i = 0; i < dim; ++i) dr.y[i] = dr.x[i] + dr.rho * w[i];
        dr.rho_f = Z * std::pow(rng.uniform(), -1.0 / sigma);
        mc::random_direction(rng, dim, w.data());
        for (int i = 0; i < dim; ++i) dr.yf[i] = dr.x[i] + dr.rho_f * w[i];
        return mc::Sample<Draw>{dr, 1.0 / vol};
    };
    auto f = [&](const Draw& dr) {
        const std::span<const double> x(dr.x.data(), dim), y(dr.y.data(), dim), yf(dr.yf.data(), dim);
        const double w = geometry::distance(y, phi.center) < S ? 1.0 : 2.0;
        const double near = w * near_c * jp(u_difference(d, beta, x, y), p) * phi.difference(x, y) *
                            std::pow(dr.rho, -sp - gamma);
        const double far = far_c * jp(u_value(d, beta, x) - u_value(d, beta, yf), p) * phi(x) *
                           std::pow(dr.rho_f, sigma - sp);
        return near + far;
    };
    auto e = mc::integrate_mc(f, sampler, spec);
    return {e.value, e.error, Method::monte_carlo};
}

} // namespace detail

/// <(-Delta_p)^s U, phi> for U = d^beta.
[[nodiscard]] inline Estimate pairing_lhs(const FracParams& fp, const DomainModel& d, const BetaExponent& be,
                                          const TrialFunction& phi, const SupersolOptions& opt = {})
{
    check_inputs(fp, d, be, phi);
    if (phi.kind == TrialKind::bump && phi.amplitude == 0.0) return {0.0, 0.0, Method::closed_form};
    if (fp.dim == 1) return detail::pairing_1d(fp, d, be.beta, phi, opt.quad);
    return detail::pairing_mc(fp, d, be.beta, phi, opt.mc);
}

/// lambda * int d^{beta(p-1) - sp} phi dx.
[[nodiscard]] inline Estimate rhs_weighted(const FracParams& fp, const DomainModel& d, const BetaExponent& be, double lambda,
                                           const TrialFunction& phi, const SupersolOptions& opt = {})
{
    check_inputs(fp, d, be, phi);
    if (lambda == 0.0) return {0.0, 0.0, Method::closed_form};
    const double q = fp.sp() - be.beta * (fp.p - 1.0);
    RayleighOptions ro;
    ro.quad = opt.quad;
    ro.mc = opt.mc;
    const auto e = rayleigh::weighted_lp(FracParams{fp.dim, fp.s, 1.0}, d, phi, q, ro);
    return {lambda * e.value, std::fabs(lambda) * e.error, e.method};
}

[[nodiscard]] inline Verdict verdict(const Estimate& residual, const Estimate& rhs, double resolution)
{
    if (!std::isfinite(residual.value) || !std::isfinite(residual.error)) return Verdict::inconclusive;
    if (residual.error > resolution * std::fabs(rhs.value)) return Verdict::inconclusive;
    return residual.value >= -residual.error ? Verdict::supersolution_ok : Verdict::violation;
}

/// One pairing with lambda given; inconclusive results are refined (tighter quadrature or doubled samples).
[[nodiscard]] inline PairingResult check_pairing(const FracParams& fp, const DomainModel& d, const BetaExponent& be,
                                                 double lambda, const TrialFunction& phi, SupersolOptions opt = {})
{
    for (;;) {
        PairingResult r;
        r.lhs = pairing_lhs(fp, d, be, phi, opt);
        r.rhs = rhs_weighted(fp, d, be, lambda, phi, opt);
        const Method m = r.lhs.method == Method::monte_carlo ? Method::monte_carlo : r.lhs.method;
        r.residual = {r.lhs.value - r.rhs.value, r.lhs.error + r.rhs.error, m};
        r.verdict = verdict(r.residual, r.rhs, opt.resolution);
        if (r.verdict != Verdict::inconclusive) return r;
        if (fp.dim == 1) {
            if (opt.quad.rel_tol <= 1e-11) return r;
            opt.quad.rel_tol = std::max(1e-11, opt.quad.rel_tol * 0.01);
        } else {
            if (opt.mc.samples * 2 > opt.max_samples) return r;
            opt.mc.samples *= 2;
        }
    }
}

/// Pairings of U = d^beta against each phi with the given lambda.
[[nodiscard]] inline std::vector<PairingResult> verify_supersolution(const FracParams& fp, const DomainModel& d,
                                                                     const BetaExponent& be, double lambda,
                                                                     const std::vector<TrialFunction>& phis,
                                                                     const SupersolOptions& opt = {})
{
    validate(fp);
    std::vector<PairingResult> out(phis.size());
    if (fp.dim == 1)
        parallel_for(phis.size(), [&](std::size_t i) { out[i] = check_pairing(fp, d, be, lambda, phis[i], opt); });
    else
        for (std::size_t i = 0; i < phis.size(); ++i) out[i] = check_pairing(fp, d, be, lambda, phis[i], opt);
    return out;
}

/// Pairings of U = d^beta against each phi with lambda = C(beta).
[[nodiscard]] inline std::vector<PairingResult> verify_supersolution(const FracParams& fp, const DomainModel& d,
                                                                     const BetaExponent& be,
                                                                     const std::vector<TrialFunction>& phis,
                                                                     const SupersolOptions& opt = {})
{
    constants::validate(be);
    return verify_supersolution(fp, d, be, constants::c_beta(be).value, phis, opt);
}

/**
 * @brief Seeded bumps with supports at distance >= 0.05 from the punctures.
 *
 * Centres are uniform in the punctures' bounding box widened by 2, radii in
 * [0.05, 0.5] (shrunk to fit), amplitudes in [0.5, 2].
 */
[[nodiscard]] inline std::vector<TrialFunction> bump_corpus(const DomainModel& d, std::size_t count, std::uint64_t seed)
{
    geometry::validate(d);
    require(d.kind == DomainKind::punctured_space, ErrorKind::unsupported_domain, "bump corpus needs a punctured domain");
    std::vector<double> lo(d.dim, std::numeric_limits<double>::infinity()), hi(d.dim, -lo[0]);
    for (const auto& q : d.punctures)
        for (int k = 0; k < d.dim; ++k) {
            lo[k] = std::min(lo[k], q[k] - 2.0);
            hi[k] = std::max(hi[k], q[k] + 2.0);
        }
    std::vector<TrialFunction> out;
    for (std::uint64_t i = 0; out.size() < count; ++i) {
        mc::Rng rng(seed, i);
        Point c(d.dim);
        for (int k = 0; k < d.dim; ++k) c[k] = lo[k] + (hi[k] - lo[k]) * rng.uniform();
        const double room = geometry::distance_to_boundary(d, c) - 0.05;
        double r = 0.05 + 0.45 * rng.uniform();
        const double amp = 0.5 + 1.5 * rng.uniform();
        if (room < 0.05) continue;
        r = std::min(r, room);
        out.push_back(TrialFunction::bump(std::move(c), r, amp));
    }
    return out;
}

} // namespace supersol
} // namespace frac_hardy
