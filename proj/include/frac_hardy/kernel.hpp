#pragma once

/**
 * @file kernel.hpp
 * @brief The angular kernel Phi_{N,s,p}(r) and G(t) = B((N-1)/2, 1/2) 2F1(...; t).
 */

#include "frac_hardy/error.hpp"
#include "frac_hardy/quad.hpp"
#include "frac_hardy/specfun.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace frac_hardy {

struct FracParams {
    int dim = 1;
    double s = 0.5;
    double p = 2.0;

    [[nodiscard]] double sp() const noexcept { return s * p; }
    [[nodiscard]] bool supercritical() const noexcept { return s * p > dim; }
    [[nodiscard]] bool noncritical() const noexcept { return std::fabs(s * p - dim) > 1e-12; }
};

inline void validate(const FracParams& fp)
{
    require(fp.dim >= 1, ErrorKind::domain, "dimension must be >= 1");
    require(fp.s > 0.0 && fp.s < 1.0, ErrorKind::domain, "s must lie in (0,1)");
    require(fp.p > 1.0 && std::isfinite(fp.p), ErrorKind::domain, "p must lie in (1,inf)");
}

namespace kernel {

namespace detail {

[[nodiscard]] inline double logaddexp(double a, double b) noexcept
{
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::fabs(a - b)));
}

inline const quad::QuadSpec& inner_spec()
{
    static const quad::QuadSpec spec{1e-13, 1e-300, 2000, quad::EndpointMode::none};
    return spec;
}

} // namespace detail

/// lim_{g -> 0} Phi(1 - g) g^{1+sp}.
[[nodiscard]] inline double phi_scaled_limit(int dim, double sp)
{
    if (dim == 1) return 1.0;
    return specfun::sphere_area(dim - 2).value * specfun::beta(0.5 * (dim - 1), 0.5 * (1 + sp)).value / 2.0;
}

/**
 * @brief Phi(1 - gap) * gap^{1+sp} for gap in [0, 1], with Phi built from exponent sp.
 *
 * Bounded as gap -> 0, which is how integrals against Phi near r = 1 are formed.
 * Takes sp directly so the W^{s,1} perimeter can reuse it with sp = s.
 */
[[nodiscard]] inline Estimate phi_scaled(int dim, double sp, double gap)
{
    require(dim >= 1, ErrorKind::domain, "dimension must be >= 1");
    require(gap >= 0.0 && gap <= 1.0, ErrorKind::domain, "phi_scaled requires gap in [0,1]");
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (dim == 1) {
        const double v = 1.0 + std::pow(gap / (2.0 - gap), 1.0 + sp);
        return {v, 2 * eps * v, Method::closed_form};
    }
    if (gap == 0.0) {
        const double v = phi_scaled_limit(dim, sp);
        return {v, 1e-13 * v, Method::closed_form};
    }
    const double n = dim;
    const double r = 1.0 - gap;
    const double lg = std::log(gap);
    const double ln2r = r > 0 ? std::log(2.0 * r) : -std::numeric_limits<double>::infinity();
    const double sphere = specfun::sphere_area(dim - 2).value;

    // t in [-1, 0]: 1 - 2tr + r^2 >= 1, the only singularity is (1 - t^2)^{(N-3)/2} at t = -1.
    auto far = [&](double t, double left_gap, double) {
        const double one_minus_t2 = left_gap * (2.0 - left_gap);
        const double d = 1.0 + r * r - 2.0 * t * r;
        return std::exp(0.5 * (n - 3) * std::log(one_minus_t2) + (1 + sp) * lg - 0.5 * (n + sp) * std::log(d));
    };
    const auto a = quad::integrate_tanh_sinh(far, -1.0, 0.0, detail::inner_spec());

    // t in [0, 1] with 1 - t = e^y, so 1 - 2tr + r^2 = gap^2 + 2 r e^y.
    auto near = [&](double y) {
        const double w = std::exp(y);
        const double logd = detail::logaddexp(2 * lg, ln2r + y);
        return std::exp(y + 0.5 * (n - 3) * (y + std::log(2.0 - w)) + (1 + sp) * lg - 0.5 * (n + sp) * logd);
    };
    const double y_min = std::min(0.0, 2 * lg - ln2r) - 80.0 / (n - 1);
    const auto b = quad::integrate_adaptive(near, y_min, 0.0, detail::inner_spec());
    const double tail = 2.0 / (n - 1) * std::pow(2.0, std::fabs(n - 3) / 2) *
                        std::exp(0.5 * (n - 1) * y_min + (1 - n) * lg);

    const double v = sphere * (a.value + b.value);
    return {v, sphere * (a.error + b.error + tail) + 1e-14 * v, Method::tanh_sinh};
}

/// Phi_{N,s,p}(r): closed form for N = 1, direct angular integral for N >= 2.
[[nodiscard]] inline Estimate phi(const FracParams& fp, double r)
{
    validate(fp);
    require(r >= 0.0 && r < 1.0, ErrorKind::domain, "phi requires r in [0,1)");
    const double sp = fp.sp();
    if (fp.dim == 1) {
        const double v = std::pow(1.0 - r, -1.0 - sp) + std::pow(1.0 + r, -1.0 - sp);
        return {v, 4 * std::numeric_limits<double>::epsilon() * (2 + sp) * v, Method::closed_form};
    }
    const double gap = 1.0 - r;
    const auto e = phi_scaled(fp.dim, sp, gap);
    const double scale = std::pow(gap, -1.0 - sp);
    return {e.value * scale, e.error * scale, e.method};
}

/// G(t) = B((N-1)/2, 1/2) 2F1((N+ps)/2, (ps+2)/2; N/2; t), so Phi(r) = |S^{N-2}| G(r^2).
[[nodiscard]] inline Estimate g_of_t(const FracParams& fp, double t)
{
    validate(fp);
    if (fp.dim == 1) fail(ErrorKind::dimension_unsupported, "G(t) is undefined for N = 1; use phi");
    require(t >= 0.0 && t < 1.0, ErrorKind::domain, "g_of_t requires t in [0,1)");
    const double n = fp.dim, sp = fp.sp();
    const double sphere = specfun::sphere_area(fp.dim - 2).value;
    const auto b = specfun::beta(0.5 * (n - 1), 0.5);
    auto fallback = [&] {
        const auto e = phi(fp, std::sqrt(t));
        const double scale = 1.0 / (sphere * b.value);
        return specfun::SpecialValue{e.value * scale, e.error * scale};
    };
    const auto f = specfun::hyp2f1(0.5 * (n + sp), 0.5 * (sp + 2), 0.5 * n, t, fallback);
    return {b.value * f.value, b.abs_error * std::fabs(f.value) + b.value * f.abs_error, Method::closed_form};
}

/**
 * @brief Fast evaluation of Phi(1 - g) g^{1+sp} through the B * 2F1 representation.
 *
 * Uses the series in r^2 for r^2 <= 1/2 and the linear transformation in 1 - r^2 above,
 * with the connection coefficients precomputed. When sp is within 1e-3 of an integer the
 * transformation loses accuracy and the direct integral is used instead.
 */
class FastPhi {
public:
    FastPhi(int dim, double sp) : dim_(dim), sp_(sp)
    {
        require(dim >= 1, ErrorKind::domain, "dimension must be >= 1");
        if (dim == 1) return;
        const double n = dim;
        a_ = 0.5 * (n + sp);
        b_ = 0.5 * (sp + 2);
        c_ = 0.5 * n;
        prefactor_ = specfun::sphere_area(dim - 2).value * specfun::beta(0.5 * (n - 1), 0.5).value;
        const double m = c_ - a_ - b_;
        direct_ = std::fabs(m - std::round(m)) < 1e-3;
        if (direct_) return;
        auto coef = [](double g0, double g1, double g2, double g3) {
            const auto [l0, s0] = specfun::detail::lgamma_signed(g0);
            const auto [l1, s1] = specfun::detail::lgamma_signed(g1);
            const auto [l2, s2] = specfun::detail::lgamma_signed(g2);
            const auto [l3, s3] = specfun::detail::lgamma_signed(g3);
            if (s2 == 0 || s3 == 0) return 0.0;
            return s0 * s1 * s2 * s3 * std::exp(l0 + l1 - l2 - l3);
        };
        c1_ = coef(c_, m, c_ - a_, c_ - b_);
        c2_ = coef(c_, -m, a_, b_);
    }

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] double sp() const noexcept { return sp_; }

    /// Phi(1 - g) g^{1+sp} for g in [0, 1].
    [[nodiscard]] double scaled(double g) const
    {
        if (dim_ == 1) return 1.0 + std::pow(g / (2.0 - g), 1.0 + sp_);
        if (direct_) return phi_scaled(dim_, sp_, g).value;
        if (g == 0.0) return prefactor_ * c2_ * std::pow(2.0, -1.0 - sp_);
        const double r = 1.0 - g;
        const double t = r * r;
        if (t <= 0.5) return prefactor_ * specfun::hyp2f1_series(a_, b_, c_, t).value * std::pow(g, 1.0 + sp_);
        const double w = g * (2.0 - g);
        double v = 0.0;
        if (c1_ != 0.0) v += c1_ * specfun::hyp2f1_series(a_, b_, 1.0 - (c_ - a_ - b_), w).value * std::pow(g, 1.0 + sp_);
        v += c2_ * specfun::hyp2f1_series(c_ - a_, c_ - b_, c_ - a_ - b_ + 1.0, w).value * std::pow(2.0 - g, -1.0 - sp_);
        return prefactor_ * v;
    }

    /// Phi(r) for r in [0, 1).
    [[nodiscard]] double operator()(double r) const
    {
        const double g = 1.0 - r;
        return scaled(g) * std::pow(g, -1.0 - sp_);
    }

private:
    int dim_;
    double sp_;
    double a_ = 0, b_ = 0, c_ = 0, prefactor_ = 0, c1_ = 0, c2_ = 0;
    bool direct_ = false;
};

/// |1 - (1 - g)^c| / g, with its limit |c| at g = 0.
[[nodiscard]] inline double power_gap_ratio(double c, double g)
{
    if (g == 0.0) return std::fabs(c);
    return std::fabs(std::expm1(c * std::log1p(-g))) / g;
}

/**
 * 2 * integral over (0,1) of w(r) Phi(r), where near r = 1 the weight factors as
 * w(1 - g) = g^k m(g) with k > sp. The part on [1/2, 1) is integrated in g with the
 * algebraic factor g^{k-1-sp} absorbed by the power substitution.
 */
template <class W, class M>
[[nodiscard]] Estimate weighted_integral(int dim, double sp, W&& w, M&& m, double k, const quad::QuadSpec& spec)
{
    auto lower = [&](double r, double left_gap, double) {
        const double gap = 1.0 - r;
        const double ph = phi_scaled(dim, sp, gap).value * std::pow(gap, -1.0 - sp);
        return w(left_gap) * ph;
    };
    const auto a = quad::integrate_tanh_sinh(lower, 0.0, 0.5, quad::singular(spec));
    auto upper = [&](double g) { return m(g) * phi_scaled(dim, sp, g).value; };
    const auto b = quad::integrate_endpoint_power(upper, k - sp, 0.5, spec);
    const double v = 2.0 * (a.value + b.value);
    return {v, 2.0 * (a.error + b.error) + 1e-12 * std::fabs(v), Method::tanh_sinh};
}

} // namespace kernel
} // namespace frac_hardy
