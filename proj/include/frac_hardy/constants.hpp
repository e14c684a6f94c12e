#pragma once

/**
 * @file constants.hpp
 * @brief The sharp Hardy constant h_{s,p}, the supersolution constant C(beta) and K_{p,N}.
 */

#include "frac_hardy/error.hpp"
#include "frac_hardy/kernel.hpp"
#include "frac_hardy/quad.hpp"
#include "frac_hardy/specfun.hpp"

#include <cmath>
#include <string_view>

namespace frac_hardy {

enum class Representation { frank_seiringer, reduced_power, cbeta_identity };

[[nodiscard]] inline std::string_view to_string(Representation r) noexcept
{
    switch (r) {
    case Representation::frank_seiringer: return "frank_seiringer";
    case Representation::reduced_power: return "reduced_power";
    case Representation::cbeta_identity: return "cbeta_identity";
    }
    return "unknown";
}

struct HardyConstant {
    FracParams params;
    Estimate value;
    Representation representation = Representation::frank_seiringer;
    /// The reduced-power path, computed independently.
    Estimate cross_check;
};

struct BetaExponent {
    double beta = 0.0;
    FracParams params;
};

namespace constants {

/// (sp - N)/p, the exponent of the exact punctured-space solution.
[[nodiscard]] inline double hardy_beta(const FracParams& fp) { return (fp.sp() - fp.dim) / fp.p; }

/// (sp - N)/(p - 1), the open upper end of the admissible beta interval.
[[nodiscard]] inline double beta_upper(const FracParams& fp) { return (fp.sp() - fp.dim) / (fp.p - 1.0); }

namespace detail {

[[nodiscard]] inline Estimate frank_seiringer(const FracParams& fp, const quad::QuadSpec& spec)
{
    const double n = fp.dim, sp = fp.sp(), p = fp.p, c = (n - sp) / p;
    auto w = [&](double r) {
        const double lr = std::log(r);
        return std::exp((sp - 1) * lr + p * std::log(std::fabs(std::expm1(c * lr))));
    };
    auto m = [&](double g) { return std::pow(1.0 - g, sp - 1) * std::pow(kernel::power_gap_ratio(c, g), p); };
    return kernel::weighted_integral(fp.dim, sp, w, m, p, spec);
}

[[nodiscard]] inline Estimate reduced_power(const FracParams& fp, const quad::QuadSpec& spec)
{
    const double n = fp.dim, sp = fp.sp(), p = fp.p, c = (sp - n) / p;
    auto w = [&](double r) {
        const double lr = std::log(r);
        return std::exp((n - 1) * lr + p * std::log(std::fabs(std::expm1(c * lr))));
    };
    auto m = [&](double g) { return std::pow(1.0 - g, n - 1) * std::pow(kernel::power_gap_ratio(c, g), p); };
    return kernel::weighted_integral(fp.dim, sp, w, m, p, spec);
}

} // namespace detail

/// h_{s,p} from the Frank-Seiringer integral, cross-checked by the reduced-power integral.
[[nodiscard]] inline HardyConstant hardy_constant(const FracParams& fp, const quad::QuadSpec& spec = {})
{
    validate(fp);
    if (!fp.noncritical()) fail(ErrorKind::critical_exponent, "h_{s,p} vanishes at sp = N");
    const auto fs = detail::frank_seiringer(fp, spec);
    const auto red = detail::reduced_power(fp, spec);
    Estimate v = fs;
    v.error = fs.error + std::fabs(fs.value - red.value);
    return {fp, v, Representation::frank_seiringer, red};
}

inline void validate(const BetaExponent& be)
{
    validate(be.params);
    if (!be.params.supercritical()) fail(ErrorKind::critical_exponent, "C(beta) requires sp > N");
    const double hi = beta_upper(be.params);
    if (!(be.beta > 1e-12 && be.beta < hi - 1e-12))
        fail(ErrorKind::beta_out_of_range, "beta must lie in (0, (sp-N)/(p-1))");
}

/// C(beta) = 2 int_0^1 j_p(1 - rho^beta) [rho^{N-1} - rho^{ps - beta(p-1) - 1}] Phi(rho) d rho.
[[nodiscard]] inline Estimate c_beta(const BetaExponent& be, const quad::QuadSpec& spec = {})
{
    validate(be);
    const auto& fp = be.params;
    const double n = fp.dim, sp = fp.sp(), p = fp.p, b = be.beta;
    // rho^{N-1} - rho^{ps - beta(p-1) - 1} = rho^{N-1} (1 - rho^e)
    const double e = sp - b * (p - 1) - n;
    auto w = [&](double r) {
        const double lr = std::log(r);
        const double one_minus = -std::expm1(b * lr);
        return std::pow(one_minus, p - 1) * std::exp((n - 1) * lr) * (-std::expm1(e * lr));
    };
    auto m = [&](double g) {
        return std::pow(kernel::power_gap_ratio(b, g), p - 1) * std::pow(1.0 - g, n - 1) * kernel::power_gap_ratio(e, g);
    };
    return kernel::weighted_integral(fp.dim, sp, w, m, p, spec);
}

/// K_{p,N} = (1/p) * integral over S^{N-1} of |omega_1|^p.
[[nodiscard]] inline Estimate k_pn(int dim, double p, const quad::QuadSpec& spec = {})
{
    require(dim >= 1, ErrorKind::domain, "K_{p,N} requires N >= 1");
    require(p > 1.0 && std::isfinite(p), ErrorKind::domain, "K_{p,N} requires p > 1");
    if (dim == 1) return {2.0 / p, 0.0, Method::closed_form};
    const double n = dim;
    auto f = [&](double t, double, double right_gap) {
        return std::pow(t, p) * std::pow(right_gap * (2.0 - right_gap), 0.5 * (n - 3));
    };
    const auto i = quad::integrate_tanh_sinh(f, 0.0, 1.0, quad::singular(spec));
    const double sphere = specfun::sphere_area(dim - 2).value;
    const double v = 2.0 / p * sphere * i.value;
    return {v, 2.0 / p * sphere * i.error + 1e-14 * v, i.method};
}

/// The universal bound h_{s,p}(Omega) >= h_{s,p} for every open Omega != R^N (sp > N).
[[nodiscard]] inline Estimate lower_bound_open_set(const FracParams& fp, const quad::QuadSpec& spec = {})
{
    validate(fp);
    if (!fp.supercritical()) fail(ErrorKind::critical_exponent, "the universal lower bound requires sp > N");
    return hardy_constant(fp, spec).value;
}

} // namespace constants
} // namespace frac_hardy
