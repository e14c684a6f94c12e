#pragma once

/**
 * @file asymptotics.hpp
 * @brief The limits (1-s) h_{s,p} -> K_{p,N} ((p-N)/p)^p as s -> 1 and h_{s,p}^{1/p} -> 1 as p -> inf.
 */

#include "frac_hardy/constants.hpp"
#include "frac_hardy/error.hpp"
#include "frac_hardy/parallel.hpp"
#include "frac_hardy/quad.hpp"
#include "frac_hardy/specfun.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace frac_hardy::asymptotics {

struct LimitReport {
    double target = 0.0;
    /// (limiting parameter, value) pairs in grid order.
    std::vector<std::pair<double, double>> samples;
    std::vector<double> sample_errors;
    Estimate extrapolated;
    bool converged = false;
    bool sequence_monotone_flag = false;
    double tolerance = 0.0;
    /// p -> inf only: the explicit lower-bound chain at each grid point.
    std::vector<double> chain_bounds;
    bool chain_bound_holds = true;
};

/**
 * @brief Polynomial (Neville) extrapolation to h = 0 in the variable h^order_hint.
 *
 * The error is the difference between the last two entries of the final row.
 */
[[nodiscard]] inline Estimate richardson_extrapolate(const std::vector<std::pair<double, double>>& samples,
                                                     double order_hint = 1.0)
{
    if (samples.size() < 3) fail(ErrorKind::insufficient_samples, "Richardson extrapolation needs >= 3 samples");
    require(order_hint > 0, ErrorKind::domain, "order_hint must be positive");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        require(samples[i].first > 0, ErrorKind::domain, "extrapolation steps must be positive");
        if (i > 0) require(samples[i].first < samples[i - 1].first, ErrorKind::domain,
                           "extrapolation steps must decrease strictly");
    }
    const std::size_t n = samples.size();
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::pow(samples[i].first, order_hint);
    std::vector<std::vector<double>> t(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i].resize(i + 1);
        t[i][0] = samples[i].second;
        for (std::size_t j = 1; j <= i; ++j)
            t[i][j] = (x[i - j] * t[i][j - 1] - x[i] * t[i - 1][j - 1]) / (x[i - j] - x[i]);
    }
    const auto& last = t[n - 1];
    return {last[n - 1], std::fabs(last[n - 1] - last[n - 2]), Method::extrapolation};
}

[[nodiscard]] inline bool monotone(const std::vector<std::pair<double, double>>& s)
{
    bool inc = true, dec = true;
    for (std::size_t i = 1; i < s.size(); ++i) {
        inc = inc && s[i].second >= s[i - 1].second;
        dec = dec && s[i].second <= s[i - 1].second;
    }
    return inc || dec;
}

/// Default grid 1 - s = 2^{-k}, k = 3..7.
[[nodiscard]] inline std::vector<double> default_s_grid()
{
    std::vector<double> g;
    for (int k = 3; k <= 7; ++k) g.push_back(1.0 - std::ldexp(1.0, -k));
    return g;
}

[[nodiscard]] inline LimitReport limit_s_to_1(int dim, double p, const std::vector<double>& s_grid,
                                              double tolerance = 0.01, const quad::QuadSpec& spec = {})
{
    require(p > dim, ErrorKind::domain, "the s -> 1 limit requires p > N");
    require(!s_grid.empty(), ErrorKind::invalid_config, "s grid is empty");
    for (std::size_t i = 0; i < s_grid.size(); ++i) {
        require(s_grid[i] > 0 && s_grid[i] < 1, ErrorKind::domain, "s grid must lie in (0,1)");
        if (i > 0) require(s_grid[i] > s_grid[i - 1], ErrorKind::domain, "s grid must increase toward 1");
    }
    LimitReport rep;
    rep.tolerance = tolerance;
    rep.target = constants::k_pn(dim, p).value * std::pow((p - dim) / p, p);
    std::vector<Estimate> h(s_grid.size());
    parallel_for(s_grid.size(), [&](std::size_t i) {
        h[i] = constants::hardy_constant({dim, s_grid[i], p}, spec).value;
    });
    std::vector<std::pair<double, double>> by_step;
    double sample_err = 0.0;
    for (std::size_t i = 0; i < s_grid.size(); ++i) {
        const double w = 1.0 - s_grid[i];
        rep.samples.emplace_back(s_grid[i], w * h[i].value);
        rep.sample_errors.push_back(w * h[i].error);
        by_step.emplace_back(w, w * h[i].value);
        sample_err += w * h[i].error;
    }
    rep.sequence_monotone_flag = monotone(rep.samples);
    if (by_step.size() >= 3) {
        rep.extrapolated = richardson_extrapolate(by_step, 1.0);
        rep.extrapolated.error += sample_err;
    } else {
        rep.extrapolated = {by_step.back().second, std::fabs(by_step.back().second - rep.target), Method::closed_form};
    }
    rep.converged = std::fabs(rep.extrapolated.value - rep.target) <=
                    std::max(tolerance * std::fabs(rep.target), rep.extrapolated.error);
    return rep;
}

/// C_N: 2 for N = 1, else 2 |S^{N-2}| int_{1/2}^1 (1 - t^2)^{(N-3)/2} dt; Phi >= C_N / 2.
[[nodiscard]] inline Estimate c_n_constant(int dim)
{
    require(dim >= 1, ErrorKind::domain, "C_N requires N >= 1");
    if (dim == 1) return {2.0, 0.0, Method::closed_form};
    const double n = dim;
    auto f = [&](double t, double, double rg) { return std::pow(rg * (1.0 + t), 0.5 * (n - 3)); };
    const auto i = quad::integrate_tanh_sinh(f, 0.5, 1.0, quad::singular({}));
    const double sphere = specfun::sphere_area(dim - 2).value;
    return {2 * sphere * i.value, 2 * sphere * i.error + 1e-14 * sphere, i.method};
}

/// int_0^1 r^{N-1} (1 - r^c)^p dr = B(N/c, p+1)/c.
[[nodiscard]] inline double chain_integral(int dim, double c, double p)
{
    require(c > 0, ErrorKind::domain, "chain exponent must be positive");
    return specfun::beta(dim / c, p + 1).value / c;
}

/// C_N^{1/p} (int_0^1 r^{N-1} (1 - r^{s - N/p0})^p dr)^{1/p}, a lower bound for h_{s,p}^{1/p}, p >= p0.
[[nodiscard]] inline double chain_lower_bound(int dim, double s, double p0, double p)
{
    const double c = s - dim / p0;
    return std::pow(c_n_constant(dim).value * chain_integral(dim, c, p), 1.0 / p);
}

[[nodiscard]] inline LimitReport limit_p_to_inf(int dim, double s, const std::vector<double>& p_grid,
                                                double tolerance = 0.1, const quad::QuadSpec& spec = {})
{
    require(!p_grid.empty(), ErrorKind::invalid_config, "p grid is empty");
    require(s > 0 && s < 1, ErrorKind::domain, "s must lie in (0,1)");
    for (std::size_t i = 0; i < p_grid.size(); ++i) {
        require(s * p_grid[i] > dim, ErrorKind::critical_exponent, "the p -> inf limit requires sp > N on the grid");
        if (i > 0) require(p_grid[i] > p_grid[i - 1], ErrorKind::domain, "p grid must increase");
    }
    LimitReport rep;
    rep.tolerance = tolerance;
    rep.target = 1.0;
    std::vector<Estimate> h(p_grid.size());
    parallel_for(p_grid.size(), [&](std::size_t i) {
        h[i] = constants::hardy_constant({dim, s, p_grid[i]}, spec).value;
    });
    std::vector<std::pair<double, double>> by_step;
    const double p0 = p_grid.front();
    for (std::size_t i = 0; i < p_grid.size(); ++i) {
        const double p = p_grid[i];
        const double root = std::pow(h[i].value, 1.0 / p);
        const double err = root * h[i].error / (p * h[i].value);
        rep.samples.emplace_back(p, root);
        rep.sample_errors.push_back(err);
        by_step.emplace_back(1.0 / p, root);
        const double bound = chain_lower_bound(dim, s, p0, p);
        rep.chain_bounds.push_back(bound);
        if (root < bound - err - 1e-12 * bound) rep.chain_bound_holds = false;
    }
    rep.sequence_monotone_flag = monotone(rep.samples);
    if (by_step.size() >= 3) {
        rep.extrapolated = richardson_extrapolate(by_step, 1.0);
    } else {
        rep.extrapolated = {by_step.back().second, std::fabs(by_step.back().second - 1.0), Method::closed_form};
    }
    rep.converged = std::fabs(rep.extrapolated.value - rep.target) <= std::max(tolerance, rep.extrapolated.error);
    return rep;
}

} // namespace frac_hardy::asymptotics
