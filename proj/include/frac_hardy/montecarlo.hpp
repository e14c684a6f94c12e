#pragma once

/**
 * @file montecarlo.hpp
 * @brief Seeded Monte Carlo integration with a counter-based generator.
 *
 * Sample i draws from a stream keyed by (seed, i), and partial sums are reduced in
 * chunk order, so results are bit-identical for any thread count.
 */

#include "frac_hardy/error.hpp"
#include "frac_hardy/parallel.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

namespace frac_hardy::mc {

enum class Stratification { none, radial_shells };

struct McSpec {
    std::uint64_t samples = 100000;
    std::uint64_t seed = 0;
    Stratification stratification = Stratification::none;
    /// Per-sample variance above this raises VarianceBlowup.
    double variance_cap = std::numeric_limits<double>::infinity();
    int strata = 16;
};

inline void validate(const McSpec& spec)
{
    require(spec.samples >= 1000, ErrorKind::invalid_config, "Monte Carlo needs at least 1000 samples");
    require(spec.strata >= 1, ErrorKind::invalid_config, "strata must be >= 1");
}

[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based stream: state depends only on (seed, index).
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t index) noexcept
        : state_(splitmix64(seed ^ splitmix64(index * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL)))
    {
    }

    std::uint64_t next() noexcept
    {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in (0, 1), never exactly 0 or 1.
    double uniform() noexcept { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

    double normal() noexcept
    {
        const double u1 = uniform(), u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
};

/// Uniform direction on S^{n-1}, written to out[0..n).
inline void random_direction(Rng& rng, int n, double* out)
{
    if (n == 1) {
        out[0] = rng.uniform() < 0.5 ? -1.0 : 1.0;
        return;
    }
    if (n == 2) {
        const double a = 2.0 * std::numbers::pi * rng.uniform();
        out[0] = std::cos(a);
        out[1] = std::sin(a);
        return;
    }
    double norm = 0.0;
    do {
        norm = 0.0;
        for (int i = 0; i < n; ++i) {
            out[i] = rng.normal();
            norm += out[i] * out[i];
        }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    for (int i = 0; i < n; ++i) out[i] /= norm;
}

template <class P>
struct Sample {
    P point;
    double density;
};

namespace detail {
struct Moments {
    double sum = 0.0, sumsq = 0.0;
    std::uint64_t count = 0;
};
inline constexpr std::uint64_t kChunk = 4096;
} // namespace detail

/**
 * @brief Mean of f(x)/density(x) over samples x drawn by sampler(rng, u0).
 *
 * u0 is the first uniform variate; with radial_shells it is stratified into
 * equal-probability shells, which samplers use for the radial coordinate.
 */
template <class F, class S>
[[nodiscard]] Estimate integrate_mc(F&& f, S&& sampler, const McSpec& spec)
{
    validate(spec);
    const int strata = spec.stratification == Stratification::radial_shells ? spec.strata : 1;
    const std::uint64_t n = spec.samples;
    const std::uint64_t chunks = (n + detail::kChunk - 1) / detail::kChunk;
    std::vector<std::vector<detail::Moments>> parts(chunks, std::vector<detail::Moments>(strata));
    std::vector<char> bad(chunks, 0);
    parallel_for(chunks, [&](std::size_t c) {
        auto& m = parts[c];
        const std::uint64_t lo = c * detail::kChunk, hi = std::min(n, lo + detail::kChunk);
        for (std::uint64_t i = lo; i < hi; ++i) {
            Rng rng(spec.seed, i);
            const int k = static_cast<int>(i % static_cast<std::uint64_t>(strata));
            const double u0 = (k + rng.uniform()) / strata;
            const auto smp = sampler(rng, u0);
            const double v = smp.density > 0 ? static_cast<double>(f(smp.point)) / smp.density : 0.0;
            if (!std::isfinite(v)) {
                bad[c] = 1;
                return;
            }
            m[k].sum += v;
            m[k].sumsq += v * v;
            ++m[k].count;
        }
    });
    for (char b : bad)
        if (b) fail(ErrorKind::variance_blowup, "non-finite Monte Carlo sample");

    std::vector<detail::Moments> tot(strata);
    for (const auto& part : parts)
        for (int k = 0; k < strata; ++k) {
            tot[k].sum += part[k].sum;
            tot[k].sumsq += part[k].sumsq;
            tot[k].count += part[k].count;
        }
    double mean = 0.0, var_of_mean = 0.0, max_var = 0.0;
    for (const auto& m : tot) {
        if (m.count == 0) continue;
        const double cnt = static_cast<double>(m.count);
        const double mu = m.sum / cnt;
        const double var = m.count > 1 ? std::max(0.0, (m.sumsq - cnt * mu * mu) / (cnt - 1.0)) : 0.0;
        mean += mu / strata;
        var_of_mean += var / cnt / (static_cast<double>(strata) * strata);
        max_var = std::max(max_var, var);
    }
    if (max_var > spec.variance_cap)
        fail(ErrorKind::variance_blowup, "sample variance exceeds the configured cap",
             Estimate{mean, 3.0 * std::sqrt(var_of_mean), Method::monte_carlo});
    return {mean, 3.0 * std::sqrt(var_of_mean), Method::monte_carlo};
}

} // namespace frac_hardy::mc
