#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace frac_hardy {

enum class Method { adaptive, tanh_sinh, monte_carlo, closed_form, extrapolation };

[[nodiscard]] inline std::string_view to_string(Method m) noexcept
{
    switch (m) {
    case Method::adaptive: return "adaptive";
    case Method::tanh_sinh: return "tanh_sinh";
    case Method::monte_carlo: return "monte_carlo";
    case Method::closed_form: return "closed_form";
    case Method::extrapolation: return "extrapolation";
    }
    return "unknown";
}

/// A value with an error bound. For monte_carlo the error is three standard errors.
struct Estimate {
    double value = 0.0;
    double error = 0.0;
    Method method = Method::closed_form;
};

enum class ErrorKind {
    domain,
    near_degenerate,
    nonconvergent,
    variance_blowup,
    dimension_unsupported,
    critical_exponent,
    beta_out_of_range,
    insufficient_samples,
    unsupported_domain,
    tail_dominates,
    support_violation,
    unbounded_inradius,
    invalid_config,
};

[[nodiscard]] inline std::string_view to_string(ErrorKind k) noexcept
{
    switch (k) {
    case ErrorKind::domain: return "Domain";
    case ErrorKind::near_degenerate: return "NearDegenerate";
    case ErrorKind::nonconvergent: return "Nonconvergent";
    case ErrorKind::variance_blowup: return "VarianceBlowup";
    case ErrorKind::dimension_unsupported: return "DimensionUnsupported";
    case ErrorKind::critical_exponent: return "CriticalExponent";
    case ErrorKind::beta_out_of_range: return "BetaOutOfRange";
    case ErrorKind::insufficient_samples: return "InsufficientSamples";
    case ErrorKind::unsupported_domain: return "UnsupportedDomain";
    case ErrorKind::tail_dominates: return "TailDominates";
    case ErrorKind::support_violation: return "SupportViolation";
    case ErrorKind::unbounded_inradius: return "UnboundedInradius";
    case ErrorKind::invalid_config: return "InvalidConfig";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, std::optional<Estimate> best = std::nullopt)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), best_(best)
    {
    }

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    /// Best estimate available when the computation gave up (Nonconvergent).
    [[nodiscard]] const std::optional<Estimate>& best() const noexcept { return best_; }

private:
    ErrorKind kind_;
    std::optional<Estimate> best_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what,
                              std::optional<Estimate> best = std::nullopt)
{
    throw Error(kind, what, best);
}

inline void require(bool ok, ErrorKind kind, const std::string& what)
{
    if (!ok) fail(kind, what);
}

} // namespace frac_hardy
