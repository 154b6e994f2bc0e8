#pragma once

#include <cmath>
#include <cstdint>

#include "odl/errors.hpp"

namespace odl {

/// ln (x)_n with (x)_n = Gamma(n+x)/Gamma(x), the rising factorial.
/// All closed-form moments are assembled from ratios of these in log space;
/// the raw products overflow doubles near n ~ 170.
inline double log_pochhammer(double x, std::int64_t n) {
    if (!(x > 0.0)) throw DomainError("log_pochhammer requires x > 0");
    if (n < 0) throw DomainError("log_pochhammer requires n >= 0");
    if (n == 0) return 0.0;
    return std::lgamma(static_cast<double>(n) + x) - std::lgamma(x);
}

/// (x)_n / (y)_n, evaluated as exp of a log-gamma difference.
inline double pochhammer_ratio(double x, double y, std::int64_t n) {
    return std::exp(log_pochhammer(x, n) - log_pochhammer(y, n));
}

/// Gamma(x)/Gamma(y) for positive arguments.
inline double gamma_ratio(double x, double y) {
    if (!(x > 0.0) || !(y > 0.0)) throw DomainError("gamma_ratio requires positive arguments");
    return std::exp(std::lgamma(x) - std::lgamma(y));
}

} // namespace odl
