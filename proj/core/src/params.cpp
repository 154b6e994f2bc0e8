#include "odl/params.hpp"

#include <algorithm>
#include <cmath>

#include "odl/errors.hpp"

namespace odl {

std::string to_string(Regime r) {
    switch (r) {
        case Regime::subcritical: return "subcritical";
        case Regime::critical: return "critical";
        case Regime::supercritical: return "supercritical";
    }
    return "?";
}

double ModelParams::limit_p() const {
    if (theta >= 1.0) throw DomainError("limit proportion undefined for theta >= 1");
    return a / (1.0 - theta);
}

namespace {
constexpr double kCriticalTol = 1e-12;
}

ModelParams validate_params(double a, double b, double alpha, double beta,
                            std::int64_t n0, std::int64_t m0) {
    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(a) || !finite(b) || !finite(alpha) || !finite(beta))
        throw ConstraintViolation("parameters must be finite");
    if (a < 0.0) throw ConstraintViolation("a >= 0 violated");
    if (b < 0.0) throw ConstraintViolation("b >= 0 violated");
    if (a + b > 1.0) throw ConstraintViolation("a + b <= 1 violated");
    if (alpha < 0.0) throw ConstraintViolation("alpha >= 0 violated");
    if (beta < 0.0) throw ConstraintViolation("beta >= 0 violated");
    if (alpha + beta > 1.0) throw ConstraintViolation("alpha + beta <= 1 violated");
    if (beta != 0.0 && b > a) throw ConstraintViolation("b <= a violated (required when beta != 0)");
    if (n0 < 1) throw ConstraintViolation("n0 >= 1 violated");
    if (m0 < 1) throw ConstraintViolation("m0 >= 1 violated");

    ModelParams p;
    p.a = a;
    p.b = b;
    p.alpha = alpha;
    p.beta = beta;
    p.n0 = n0;
    p.m0 = m0;
    p.theta = b * (alpha - beta);
    p.t0 = n0 + m0;

    // The step probability is affine in the proportion x = N/T, so checking
    // the endpoints x=0 and x=1 covers all of [0,1].
    const double lo = std::min(a, a + p.theta);
    const double hi = std::max(a, a + p.theta);
    if (lo < 0.0 || hi > 1.0)
        throw ProbabilityEscape("a + theta*x leaves [0,1] for some x in [0,1]");

    if (p.theta < 0.5 - kCriticalTol)
        p.regime = Regime::subcritical;
    else if (p.theta <= 0.5 + kCriticalTol)
        p.regime = Regime::critical;
    else
        p.regime = Regime::supercritical;
    p.degenerate = (a == 0.0 && p.theta == 0.0);
    return p;
}

double step_probability(const ModelParams& p, std::int64_t n_count, std::int64_t t_count) {
    const double x = p.a + p.theta * (static_cast<double>(n_count) / static_cast<double>(t_count));
    // guard the affine map against rounding at the endpoints
    return std::clamp(x, 0.0, 1.0);
}

} // namespace odl
