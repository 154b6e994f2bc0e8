#pragma once

#include <cstdint>
#include <string>

namespace odl {

enum class Regime { subcritical, critical, supercritical };

std::string to_string(Regime r);

/// Validated parameter bundle for the two-alternative adoption process.
///
/// Each step adopts alternative A with probability a + b*Y*N/(N+M), where Y
/// is a ternary trend label (+1 w.p. alpha, -1 w.p. beta, 0 otherwise).
/// Marginalizing Y gives the step law a + theta*N/(N+M) with
/// theta = b*(alpha - beta), the single number that drives the phase
/// trichotomy at theta = 1/2.
struct ModelParams {
    double a = 0.0;
    double b = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    std::int64_t n0 = 1;
    std::int64_t m0 = 1;

    // derived
    double theta = 0.0;
    std::int64_t t0 = 2;
    Regime regime = Regime::subcritical;
    bool degenerate = false;  // a == theta == 0: deterministic all-B path

    double t0f() const { return static_cast<double>(t0); }
    /// Limiting adoption proportion a/(1-theta); requires theta < 1.
    double limit_p() const;

    bool same_model(const ModelParams& o) const {
        return a == o.a && b == o.b && alpha == o.alpha && beta == o.beta &&
               n0 == o.n0 && m0 == o.m0;
    }
};

/// Checks the parameter constraints and returns the bundle with derived
/// quantities filled in. Throws ConstraintViolation naming the violated
/// inequality, or ProbabilityEscape if a + theta*x leaves [0,1] on x in [0,1].
ModelParams validate_params(double a, double b, double alpha, double beta,
                            std::int64_t n0, std::int64_t m0);

/// Marginal step probability a + theta * n_count/t_count.
double step_probability(const ModelParams& p, std::int64_t n_count, std::int64_t t_count);

} // namespace odl
