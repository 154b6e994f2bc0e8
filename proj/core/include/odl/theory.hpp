#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>

#include "odl/params.hpp"

namespace odl {

/// Every limit quantity the three regimes predict, as closed-form numbers.
/// Fields are populated only where the regime defines them.
struct TheorySummary {
    ModelParams params;
    Regime regime = Regime::subcritical;
    std::array<double, 2> limit_props{};  // (a/(1-theta), 1 - a/(1-theta))
    double sigma2 = 0.0;                  // subcritical
    double crit_var = 0.0;                // critical: 2a(1-2a)
    double W_mean = 0.0;                  // supercritical
    double W_second = 0.0;                // supercritical
    double fluct_var = 0.0;               // supercritical: Sigma diagonal
    double lil_const = 0.0;               // envelope constant of the regime
    double cn_limit = 0.0;                // a.s. limit of C_n/n
    double cn_clt_var = 0.0;              // sub/critical
    double cn_W_scale = 0.0;              // supercritical: 2/(1+theta)
    bool near_critical_warning = false;   // |theta - 1/2| < 1e-6 but not critical
    bool degenerate_warning = false;      // a = theta = 0

    std::string to_json() const;
};

Regime classify_regime(const ModelParams& p);

std::pair<double, double> limit_proportions(const ModelParams& p);

/// sigma^2_{a,theta} = a(1-a-theta)/((1-theta)^2 (1-2 theta)); subcritical only.
double sigma2(const ModelParams& p);

/// (E[W], E[W^2]) for theta in (1/2, 1).
std::pair<double, double> W_moments(const ModelParams& p);

struct FluctuationCovariance {
    std::string scaling;  // e.g. "sqrt(n)"
    std::array<std::array<double, 2>, 2> matrix;
};

FluctuationCovariance fluctuation_covariance(const ModelParams& p);

/// Almost-sure envelope of the scaled fluctuation at time n.
double lil_envelope(const ModelParams& p, std::int64_t n);

/// Regime envelope constant (the value the scaled limsup attains).
double lil_constant(const ModelParams& p);

/// (a.s. limit of C_n/n, CLT variance or W multiplier).
std::pair<double, double> cn_limits(const ModelParams& p);

/// s (t/s)^theta sigma^2, the (1,1) kernel entry; 0 < s <= t, subcritical.
double wst_covariance(const ModelParams& p, double s, double t);

/// Limit of the pathwise 2m-th moment log-average:
/// sigma^{2m} (2m)!/(2^m m!) subcritical, [a(1-2a)]^m (2m)!/m! critical.
double moment_average_limit(const ModelParams& p, int m);

TheorySummary make_theory_summary(const ModelParams& p);

} // namespace odl
