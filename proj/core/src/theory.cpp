#include "odl/theory.hpp"

#include <cmath>

#include <json.hpp>

#include "odl/errors.hpp"
#include "odl/special.hpp"

namespace odl {

Regime classify_regime(const ModelParams& p) { return p.regime; }

std::pair<double, double> limit_proportions(const ModelParams& p) {
    const double c = p.limit_p();
    return {c, 1.0 - c};
}

double sigma2(const ModelParams& p) {
    if (p.regime != Regime::subcritical) throw RegimeMismatch("sigma2 requires theta < 1/2");
    const double om = 1.0 - p.theta;
    return p.a * (1.0 - p.a - p.theta) / (om * om * (1.0 - 2.0 * p.theta));
}

std::pair<double, double> W_moments(const ModelParams& p) {
    if (p.regime != Regime::supercritical || p.theta >= 1.0)
        throw RegimeMismatch("W moments require 1/2 < theta < 1");
    const double th = p.theta, a = p.a, t0 = p.t0f();
    const double c = a / (1.0 - th);
    const double n0 = static_cast<double>(p.n0);
    const double q = n0 - c * t0;
    const double mean = gamma_ratio(t0, th + t0) * q;
    // centered-start group; shares the constant part of the finite-time
    // second-moment assembly
    const double qgroup = q *
                          ((2 * a * t0 + th) - (2 * a - 1) * (th + t0) +
                           (2 * a / (th - 1)) * (th + t0) * (th + t0 + 1)) /
                          (2 * th + t0);
    const double second = gamma_ratio(t0, 2 * th + t0) *
                          (n0 * n0 + c * t0 * ((1 - 2 * a) / (2 * th - 1) - c * (t0 + 1)) + qgroup);
    return {mean, second};
}

FluctuationCovariance fluctuation_covariance(const ModelParams& p) {
    auto anti = [](double v) {
        return std::array<std::array<double, 2>, 2>{{{v, -v}, {-v, v}}};
    };
    switch (p.regime) {
        case Regime::subcritical:
            return {"sqrt(n)", anti(sigma2(p))};
        case Regime::critical:
            return {"sqrt(n/log(n))", anti(2.0 * p.a * (1.0 - 2.0 * p.a))};
        case Regime::supercritical:
        default: {
            const double om = 1.0 - p.theta;
            const double v = p.a * (1.0 - p.a - p.theta) / (om * om * (2.0 * p.theta - 1.0));
            return {"sqrt(n^(2*theta-1))*(W-residual)", anti(v)};
        }
    }
}

double lil_constant(const ModelParams& p) {
    switch (p.regime) {
        case Regime::subcritical: return std::sqrt(sigma2(p));
        case Regime::critical: return std::sqrt(2.0 * p.a * (1.0 - 2.0 * p.a));
        case Regime::supercritical:
        default: {
            const double om = 1.0 - p.theta;
            return std::sqrt(p.a * (1.0 - p.a - p.theta) / (om * om * (2.0 * p.theta - 1.0)));
        }
    }
}

double lil_envelope(const ModelParams& p, std::int64_t n) {
    const double nd = static_cast<double>(n);
    switch (p.regime) {
        case Regime::subcritical:
            if (n < 3) throw DomainError("log log n needs n >= 3");
            return lil_constant(p) * std::sqrt(2.0 * std::log(std::log(nd)) / nd);
        case Regime::critical:
            // needs log log log n > 0, i.e. n > e^e
            if (nd <= std::exp(std::exp(1.0))) throw DomainError("log log log n needs n > e^e");
            return lil_constant(p) *
                   std::sqrt(2.0 * std::log(nd) * std::log(std::log(std::log(nd))) / nd);
        case Regime::supercritical:
        default:
            if (n < 3) throw DomainError("log log n needs n >= 3");
            return lil_constant(p) *
                   std::sqrt(2.0 * std::log(std::log(nd)) / std::pow(nd, 2.0 * p.theta - 1.0));
    }
}

std::pair<double, double> cn_limits(const ModelParams& p) {
    const double c = p.limit_p();
    const double as_limit = c - 0.5;
    switch (p.regime) {
        case Regime::subcritical:
            return {as_limit, 8.0 * sigma2(p) / (3.0 * (2.0 - p.theta))};
        case Regime::critical:
            return {as_limit, 32.0 * p.a * (1.0 - 2.0 * p.a) / 9.0};
        case Regime::supercritical:
        default:
            return {as_limit, 2.0 / (1.0 + p.theta)};
    }
}

double wst_covariance(const ModelParams& p, double s, double t) {
    if (!(s > 0.0) || s > t) throw DomainError("need 0 < s <= t");
    if (p.regime != Regime::subcritical) throw RegimeMismatch("kernel stated for theta < 1/2");
    return s * std::pow(t / s, p.theta) * sigma2(p);
}

double moment_average_limit(const ModelParams& p, int m) {
    if (m < 1) throw DomainError("m must be >= 1");
    double dfact = 1.0;  // (2m)! / (2^m m!) = (2m-1)!!
    for (int i = 2 * m - 1; i > 1; i -= 2) dfact *= i;
    switch (p.regime) {
        case Regime::subcritical:
            return std::pow(sigma2(p), m) * dfact;
        case Regime::critical:
            // [a(1-2a)]^m (2m)!/m! = [2a(1-2a)]^m (2m-1)!!
            return std::pow(2.0 * p.a * (1.0 - 2.0 * p.a), m) * dfact;
        case Regime::supercritical:
        default:
            throw RegimeMismatch("moment averages stated for theta <= 1/2");
    }
}

TheorySummary make_theory_summary(const ModelParams& p) {
    TheorySummary s;
    s.params = p;
    s.regime = p.regime;
    const auto props = limit_proportions(p);
    s.limit_props = {props.first, props.second};
    s.lil_const = lil_constant(p);
    const auto cn = cn_limits(p);
    s.cn_limit = cn.first;
    switch (p.regime) {
        case Regime::subcritical:
            s.sigma2 = sigma2(p);
            s.cn_clt_var = cn.second;
            break;
        case Regime::critical:
            s.crit_var = 2.0 * p.a * (1.0 - 2.0 * p.a);
            s.cn_clt_var = cn.second;
            break;
        case Regime::supercritical: {
            const auto w = W_moments(p);
            s.W_mean = w.first;
            s.W_second = w.second;
            s.fluct_var = fluctuation_covariance(p).matrix[0][0];
            s.cn_W_scale = cn.second;
            break;
        }
    }
    s.near_critical_warning =
        p.regime != Regime::critical && std::abs(p.theta - 0.5) < 1e-6;
    s.degenerate_warning = p.degenerate;
    return s;
}

std::string TheorySummary::to_json() const {
    nlohmann::json j;
    j["regime"] = odl::to_string(regime);
    j["limit_props"] = limit_props;
    j["lil_const"] = lil_const;
    j["cn_limit"] = cn_limit;
    switch (regime) {
        case Regime::subcritical:
            j["sigma2"] = sigma2;
            j["cn_clt_var"] = cn_clt_var;
            break;
        case Regime::critical:
            j["crit_var"] = crit_var;
            j["cn_clt_var"] = cn_clt_var;
            break;
        case Regime::supercritical:
            j["W_mean"] = W_mean;
            j["W_second"] = W_second;
            j["fluct_var"] = fluct_var;
            j["cn_W_scale"] = cn_W_scale;
            break;
    }
    if (near_critical_warning) j["near_critical_warning"] = true;
    if (degenerate_warning) j["degenerate_warning"] = true;
    return j.dump(2);
}

} // namespace odl
