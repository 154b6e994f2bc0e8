#include "odl/martingale.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "odl/errors.hpp"
#include "odl/special.hpp"

namespace odl {

namespace {
constexpr double kOneBand = 1e-9;
}

double weight_a(const ModelParams& p, std::int64_t n, int k) {
    if (n < 0) throw DomainError("n must be >= 0");
    if (k < 1) throw DomainError("k must be >= 1");
    const double base = k * p.theta + p.t0f();
    if (base <= 0.0) throw DomainError("k*theta + T0 must be positive");
    if (n == 0) return 1.0;
    return pochhammer_ratio(p.t0f(), base, n);
}

double cumulative_A(const ModelParams& p, std::int64_t n) {
    if (n < 0) throw DomainError("n must be >= 0");
    if (n == 0) return 0.0;
    if (std::abs(1.0 - p.theta) < kOneBand) {
        double a = 1.0, acc = 0.0;
        for (std::int64_t j = 0; j < n; ++j) {
            const double t = p.t0f() + static_cast<double>(j);
            a *= t / (t + p.theta);
            acc += a;
        }
        return acc;
    }
    const double an = weight_a(p, n, 1);
    const double tn = p.t0f() + static_cast<double>(n);
    return (an * tn - p.t0f()) / (1.0 - p.theta);
}

double quad_variation(const ModelParams& p, std::int64_t n) {
    if (n < 0) throw DomainError("n must be >= 0");
    double a = 1.0, v = 0.0;
    for (std::int64_t j = 0; j < n; ++j) {
        const double t = p.t0f() + static_cast<double>(j);
        a *= t / (t + p.theta);
        v += a * a;
    }
    return v;
}

SeriesValue hypergeom_series(double theta, double t0, double tol, std::int64_t iter_cap) {
    if (!(theta > 0.5)) throw DomainError("series converges only for theta > 1/2");
    if (!(t0 > 0.0)) throw DomainError("t0 must be positive");
    if (!(tol > 0.0)) throw DomainError("tol must be positive");

    // a_j^2 * (j+T0)^{2 theta} decreases to kappa^2 = (Gamma(theta+T0)/Gamma(T0))^2,
    // so the tail past J is sandwiched between integral bounds built from the
    // current and limiting prefactors.
    const double kap2 = std::exp(2.0 * (std::lgamma(theta + t0) - std::lgamma(t0)));
    double term = 1.0;  // a_0^2
    double sum = 0.0, comp = 0.0;
    std::int64_t j = 0;
    const std::int64_t check_every = 1024;
    for (;;) {
        // Kahan accumulation; the series has up to ~1e8 terms.
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (j % check_every == 0 || term < tol) {
            const double hj = term * std::pow(j + t0, 2.0 * theta);
            const double hi = hj * std::pow(j + t0, 1.0 - 2.0 * theta) / (2.0 * theta - 1.0);
            const double lo = kap2 * std::pow(j + 1 + t0, 1.0 - 2.0 * theta) / (2.0 * theta - 1.0);
            if (0.5 * (hi - lo) <= tol)
                return {sum + 0.5 * (hi + lo), 0.5 * (hi - lo), j};
        }
        if (j >= iter_cap)
            throw ToleranceUnreachable("series tail cannot be certified within the iteration cap");
        const double r = (j + t0) / (j + theta + t0);
        term *= r * r;
        ++j;
    }
}

double hypergeom_3f2(const ModelParams& p, double tol) {
    if (p.regime != Regime::supercritical) throw RegimeMismatch("requires theta > 1/2");
    return hypergeom_series(p.theta, p.t0f(), tol).value;
}

double v_tail_bound(double theta, double t0, std::int64_t n) {
    if (!(theta > 0.5)) throw DomainError("tail bound requires theta > 1/2");
    const double lan2 = 2.0 * (log_pochhammer(t0, n) - log_pochhammer(theta + t0, n));
    const double hn = std::exp(lan2 + 2.0 * theta * std::log(n + t0));
    return hn * std::pow(n + t0, 1.0 - 2.0 * theta) / (2.0 * theta - 1.0);
}

VLimit v_limit(const ModelParams& p) {
    const double t0 = p.t0f();
    switch (p.regime) {
        case Regime::subcritical:
            return {"n^(1-2*theta)",
                    std::exp(2.0 * (std::lgamma(p.theta + t0) - std::lgamma(t0))) / (1.0 - 2.0 * p.theta)};
        case Regime::critical:
            return {"log(n)", std::exp(2.0 * (std::lgamma(t0 + 0.5) - std::lgamma(t0)))};
        case Regime::supercritical:
        default:
            return {"1", hypergeom_series(p.theta, t0, 1e-8).value};
    }
}

MartingaleDiagnostics martingale_path(const Trajectory& traj, const ModelParams& p, XiMode xi_mode) {
    if (!traj.params.same_model(p)) throw ParamsMismatch("trajectory was simulated under different parameters");
    if (traj.samples.empty()) throw DomainError("empty trajectory");
    const bool contiguous = traj.contiguous();
    if (xi_mode == XiMode::require && !contiguous)
        throw StrideIncompatible("innovation reconstruction needs a stride-1 trajectory");
    const bool with_xi = contiguous && xi_mode != XiMode::off;

    MartingaleDiagnostics d;
    d.has_xi = with_xi;
    const std::int64_t horizon = traj.horizon();
    const std::size_t m = traj.samples.size();
    d.steps.reserve(m);
    d.z_path.reserve(m);
    d.v_seq.reserve(m);
    d.explosion.reserve(m);

    double v_inf = 0.0;
    const bool super = p.regime == Regime::supercritical;
    if (super) v_inf = hypergeom_series(p.theta, p.t0f(), 1e-8).value - 1.0;  // excludes the j=0 term

    // walk j = 1..horizon once, carrying a_j, A_j, v_j
    double aj = 1.0, Aj = 0.0, vj = 0.0, qv = 0.0;
    std::size_t si = 0;
    auto record = [&](std::int64_t step) {
        d.steps.push_back(step);
        if (step == 0) {
            d.z_path.push_back(0.0);
            d.v_seq.push_back(0.0);
            d.explosion.push_back(0.0);
            if (with_xi) d.predictable_qv.push_back(0.0);
            if (super) d.tail_var.push_back(v_inf);
            return;
        }
        const double N = static_cast<double>(traj.samples[si].count_a);
        d.z_path.push_back(aj * N - p.a * Aj);
        d.v_seq.push_back(vj);
        d.explosion.push_back(aj * aj / vj);
        if (with_xi) d.predictable_qv.push_back(qv);
        if (super) d.tail_var.push_back(v_inf - (vj - aj * aj));
    };

    if (traj.samples[0].step == 0) {
        record(0);
        ++si;
    }
    std::int64_t prev_n = p.n0;
    std::int64_t prev_t = p.t0;
    for (std::int64_t step = 1; step <= horizon && si < m; ++step) {
        const double t = p.t0f() + static_cast<double>(step - 1);
        aj *= t / (t + p.theta);
        Aj += aj;
        vj += aj * aj;
        if (with_xi) {
            const double pr = p.a + p.theta * static_cast<double>(prev_n) / static_cast<double>(prev_t);
            qv += aj * aj * pr * (1.0 - pr);
            const auto& s = traj.samples[si];
            if (s.step == step) {
                d.xi_path.push_back(static_cast<double>(s.decision) - pr);
                prev_n = s.count_a;
                prev_t = s.count_a + s.count_b;
            }
        }
        if (traj.samples[si].step == step) {
            record(step);
            ++si;
        }
    }
    return d;
}

void write_diagnostics_csv(std::ostream& os, const MartingaleDiagnostics& d) {
    os << "n,z,v,f,qv\n";
    char buf[4][32];
    for (std::size_t i = 0; i < d.steps.size(); ++i) {
        std::snprintf(buf[0], sizeof buf[0], "%.17g", d.z_path[i]);
        std::snprintf(buf[1], sizeof buf[1], "%.17g", d.v_seq[i]);
        std::snprintf(buf[2], sizeof buf[2], "%.17g", d.explosion[i]);
        std::snprintf(buf[3], sizeof buf[3], "%.17g",
                      d.has_xi && i < d.predictable_qv.size() ? d.predictable_qv[i] : 0.0);
        os << d.steps[i] << ',' << buf[0] << ',' << buf[1] << ',' << buf[2] << ',' << buf[3] << '\n';
    }
}

} // namespace odl
