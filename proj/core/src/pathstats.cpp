#include "odl/pathstats.hpp"

#include <algorithm>
#include <cmath>

#include "odl/errors.hpp"
#include "odl/theory.hpp"

namespace odl {

namespace {

// Quadrature weight for a recorded step covering (prev, step]:
// sum_{i in (prev, step]} w_i collapsed onto the recorded point; exact 1/j
// (resp. 1/(j log j)) for stride-1, integral approximation across gaps.
double gap_weight(std::int64_t prev, std::int64_t step, bool crit) {
    if (step - prev == 1) {
        const double jd = static_cast<double>(step);
        return crit ? 1.0 / (jd * std::log(jd)) : 1.0 / jd;
    }
    const double a = static_cast<double>(prev), b = static_cast<double>(step);
    if (!crit) return std::log(b) - std::log(a);
    return std::log(std::log(b)) - std::log(std::log(a));
}

} // namespace

std::vector<double> asclt_statistic(const Trajectory& traj, const ModelParams& p,
                                    const std::vector<double>& x_grid) {
    if (!traj.params.same_model(p)) throw ParamsMismatch("trajectory/params mismatch");
    if (p.regime == Regime::supercritical)
        throw RegimeMismatch("log-averaged empirical measures stated for theta <= 1/2");
    const bool crit = p.regime == Regime::critical;
    const std::int64_t n = traj.horizon();
    const std::int64_t j_min = crit ? 2 : 1;
    if (n < j_min + 1) throw DomainError("trajectory too short");
    const double c = p.limit_p();
    const double norm = crit ? std::log(std::log(static_cast<double>(n)))
                             : std::log(static_cast<double>(n));

    std::vector<double> hist(x_grid.size(), 0.0);
    std::int64_t prev = j_min - 1;
    for (const auto& s : traj.samples) {
        if (s.step < j_min) continue;
        const double jd = static_cast<double>(s.step);
        const double nhat =
            static_cast<double>(s.count_a) / static_cast<double>(s.count_a + s.count_b) - c;
        const double scaled = (crit ? std::sqrt(jd / std::log(jd)) : std::sqrt(jd)) * nhat;
        const double w = gap_weight(prev, s.step, crit);
        prev = s.step;
        const auto it = std::lower_bound(x_grid.begin(), x_grid.end(), scaled);
        if (it != x_grid.end()) hist[static_cast<std::size_t>(it - x_grid.begin())] += w;
    }
    std::vector<double> out(x_grid.size());
    double acc = 0.0;
    for (std::size_t g = 0; g < x_grid.size(); ++g) {
        acc += hist[g];
        out[g] = acc / norm;
    }
    return out;
}

MomentAverage moment_average_statistic(const Trajectory& traj, const ModelParams& p, int m) {
    if (!traj.params.same_model(p)) throw ParamsMismatch("trajectory/params mismatch");
    if (m < 1) throw DomainError("m must be >= 1");
    if (p.regime == Regime::supercritical)
        throw RegimeMismatch("moment averages stated for theta <= 1/2");
    const bool crit = p.regime == Regime::critical;
    const std::int64_t n = traj.horizon();
    const std::int64_t j_min = crit ? 2 : 1;
    if (n < j_min + 1) throw DomainError("trajectory too short");
    const double c = p.limit_p();
    const double norm = crit ? std::log(std::log(static_cast<double>(n)))
                             : std::log(static_cast<double>(n));

    double acc = 0.0;
    std::int64_t prev = j_min - 1;
    for (const auto& s : traj.samples) {
        if (s.step < j_min) continue;
        const double jd = static_cast<double>(s.step);
        const double nhat =
            static_cast<double>(s.count_a) / static_cast<double>(s.count_a + s.count_b) - c;
        const double s2 = (crit ? jd / std::log(jd) : jd) * nhat * nhat;
        acc += gap_weight(prev, s.step, crit) * std::pow(s2, m);
        prev = s.step;
    }
    MomentAverage out;
    out.empirical = acc / norm;
    out.limit = moment_average_limit(p, m);
    return out;
}

double estimate_W(const Trajectory& traj, const ModelParams& p) {
    if (!traj.params.same_model(p)) throw ParamsMismatch("trajectory/params mismatch");
    if (p.regime != Regime::supercritical) throw RegimeMismatch("W estimate requires theta > 1/2");
    if (traj.samples.empty() || traj.horizon() < 1) throw DomainError("trajectory too short");
    const auto& s = traj.samples.back();
    const double nd = static_cast<double>(s.step);
    const double nhat =
        static_cast<double>(s.count_a) / static_cast<double>(s.count_a + s.count_b) - p.limit_p();
    return std::pow(nd, 1.0 - p.theta) * nhat;
}

std::vector<double> cn_path(const Trajectory& traj) {
    if (!traj.contiguous()) throw StrideIncompatible("C_n needs a stride-1 trajectory");
    std::vector<double> out;
    out.reserve(traj.samples.size());
    std::int64_t cum = 0;
    for (const auto& s : traj.samples) {
        if (s.step == 0) {
            out.push_back(0.0);
            continue;
        }
        cum += s.count_a - s.count_b;
        out.push_back(static_cast<double>(cum) / static_cast<double>(s.step));
    }
    return out;
}

} // namespace odl
