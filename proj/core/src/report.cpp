#include "odl/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "odl/errors.hpp"
#include "odl/martingale.hpp"
#include "odl/moments.hpp"
#include "odl/special.hpp"

namespace odl {

namespace {

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

CheckRow rel_row(std::string name, std::string tag, double theo, double emp, double tol,
                 double se = 0.0, std::string note = {}) {
    CheckRow r{std::move(name), std::move(tag), theo, emp, tol, "rel", se, false, std::move(note)};
    r.pass = std::abs(emp - theo) <= tol * std::abs(theo);
    return r;
}

CheckRow se_row(std::string name, std::string tag, double theo, double emp, double se_mult,
                double se, std::string note = {}) {
    CheckRow r{std::move(name), std::move(tag), theo, emp, se_mult, "se", se, false, std::move(note)};
    r.pass = std::abs(emp - theo) <= se_mult * se;
    return r;
}

CheckRow abs_row(std::string name, std::string tag, double theo, double emp, double tol,
                 std::string note = {}) {
    CheckRow r{std::move(name), std::move(tag), theo, emp, tol, "abs", 0.0, false, std::move(note)};
    r.pass = std::abs(emp - theo) <= tol;
    return r;
}

} // namespace

bool VerificationReport::all_pass() const {
    if (nothing_verified) return true;
    return std::all_of(checks.begin(), checks.end(), [](const CheckRow& c) { return c.pass; });
}

VerificationReport compare_to_theory(const EnsembleSummary& summary, const TheorySummary& theory,
                                     const Tolerances& tol) {
    if (!summary.params.same_model(theory.params))
        throw ParamsMismatch("summary and theory built from different parameters");
    VerificationReport rep;
    rep.params = summary.params;
    rep.regime = theory.regime;
    rep.near_critical_warning = theory.near_critical_warning;
    rep.degenerate_warning = theory.degenerate_warning;
    if (summary.checkpoints.empty()) {
        rep.nothing_verified = true;
        return rep;
    }

    const ModelParams& p = summary.params;
    const auto& fin = summary.checkpoints.back();
    const std::int64_t H = fin.n;
    const Regime reg = theory.regime;

    // mean adoption count against the closed form
    rep.checks.push_back(se_row("ensemble mean of N", "moments.mean", mean_N(p, H),
                                fin.count.mean(), tol.mean_se, fin.count.stderr_mean()));
    // martingale mean: E[Z_n] = N0 at every n
    rep.checks.push_back(se_row("martingale mean", "martingale.mean",
                                static_cast<double>(p.n0), fin.z.mean(), tol.mean_se,
                                fin.z.stderr_mean()));
    // scaled fluctuation mean, centered at its exact finite-n expectation
    {
        const double tn = p.t0f() + static_cast<double>(H);
        const double exact_nhat = (mean_N(p, H) - p.limit_p() * tn) / tn;
        double s_nhat;  // nhat_scaled = s_nhat * nhat
        const double hd = static_cast<double>(H);
        switch (reg) {
            case Regime::subcritical: s_nhat = std::sqrt(hd); break;
            case Regime::critical: s_nhat = std::sqrt(hd / std::log(hd)); break;
            default: s_nhat = std::pow(hd, 1.0 - p.theta); break;
        }
        rep.checks.push_back(se_row("scaled fluctuation mean", "clt.mean", s_nhat * exact_nhat,
                                    fin.nhat_scaled.mean(), tol.mean_se,
                                    fin.nhat_scaled.stderr_mean(),
                                    "centered at the exact finite-n expectation"));
    }

    if (reg == Regime::subcritical || reg == Regime::critical) {
        const double var_target = reg == Regime::subcritical ? theory.sigma2 : theory.crit_var;
        rep.checks.push_back(rel_row("scaled fluctuation variance", "clt.variance", var_target,
                                     fin.nhat_scaled.variance(), tol.variance_rel,
                                     fin.nhat_scaled.stderr_variance()));
        rep.checks.push_back(rel_row("fluctuation anticorrelation", "clt.anticorrelation",
                                     -var_target, -fin.nhat_scaled.variance(), tol.variance_rel,
                                     fin.nhat_scaled.stderr_variance(),
                                     "M-coordinate is the negation of the N-coordinate"));
    }

    if (summary.kernel_cov.count() > 1 && reg == Regime::subcritical) {
        const double s = static_cast<double>(summary.kernel_steps.first) / static_cast<double>(H);
        const double t = static_cast<double>(summary.kernel_steps.second) / static_cast<double>(H);
        rep.checks.push_back(rel_row("covariance kernel at (s,t)", "kernel.cov",
                                     wst_covariance(p, s, t), summary.kernel_cov.covariance(),
                                     tol.kernel_rel));
    }

    // average difference process, centered exactly
    rep.checks.push_back(se_row("average difference mean", "cn.as_limit", mean_cn_over_n(p, H),
                                fin.cn_over_n.mean(), tol.mean_se, fin.cn_over_n.stderr_mean(),
                                "centered at the exact finite-n expectation"));
    if (reg == Regime::subcritical) {
        rep.checks.push_back(rel_row("average difference CLT variance", "cn.clt_var",
                                     theory.cn_clt_var, fin.cn_scaled.variance(), tol.cn_var_rel,
                                     fin.cn_scaled.stderr_variance()));
    } else if (reg == Regime::critical) {
        rep.checks.push_back(rel_row("average difference CLT variance", "cn.clt_var",
                                     theory.cn_clt_var, fin.cn_scaled.variance(),
                                     tol.cn_var_rel_crit, fin.cn_scaled.stderr_variance(),
                                     "finite-horizon deficit decays like 1/log n"));
    }

    if (reg == Regime::supercritical) {
        rep.checks.push_back(se_row("W estimate mean", "w.mean", theory.W_mean, fin.west.mean(),
                                    tol.mean_se, fin.west.stderr_mean()));
        // second moment with the unrealized tail variance restored
        const double v_inf = hypergeom_series(p.theta, p.t0f(), 1e-8).value - 1.0;
        const double v_h = quad_variation(p, H);
        const double c = p.limit_p();
        const double s_inf2 = c * (1.0 - c);
        const double rebase = gamma_ratio(p.t0f(), p.theta + p.t0f());
        const double pref = std::pow(static_cast<double>(H), 1.0 - p.theta) /
                            (weight_a(p, H, 1) * (p.t0f() + static_cast<double>(H)));
        const double emp2 = fin.west.variance_population() + fin.west.mean() * fin.west.mean();
        const double adjusted = (rebase / pref) * (rebase / pref) * emp2 +
                                rebase * rebase * s_inf2 * (v_inf - v_h);
        rep.checks.push_back(rel_row("W second moment", "w.second_tail_adjusted", theory.W_second,
                                     adjusted, tol.w_second_rel, fin.west.stderr_variance(),
                                     "tail variance beyond the horizon restored via the "
                                     "weight-series limit"));
        rep.checks.push_back(CheckRow{"C_n/W coupling correlation", "cn.coupling", 1.0,
                                      summary.cn_coupling.correlation(), tol.coupling_corr_min,
                                      "min", 0.0,
                                      summary.cn_coupling.correlation() >= tol.coupling_corr_min,
                                      ""});
        if (summary.wfluct.count() > 1 && summary.wfluct_n1 > 0) {
            const double r = std::pow(
                static_cast<double>(summary.wfluct_n1) / static_cast<double>(H), 2.0 * p.theta - 1.0);
            const double target = theory.fluct_var * (1.0 - r);
            rep.checks.push_back(rel_row(
                "W-residual fluctuation variance", "w.fluct_proxy", target,
                summary.wfluct.variance(), tol.wfluct_rel, summary.wfluct.stderr_variance(),
                "two-horizon residual proxy; variance reduced by the shared tail factor"));
        }
    }

    if (summary.asclt_cdf) {
        const AscltCurve& a = *summary.asclt_cdf;
        const double var = reg == Regime::critical ? theory.crit_var : theory.sigma2;
        double sup = 0.0;
        for (std::size_t g = 0; g < a.grid.size(); ++g)
            sup = std::max(sup, std::abs(a.cdf[g] - std_normal_cdf(a.grid[g] / std::sqrt(var))));
        rep.checks.push_back(abs_row(
            "log-averaged empirical CDF sup-distance", "asclt.sup", 0.0, sup,
            reg == Regime::critical ? tol.asclt_sup_crit : tol.asclt_sup_sub,
            "windowed tail of the log-average, ensemble-averaged"));
        rep.checks.push_back(rel_row("pathwise moment average m=1", "mavg.m1",
                                     moment_average_limit(p, 1), a.m1, tol.mavg_m1_rel, a.m1_se,
                                     "windowed tail of the log-average, ensemble-averaged"));
        if (reg == Regime::subcritical)
            rep.checks.push_back(rel_row("pathwise moment average m=2", "mavg.m2",
                                         moment_average_limit(p, 2), a.m2, tol.mavg_m2_rel, a.m2_se,
                                         "windowed tail of the log-average, ensemble-averaged"));
    }

    if (summary.lil_enabled && summary.lil.total > 0) {
        const double frac = summary.lil.exceed_fraction();
        CheckRow band{"LIL envelope exceedance fraction", "lil.band", 0.25, frac, 0.5,
                      "band", 0.0, frac > 0.0 && frac < 0.5,
                      "desk-scale band check; the a.s. limsup is not reproducible"};
        rep.checks.push_back(band);
        std::vector<double> pm = summary.lil.path_max;
        if (!pm.empty()) {
            std::nth_element(pm.begin(), pm.begin() + pm.size() / 2, pm.end());
            const double median = pm[pm.size() / 2];
            CheckRow mx{"LIL scaled maxima (path median)", "lil.maxratio", 1.0, median,
                        tol.lil_max_ratio, "max", 0.0, median <= tol.lil_max_ratio, ""};
            rep.checks.push_back(mx);
        }
    }

    // deterministic quadratic-variation limits
    {
        const std::int64_t nv = 1000000;
        const auto lim = v_limit(p);
        if (reg == Regime::subcritical) {
            const double emp = quad_variation(p, nv) /
                               std::pow(static_cast<double>(nv), 1.0 - 2.0 * p.theta);
            rep.checks.push_back(rel_row("quadratic variation limit", "vn.limit", lim.constant,
                                         emp, tol.vn_rel));
        } else if (reg == Regime::critical) {
            const double slope = (quad_variation(p, nv) - quad_variation(p, nv / 10)) /
                                 std::log(10.0);
            rep.checks.push_back(rel_row("quadratic variation limit", "vn.limit", lim.constant,
                                         slope, tol.vn_rel,
                                         0.0, "log-slope estimator of the v_n growth rate"));
        } else {
            const double emp = 1.0 + quad_variation(p, nv);
            const double bound = v_tail_bound(p.theta, p.t0f(), nv);
            rep.checks.push_back(abs_row("quadratic variation series value", "vn.series",
                                         lim.constant, emp, bound,
                                         "within the certified tail bound of the series"));
        }
    }
    return rep;
}

namespace {
std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
} // namespace

std::string VerificationReport::to_json() const {
    nlohmann::json j;
    j["regime"] = odl::to_string(regime);
    j["params"] = {{"a", params.a},       {"b", params.b},   {"alpha", params.alpha},
                   {"beta", params.beta}, {"n0", params.n0}, {"m0", params.m0},
                   {"theta", params.theta}};
    j["all_pass"] = all_pass();
    if (nothing_verified) j["nothing_verified"] = true;
    if (near_critical_warning) j["near_critical_warning"] = true;
    if (degenerate_warning) j["degenerate_warning"] = true;
    auto& rows = j["checks"];
    rows = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json r;
        r["name"] = c.name;
        r["tag"] = c.tag;
        r["theoretical"] = c.theoretical;
        r["empirical"] = c.empirical;
        r["tolerance"] = c.tolerance;
        r["tolerance_kind"] = c.tolerance_kind;
        r["standard_error"] = c.standard_error;
        r["pass"] = c.pass;
        if (!c.note.empty()) r["note"] = c.note;
        rows.push_back(r);
    }
    return j.dump(2);
}

void VerificationReport::write_csv(std::ostream& os) const {
    os << "name,tag,theoretical,empirical,tolerance,kind,stderr,pass\n";
    for (const auto& c : checks)
        os << '"' << c.name << "\"," << c.tag << ',' << g17(c.theoretical) << ','
           << g17(c.empirical) << ',' << g17(c.tolerance) << ',' << c.tolerance_kind << ','
           << g17(c.standard_error) << ',' << (c.pass ? "true" : "false") << '\n';
}

} // namespace odl
