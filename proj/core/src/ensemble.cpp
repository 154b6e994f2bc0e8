#include "odl/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "odl/errors.hpp"
#include "odl/martingale.hpp"
#include "odl/rng.hpp"
#include "odl/theory.hpp"

namespace odl {

namespace {

constexpr std::int64_t kBlock = 256;       // replications per work unit
constexpr std::int64_t kAscltBlock = 8;

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

struct CheckpointPlan {
    std::int64_t n;
    double a_n;       // weight a_{n,1}
    double A_n;       // cumulative weight sum
    double s_nhat;    // fluctuation scaling
    double s_cn;      // C_n residual scaling
    double west_pow;  // n^{1-theta}
    double envelope;  // lil envelope, 0 when out of band
};

struct BlockPartial {
    std::vector<CheckpointStats> cps;
    RunningCov kernel;
    RunningCov coupling;
    RunningStats wfluct;
    std::int64_t lil_exceed = 0;
    std::int64_t lil_total = 0;
};

} // namespace

EnsembleSummary run_ensemble(const ModelParams& params, const EnsembleConfig& config) {
    if (config.horizon < 1) throw DomainError("horizon must be >= 1");
    if (config.replications < 2) throw DomainError("need at least 2 replications");

    std::vector<std::int64_t> cps = config.checkpoints;
    std::sort(cps.begin(), cps.end());
    cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
    if (cps.empty() || cps.back() != config.horizon) cps.push_back(config.horizon);
    if (!cps.empty() && cps.front() < 1) throw DomainError("checkpoints must be >= 1");
    if (cps.back() > config.horizon) throw DomainError("checkpoints beyond horizon");
    const std::int64_t ncp = static_cast<std::int64_t>(cps.size());
    if (ncp * config.replications > config.memory_budget)
        throw ResourceCap("replications x checkpoints exceeds the memory budget");

    const bool super = params.regime == Regime::supercritical;
    const double c = params.limit_p();
    const double cn_mu = c - 0.5;
    const double th = params.theta;

    std::vector<CheckpointPlan> plan(cps.size());
    for (std::size_t i = 0; i < cps.size(); ++i) {
        const std::int64_t n = cps[i];
        const double nd = static_cast<double>(n);
        CheckpointPlan& pl = plan[i];
        pl.n = n;
        pl.a_n = weight_a(params, n, 1);
        pl.A_n = cumulative_A(params, n);
        pl.west_pow = std::pow(nd, 1.0 - th);
        switch (params.regime) {
            case Regime::subcritical: pl.s_nhat = std::sqrt(nd); break;
            case Regime::critical: pl.s_nhat = n > 1 ? std::sqrt(nd / std::log(nd)) : 1.0; break;
            case Regime::supercritical: pl.s_nhat = pl.west_pow; break;
        }
        pl.s_cn = pl.s_nhat;
        pl.envelope = 0.0;
        if (config.lil_band && n >= config.lil_min_step) {
            const std::int64_t lil_cap = super ? config.horizon / 10 : config.horizon;
            if (n <= lil_cap) {
                // supercritical band uses the W-residual, scaled below
                pl.envelope = super ? lil_constant(params) *
                                          std::sqrt(2.0 * std::log(std::log(nd)))
                                    : lil_envelope(params, n);
            }
        }
    }

    auto kp = config.kernel_pair;
    std::size_t k1 = 0, k2 = 0;
    if (kp) {
        auto f1 = std::find(cps.begin(), cps.end(), kp->first);
        auto f2 = std::find(cps.begin(), cps.end(), kp->second);
        if (f1 == cps.end() || f2 == cps.end())
            throw DomainError("kernel pair steps must be checkpoints");
        k1 = static_cast<std::size_t>(f1 - cps.begin());
        k2 = static_cast<std::size_t>(f2 - cps.begin());
    }
    std::size_t wf1 = 0;
    if (config.wfluct_n1 > 0) {
        auto f = std::find(cps.begin(), cps.end(), config.wfluct_n1);
        if (f == cps.end()) throw DomainError("wfluct_n1 must be a checkpoint");
        wf1 = static_cast<std::size_t>(f - cps.begin());
    }

    const std::int64_t R = config.replications;
    const std::int64_t nblocks = (R + kBlock - 1) / kBlock;
    std::vector<BlockPartial> blocks(static_cast<std::size_t>(nblocks));
    for (auto& b : blocks) {
        b.cps.resize(cps.size());
        for (std::size_t i = 0; i < cps.size(); ++i) b.cps[i].n = cps[i];
    }

    std::vector<double> west_final;
    if (super) west_final.assign(static_cast<std::size_t>(R), 0.0);
    std::vector<double> path_max;
    if (config.lil_band) path_max.assign(static_cast<std::size_t>(R), 0.0);

    const double sqrt_h = std::sqrt(static_cast<double>(config.horizon));
    const double coupling_scale = super ? 2.0 / (1.0 + th) : 0.0;
    const double wfluct_scale =
        config.wfluct_n1 > 0 ? std::sqrt(std::pow(static_cast<double>(config.wfluct_n1), 2.0 * th - 1.0)) : 0.0;
    const double lil_c = config.lil_band ? lil_constant(params) : 1.0;

    std::atomic<std::int64_t> next_block{0};
    auto worker = [&]() {
        std::vector<double> nhat_at(cps.size()), west_at(cps.size());
        std::vector<std::int64_t> count_at(cps.size());
        std::vector<double> cn_at(cps.size());
        for (;;) {
            const std::int64_t b = next_block.fetch_add(1);
            if (b >= nblocks) break;
            BlockPartial& part = blocks[static_cast<std::size_t>(b)];
            const std::int64_t r_lo = b * kBlock;
            const std::int64_t r_hi = std::min(R, r_lo + kBlock);
            for (std::int64_t r = r_lo; r < r_hi; ++r) {
                PathSimulator sim(params, mix_seed(config.master_seed, static_cast<std::uint64_t>(r)),
                                  config.mode);
                std::int64_t cum_d = 0;
                std::size_t ci = 0;
                for (std::int64_t step = 1; step <= config.horizon; ++step) {
                    sim.step();
                    const std::int64_t N = sim.count_a();
                    const std::int64_t T = sim.total();
                    cum_d += 2 * N - T;
                    if (step == plan[ci].n) {
                        const double nd = static_cast<double>(step);
                        const double nhat = static_cast<double>(N) / static_cast<double>(T) - c;
                        nhat_at[ci] = nhat;
                        west_at[ci] = plan[ci].west_pow * nhat;
                        count_at[ci] = N;
                        cn_at[ci] = static_cast<double>(cum_d) / (nd * nd);
                        ++ci;
                        if (ci == plan.size()) break;
                    }
                }
                // fold this path into the block partials
                for (std::size_t i = 0; i < plan.size(); ++i) {
                    CheckpointStats& st = part.cps[i];
                    st.count.add(static_cast<double>(count_at[i]));
                    st.nhat.add(nhat_at[i]);
                    st.nhat_scaled.add(plan[i].s_nhat * nhat_at[i]);
                    st.z.add(plan[i].a_n * static_cast<double>(count_at[i]) - params.a * plan[i].A_n);
                    st.cn_over_n.add(cn_at[i]);
                    st.cn_scaled.add(plan[i].s_cn * (cn_at[i] - cn_mu));
                    if (super) st.west.add(west_at[i]);
                }
                if (kp) part.kernel.add(static_cast<double>(count_at[k1]) / sqrt_h,
                                        static_cast<double>(count_at[k2]) / sqrt_h);
                const std::size_t last = plan.size() - 1;
                if (super) {
                    west_final[static_cast<std::size_t>(r)] = west_at[last];
                    part.coupling.add(plan[last].west_pow * (cn_at[last] - cn_mu),
                                      coupling_scale * west_at[last]);
                }
                if (config.wfluct_n1 > 0)
                    part.wfluct.add(wfluct_scale * (west_at[wf1] - west_at[last]));
                if (config.lil_band) {
                    double mx = 0.0;
                    for (std::size_t i = 0; i < plan.size(); ++i) {
                        if (plan[i].envelope <= 0.0) continue;
                        double ratio;
                        if (super) {
                            ratio = std::sqrt(std::pow(static_cast<double>(plan[i].n), 2.0 * th - 1.0)) *
                                    std::abs(west_at[i] - west_at[last]) / plan[i].envelope;
                        } else {
                            ratio = std::abs(nhat_at[i]) / plan[i].envelope;
                        }
                        mx = std::max(mx, ratio);
                        ++part.lil_total;
                        if (ratio > 1.0) ++part.lil_exceed;
                    }
                    path_max[static_cast<std::size_t>(r)] = mx;
                }
            }
        }
    };

    const int nthreads = std::min<std::int64_t>(resolve_threads(config.threads), nblocks);
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    EnsembleSummary out;
    out.params = params;
    out.horizon = config.horizon;
    out.replications = R;
    out.master_seed = config.master_seed;
    out.mode = config.mode;
    out.checkpoints.resize(cps.size());
    for (std::size_t i = 0; i < cps.size(); ++i) out.checkpoints[i].n = cps[i];
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < cps.size(); ++i) {
            CheckpointStats& dst = out.checkpoints[i];
            const CheckpointStats& src = b.cps[i];
            dst.count.merge(src.count);
            dst.nhat.merge(src.nhat);
            dst.nhat_scaled.merge(src.nhat_scaled);
            dst.z.merge(src.z);
            dst.cn_over_n.merge(src.cn_over_n);
            dst.cn_scaled.merge(src.cn_scaled);
            dst.west.merge(src.west);
        }
        out.kernel_cov.merge(b.kernel);
        out.cn_coupling.merge(b.coupling);
        out.wfluct.merge(b.wfluct);
        out.lil.exceed += b.lil_exceed;
        out.lil.total += b.lil_total;
    }
    if (kp) out.kernel_steps = *kp;
    out.wfluct_n1 = config.wfluct_n1;
    out.lil_enabled = config.lil_band;
    if (config.lil_band) out.lil.path_max = std::move(path_max);
    if (super) out.W_estimates = std::move(west_final);
    return out;
}

AscltCurve run_asclt_ensemble(const ModelParams& params, std::int64_t horizon,
                              std::int64_t paths, std::uint64_t master_seed,
                              const std::vector<double>& grid, std::int64_t window_start,
                              int threads, SimMode mode) {
    if (params.regime == Regime::supercritical)
        throw RegimeMismatch("log-averaged empirical measures stated for theta <= 1/2");
    if (horizon < window_start + 2) throw DomainError("horizon too small for the window");
    const bool crit = params.regime == Regime::critical;
    const std::int64_t j0 = std::max<std::int64_t>(crit ? 2 : 1, window_start);
    const double c = params.limit_p();

    // shared log table; one entry per step
    std::vector<double> logj(static_cast<std::size_t>(horizon) + 1, 0.0);
    for (std::int64_t j = 1; j <= horizon; ++j) logj[static_cast<std::size_t>(j)] = std::log(static_cast<double>(j));

    double wsum = 0.0;
    for (std::int64_t j = j0; j <= horizon; ++j) {
        const double jd = static_cast<double>(j);
        wsum += crit ? 1.0 / (jd * logj[static_cast<std::size_t>(j)]) : 1.0 / jd;
    }

    struct Partial {
        std::vector<RunningStats> cdf;
        RunningStats m1, m2;
    };
    const std::int64_t nblocks = (paths + kAscltBlock - 1) / kAscltBlock;
    std::vector<Partial> blocks(static_cast<std::size_t>(nblocks));
    for (auto& b : blocks) b.cdf.resize(grid.size());

    std::atomic<std::int64_t> next_block{0};
    auto worker = [&]() {
        std::vector<double> hist(grid.size());
        for (;;) {
            const std::int64_t b = next_block.fetch_add(1);
            if (b >= nblocks) break;
            Partial& part = blocks[static_cast<std::size_t>(b)];
            const std::int64_t lo = b * kAscltBlock;
            const std::int64_t hi = std::min(paths, lo + kAscltBlock);
            for (std::int64_t r = lo; r < hi; ++r) {
                PathSimulator sim(params, mix_seed(master_seed, static_cast<std::uint64_t>(r)), mode);
                std::fill(hist.begin(), hist.end(), 0.0);
                double m1 = 0.0, m2 = 0.0;
                for (std::int64_t step = 1; step <= horizon; ++step) {
                    sim.step();
                    if (step < j0) continue;
                    const double jd = static_cast<double>(step);
                    const double lj = logj[static_cast<std::size_t>(step)];
                    const double nhat =
                        static_cast<double>(sim.count_a()) / static_cast<double>(sim.total()) - c;
                    const double w = crit ? 1.0 / (jd * lj) : 1.0 / jd;
                    const double scaled = (crit ? std::sqrt(jd / lj) : std::sqrt(jd)) * nhat;
                    const double s2 = scaled * scaled;
                    m1 += w * s2;
                    m2 += w * s2 * s2;
                    const auto it = std::lower_bound(grid.begin(), grid.end(), scaled);
                    if (it != grid.end()) hist[static_cast<std::size_t>(it - grid.begin())] += w;
                }
                double acc = 0.0;
                for (std::size_t g = 0; g < grid.size(); ++g) {
                    acc += hist[g];
                    part.cdf[g].add(acc / wsum);
                }
                part.m1.add(m1 / wsum);
                part.m2.add(m2 / wsum);
            }
        }
    };

    const int nthreads = std::min<std::int64_t>(resolve_threads(threads), nblocks);
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::vector<RunningStats> cdf(grid.size());
    RunningStats m1, m2;
    for (const auto& b : blocks) {
        for (std::size_t g = 0; g < grid.size(); ++g) cdf[g].merge(b.cdf[g]);
        m1.merge(b.m1);
        m2.merge(b.m2);
    }
    AscltCurve out;
    out.grid = grid;
    out.cdf.resize(grid.size());
    out.cdf_se.resize(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        out.cdf[g] = cdf[g].mean();
        out.cdf_se[g] = cdf[g].stderr_mean();
    }
    out.m1 = m1.mean();
    out.m1_se = m1.stderr_mean();
    out.m2 = m2.mean();
    out.m2_se = m2.stderr_mean();
    out.window_start = j0;
    out.horizon = horizon;
    out.paths = paths;
    return out;
}

namespace {
std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
} // namespace

void write_ensemble_csv(std::ostream& os, const EnsembleSummary& s) {
    os << "n,stat,value,stderr\n";
    for (const auto& cp : s.checkpoints) {
        auto row = [&](const char* name, double v, double se) {
            os << cp.n << ',' << name << ',' << g17(v) << ',' << g17(se) << '\n';
        };
        row("count_mean", cp.count.mean(), cp.count.stderr_mean());
        row("count_var", cp.count.variance(), cp.count.stderr_variance());
        row("nhat_mean", cp.nhat.mean(), cp.nhat.stderr_mean());
        row("nhat_scaled_mean", cp.nhat_scaled.mean(), cp.nhat_scaled.stderr_mean());
        row("nhat_scaled_var", cp.nhat_scaled.variance(), cp.nhat_scaled.stderr_variance());
        row("z_mean", cp.z.mean(), cp.z.stderr_mean());
        row("cn_over_n_mean", cp.cn_over_n.mean(), cp.cn_over_n.stderr_mean());
        row("cn_scaled_var", cp.cn_scaled.variance(), cp.cn_scaled.stderr_variance());
        if (cp.west.count() > 0) {
            row("west_mean", cp.west.mean(), cp.west.stderr_mean());
            row("west_second", cp.west.variance_population() + cp.west.mean() * cp.west.mean(),
                cp.west.stderr_variance());
        }
    }
}

std::string EnsembleSummary::to_json() const {
    nlohmann::json j;
    j["horizon"] = horizon;
    j["replications"] = replications;
    j["master_seed"] = master_seed;
    j["mode"] = odl::to_string(mode);
    auto& cpj = j["checkpoints"];
    for (const auto& cp : checkpoints) {
        nlohmann::json e;
        e["n"] = cp.n;
        e["count_mean"] = cp.count.mean();
        e["count_var"] = cp.count.variance();
        e["nhat_mean"] = cp.nhat.mean();
        e["nhat_scaled_mean"] = cp.nhat_scaled.mean();
        e["nhat_scaled_var"] = cp.nhat_scaled.variance();
        e["z_mean"] = cp.z.mean();
        e["cn_over_n_mean"] = cp.cn_over_n.mean();
        e["cn_scaled_var"] = cp.cn_scaled.variance();
        if (cp.west.count() > 0) {
            e["west_mean"] = cp.west.mean();
            e["west_second"] = cp.west.variance_population() + cp.west.mean() * cp.west.mean();
        }
        cpj.push_back(e);
    }
    if (lil_enabled) {
        j["lil"]["exceed_fraction"] = lil.exceed_fraction();
        j["lil"]["total"] = lil.total;
    }
    if (asclt_cdf) {
        j["asclt"]["grid"] = asclt_cdf->grid;
        j["asclt"]["cdf"] = asclt_cdf->cdf;
        j["asclt"]["window_start"] = asclt_cdf->window_start;
    }
    if (!moment_avgs.empty()) {
        for (const auto& [m, v] : moment_avgs) j["moment_avgs"][std::to_string(m)] = v;
    }
    return j.dump(2);
}

} // namespace odl
