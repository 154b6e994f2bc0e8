#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "odl/params.hpp"
#include "odl/stats.hpp"
#include "odl/trajectory.hpp"

namespace odl {

struct EnsembleConfig {
    std::int64_t horizon = 10000;
    std::int64_t replications = 1000;
    std::uint64_t master_seed = 1;
    std::vector<std::int64_t> checkpoints;  // sorted ascending; horizon appended if absent
    SimMode mode = SimMode::marginal;
    int threads = 0;  // 0 = hardware concurrency

    // covariance-kernel pair (steps), e.g. (n/2, n); disabled when empty
    std::optional<std::pair<std::int64_t, std::int64_t>> kernel_pair;
    // W-residual fluctuation proxy: smaller horizon n1 (0 = disabled)
    std::int64_t wfluct_n1 = 0;
    // envelope band accounting over checkpoints in [lil_min_step, horizon]
    bool lil_band = false;
    std::int64_t lil_min_step = 1000;

    std::int64_t memory_budget = 1 << 26;  // accumulator entries
};

struct CheckpointStats {
    std::int64_t n = 0;
    RunningStats count;        // N_n
    RunningStats nhat;         // raw proportion deviation
    RunningStats nhat_scaled;  // regime-scaled fluctuation
    RunningStats z;            // martingale value at n
    RunningStats cn_over_n;    // C_n / n
    RunningStats cn_scaled;    // regime-scaled centered C_n/n
    RunningStats west;         // n^{1-theta} Nhat (supercritical)
};

struct LilBand {
    std::int64_t exceed = 0;
    std::int64_t total = 0;
    std::vector<double> path_max;  // per-path max envelope ratio
    double exceed_fraction() const {
        return total > 0 ? static_cast<double>(exceed) / static_cast<double>(total) : 0.0;
    }
};

struct AscltCurve {
    std::vector<double> grid;
    std::vector<double> cdf;       // ensemble mean of per-path windowed CDFs
    std::vector<double> cdf_se;    // standard error per grid point
    double m1 = 0.0, m1_se = 0.0;  // windowed moment averages, order 1 and 2
    double m2 = 0.0, m2_se = 0.0;
    std::int64_t window_start = 0;
    std::int64_t horizon = 0;
    std::int64_t paths = 0;
};

struct EnsembleSummary {
    ModelParams params;
    std::int64_t horizon = 0;
    std::int64_t replications = 0;
    std::uint64_t master_seed = 0;
    SimMode mode = SimMode::marginal;
    std::vector<CheckpointStats> checkpoints;
    std::vector<double> W_estimates;  // final checkpoint, supercritical only
    RunningCov kernel_cov;            // scaled pair covariance
    std::pair<std::int64_t, std::int64_t> kernel_steps{0, 0};
    RunningCov cn_coupling;           // supercritical: scaled C_n residual vs (2/(1+theta)) West
    RunningStats wfluct;              // sqrt(n1^{2theta-1}) (West(n1) - West(final))
    std::int64_t wfluct_n1 = 0;
    LilBand lil;
    bool lil_enabled = false;
    std::optional<AscltCurve> asclt_cdf;       // filled by run_asclt_ensemble
    std::vector<std::pair<int, double>> moment_avgs;  // (order m, ensemble mean)

    std::string to_json() const;
};

/// Deterministic parallel ensemble: replication r uses the seed stream
/// mix_seed(master_seed, r); replications are processed in fixed-size blocks
/// and block partials merge in block order, so the result is bit-identical
/// for every worker count.
EnsembleSummary run_ensemble(const ModelParams& params, const EnsembleConfig& config);

/// Single-path log-average statistics, averaged over an ensemble of paths:
/// per-path windowed empirical CDF of the scaled fluctuation (weights 1/j
/// subcritical, 1/(j log j) critical, window j >= window_start, normalized by
/// the window's total weight) and the windowed moment averages m=1,2.
/// Path r uses seed stream mix_seed(master_seed, r). Sub/critical only.
AscltCurve run_asclt_ensemble(const ModelParams& params, std::int64_t horizon,
                              std::int64_t paths, std::uint64_t master_seed,
                              const std::vector<double>& grid,
                              std::int64_t window_start, int threads, SimMode mode);

/// Per-checkpoint statistics CSV: `n,stat,value,stderr`.
void write_ensemble_csv(std::ostream& os, const EnsembleSummary& s);

} // namespace odl
