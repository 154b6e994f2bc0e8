#pragma once

#include <cstdint>
#include <vector>

#include "odl/params.hpp"
#include "odl/trajectory.hpp"

namespace odl {

/// Log-averaged empirical measure along one path, evaluated on a grid:
/// subcritical (1/log n) sum_j (1/j)   1{ sqrt(j)        Nhat_j <= x },
/// critical  (1/loglog n) sum_j 1/(j log j) 1{ sqrt(j/log j) Nhat_j <= x }.
/// Strided trajectories use quadrature weights over the recording gaps.
std::vector<double> asclt_statistic(const Trajectory& traj, const ModelParams& p,
                                    const std::vector<double>& x_grid);

struct MomentAverage {
    double empirical;
    double limit;
};

/// Pathwise 2m-th moment log-average with its theoretical limit:
/// subcritical (1/log n) sum_j j^{m-1} Nhat_j^{2m};
/// critical (1/loglog n) sum_j j^{m-1} (log j)^{-(m+1)} Nhat_j^{2m}.
MomentAverage moment_average_statistic(const Trajectory& traj, const ModelParams& p, int m);

/// n^{1-theta} (N_n/T_n - a/(1-theta)) at the final recorded step.
double estimate_W(const Trajectory& traj, const ModelParams& p);

/// Running average cumulative difference C_n = (1/n) sum_{i<=n} (N_i - M_i)
/// per recorded step; requires a stride-1 trajectory.
std::vector<double> cn_path(const Trajectory& traj);

} // namespace odl
