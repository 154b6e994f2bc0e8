#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "odl/params.hpp"
#include "odl/trajectory.hpp"

namespace odl {

/// a_{n,k} = (T0)_n / (k*theta + T0)_n, the compensating weight of order k.
double weight_a(const ModelParams& p, std::int64_t n, int k = 1);

/// A_n = sum_{j<=n} a_{j,1}, via the closed form (a_n T_n - T0)/(1-theta);
/// falls back to direct summation in a band around theta = 1.
double cumulative_A(const ModelParams& p, std::int64_t n);

/// v_n = sum_{j=1..n} a_{j,1}^2, the quadratic-variation scale.
double quad_variation(const ModelParams& p, std::int64_t n);

struct VLimit {
    std::string scaling;  // "n^(1-2*theta)", "log(n)" or "1"
    double constant;
};

/// Regime-appropriate limit of v_n / scaling.
VLimit v_limit(const ModelParams& p);

struct SeriesValue {
    double value;
    double tail_halfwidth;  // certified bound on |value - true sum|
    std::int64_t terms;     // highest summed index j
};

/// sum_{j>=0} a_{j,1}^2 evaluated as partial sum plus an integral-sandwich
/// tail estimate certified to halfwidth <= tol. Requires theta > 1/2.
/// Exposed on raw (theta, t0) so the evaluator can be exercised outside the
/// model's parameter domain.
SeriesValue hypergeom_series(double theta, double t0, double tol,
                             std::int64_t iter_cap = 100000000);

double hypergeom_3f2(const ModelParams& p, double tol);

/// Rigorous upper bound on sum_{j>n} a_{j,1}^2 (theta > 1/2).
double v_tail_bound(double theta, double t0, std::int64_t n);

enum class XiMode { automatic, require, off };

struct MartingaleDiagnostics {
    std::vector<std::int64_t> steps;
    std::vector<double> z_path;          // Z_n = a_n N_n - a A_n, Z_0 = 0
    std::vector<double> xi_path;         // xi_n = X_n - (a + theta N_{n-1}/T_{n-1}); contiguous only
    std::vector<double> v_seq;           // v_n at recorded steps
    std::vector<double> explosion;       // f_n = a_n^2 / v_n
    std::vector<double> predictable_qv;  // <Z>_n, contiguous only
    std::vector<double> tail_var;        // r_n^2 = v_inf - v_{n-1}; supercritical only
    bool has_xi = false;
};

/// Martingale scaffolding along one recorded path. Stride-1 trajectories get
/// the full set; strided ones only Z, v and f at recorded steps, because the
/// innovations need consecutive states.
MartingaleDiagnostics martingale_path(const Trajectory& traj, const ModelParams& p,
                                      XiMode xi_mode = XiMode::automatic);

/// CSV schema: `n,z,v,f,qv`.
void write_diagnostics_csv(std::ostream& os, const MartingaleDiagnostics& d);

} // namespace odl
