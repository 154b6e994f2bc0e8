#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "odl/params.hpp"
#include "odl/rng.hpp"

namespace odl {

enum class SimMode { latent, marginal };

std::string to_string(SimMode m);

/// Which steps of a simulated path get recorded.
struct StrideSpec {
    enum class Kind { every, geometric } kind = Kind::every;
    double ratio = 1.05;  // geometric only

    static StrideSpec every() { return {Kind::every, 1.0}; }
    static StrideSpec geometric(double ratio = 1.05) { return {Kind::geometric, ratio}; }
    std::string describe() const;
};

struct TrajectorySample {
    std::int64_t step;
    std::int64_t count_a;  // N_n
    std::int64_t count_b;  // M_n
    int decision;          // X_n in {0,1}; -1 for the initial record
};

struct Trajectory {
    ModelParams params;
    std::uint64_t seed = 0;
    SimMode mode = SimMode::marginal;
    std::string stride_spec;
    std::vector<TrajectorySample> samples;

    std::int64_t horizon() const { return samples.empty() ? 0 : samples.back().step; }
    /// True when every step 0..horizon is present.
    bool contiguous() const;
};

/// Single-path stepper. One instance is one path; deterministic in
/// (params, seed, mode). Latent mode draws the trend label and then the
/// decision (two uniforms per step); marginal mode draws the decision from
/// the collapsed law (one uniform). Both induce the same law of N_n.
class PathSimulator {
  public:
    PathSimulator(const ModelParams& params, std::uint64_t seed, SimMode mode)
        : params_(params), eng_(seed), mode_(mode), n_(params.n0), t_(params.t0) {}

    /// Advances one decision; returns X (0 or 1).
    int step() {
        double p;
        if (mode_ == SimMode::marginal) {
            p = params_.a + params_.theta * (static_cast<double>(n_) / static_cast<double>(t_));
        } else {
            const double u = uniform01(eng_);
            double y = 0.0;
            if (u < params_.alpha) y = 1.0;
            else if (u < params_.alpha + params_.beta) y = -1.0;
            p = params_.a + params_.b * y * (static_cast<double>(n_) / static_cast<double>(t_));
        }
        const int x = uniform01(eng_) < p ? 1 : 0;
        n_ += x;
        ++t_;
        ++step_;
        return x;
    }

    std::int64_t current_step() const { return step_; }
    std::int64_t count_a() const { return n_; }
    std::int64_t count_b() const { return t_ - n_; }
    std::int64_t total() const { return t_; }

  private:
    ModelParams params_;
    std::mt19937_64 eng_;
    SimMode mode_;
    std::int64_t n_;
    std::int64_t t_;
    std::int64_t step_ = 0;
};

Trajectory simulate_trajectory(const ModelParams& params, std::int64_t steps,
                               std::uint64_t seed, SimMode mode,
                               const StrideSpec& stride = StrideSpec::every());

/// CSV schema: header `step,count_a,count_b,decision`, decimal integers.
/// The step-0 row has no decision and writes -1.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

} // namespace odl
