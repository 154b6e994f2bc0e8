#include "odl/trajectory.hpp"

#include <cmath>
#include <ostream>

#include "odl/errors.hpp"

namespace odl {

std::string to_string(SimMode m) {
    return m == SimMode::latent ? "latent" : "marginal";
}

std::string StrideSpec::describe() const {
    if (kind == Kind::every) return "every";
    return "geometric:" + std::to_string(ratio);
}

bool Trajectory::contiguous() const {
    for (std::size_t i = 0; i < samples.size(); ++i)
        if (samples[i].step != static_cast<std::int64_t>(i)) return false;
    return !samples.empty();
}

Trajectory simulate_trajectory(const ModelParams& params, std::int64_t steps,
                               std::uint64_t seed, SimMode mode, const StrideSpec& stride) {
    if (steps < 0) throw DomainError("steps must be >= 0");
    Trajectory traj;
    traj.params = params;
    traj.seed = seed;
    traj.mode = mode;
    traj.stride_spec = stride.describe();

    PathSimulator sim(params, seed, mode);
    traj.samples.push_back({0, params.n0, params.m0, -1});
    if (steps == 0) return traj;

    if (stride.kind == StrideSpec::Kind::every) {
        traj.samples.reserve(static_cast<std::size_t>(steps) + 1);
        for (std::int64_t s = 1; s <= steps; ++s) {
            const int x = sim.step();
            traj.samples.push_back({s, sim.count_a(), sim.count_b(), x});
        }
        return traj;
    }

    // geometric recording: steps ceil(ratio^j), deduplicated, plus the final step
    std::int64_t next_record = 1;
    double mark = 1.0;
    for (std::int64_t s = 1; s <= steps; ++s) {
        const int x = sim.step();
        if (s == next_record || s == steps) {
            traj.samples.push_back({s, sim.count_a(), sim.count_b(), x});
            while (next_record <= s) {
                mark *= stride.ratio;
                next_record = static_cast<std::int64_t>(std::ceil(mark));
            }
        }
    }
    return traj;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "step,count_a,count_b,decision\n";
    for (const auto& s : traj.samples)
        os << s.step << ',' << s.count_a << ',' << s.count_b << ',' << s.decision << '\n';
}

} // namespace odl
