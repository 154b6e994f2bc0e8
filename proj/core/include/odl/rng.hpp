#pragma once

#include <cstdint>
#include <random>

namespace odl {

/// splitmix64 finalizer; used to derive statistically independent
/// per-replication seeds from (master seed, replication index) so that
/// ensemble results do not depend on scheduling.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + (stream + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Uniform double in [0,1) from the top 53 bits; spelled out instead of
/// uniform_real_distribution so streams are identical across standard
/// library implementations.
inline double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

} // namespace odl
