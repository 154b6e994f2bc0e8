#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "odl/params.hpp"

namespace odl {

/// Law of N_n on its support N0..N0+n.
struct ExactDistribution {
    std::int64_t n = 0;
    std::int64_t support_min = 0;                  // = N0
    std::vector<double> probabilities;             // probabilities[k] = P(N_n = N0+k)

    double mean() const;
    double raw_moment(int k) const;
    double total() const;
};

inline constexpr std::int64_t kOracleCap = 5000;
inline constexpr std::int64_t kEnumerationCap = 20;

/// Ground-truth law of N_n by forward dynamic programming over the marginal
/// chain, O(n^2). Capped at kOracleCap.
ExactDistribution exact_distribution(const ModelParams& params, std::int64_t n);

/// Same law by exhaustive enumeration of all 2^n decision sequences,
/// weighting each by its chained step probabilities. Only used to validate
/// the DP; capped at kEnumerationCap.
ExactDistribution exact_distribution_enumerated(const ModelParams& params, std::int64_t n);

/// CSV schema: `k,probability`, 17 significant digits.
void write_distribution_csv(std::ostream& os, const ExactDistribution& dist);

} // namespace odl
