#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "odl/params.hpp"

namespace odl {

inline constexpr int kMaxMomentOrder = 12;

/// E[N_n].
double mean_N(const ModelParams& p, std::int64_t n);

/// E[N_n^2]. Uses the closed form away from theta = 1/2 and the universal
/// recursion in a 1e-9 band around it, where the closed form's (2*theta - 1)
/// denominator is singular.
double second_moment_N(const ModelParams& p, std::int64_t n);

/// E[N_n^k] by iterating the one-step conditional moment recursion from 0.
/// k is capped at kMaxMomentOrder.
double moment_recursive(const ModelParams& p, std::int64_t n, int k);

/// (E[N_n], E[M_n]).
std::array<double, 2> mean_vector(const ModelParams& p, std::int64_t n);

/// Exact E[C_n/n] with C_n = (1/n) sum_{i<=n} (N_i - M_i); closed form via
/// the summed Pochhammer-ratio identity.
double mean_cn_over_n(const ModelParams& p, std::int64_t n);

/// E[(N,M)^T (N,M)] as {{NN, NM}, {NM, MM}}.
std::array<std::array<double, 2>, 2> second_matrix(const ModelParams& p, std::int64_t n);

/// The closed second-moment form is assembled from five additive groups
/// under a common Pochhammer-ratio prefactor; exposed so each group can be
/// unit-tested against its summation identity.
struct SecondMomentTerms {
    double prefactor;  // (2*theta+T0)_n / (T0)_n
    double g1;         // N0^2
    double g2;         // n-independent part of the centered-start terms
    double g3;         // partial sum of second-order weights
    double g4;         // partial sum of weight*T terms
    double g5;         // n-dependent part of the centered-start terms
    double value() const { return prefactor * (g1 + g2 + g3 + g4 + g5); }
};

SecondMomentTerms second_moment_terms(const ModelParams& p, std::int64_t n);

struct MomentRequest {
    ModelParams params;
    std::vector<std::int64_t> times;  // sorted, nonnegative
    int max_order = 2;
};

struct ExactMoments {
    ModelParams params;
    std::vector<std::int64_t> times;
    std::vector<std::vector<double>> raw_moments;  // [time][k-1], k = 1..max_order
    std::vector<std::array<double, 2>> mean_vectors;
    std::vector<std::array<std::array<double, 2>, 2>> second_matrices;
};

ExactMoments compute_moments(const MomentRequest& req);

/// CSV schema: `n,k,value`, 17 significant digits.
void write_moments_csv(std::ostream& os, const ExactMoments& m);
std::string moments_to_json(const ExactMoments& m);

} // namespace odl
