#include "odl/exact_distribution.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "odl/errors.hpp"

namespace odl {

double ExactDistribution::mean() const { return raw_moment(1); }

double ExactDistribution::raw_moment(int k) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i)
        acc += probabilities[i] * std::pow(static_cast<double>(support_min + static_cast<std::int64_t>(i)),
                                           static_cast<double>(k));
    return acc;
}

double ExactDistribution::total() const {
    double acc = 0.0;
    for (double p : probabilities) acc += p;
    return acc;
}

ExactDistribution exact_distribution(const ModelParams& params, std::int64_t n) {
    if (n < 0) throw DomainError("n must be >= 0");
    if (n > kOracleCap) throw OracleCapExceeded("exact_distribution capped at n = 5000");

    ExactDistribution dist;
    dist.n = n;
    dist.support_min = params.n0;
    std::vector<double> cur(1, 1.0), next;
    for (std::int64_t j = 0; j < n; ++j) {
        const std::int64_t t = params.t0 + j;
        next.assign(cur.size() + 1, 0.0);
        for (std::size_t k = 0; k < cur.size(); ++k) {
            const double p = step_probability(params, params.n0 + static_cast<std::int64_t>(k), t);
            next[k] += cur[k] * (1.0 - p);
            next[k + 1] += cur[k] * p;
        }
        cur.swap(next);
    }
    dist.probabilities = std::move(cur);
    return dist;
}

ExactDistribution exact_distribution_enumerated(const ModelParams& params, std::int64_t n) {
    if (n < 0) throw DomainError("n must be >= 0");
    if (n > kEnumerationCap) throw OracleCapExceeded("exhaustive enumeration capped at n = 20");

    ExactDistribution dist;
    dist.n = n;
    dist.support_min = params.n0;
    dist.probabilities.assign(static_cast<std::size_t>(n) + 1, 0.0);
    const std::uint64_t total = 1ull << n;
    for (std::uint64_t bits = 0; bits < total; ++bits) {
        double w = 1.0;
        std::int64_t cnt = params.n0;
        for (std::int64_t j = 0; j < n; ++j) {
            const double p = step_probability(params, cnt, params.t0 + j);
            if (bits >> j & 1u) {
                w *= p;
                ++cnt;
            } else {
                w *= 1.0 - p;
            }
        }
        dist.probabilities[static_cast<std::size_t>(cnt - params.n0)] += w;
    }
    return dist;
}

void write_distribution_csv(std::ostream& os, const ExactDistribution& dist) {
    os << "k,probability\n";
    char buf[64];
    for (std::size_t i = 0; i < dist.probabilities.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", dist.probabilities[i]);
        os << dist.support_min + static_cast<std::int64_t>(i) << ',' << buf << '\n';
    }
}

} // namespace odl
