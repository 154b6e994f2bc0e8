#include "odl/moments.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "odl/errors.hpp"
#include "odl/special.hpp"

namespace odl {

namespace {

constexpr double kHalfBand = 1e-9;  // |2*theta - 1| below this: closed form singular
constexpr double kOneBand = 1e-9;   // |1 - theta| below this: 1/(1-theta) singular

bool near_half(double theta) { return std::abs(2.0 * theta - 1.0) < kHalfBand; }
bool near_one(double theta) { return std::abs(1.0 - theta) < kOneBand; }

// Pascal triangle up to kMaxMomentOrder.
const std::array<std::array<double, kMaxMomentOrder + 2>, kMaxMomentOrder + 2>& binomials() {
    static const auto table = [] {
        std::array<std::array<double, kMaxMomentOrder + 2>, kMaxMomentOrder + 2> t{};
        for (int i = 0; i <= kMaxMomentOrder + 1; ++i) {
            t[i][0] = 1.0;
            for (int j = 1; j <= i; ++j)
                t[i][j] = (j > 0 ? t[i - 1][j - 1] : 0.0) + (j <= i - 1 ? t[i - 1][j] : 0.0);
        }
        return t;
    }();
    return table;
}

// One recursion pass up to n, all orders 1..kmax at once. The per-step map is
// the conditional-moment identity with coefficients 1 + k*theta/T_j and
// a*C(k,i) + (theta/T_j)*C(k,i+1).
std::vector<double> recursion_pass(const ModelParams& p, std::int64_t n, int kmax) {
    const auto& C = binomials();
    std::vector<double> m(static_cast<std::size_t>(kmax) + 1);
    for (int k = 0; k <= kmax; ++k) m[k] = std::pow(static_cast<double>(p.n0), k);
    std::vector<double> next(m.size());
    for (std::int64_t j = 0; j < n; ++j) {
        const double t = p.t0f() + static_cast<double>(j);
        next[0] = 1.0;
        for (int k = 1; k <= kmax; ++k) {
            double s = m[k] * (1.0 + k * p.theta / t);
            for (int i = 1; i < k; ++i)
                s += (p.a * C[k][i] + (p.theta / t) * C[k][i + 1]) * m[k - i];
            s += p.a;
            next[k] = s;
        }
        m.swap(next);
    }
    return m;
}

} // namespace

double mean_N(const ModelParams& p, std::int64_t n) {
    if (n < 0) throw DomainError("n must be >= 0");
    if (n == 0) return static_cast<double>(p.n0);
    if (near_one(p.theta)) return recursion_pass(p, n, 1)[1];
    const double t0 = p.t0f();
    const double c = p.a / (1.0 - p.theta);
    const double q = static_cast<double>(p.n0) - c * t0;
    return pochhammer_ratio(p.theta + t0, t0, n) * q + c * (t0 + static_cast<double>(n));
}

SecondMomentTerms second_moment_terms(const ModelParams& p, std::int64_t n) {
    if (n < 0) throw DomainError("n must be >= 0");
    if (near_half(p.theta) || near_one(p.theta))
        throw RegimeMismatch("closed second-moment form singular here; use moment_recursive");
    const double t0 = p.t0f();
    const double a = p.a;
    const double th = p.theta;
    const double n0 = static_cast<double>(p.n0);
    const double c = a / (1.0 - th);
    const double q = n0 - c * t0;

    SecondMomentTerms t;
    t.prefactor = pochhammer_ratio(2 * th + t0, t0, n);
    t.g1 = n0 * n0;
    t.g2 = q *
           ((2 * a * t0 + th) - (2 * a - 1) * (th + t0) +
            (2 * a / (th - 1)) * (th + t0) * (th + t0 + 1)) /
           (2 * th + t0);
    t.g3 = (a * (1 - 2 * a) / ((1 - th) * (2 * th - 1))) *
           (t0 - std::exp(log_pochhammer(t0, n + 1) - log_pochhammer(2 * th + t0, n)));
    t.g4 = -(a * a / ((1 - th) * (1 - th))) * t0 * (t0 + 1) *
           (1.0 - pochhammer_ratio(t0 + 2, 2 * th + t0, n));
    const double r1 = std::exp(log_pochhammer(th + t0 + 1, n - 1) - log_pochhammer(2 * th + t0 + 1, n - 1));
    const double r2 = std::exp(log_pochhammer(th + t0 + 1, n) - log_pochhammer(2 * th + t0 + 1, n - 1));
    t.g5 = ((th + t0) / (2 * th + t0)) * q * ((2 * a - 1) * r1 - (2 * a / (th - 1)) * r2);
    return t;
}

double second_moment_N(const ModelParams& p, std::int64_t n) {
    if (n < 0) throw DomainError("n must be >= 0");
    if (n == 0) return static_cast<double>(p.n0) * static_cast<double>(p.n0);
    if (near_half(p.theta) || near_one(p.theta)) return recursion_pass(p, n, 2)[2];
    return second_moment_terms(p, n).value();
}

double moment_recursive(const ModelParams& p, std::int64_t n, int k) {
    if (k < 1) throw DomainError("moment order must be >= 1");
    if (k > kMaxMomentOrder) throw OrderCapExceeded("moment order capped at 12");
    if (n < 0) throw DomainError("n must be >= 0");
    return recursion_pass(p, n, k)[static_cast<std::size_t>(k)];
}

std::array<double, 2> mean_vector(const ModelParams& p, std::int64_t n) {
    const double en = mean_N(p, n);
    const double tn = p.t0f() + static_cast<double>(n);
    return {en, tn - en};
}

double mean_cn_over_n(const ModelParams& p, std::int64_t n) {
    if (n < 1) throw DomainError("n must be >= 1");
    const double t0 = p.t0f();
    const double th = p.theta;
    const double nd = static_cast<double>(n);
    double c, q, bsum;
    if (near_one(th)) {
        // direct sums in the 1/(1-theta) band
        c = 0.0;
        q = 0.0;
        double acc = 0.0, en = static_cast<double>(p.n0);
        for (std::int64_t j = 1; j <= n; ++j) {
            const double t = t0 + static_cast<double>(j - 1);
            en = en * (1.0 + th / t) + p.a;
            acc += 2.0 * en - (t0 + static_cast<double>(j));
        }
        return acc / (nd * nd);
    }
    c = p.a / (1.0 - th);
    q = static_cast<double>(p.n0) - c * t0;
    // sum_{i<=n} (theta+T0)_i/(T0)_i
    bsum = ((th + t0) / (th + 1.0)) * (pochhammer_ratio(th + t0 + 1, t0, n) - 1.0);
    const double sum_t = nd * t0 + nd * (nd + 1.0) / 2.0;
    return (2.0 * q * bsum + (2.0 * c - 1.0) * sum_t) / (nd * nd);
}

std::array<std::array<double, 2>, 2> second_matrix(const ModelParams& p, std::int64_t n) {
    const double en = mean_N(p, n);
    const double en2 = second_moment_N(p, n);
    const double tn = p.t0f() + static_cast<double>(n);
    // E[(N,M)^T(N,M)] = E[N^2] [[1,-1],[-1,1]] + T E[N] [[0,1],[1,-2]] + T^2 [[0,0],[0,1]]
    return {{{en2, tn * en - en2}, {tn * en - en2, en2 - 2 * tn * en + tn * tn}}};
}

ExactMoments compute_moments(const MomentRequest& req) {
    if (req.max_order < 1) throw DomainError("max_order must be >= 1");
    if (req.max_order > kMaxMomentOrder) throw OrderCapExceeded("max_order capped at 12");
    ExactMoments out;
    out.params = req.params;
    out.times = req.times;
    const auto& C = binomials();
    const ModelParams& p = req.params;

    std::int64_t maxn = 0;
    for (auto t : req.times) {
        if (t < 0) throw DomainError("times must be >= 0");
        maxn = std::max(maxn, t);
    }
    std::size_t idx = 0;
    std::vector<double> m(static_cast<std::size_t>(req.max_order) + 1);
    for (int k = 0; k <= req.max_order; ++k) m[k] = std::pow(static_cast<double>(p.n0), k);
    std::vector<double> next(m.size());
    auto snapshot = [&](std::int64_t at) {
        while (idx < req.times.size() && req.times[idx] == at) {
            out.raw_moments.emplace_back(m.begin() + 1, m.end());
            out.mean_vectors.push_back(mean_vector(p, at));
            out.second_matrices.push_back(second_matrix(p, at));
            ++idx;
        }
    };
    snapshot(0);
    for (std::int64_t j = 0; j < maxn; ++j) {
        const double t = p.t0f() + static_cast<double>(j);
        next[0] = 1.0;
        for (int k = 1; k <= req.max_order; ++k) {
            double s = m[k] * (1.0 + k * p.theta / t);
            for (int i = 1; i < k; ++i)
                s += (p.a * C[k][i] + (p.theta / t) * C[k][i + 1]) * m[k - i];
            s += p.a;
            next[k] = s;
        }
        m.swap(next);
        snapshot(j + 1);
    }
    return out;
}

void write_moments_csv(std::ostream& os, const ExactMoments& m) {
    os << "n,k,value\n";
    char buf[64];
    for (std::size_t i = 0; i < m.times.size(); ++i)
        for (std::size_t k = 0; k < m.raw_moments[i].size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", m.raw_moments[i][k]);
            os << m.times[i] << ',' << k + 1 << ',' << buf << '\n';
        }
}

std::string moments_to_json(const ExactMoments& m) {
    nlohmann::json j;
    j["times"] = m.times;
    j["max_order"] = m.raw_moments.empty() ? 0 : m.raw_moments.front().size();
    auto& rows = j["moments"];
    for (std::size_t i = 0; i < m.times.size(); ++i) {
        nlohmann::json row;
        row["n"] = m.times[i];
        row["mean_n"] = m.raw_moments[i][0];
        row["raw_moments"] = m.raw_moments[i];
        row["mean_vector"] = m.mean_vectors[i];
        row["second_matrix"] = m.second_matrices[i];
        rows.push_back(row);
    }
    return j.dump(2);
}

} // namespace odl
