#pragma once

#include <cmath>
#include <cstdint>

namespace odl {

/// Welford running mean/variance; merge is Chan's pairwise update so
/// per-block partials can be combined in a fixed order.
class RunningStats {
  public:
    void add(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }

    void merge(const RunningStats& o) {
        if (o.n_ == 0) return;
        if (n_ == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n_), nb = static_cast<double>(o.n_);
        const double d = o.mean_ - mean_;
        mean_ += d * nb / (na + nb);
        m2_ += o.m2_ + d * d * na * nb / (na + nb);
        n_ += o.n_;
    }

    std::int64_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    double variance_population() const { return n_ > 0 ? m2_ / static_cast<double>(n_) : 0.0; }
    double stderr_mean() const {
        return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
    }
    /// Standard error of the sample variance under approximate normality.
    double stderr_variance() const {
        return n_ > 1 ? variance() * std::sqrt(2.0 / static_cast<double>(n_ - 1)) : 0.0;
    }

  private:
    std::int64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// Streaming bivariate moments: covariance and correlation of a pair.
class RunningCov {
  public:
    void add(double x, double y) {
        ++n_;
        const double nd = static_cast<double>(n_);
        const double dx = x - mx_;
        const double dy = y - my_;
        mx_ += dx / nd;
        my_ += dy / nd;
        cxy_ += dx * (y - my_);
        mxx_ += dx * (x - mx_);
        myy_ += dy * (y - my_);
    }

    void merge(const RunningCov& o) {
        if (o.n_ == 0) return;
        if (n_ == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n_), nb = static_cast<double>(o.n_);
        const double f = na * nb / (na + nb);
        const double dx = o.mx_ - mx_, dy = o.my_ - my_;
        cxy_ += o.cxy_ + dx * dy * f;
        mxx_ += o.mxx_ + dx * dx * f;
        myy_ += o.myy_ + dy * dy * f;
        mx_ += dx * nb / (na + nb);
        my_ += dy * nb / (na + nb);
        n_ += o.n_;
    }

    std::int64_t count() const { return n_; }
    double mean_x() const { return mx_; }
    double mean_y() const { return my_; }
    double covariance() const { return n_ > 1 ? cxy_ / static_cast<double>(n_ - 1) : 0.0; }
    double correlation() const {
        const double d = std::sqrt(mxx_ * myy_);
        return d > 0.0 ? cxy_ / d : 0.0;
    }

  private:
    std::int64_t n_ = 0;
    double mx_ = 0.0, my_ = 0.0;
    double cxy_ = 0.0, mxx_ = 0.0, myy_ = 0.0;
};

} // namespace odl
