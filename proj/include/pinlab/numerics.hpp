#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>

namespace pinlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double log_sum_exp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    double m = a > b ? a : b;
    return m + std::log1p(std::exp(-(std::abs(a - b))));
}

/// Streaming log-sum-exp over terms given as logs. Rescales on the fly so the
/// running sum never overflows.
class LogAccumulator {
public:
    void add(double log_term) {
        if (log_term == kNegInf) return;
        if (log_term <= max_log_) {
            sum_ += std::exp(log_term - max_log_);
        } else {
            sum_ = sum_ * std::exp(max_log_ - log_term) + 1.0;
            max_log_ = log_term;
        }
    }
    bool empty() const { return sum_ == 0.0; }
    double log() const { return sum_ == 0.0 ? kNegInf : max_log_ + std::log(sum_); }
    /// log of the accumulated sum relative to the running max (for stop rules).
    double max_log() const { return max_log_; }
    double scaled_sum() const { return sum_; }

private:
    double max_log_ = kNegInf;
    double sum_ = 0.0;
};

double log_sum_exp(std::span<const double> logs);

/// Hurwitz zeta sum_{k>=0} (a+k)^{-s} for s>1, a>0 (Euler-Maclaurin).
/// Returns +inf for s <= 1.
double hurwitz_zeta(double s, double a);

struct GoldenResult {
    double arg;
    double value;
};

/// Minimize a unimodal function on [lo, hi] to bracket width `tol`.
/// With flat stretches it returns some point of the argmin set.
GoldenResult golden_min(const std::function<double(double)>& f, double lo, double hi, double tol);

GoldenResult golden_max(const std::function<double(double)>& f, double lo, double hi, double tol);

/// Bisect a nonincreasing function for f(x) = target on (lo, hi).
/// Assumes f(lo+) > target > f(hi-); endpoints are never evaluated.
double bisect_decreasing(const std::function<double(double)>& f, double target, double lo,
                         double hi, int iters = 200);

/// Bisect a nondecreasing function for f(x) = target on (lo, hi).
double bisect_increasing(const std::function<double(double)>& f, double target, double lo,
                         double hi, int iters = 200);

}  // namespace pinlab
