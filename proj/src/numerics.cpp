#include "pinlab/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace pinlab {

double log_sum_exp(std::span<const double> logs) {
    LogAccumulator acc;
    for (double v : logs) acc.add(v);
    return acc.log();
}

double hurwitz_zeta(double s, double a) {
    if (s <= 1.0) return kInf;
    // Bernoulli numbers B_2..B_10 over (2j)!
    static constexpr double b2j_over_fact[] = {
        1.0 / 12.0,        // B_2/2!
        -1.0 / 720.0,      // B_4/4!
        1.0 / 30240.0,     // B_6/6!
        -1.0 / 1209600.0,  // B_8/8!
        1.0 / 47900160.0,  // B_10/10!
    };
    const int M = 32;
    double sum = 0.0;
    for (int k = 0; k < M; ++k) sum += std::pow(a + k, -s);
    const double x = a + M;
    sum += std::pow(x, 1.0 - s) / (s - 1.0);
    sum += 0.5 * std::pow(x, -s);
    // Correction terms B_{2j}/(2j)! * s(s+1)...(s+2j-2) * x^{-s-2j+1}
    double rising = s;  // s(s+1)...: start with (s)_1
    for (int j = 1; j <= 5; ++j) {
        sum += b2j_over_fact[j - 1] * rising * std::pow(x, -s - 2.0 * j + 1.0);
        rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
    }
    return sum;
}

namespace {
constexpr double kInvPhi = 0.6180339887498949;  // 1/phi
}

GoldenResult golden_min(const std::function<double(double)>& f, double lo, double hi, double tol) {
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    // Track the best point ever seen, including the endpoints.
    GoldenResult best{x1, f1};
    if (f2 < best.value) best = {x2, f2};
    double fa = f(a), fb = f(b);
    if (fa < best.value) best = {a, fa};
    if (fb < best.value) best = {b, fb};
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        }
        if (f1 < best.value) best = {x1, f1};
        if (f2 < best.value) best = {x2, f2};
    }
    return best;
}

GoldenResult golden_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
    GoldenResult r = golden_min([&](double x) { return -f(x); }, lo, hi, tol);
    return {r.arg, -r.value};
}

double bisect_decreasing(const std::function<double(double)>& f, double target, double lo,
                         double hi, int iters) {
    for (int i = 0; i < iters && hi - lo > 0; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // exhausted double resolution
        if (f(mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double bisect_increasing(const std::function<double(double)>& f, double target, double lo,
                         double hi, int iters) {
    return bisect_decreasing([&](double x) { return -f(x); }, -target, lo, hi, iters);
}

}  // namespace pinlab
