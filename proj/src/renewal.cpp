#include "pinlab/renewal.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "pinlab/errors.hpp"
#include "pinlab/numerics.hpp"

namespace pinlab {

RenewalKernel::RenewalKernel(ExcursionLaw law, std::int64_t n_max, double tail_mass)
    : law_(std::move(law)), n_max_(n_max) {
    if (n_max < 1) throw InvalidLaw("kernel length must be >= 1");
    // Convolution window: certified tail mass below threshold, with a
    // four-decade slack because subcritical constrained values decay and
    // amplify whatever the window drops. Heavy-tail laws get the full O(N^2)
    // recursion.
    window_ = n_max;
    if (law_.b_e() > 0.0) {
        const double log_thr = std::log(tail_mass) - 4.0 * std::log(10.0);
        std::int64_t w = law_.min_support();
        while (w < n_max && law_.log_tail_sum(w) >= log_thr) w = std::min(n_max, w * 2);
        // Refine downward by bisection on the monotone tail.
        std::int64_t lo = law_.min_support(), hi = w;
        while (lo < hi) {
            std::int64_t mid = lo + (hi - lo) / 2;
            if (law_.log_tail_sum(mid) >= log_thr)
                lo = mid + 1;
            else
                hi = mid;
        }
        window_ = std::min(n_max, lo);
    }
    log_pmf_.resize(static_cast<std::size_t>(window_) + 1, kNegInf);
    for (std::int64_t n = law_.min_support(); n <= window_; n += law_.lattice())
        log_pmf_[static_cast<std::size_t>(n)] = law_.log_pmf(n);
    // Survival table by backward accumulation from a certified top value.
    log_surv_.resize(static_cast<std::size_t>(n_max_) + 1);
    const double log_mass_inf =
        law_.mass_inf() > 0.0 ? std::log(law_.mass_inf()) : kNegInf;
    double log_tail = law_.log_tail_sum(n_max_);
    log_surv_[static_cast<std::size_t>(n_max_)] = log_sum_exp(log_mass_inf, log_tail);
    for (std::int64_t m = n_max_ - 1; m >= 1; --m) {
        log_tail = log_sum_exp(log_tail, law_.log_pmf(m + 1));
        log_surv_[static_cast<std::size_t>(m)] = log_sum_exp(log_mass_inf, log_tail);
    }
    log_surv_[0] = 0.0;
}

namespace {

/// max + log-sum pass over window terms log_w[n] + state[k-n].
inline double window_lse(std::span<const double> log_w, std::span<const double> state,
                         std::int64_t k, std::int64_t a, std::int64_t lattice,
                         std::int64_t window) {
    const std::int64_t top = std::min(k, window);
    double mx = kNegInf;
    for (std::int64_t n = a; n <= top; n += lattice) {
        double t = log_w[static_cast<std::size_t>(n)] + state[static_cast<std::size_t>(k - n)];
        if (t > mx) mx = t;
    }
    if (mx == kNegInf) return kNegInf;
    double s = 0.0;
    for (std::int64_t n = a; n <= top; n += lattice) {
        double t = log_w[static_cast<std::size_t>(n)] + state[static_cast<std::size_t>(k - n)];
        if (t != kNegInf) s += std::exp(t - mx);
    }
    return mx + std::log(s);
}

}  // namespace

std::vector<double> constrained_log_z(const RenewalKernel& kernel, double beta, double u,
                                      std::span<const double> v) {
    const std::int64_t n = kernel.n_max();
    if (static_cast<std::int64_t>(v.size()) < n)
        throw InvalidLaw("disorder field shorter than N");
    const auto& law = kernel.law();
    std::vector<double> log_pmf(static_cast<std::size_t>(kernel.window()) + 1);
    for (std::int64_t i = 0; i <= kernel.window(); ++i)
        log_pmf[static_cast<std::size_t>(i)] = kernel.log_pmf_at(i);
    std::vector<double> log_zc(static_cast<std::size_t>(n) + 1, kNegInf);
    log_zc[0] = 0.0;
    for (std::int64_t k = 1; k <= n; ++k) {
        double inner = window_lse(log_pmf, log_zc, k, law.min_support(), law.lattice(),
                                  kernel.window());
        log_zc[static_cast<std::size_t>(k)] =
            inner == kNegInf ? kNegInf
                             : beta * (u + v[static_cast<std::size_t>(k - 1)]) + inner;
    }
    return log_zc;
}

double free_log_z(const RenewalKernel& kernel, std::span<const double> log_zc) {
    const std::int64_t n = kernel.n_max();
    LogAccumulator acc;
    for (std::int64_t k = 0; k <= n; ++k)
        acc.add(log_zc[static_cast<std::size_t>(k)] + kernel.log_survival_at(n - k));
    return acc.log();
}

PartitionResult compute_partition(const RenewalKernel& kernel, double beta, double u,
                                  std::span<const double> v, std::uint64_t seed,
                                  bool want_contacts) {
    const std::int64_t n = kernel.n_max();
    if (static_cast<std::int64_t>(v.size()) < n)
        throw InvalidLaw("disorder field shorter than N");
    const auto& law = kernel.law();
    const std::int64_t a = law.min_support();
    const std::int64_t lat = law.lattice();
    const std::int64_t w = kernel.window();
    std::vector<double> log_pmf(static_cast<std::size_t>(w) + 1);
    for (std::int64_t i = 0; i <= w; ++i) log_pmf[static_cast<std::size_t>(i)] = kernel.log_pmf_at(i);

    std::vector<double> log_zc(static_cast<std::size_t>(n) + 1, kNegInf);
    std::vector<double> log_ac, log_bc;
    log_zc[0] = 0.0;
    if (want_contacts) {
        log_ac.assign(static_cast<std::size_t>(n) + 1, kNegInf);
        log_bc.assign(static_cast<std::size_t>(n) + 1, kNegInf);
        log_bc[0] = 0.0;  // B = A + Z
    }
    for (std::int64_t k = 1; k <= n; ++k) {
        const double site = beta * (u + v[static_cast<std::size_t>(k - 1)]);
        double inner = window_lse(log_pmf, log_zc, k, a, lat, w);
        log_zc[static_cast<std::size_t>(k)] = inner == kNegInf ? kNegInf : site + inner;
        if (want_contacts) {
            // A^c_k = sum_n pmf(n) e^{site} (A^c_{k-n} + Z^c_{k-n})
            double inner_b = window_lse(log_pmf, log_bc, k, a, lat, w);
            double la = inner_b == kNegInf ? kNegInf : site + inner_b;
            log_ac[static_cast<std::size_t>(k)] = la;
            log_bc[static_cast<std::size_t>(k)] =
                log_sum_exp(la, log_zc[static_cast<std::size_t>(k)]);
        }
    }
    PartitionResult res;
    res.n = n;
    res.seed = seed;
    LogAccumulator zf;
    for (std::int64_t k = 0; k <= n; ++k)
        zf.add(log_zc[static_cast<std::size_t>(k)] + kernel.log_survival_at(n - k));
    res.log_z_free = zf.log();
    if (want_contacts) {
        LogAccumulator af;
        for (std::int64_t k = 1; k <= n; ++k)
            af.add(log_ac[static_cast<std::size_t>(k)] + kernel.log_survival_at(n - k));
        double la = af.log();
        res.mean_contacts =
            la == kNegInf ? 0.0
                          : std::clamp(std::exp(la - res.log_z_free), 0.0,
                                       static_cast<double>(n));
    } else {
        res.mean_contacts = 0.0;
    }
    res.log_zc = std::move(log_zc);
    return res;
}

PartitionResult compute_partition(const PinningModel& model, const DisorderField& field,
                                  std::int64_t n) {
    RenewalKernel kernel(model.law, n);
    return compute_partition(kernel, model.beta, model.u, field.values, field.seed, true);
}

std::vector<double> contact_count_dp(const ExcursionLaw& law, std::int64_t n,
                                     std::int64_t cap) {
    if (n > cap) throw CapExceeded("contact-count DP length above cap");
    if (n < 0) throw InvalidLaw("N must be >= 0");
    std::vector<double> out(static_cast<std::size_t>(n) + 1, kNegInf);
    out[0] = n == 0 ? 0.0 : kNegInf;
    if (n == 0) return out;
    const std::int64_t a = law.min_support();
    const std::int64_t lat = law.lattice();
    const double be = law.b_e();
    if (be < kInf) {
        // Convolve the prefactor weights gamma(n) = pmf(n) e^{b_E n}; their
        // k-fold convolutions stay in a polynomial range, so the rows can be
        // kept in linear space with one running scale per row.
        std::vector<double> gamma(static_cast<std::size_t>(n) + 1, 0.0);
        for (std::int64_t m = a; m <= n; m += lat)
            gamma[static_cast<std::size_t>(m)] =
                std::exp(law.log_pmf(m) + be * static_cast<double>(m));
        std::vector<double> prev(static_cast<std::size_t>(n) + 1, 0.0);
        std::vector<double> cur(static_cast<std::size_t>(n) + 1, 0.0);
        prev[0] = 1.0;
        double log_scale = 0.0;
        for (std::int64_t k = 1; k * a <= n; ++k) {
            std::fill(cur.begin(), cur.end(), 0.0);
            double mx = 0.0;
            for (std::int64_t m = k * a; m <= n; ++m) {
                double s = 0.0;
                const std::int64_t lo_gap = a;
                const std::int64_t hi_gap = m - (k - 1) * a;
                for (std::int64_t gap = lo_gap; gap <= std::min(hi_gap, n); gap += lat) {
                    double g = gamma[static_cast<std::size_t>(gap)];
                    if (g != 0.0) s += g * prev[static_cast<std::size_t>(m - gap)];
                }
                cur[static_cast<std::size_t>(m)] = s;
                if (s > mx) mx = s;
            }
            if (mx == 0.0) break;
            if (cur[static_cast<std::size_t>(n)] > 0.0)
                out[static_cast<std::size_t>(k)] =
                    std::log(cur[static_cast<std::size_t>(n)]) + log_scale -
                    be * static_cast<double>(n);
            for (std::int64_t m = 0; m <= n; ++m) cur[static_cast<std::size_t>(m)] /= mx;
            log_scale += std::log(mx);
            std::swap(prev, cur);
        }
        return out;
    }
    // Finite-support laws: log-space LSE rows.
    std::vector<std::pair<std::int64_t, double>> support;
    for (std::int64_t m = a; m <= std::min<std::int64_t>(n, static_cast<std::int64_t>(
                                                                law.sup_support()));
         ++m) {
        double lp = law.log_pmf(m);
        if (lp != kNegInf) support.emplace_back(m, lp);
    }
    std::vector<double> prev(static_cast<std::size_t>(n) + 1, kNegInf);
    std::vector<double> cur(static_cast<std::size_t>(n) + 1, kNegInf);
    prev[0] = 0.0;
    for (std::int64_t k = 1; k * a <= n; ++k) {
        std::fill(cur.begin(), cur.end(), kNegInf);
        bool any = false;
        for (std::int64_t m = k * a; m <= n; ++m) {
            LogAccumulator acc;
            for (auto [gap, lp] : support) {
                if (gap > m) break;
                acc.add(lp + prev[static_cast<std::size_t>(m - gap)]);
            }
            double val = acc.log();
            cur[static_cast<std::size_t>(m)] = val;
            any = any || val != kNegInf;
        }
        if (!any) break;
        out[static_cast<std::size_t>(k)] = cur[static_cast<std::size_t>(n)];
        std::swap(prev, cur);
    }
    return out;
}

BruteForceResult brute_force(const ExcursionLaw& law, double beta, double u,
                             std::span<const double> v, std::int64_t n) {
    if (n > 20) throw CapExceeded("brute force is limited to N <= 20");
    if (n < 1 || static_cast<std::int64_t>(v.size()) < n)
        throw InvalidLaw("need 1 <= N <= field length");
    std::vector<double> pm(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> sv(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::int64_t i = 1; i <= n; ++i) pm[static_cast<std::size_t>(i)] = law.pmf(i);
    for (std::int64_t i = 0; i <= n; ++i) sv[static_cast<std::size_t>(i)] = law.survival(i);
    std::vector<double> site(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::int64_t i = 1; i <= n; ++i)
        site[static_cast<std::size_t>(i)] =
            std::exp(beta * (u + v[static_cast<std::size_t>(i - 1)]));
    double z = 0.0, zc = 0.0, sum_wl = 0.0;
    const std::uint64_t count = 1ULL << n;
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        double w = 1.0;
        std::int64_t last = 0;
        for (std::int64_t t = 1; t <= n && w != 0.0; ++t) {
            if (mask & (1ULL << (t - 1))) {
                w *= pm[static_cast<std::size_t>(t - last)] * site[static_cast<std::size_t>(t)];
                last = t;
            }
        }
        if (w == 0.0) continue;
        if (last == n) zc += w;
        double wf = w * sv[static_cast<std::size_t>(n - last)];
        z += wf;
        sum_wl += wf * static_cast<double>(std::popcount(mask));
    }
    BruteForceResult res;
    res.log_z_free = std::log(z);
    res.log_z_constrained = zc > 0.0 ? std::log(zc) : kNegInf;
    res.mean_contacts = z > 0.0 ? sum_wl / z : 0.0;
    return res;
}

}  // namespace pinlab
