#include "pinlab/ratefun.hpp"

#include <cmath>

#include "pinlab/errors.hpp"

namespace pinlab {

namespace {
constexpr double kArgTol = 1e-10;   // bracket width for scalar optimizations
constexpr double kEdgeEps = 1e-6;   // edge strip below b_E for series laws
}

RateProfile::RateProfile(ExcursionLaw law) : law_(std::move(law)) {
    if (law_.b_e() == kInf) {
        log_mf_at_be_ = kInf;
    } else {
        double s = law_.log_weighted_sum(law_.b_e(), 0);
        log_mf_at_be_ = s == kInf ? kInf : s - law_.log_mass_finite();
    }
    if (law_.b_e() < kInf && log_mf_at_be_ < kInf && !law_.has_closed_form_mgf())
        edge_mean_ = law_.mgf_finite_mean(law_.b_e() - kEdgeEps);
    // argmin of ghat over its finite domain, plus the delta = 0 endpoint.
    double lo = law_.sup_support() < kInf ? 1.0 / law_.sup_support() : 0.0;
    double hi = 1.0 / static_cast<double>(law_.min_support());
    GoldenResult m = golden_min([this](double d) { return ghat(d); }, lo, hi, kArgTol);
    x_star_ = ghat(0.0) <= m.value ? 0.0 : m.arg;
}

double RateProfile::legendre_argmax(double t) const {
    // (log M_E^f)' is increasing; bracket then bisect.
    double hi;
    if (law_.b_e() < kInf) {
        hi = edge_mean_ < kInf ? law_.b_e() - kEdgeEps : law_.b_e();
    } else {
        hi = 1.0;
        while (law_.mgf_finite_mean(hi) <= t) hi *= 2.0;
    }
    double lo = std::min(hi - 1.0, -1.0);
    while (law_.mgf_finite_mean(lo) >= t) {
        lo = lo * 2.0 - 1.0;
        if (lo < -1e12) throw NumericalFailure("legendre bracket expansion failed");
    }
    return bisect_increasing([this](double x) { return law_.mgf_finite_mean(x); }, t, lo, hi);
}

double RateProfile::rate_I_f(double t) const {
    const double a = static_cast<double>(law_.min_support());
    const double big_a = law_.sup_support();
    if (t < a || t > big_a) return kInf;
    if (t == a) return -(law_.log_pmf(law_.min_support()) - law_.log_mass_finite());
    if (big_a < kInf && t == big_a)
        return -(law_.log_pmf(static_cast<std::int64_t>(big_a)) - law_.log_mass_finite());
    if (law_.b_e() < kInf && log_mf_at_be_ < kInf && t >= law_.b_e_prime())
        return t * law_.b_e() - log_mf_at_be_;  // affine branch
    if (t >= edge_mean_) return t * law_.b_e() - log_mf_at_be_;  // edge strip
    double x = legendre_argmax(t);
    return t * x - law_.log_mgf_finite(x);
}

double RateProfile::rate_I(double t) const { return rate_I_f(t) + law_.r(); }

double RateProfile::rate_J(double t) const {
    if (!law_.recurrent() && t >= law_.m_e()) return law_.r();
    return rate_I(t);
}

double RateProfile::g(double delta) const {
    if (delta == 0.0) return 0.0;
    if (delta < 0.0 || delta > 1.0 / static_cast<double>(law_.min_support())) return kInf;
    return delta * rate_J(1.0 / delta);
}

double RateProfile::ghat_f(double delta) const {
    if (delta == 0.0) return law_.b_e();
    if (delta < 0.0 || delta > 1.0 / static_cast<double>(law_.min_support())) return kInf;
    return delta * rate_I_f(1.0 / delta);
}

double RateProfile::ghat(double delta) const {
    double gf = ghat_f(delta);
    return gf == kInf ? kInf : gf + law_.r() * delta;
}

double RateProfile::h(double delta, double beta, double sigma2) const {
    double gh = ghat(delta);
    return gh == kInf ? kInf : gh + 0.5 * beta * beta * sigma2 * delta * delta;
}

double RateProfile::delta0(double beta, double log_mv, double sigma2) const {
    if (law_.recurrent() || law_.b_e() == 0.0)
        throw Unsupported("delta0 requires a nontrivially transient law with b_E > 0");
    const double floor = std::min(law_.b_e(), 1.0);
    const double thr = floor / 2.0;
    const double cap = floor / (4.0 * (log_mv + law_.r()));
    auto hh = [&](double d) { return h(d, beta, sigma2); };
    double lo = law_.sup_support() < kInf ? 1.0 / law_.sup_support() : 0.0;
    double hi = 1.0 / static_cast<double>(law_.min_support());
    double ub = std::min(cap, hi);
    if (lo >= ub) return cap;  // h = +inf (or empty) below the domain
    GoldenResult m = golden_min(hh, lo, ub, kArgTol);
    if (m.value > thr) return cap;
    if (hh(lo) <= thr) return std::min(lo, cap);
    // h is convex with h(0) = b_E > thr: the first crossing is in (lo, argmin).
    double cross =
        bisect_decreasing([&](double d) { return hh(d); }, thr, lo, m.arg);
    return std::min(cross, cap);
}

RateProfile::Variational RateProfile::variational_annealed(double beta, double u,
                                                           double log_mv) const {
    const double q = beta * u + log_mv;
    double lo = law_.sup_support() < kInf ? 1.0 / law_.sup_support() : 0.0;
    double hi = 1.0 / static_cast<double>(law_.min_support());
    auto phi = [&](double d) { return q * d - ghat(d); };
    GoldenResult best = golden_max(phi, lo, hi, kArgTol);
    if (phi(0.0) > best.value) best = {0.0, phi(0.0)};
    if (!law_.recurrent() && best.value < 0.0) return {0.0, 0.0};  // escape branch
    return {best.value, best.arg};
}

double RateProfile::quenched_upper_bound(double beta, double u, double log_mv,
                                         double sigma2) const {
    const double q = beta * u + log_mv;
    double lo = law_.sup_support() < kInf ? 1.0 / law_.sup_support() : 0.0;
    double hi = 1.0 / static_cast<double>(law_.min_support());
    auto phi = [&](double d) { return q * d - h(d, beta, sigma2); };
    GoldenResult best = golden_max(phi, lo, hi, kArgTol);
    if (phi(0.0) > best.value) best = {0.0, phi(0.0)};
    return std::max(best.value, 0.0) / beta;
}

}  // namespace pinlab
