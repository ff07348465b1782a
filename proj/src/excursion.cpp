#include "pinlab/excursion.hpp"

#include <algorithm>
#include <cmath>

#include "pinlab/errors.hpp"

namespace pinlab {

namespace {

constexpr double kLog4 = 1.3862943611198906;
constexpr long long kMaxSeriesTerms = 30'000'000;

/// log of the simple-random-walk first-return probability s(2k).
double log_srw_first_return(std::int64_t n) {
    if (n < 2 || n % 2 != 0) return kNegInf;
    double k = static_cast<double>(n / 2);
    return std::lgamma(2.0 * k + 1.0) - 2.0 * std::lgamma(k + 1.0) - k * kLog4 -
           std::log(2.0 * k - 1.0);
}

/// log P(simple random walk has no return to 0 through time 2k) = log C(2k,k)4^{-k}.
double log_srw_no_return(std::int64_t two_k) {
    if (two_k <= 0) return 0.0;
    double k = static_cast<double>(two_k / 2);
    return std::lgamma(2.0 * k + 1.0) - 2.0 * std::lgamma(k + 1.0) - k * kLog4;
}

/// log sum_{n >= n0} n^{-c} e^{-t n}, t >= 0, certified truncation.
double log_sum_poly_exp(double c, double t, std::int64_t n0) {
    if (t < 0) return kInf;
    if (t == 0.0) {
        if (c <= 1.0) return kInf;
        return std::log(hurwitz_zeta(c, static_cast<double>(n0)));
    }
    LogAccumulator acc;
    const double growth = std::max(0.0, -c);  // poly growth when c < 0
    for (std::int64_t n = n0;; ++n) {
        if (n - n0 > kMaxSeriesTerms)
            throw NumericalFailure("series truncation cap exceeded (decay rate too small)");
        double dn = static_cast<double>(n);
        double lt = -c * std::log(dn) - t * dn;
        acc.add(lt);
        // Terms are decreasing once n > -c/t; then bound the remainder by a
        // geometric series with ratio rho.
        if (dn * t > growth) {
            double rho = std::exp(-t) * std::pow((dn + 1.0) / dn, growth);
            if (rho < 1.0) {
                double log_rem = lt + std::log(rho / (1.0 - rho));
                if (log_rem < acc.log() + std::log(1e-17)) break;
            }
        }
    }
    return acc.log();
}

double log1m_exp(double log_w) {
    // log(1 - e^{log_w}) for log_w <= 0.
    if (log_w >= 0.0) return kNegInf;
    return std::log(-std::expm1(log_w));
}

}  // namespace

ExcursionLaw ExcursionLaw::biased_rw(double p) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidLaw("biased_rw requires p in (0,1)");
    ExcursionLaw law;
    law.v_ = BiasedRw{p};
    law.finalize();
    return law;
}

ExcursionLaw ExcursionLaw::geometric_prefactor(double b, double c, double kappa) {
    if (!(b >= 0.0)) throw InvalidLaw("geometric_prefactor requires b >= 0");
    if (!(kappa > 0.0)) throw InvalidLaw("geometric_prefactor requires kappa > 0");
    if (b == 0.0 && c <= 1.0) throw InvalidLaw("total mass diverges for b = 0, c <= 1");
    ExcursionLaw law;
    law.v_ = GeometricPrefactor{b, c, kappa};
    double total = std::exp(std::log(kappa) + log_sum_poly_exp(c, b, 1));
    if (total > 1.0 + 1e-9) throw InvalidLaw("finite mass exceeds 1");
    law.mass_inf_ = std::abs(1.0 - total) < 1e-13 ? 0.0 : 1.0 - total;
    law.finalize();
    return law;
}

ExcursionLaw ExcursionLaw::geometric_prefactor_normalized(double b, double c) {
    if (!(b >= 0.0)) throw InvalidLaw("geometric_prefactor requires b >= 0");
    if (b == 0.0 && c <= 1.0) throw InvalidLaw("total mass diverges for b = 0, c <= 1");
    ExcursionLaw law;
    double kappa = std::exp(-log_sum_poly_exp(c, b, 1));
    law.v_ = GeometricPrefactor{b, c, kappa};
    law.mass_inf_ = 0.0;
    law.finalize();
    return law;
}

ExcursionLaw ExcursionLaw::power_law(double c, double kappa) {
    if (c <= 1.0) throw InvalidLaw("power_law requires c > 1");
    ExcursionLaw geom = geometric_prefactor(0.0, c, kappa);
    ExcursionLaw law;
    law.v_ = PowerLaw{c, kappa};
    law.mass_inf_ = geom.mass_inf_;
    law.finalize();
    return law;
}

ExcursionLaw ExcursionLaw::power_law_normalized(double c) {
    if (c <= 1.0) throw InvalidLaw("power_law requires c > 1");
    ExcursionLaw law;
    law.v_ = PowerLaw{c, std::exp(-log_sum_poly_exp(c, 0.0, 1))};
    law.mass_inf_ = 0.0;
    law.finalize();
    return law;
}

ExcursionLaw ExcursionLaw::finite_support(const std::map<std::int64_t, double>& weights,
                                          double mass_inf) {
    if (!(mass_inf >= 0.0 && mass_inf < 1.0)) throw InvalidLaw("mass_inf must be in [0,1)");
    FiniteSupport fs;
    fs.mass_inf = mass_inf;
    double total = mass_inf;
    for (auto [n, w] : weights) {
        if (n < 1) throw InvalidLaw("support points must be >= 1");
        if (w < 0.0) throw InvalidLaw("negative weight");
        if (w == 0.0) continue;
        fs.weights.emplace_back(n, w);
        total += w;
    }
    if (fs.weights.empty()) throw InvalidLaw("law is trivially transient (no finite support)");
    if (std::abs(total - 1.0) > 1e-9) throw InvalidLaw("weights + mass_inf must sum to 1");
    ExcursionLaw law;
    law.v_ = std::move(fs);
    law.mass_inf_ = mass_inf;
    law.finalize();
    return law;
}

void ExcursionLaw::finalize() {
    if (auto* brw = std::get_if<BiasedRw>(&v_)) {
        lattice_ = 2;
        a_ = 2;
        big_a_ = kInf;
        double w0 = 4.0 * brw->p * (1.0 - brw->p);
        b_e_ = -0.5 * std::log(w0);
        mass_inf_ = std::abs(1.0 - 2.0 * brw->p);
        if (mass_inf_ == 0.0) b_e_ = 0.0;
    } else if (auto* gp = std::get_if<GeometricPrefactor>(&v_)) {
        lattice_ = 1;
        a_ = 1;
        big_a_ = kInf;
        b_e_ = gp->b;
    } else if (auto* pl = std::get_if<PowerLaw>(&v_)) {
        (void)pl;
        lattice_ = 1;
        a_ = 1;
        big_a_ = kInf;
        b_e_ = 0.0;
    } else if (auto* fs = std::get_if<FiniteSupport>(&v_)) {
        lattice_ = 1;
        a_ = fs->weights.front().first;
        big_a_ = static_cast<double>(fs->weights.back().first);
        b_e_ = kInf;
        mass_inf_ = fs->mass_inf;
    } else {
        auto& rw = std::get<Reweighted>(v_);
        lattice_ = rw.base->lattice_;
        a_ = rw.base->a_;
        big_a_ = rw.base->big_a_;
        b_e_ = rw.base->b_e_ == kInf ? kInf : rw.base->b_e_ - rw.alpha;
        mass_inf_ = rw.mass_inf;
    }
    log_fin_ = mass_inf_ == 0.0 ? 0.0 : std::log1p(-mass_inf_);
    r_ = -log_fin_;
    m_e_ = std::exp(log_weighted_sum(0.0, 1) - log_fin_);
    if (b_e_ == kInf) {
        b_e_prime_ = big_a_;
    } else {
        double gs = gamma_sum();
        double gms = gamma_mean_sum();
        b_e_prime_ = (gs < kInf && gms < kInf) ? gms / gs : kInf;
    }
}

double ExcursionLaw::log_pmf(std::int64_t n) const {
    if (n < 1) return kNegInf;
    if (auto* brw = std::get_if<BiasedRw>(&v_)) {
        if (n % 2 != 0) return kNegInf;
        double lw0 = std::log(4.0 * brw->p * (1.0 - brw->p));
        return log_srw_first_return(n) + static_cast<double>(n / 2) * lw0;
    }
    if (auto* gp = std::get_if<GeometricPrefactor>(&v_)) {
        double dn = static_cast<double>(n);
        return std::log(gp->kappa) - gp->c * std::log(dn) - gp->b * dn;
    }
    if (auto* pl = std::get_if<PowerLaw>(&v_)) {
        return std::log(pl->kappa) - pl->c * std::log(static_cast<double>(n));
    }
    if (auto* fs = std::get_if<FiniteSupport>(&v_)) {
        auto it = std::lower_bound(fs->weights.begin(), fs->weights.end(), n,
                                   [](const auto& pr, std::int64_t v) { return pr.first < v; });
        if (it != fs->weights.end() && it->first == n) return std::log(it->second);
        return kNegInf;
    }
    auto& rw = std::get<Reweighted>(v_);
    double base = rw.base->log_pmf(n);
    if (base == kNegInf) return kNegInf;
    return base + rw.alpha * static_cast<double>(n) - rw.log_norm;
}

double ExcursionLaw::pmf(std::int64_t n) const { return std::exp(log_pmf(n)); }

double ExcursionLaw::log_weighted_sum(double x, int moment) const {
    if (auto* brw = std::get_if<BiasedRw>(&v_)) {
        double lw = std::log(4.0 * brw->p * (1.0 - brw->p)) + 2.0 * x;
        if (lw > 0.0) return kInf;
        // S0 = 1 - sqrt(1-w) = w/(1+sqrt(1-w)); S1 = w/sqrt(1-w).
        double log_1mw = log1m_exp(lw);  // -inf when w == 1
        if (moment == 0) return lw - std::log1p(std::exp(0.5 * log_1mw));
        return lw - 0.5 * log_1mw;  // +inf at w == 1
    }
    if (auto* gp = std::get_if<GeometricPrefactor>(&v_)) {
        if (x > gp->b) return kInf;
        return std::log(gp->kappa) + log_sum_poly_exp(gp->c - moment, gp->b - x, 1);
    }
    if (auto* pl = std::get_if<PowerLaw>(&v_)) {
        if (x > 0.0) return kInf;
        return std::log(pl->kappa) + log_sum_poly_exp(pl->c - moment, -x, 1);
    }
    if (auto* fs = std::get_if<FiniteSupport>(&v_)) {
        LogAccumulator acc;
        for (auto [n, w] : fs->weights) {
            double dn = static_cast<double>(n);
            acc.add(std::log(w) + moment * std::log(dn) + x * dn);
        }
        return acc.log();
    }
    auto& rw = std::get<Reweighted>(v_);
    double base = rw.base->log_weighted_sum(x + rw.alpha, moment);
    if (base == kInf) return kInf;
    return base - rw.log_norm;
}

namespace {

/// log sum_{m > n} gamma_m for the closed-form families (prefactors of the
/// exponential decay). Only called when the sum converges.
double log_gamma_tail(const ExcursionLaw& base, std::int64_t n) {
    if (auto* brw = std::get_if<BiasedRw>(&base.repr())) {
        (void)brw;
        return log_srw_no_return(n - (n % 2));
    }
    if (auto* gp = std::get_if<GeometricPrefactor>(&base.repr())) {
        return std::log(gp->kappa) +
               std::log(hurwitz_zeta(gp->c, static_cast<double>(n + 1)));
    }
    if (auto* pl = std::get_if<PowerLaw>(&base.repr())) {
        return std::log(pl->kappa) +
               std::log(hurwitz_zeta(pl->c, static_cast<double>(n + 1)));
    }
    return kNegInf;  // finite support has no prefactors to tail
}

/// Polynomial decay exponent of the prefactors, used in truncation bounds.
double prefactor_exponent(const ExcursionLaw& base) {
    if (std::holds_alternative<BiasedRw>(base.repr())) return 1.5;
    if (auto* gp = std::get_if<GeometricPrefactor>(&base.repr())) return gp->c;
    if (auto* pl = std::get_if<PowerLaw>(&base.repr())) return pl->c;
    return 0.0;
}

/// log sum_{m > n} base.pmf(m) e^{alpha m}; requires alpha <= base.b_e.
double log_reweighted_tail(const ExcursionLaw& base, double alpha, std::int64_t n) {
    double t = base.b_e() - alpha;  // decay margin of the reweighted terms
    if (t <= 0.0 && base.b_e() < kInf) return log_gamma_tail(base, n);
    const int lat = base.lattice();
    std::int64_t start = n + 1;
    if (lat == 2) start = n + 1 + ((n + 1) % 2);  // next even site
    if (base.sup_support() < kInf) {
        LogAccumulator acc;
        for (std::int64_t m = start; m <= static_cast<std::int64_t>(base.sup_support()); ++m)
            acc.add(base.log_pmf(m) + alpha * static_cast<double>(m));
        return acc.log();
    }
    const double growth = std::max(0.0, -prefactor_exponent(base));
    LogAccumulator acc;
    for (std::int64_t m = start;; m += lat) {
        if ((m - start) / lat > kMaxSeriesTerms)
            throw NumericalFailure("tail truncation cap exceeded");
        double lt = base.log_pmf(m) + alpha * static_cast<double>(m);
        acc.add(lt);
        double dm = static_cast<double>(m);
        if (dm * t > growth) {
            double rho = std::exp(-t * lat) * std::pow((dm + lat) / dm, growth);
            if (rho < 1.0) {
                double log_rem = lt + std::log(rho / (1.0 - rho));
                if (log_rem < acc.log() + std::log(1e-17)) break;
            }
        }
    }
    return acc.log();
}

}  // namespace

double ExcursionLaw::log_tail_sum(std::int64_t n) const {
    if (n < a_) return log_fin_;  // whole finite mass
    if (big_a_ < kInf && static_cast<double>(n) >= big_a_) return kNegInf;
    if (auto* rw = std::get_if<Reweighted>(&v_))
        return log_reweighted_tail(*rw->base, rw->alpha, n) - rw->log_norm;
    return log_reweighted_tail(*this, 0.0, n);
}

double ExcursionLaw::tail_sum(std::int64_t n) const { return std::exp(log_tail_sum(n)); }

double ExcursionLaw::survival(std::int64_t n) const {
    if (n <= 0) return 1.0;
    return mass_inf_ + tail_sum(n);
}

double ExcursionLaw::log_survival(std::int64_t n) const {
    if (n <= 0) return 0.0;
    if (mass_inf_ == 0.0) return log_tail_sum(n);
    return log_sum_exp(std::log(mass_inf_), log_tail_sum(n));
}

double ExcursionLaw::mgf(double x) const {
    if (x == 0.0) return std::exp(log_fin_);
    if (x > 0.0 && mass_inf_ > 0.0) return kInf;
    return std::exp(log_weighted_sum(x, 0));
}

double ExcursionLaw::log_mgf_finite(double x) const {
    if (x > b_e_) throw DivergentSum("x above the excursion decay rate b_E");
    double s = log_weighted_sum(x, 0);
    if (s == kInf) throw DivergentSum("prefactor sum diverges at x = b_E");
    return s - log_fin_;
}

double ExcursionLaw::mgf_finite(double x) const { return std::exp(log_mgf_finite(x)); }

double ExcursionLaw::mgf_finite_mean(double x) const {
    double s0 = log_weighted_sum(x, 0);
    if (s0 == kInf) return kInf;
    double s1 = log_weighted_sum(x, 1);
    return std::exp(s1 - s0);
}

double ExcursionLaw::gamma_sum() const {
    if (b_e_ == kInf) return kInf;
    if (auto* brw = std::get_if<BiasedRw>(&v_)) {
        (void)brw;
        return 1.0;  // prefactors are the simple-RW first-return probabilities
    }
    if (auto* gp = std::get_if<GeometricPrefactor>(&v_))
        return gp->c > 1.0 ? gp->kappa * hurwitz_zeta(gp->c, 1.0) : kInf;
    if (auto* pl = std::get_if<PowerLaw>(&v_)) return pl->kappa * hurwitz_zeta(pl->c, 1.0);
    auto& rw = std::get<Reweighted>(v_);
    return rw.base->gamma_sum() * std::exp(-rw.log_norm);
}

double ExcursionLaw::gamma_mean_sum() const {
    if (b_e_ == kInf) return kInf;
    if (std::holds_alternative<BiasedRw>(v_)) return kInf;  // sum n s(n) diverges
    if (auto* gp = std::get_if<GeometricPrefactor>(&v_))
        return gp->c > 2.0 ? gp->kappa * hurwitz_zeta(gp->c - 1.0, 1.0) : kInf;
    if (auto* pl = std::get_if<PowerLaw>(&v_))
        return pl->c > 2.0 ? pl->kappa * hurwitz_zeta(pl->c - 1.0, 1.0) : kInf;
    auto& rw = std::get<Reweighted>(v_);
    return rw.base->gamma_mean_sum() * std::exp(-rw.log_norm);
}

ExcursionLaw ExcursionLaw::reweight(double alpha_total, double log_norm,
                                    double new_mass_inf) const {
    std::shared_ptr<const ExcursionLaw> base;
    if (auto* rw = std::get_if<Reweighted>(&v_))
        base = rw->base;
    else
        base = std::make_shared<const ExcursionLaw>(*this);
    ExcursionLaw law;
    law.v_ = Reweighted{std::move(base), alpha_total, log_norm, new_mass_inf};
    law.mass_inf_ = new_mass_inf;
    law.finalize();
    return law;
}

ExcursionLaw ExcursionLaw::tilt(double alpha) const {
    if (alpha == 0.0 && recurrent()) return *this;
    const ExcursionLaw* base = this;
    double a0 = 0.0;
    if (auto* rw = std::get_if<Reweighted>(&v_)) {
        base = rw->base.get();
        a0 = rw->alpha;
    }
    double at = a0 + alpha;
    if (alpha > b_e_) throw DivergentSum("tilt parameter above b_E");
    double ln = base->log_weighted_sum(at, 0);
    if (ln == kInf) throw DivergentSum("tilted mass diverges at alpha = b_E");
    return base->reweight(at, ln, 0.0);
}

ExcursionLaw ExcursionLaw::loosen() const {
    if (!recurrent()) throw NotRecurrent("loosen requires a recurrent law");
    if (b_e_ == 0.0) return *this;  // already carries no exponential decay
    if (b_e_ == kInf) throw DivergentSum("prefactor law undefined for b_E = inf");
    return tilt(b_e_);
}

ExcursionLaw ExcursionLaw::partially_loosen(double b) const {
    if (!(b > 0.0 && b < b_e_)) throw InvalidLaw("partial loosening requires 0 < b < b_E");
    const ExcursionLaw* base = this;
    double a0 = 0.0;
    if (auto* rw = std::get_if<Reweighted>(&v_)) {
        base = rw->base.get();
        a0 = rw->alpha;
    }
    double at = a0 + b;
    double ln = base->log_weighted_sum(at, 0) - log_fin_;
    return base->reweight(at, ln, mass_inf_);
}

bool ExcursionLaw::has_closed_form_mgf() const {
    if (std::holds_alternative<BiasedRw>(v_) || std::holds_alternative<FiniteSupport>(v_))
        return true;
    if (auto* rw = std::get_if<Reweighted>(&v_)) return rw->base->has_closed_form_mgf();
    return false;
}

std::string ExcursionLaw::family_name() const {
    if (std::holds_alternative<BiasedRw>(v_)) return "biased_rw";
    if (std::holds_alternative<GeometricPrefactor>(v_)) return "geometric_prefactor";
    if (std::holds_alternative<PowerLaw>(v_)) return "power_law";
    if (std::holds_alternative<FiniteSupport>(v_)) return "finite_support";
    return "reweighted";
}

}  // namespace pinlab
