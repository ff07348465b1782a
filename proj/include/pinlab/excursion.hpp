#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pinlab/numerics.hpp"

namespace pinlab {

class ExcursionLaw;

struct BiasedRw {
    double p;
};

/// pmf(n) = kappa * n^{-c} * e^{-b n}, n >= 1.
struct GeometricPrefactor {
    double b;
    double c;
    double kappa;
};

/// pmf(n) = kappa * n^{-c}, n >= 1 (requires c > 1).
struct PowerLaw {
    double c;
    double kappa;
};

struct FiniteSupport {
    std::vector<std::pair<std::int64_t, double>> weights;  // sorted by n
    double mass_inf;
};

/// pmf(n) = base.pmf(n) * e^{alpha n - log_norm}; infinite-excursion mass is
/// carried explicitly. `base` is always one of the closed-form families, so
/// composed transforms stay flattened.
struct Reweighted {
    std::shared_ptr<const ExcursionLaw> base;
    double alpha;
    double log_norm;
    double mass_inf;
};

/// An inter-arrival law on {1,2,...} with optional mass at infinity, plus its
/// tail analytics (decay rate b_E, prefactor sums, conditional mean) and the
/// exponential-reweighting transforms. Immutable after construction; all
/// queries are pure.
class ExcursionLaw {
public:
    static ExcursionLaw biased_rw(double p);
    static ExcursionLaw geometric_prefactor(double b, double c, double kappa);
    static ExcursionLaw geometric_prefactor_normalized(double b, double c);
    static ExcursionLaw power_law(double c, double kappa);
    static ExcursionLaw power_law_normalized(double c);
    static ExcursionLaw finite_support(const std::map<std::int64_t, double>& weights,
                                       double mass_inf);

    int lattice() const { return lattice_; }
    std::int64_t min_support() const { return a_; }
    /// sup of the finite support; +inf when unbounded.
    double sup_support() const { return big_a_; }
    /// Exponential decay rate of the pmf (0 for heavy tails, +inf for finite support).
    double b_e() const { return b_e_; }
    /// -log P(E < inf); 0 for recurrent laws.
    double r() const { return r_; }
    /// E(E | E < inf); +inf when the conditional mean diverges.
    double m_e() const { return m_e_; }
    /// lim_{x->b_E} (log M_E^f)'(x) = sum n gamma_n / sum gamma_n when both
    /// converge; sup of the support when b_E = inf; +inf otherwise.
    double b_e_prime() const { return b_e_prime_; }
    double mass_inf() const { return mass_inf_; }
    double log_mass_finite() const { return log_fin_; }
    bool recurrent() const { return mass_inf_ == 0.0; }

    double log_pmf(std::int64_t n) const;
    double pmf(std::int64_t n) const;

    /// sum_{m>n} pmf(m), with certified truncation.
    double tail_sum(std::int64_t n) const;
    double log_tail_sum(std::int64_t n) const;
    /// P(E > n) = mass_inf + tail_sum(n).
    double survival(std::int64_t n) const;
    double log_survival(std::int64_t n) const;

    /// log sum_n n^moment pmf(n) e^{x n} (moment in {0,1}).
    /// +inf when the sum diverges (x > b_E, or x = b_E with divergent prefactors).
    double log_weighted_sum(double x, int moment) const;

    /// M_E(x): full mgf as an extended real; M_E(0) = P(E < inf).
    double mgf(double x) const;
    /// M_E^f(x) = E(e^{xE} | E < inf); throws DivergentSum for x > b_E or a
    /// divergent prefactor sum at x = b_E.
    double mgf_finite(double x) const;
    double log_mgf_finite(double x) const;
    /// (log M_E^f)'(x); +inf at x = b_E when sum n gamma_n diverges.
    double mgf_finite_mean(double x) const;

    /// sum_n gamma_n where pmf(n) = gamma_n e^{-b_E n}; +inf if divergent or b_E = inf.
    double gamma_sum() const;
    double gamma_mean_sum() const;

    /// Exponentially tilted law conditioned on finiteness (always recurrent).
    ExcursionLaw tilt(double alpha) const;
    /// Strip the exponential decay, leaving the normalized prefactors.
    ExcursionLaw loosen() const;
    /// Tilt the finite part by b in (0, b_E), preserving mass at infinity.
    ExcursionLaw partially_loosen(double b) const;

    const std::variant<BiasedRw, GeometricPrefactor, PowerLaw, FiniteSupport, Reweighted>& repr()
        const {
        return v_;
    }
    std::string family_name() const;

    /// True when weighted sums are closed-form (cost O(1) at any x).
    bool has_closed_form_mgf() const;

private:
    ExcursionLaw() = default;
    void finalize();
    ExcursionLaw reweight(double alpha_total, double log_norm, double new_mass_inf) const;

    std::variant<BiasedRw, GeometricPrefactor, PowerLaw, FiniteSupport, Reweighted> v_;
    int lattice_ = 1;
    std::int64_t a_ = 1;
    double big_a_ = kInf;
    double b_e_ = 0.0;
    double r_ = 0.0;
    double m_e_ = 0.0;
    double b_e_prime_ = 0.0;
    double mass_inf_ = 0.0;
    double log_fin_ = 0.0;
};

}  // namespace pinlab
