#pragma once

#include "pinlab/excursion.hpp"
#include "pinlab/numerics.hpp"

namespace pinlab {

/// Legendre-transform rate functions of an excursion law and the free-energy
/// variational functionals built from them. Queries evaluate lazily (no global
/// grid); the profile is immutable and reentrant.
class RateProfile {
public:
    explicit RateProfile(ExcursionLaw law);

    const ExcursionLaw& law() const { return law_; }

    /// I_E^f(t) = sup_x (t x - log M_E^f(x)); +inf outside [a, A].
    double rate_I_f(double t) const;
    /// I_E(t) = I_E^f(t) + r.
    double rate_I(double t) const;
    /// J_E(t) = sup_x (t x - log M_E(x)); equals r on t >= m_E for transient laws.
    double rate_J(double t) const;

    /// g(delta) = delta * J_E(1/delta) on (0, 1/a]; 0 at delta = 0.
    double g(double delta) const;
    /// ghat_f(delta) = delta * I_E^f(1/delta) on (0, 1/a]; b_E at delta = 0.
    double ghat_f(double delta) const;
    /// ghat = ghat_f + r * delta.
    double ghat(double delta) const;
    /// h(delta) = ghat(delta) + (1/2) beta^2 sigma2 delta^2.
    double h(double delta, double beta, double sigma2 = 1.0) const;

    /// argmin of ghat over [0, 1/a]; lies in [0, 1/m_E).
    double x_star() const { return x_star_; }

    /// The explicit contact-fraction floor: the largest d0 <= min(b_E,1)/(4(logMV+r))
    /// with h > min(b_E,1)/2 on [0, d0). Requires a transient law with b_E > 0.
    double delta0(double beta, double log_mv, double sigma2 = 1.0) const;

    struct Variational {
        double value;   // beta * f
        double argmax;  // maximizing contact density
    };
    /// sup over contact densities of (beta*u + logMV) delta - g(delta), with the
    /// escape branch (value 0) present only for transient laws and the delta=0
    /// boundary value -b_E for recurrent ones.
    Variational variational_annealed(double beta, double u, double log_mv) const;

    /// max(sup_delta ((beta*u+logMV) delta - ghat - (1/2) beta^2 sigma2 delta^2), 0)/beta.
    double quenched_upper_bound(double beta, double u, double log_mv, double sigma2 = 1.0) const;

private:
    double legendre_argmax(double t) const;  // solves (log M_E^f)'(x) = t

    ExcursionLaw law_;
    double x_star_ = 0.0;
    double log_mf_at_be_ = 0.0;  // log M_E^f(b_E); +inf when divergent
    // Series-backed laws with a finite prefactor sum: tilted mean at
    // b_E - kEdgeEps, cached once. When the Legendre maximizer falls inside
    // that edge strip the affine value t b_E - log M_E^f(b_E) is returned;
    // the envelope sandwich bounds the error by (b_E' - t) kEdgeEps (finite
    // b_E') resp. the o(1/t) asymptote defect, both below 1e-8.
    double edge_mean_ = kInf;
};

}  // namespace pinlab
