#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pinlab/excursion.hpp"
#include "pinlab/ratefun.hpp"
#include "pinlab/renewal.hpp"

namespace pinlab {

/// beta * f^a is the root x of sum_n pmf(n) e^{-xn} = e^{-beta u - logMV}.
/// When no root exists: 0 for transient laws (escape branch), -b_E/beta for
/// recurrent exponential-tail laws.
double annealed_free_energy(const ExcursionLaw& law, double beta, double u, double log_mv);

/// d f^a / du by implicit differentiation of the root equation; 0 below the
/// critical point. Throws AtCriticalPoint within 1e-9 of u_c.
double annealed_contact_fraction(const ExcursionLaw& law, double beta, double u,
                                 double log_mv);

/// (r - logMV)/beta for transient or heavy-tail laws;
/// -(log M_E(b_E) + logMV)/beta for recurrent exponential tails
/// (-inf when M_E(b_E) = inf: no transition).
double annealed_critical_point(const ExcursionLaw& law, double beta, double log_mv);

enum class TransitionCase {
    thm2_i,
    thm2_ii,
    thm2_iii,
    thm1_transient_exp,
    heavy_tail_unsupported,
};

std::string to_string(TransitionCase c);

struct CheckOutcome {
    std::string name;
    bool pass;
    double residual;
};

struct PhaseReport {
    explicit PhaseReport(ExcursionLaw l) : law(std::move(l)) {}

    ExcursionLaw law;
    double beta = 1.0;
    double sigma = 0.0;
    TransitionCase transition_case = TransitionCase::heavy_tail_unsupported;
    double u_c_annealed = 0.0;  // -inf when there is no transition
    double annealed_jump = 0.0;
    double quenched_jump_lower_bound = 0.0;  // delta0, or 1/A for bounded support
    double gap_lower_bound = 0.0;            // (1/2) beta delta0^2
    double loosened_shift = 0.0;             // beta^{-1} log M_E(b_E)
    double delta0 = 0.0;
    double u_c_quenched_estimate = 0.0;
    double u_c_quenched_uncertainty = 0.0;
    bool quenched_estimated = false;
    double y = 0.0;  // loosened-system contact floor from the translate argument
    bool y_estimated = false;
    bool sigma_scaling_extrapolated = false;
    std::vector<CheckOutcome> checks;
};

/// Annealed portion only: Theorem-2 case (recurrent exponential tails),
/// transient-exponential case, or the unsupported heavy-tail marker.
PhaseReport classify_transition(const ExcursionLaw& law, double beta);

struct QuenchedStat {
    double estimate;
    double stderr_;
};

QuenchedStat quenched_free_energy(const PinningModel& model, std::int64_t n, int replicas,
                                  std::uint64_t master_seed, int workers = 0);

QuenchedStat quenched_contact_fraction(const PinningModel& model, std::int64_t n, int replicas,
                                       std::uint64_t master_seed, int workers = 0);

struct LadderPoint {
    std::int64_t n;
    double u;
};

struct CriticalPointResult {
    double estimate;
    double uncertainty;
    std::vector<LadderPoint> ladder;
};

/// Bisection on u against the pinning criterion f_N > eps_N with
/// eps_N = max(5 stderr, 10/(beta N)), common random numbers across u, and
/// Richardson extrapolation across the N ladder.
CriticalPointResult quenched_critical_point(const ExcursionLaw& law, double beta, double sigma,
                                            std::span<const std::int64_t> n_ladder,
                                            int replicas, std::uint64_t master_seed,
                                            int workers = 0);

/// E:freeenrel translate identity, deterministic system, by two root solves:
/// beta f(beta,u) - [beta f~(beta, u + log M_E(b_E)/beta) - b_E].
double freeenrel_residual(const ExcursionLaw& law, double beta, double u);

struct CoupledLooseningResult {
    double constrained_residual;  // |log Zhat^c_N(uhat) - (log Z^c_N(u) + bN)|
    double free_residual;         // same identity through the free decomposition
};

/// Exact finite-N weight-ratio identity between a law and its partial
/// loosening under one shared disorder field.
CoupledLooseningResult coupled_loosening_check(const ExcursionLaw& law, double beta, double u,
                                               double b, std::int64_t n,
                                               const DisorderField& field);

/// |C^q_orig(u) - C^q_loosened(u + log M_E^f(b)/beta)| averaged over replicas.
double ccurves_shift_residual(const ExcursionLaw& law, double beta, double sigma, double b,
                              double u, std::int64_t n, int replicas,
                              std::uint64_t master_seed, int workers = 0);

struct LoosenedCorrespondence {
    std::optional<double> deterministic_residual;          // recurrent exp-tail route
    std::optional<CoupledLooseningResult> coupled;         // transient partial route
};

LoosenedCorrespondence loosened_correspondence(const ExcursionLaw& law, double beta, double u,
                                               std::optional<double> b, std::int64_t n,
                                               std::uint64_t master_seed);

/// The force-pulled polymer maps onto pinning at u - beta^{-1} log 2.
PinningModel force_model(double p, double beta, double u, double sigma = 0.0);

struct Theorem1Budget {
    std::vector<std::int64_t> n_ladder = {1 << 13, 1 << 14, 1 << 15};
    int replicas = 32;
    int scan_points = 9;
    int workers = 0;
    bool do_quenched = true;
    bool estimate_y = true;
    std::uint64_t master_seed = 20260811;
    double jump_margin = 0.05;
};

/// Full desk-scale verification for a nontrivially transient law with
/// exponential excursion tails.
PhaseReport theorem1_report(const ExcursionLaw& law, double beta, double sigma,
                            const Theorem1Budget& budget);

/// Finite-size allowance used whenever a simulated free energy is compared
/// against an infinite-volume bound.
double finite_size_allowance(std::int64_t n, double beta, double sigma);

}  // namespace pinlab
