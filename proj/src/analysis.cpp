#include "pinlab/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "pinlab/errors.hpp"
#include "pinlab/numerics.hpp"

namespace pinlab {

namespace {

constexpr double kLog2 = 0.6931471805599453;

template <class F>
void parallel_replicas(int replicas, int workers, F&& fn) {
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, replicas);
    if (workers == 1) {
        for (int i = 0; i < replicas; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= replicas) return;
                fn(i);
            }
        });
    for (auto& t : pool) t.join();
}

QuenchedStat reduce_mean(const std::vector<double>& vals) {
    double mean = 0.0;
    for (double v : vals) mean += v;  // fixed replica order
    mean /= static_cast<double>(vals.size());
    if (vals.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    double sd = std::sqrt(ss / (static_cast<double>(vals.size()) - 1.0));
    return {mean, sd / std::sqrt(static_cast<double>(vals.size()))};
}

/// Root x of sum_n pmf(n) e^{-xn} = e^{-beta u - logMV} over x in (-b_E, inf).
std::optional<double> annealed_root(const ExcursionLaw& law, double beta, double u,
                                    double log_mv) {
    const double t_log = -beta * u - log_mv;
    auto g_log = [&](double x) { return law.log_weighted_sum(-x, 0); };
    double lo;
    if (law.b_e() < kInf) {
        lo = -law.b_e();
        double g_at_edge = law.log_weighted_sum(law.b_e(), 0);  // may be +inf
        if (t_log >= g_at_edge) return std::nullopt;
    } else {
        lo = 0.0;
        double step = 1.0;
        while (g_log(lo) <= t_log) {
            lo -= step;
            step *= 2.0;
            if (lo < -1e12) throw NumericalFailure("annealed root bracket failed (low)");
        }
    }
    double hi = std::max(1.0, lo + 1.0);
    while (g_log(hi) >= t_log) {
        hi = hi * 2.0 + 1.0;
        if (hi > 1e12) throw NumericalFailure("annealed root bracket failed (high)");
    }
    return bisect_decreasing(g_log, t_log, lo, hi);
}

}  // namespace

double annealed_free_energy(const ExcursionLaw& law, double beta, double u, double log_mv) {
    auto root = annealed_root(law, beta, u, log_mv);
    if (!root) return law.recurrent() ? -law.b_e() / beta : 0.0;
    if (!law.recurrent()) return std::max(*root, 0.0) / beta;
    return *root / beta;
}

double annealed_critical_point(const ExcursionLaw& law, double beta, double log_mv) {
    if (law.mass_inf() >= 1.0) throw Unsupported("trivially transient law");
    if (!law.recurrent() || law.b_e() == 0.0) return (law.r() - log_mv) / beta;
    double m = law.gamma_sum();  // = M_E(b_E) for recurrent laws
    if (m == kInf) return kNegInf;
    return -(std::log(m) + log_mv) / beta;
}

double annealed_contact_fraction(const ExcursionLaw& law, double beta, double u,
                                 double log_mv) {
    double u_c = annealed_critical_point(law, beta, log_mv);
    if (std::isfinite(u_c) && std::abs(u - u_c) < 1e-9 * std::max(1.0, std::abs(u_c)))
        throw AtCriticalPoint("contact fraction undefined at the critical point");
    if (u < u_c) return 0.0;
    auto root = annealed_root(law, beta, u, log_mv);
    if (!root) return 0.0;
    if (!law.recurrent() && *root < 0.0) return 0.0;
    double denom_log = law.log_weighted_sum(-*root, 1);
    return std::exp(-beta * u - log_mv - denom_log);
}

std::string to_string(TransitionCase c) {
    switch (c) {
        case TransitionCase::thm2_i: return "Thm2_i";
        case TransitionCase::thm2_ii: return "Thm2_ii";
        case TransitionCase::thm2_iii: return "Thm2_iii";
        case TransitionCase::thm1_transient_exp: return "Thm1_transient_exp";
        case TransitionCase::heavy_tail_unsupported: return "heavy_tail_unsupported";
    }
    return "unknown";
}

PhaseReport classify_transition(const ExcursionLaw& law, double beta) {
    PhaseReport rep(law);
    rep.beta = beta;
    if (law.b_e() == 0.0) {
        rep.transition_case = TransitionCase::heavy_tail_unsupported;
        rep.u_c_annealed = annealed_critical_point(law, beta, 0.0);
        return rep;
    }
    if (!law.recurrent()) {
        rep.transition_case = TransitionCase::thm1_transient_exp;
        rep.u_c_annealed = annealed_critical_point(law, beta, 0.0);
        rep.annealed_jump = 1.0 / law.m_e();  // the variational argmax limit at u_c+
        double gs = law.gamma_sum();
        rep.loosened_shift = gs < kInf ? std::log(gs) / beta : kInf;
        return rep;
    }
    // Recurrent with exponential tails: Theorem 2 trichotomy.
    double m = law.gamma_sum();
    rep.u_c_annealed = annealed_critical_point(law, beta, 0.0);
    if (m == kInf) {
        rep.transition_case = TransitionCase::thm2_i;
        return rep;
    }
    rep.loosened_shift = std::log(m) / beta;
    if (law.b_e_prime() == kInf) {
        rep.transition_case = TransitionCase::thm2_ii;
        rep.annealed_jump = 0.0;
    } else {
        rep.transition_case = TransitionCase::thm2_iii;
        rep.annealed_jump = 1.0 / law.b_e_prime();
    }
    return rep;
}

QuenchedStat quenched_free_energy(const PinningModel& model, std::int64_t n, int replicas,
                                  std::uint64_t master_seed, int workers) {
    if (n < 1 || replicas < 1) throw InvalidLaw("need n >= 1 and replicas >= 1");
    RenewalKernel kernel(model.law, n);
    std::vector<double> vals(static_cast<std::size_t>(replicas));
    parallel_replicas(replicas, workers, [&](int r) {
        DisorderField field = sample_disorder(combine_seed(master_seed, r), n,
                                              model.disorder.sigma);
        PartitionResult pr = compute_partition(kernel, model.beta, model.u, field.values,
                                               field.seed, false);
        vals[static_cast<std::size_t>(r)] =
            pr.log_z_free / (model.beta * static_cast<double>(n));
    });
    return reduce_mean(vals);
}

QuenchedStat quenched_contact_fraction(const PinningModel& model, std::int64_t n, int replicas,
                                       std::uint64_t master_seed, int workers) {
    if (n < 1 || replicas < 1) throw InvalidLaw("need n >= 1 and replicas >= 1");
    RenewalKernel kernel(model.law, n);
    std::vector<double> vals(static_cast<std::size_t>(replicas));
    parallel_replicas(replicas, workers, [&](int r) {
        DisorderField field = sample_disorder(combine_seed(master_seed, r), n,
                                              model.disorder.sigma);
        PartitionResult pr = compute_partition(kernel, model.beta, model.u, field.values,
                                               field.seed, true);
        vals[static_cast<std::size_t>(r)] = pr.mean_contacts / static_cast<double>(n);
    });
    return reduce_mean(vals);
}

CriticalPointResult quenched_critical_point(const ExcursionLaw& law, double beta, double sigma,
                                            std::span<const std::int64_t> n_ladder,
                                            int replicas, std::uint64_t master_seed,
                                            int workers) {
    if (law.recurrent())
        throw Unsupported("quenched critical-point scan requires a transient law");
    if (n_ladder.empty()) throw InvalidLaw("empty N ladder");
    const double log_mv = 0.5 * beta * beta * sigma * sigma;
    const double u_c_a = annealed_critical_point(law, beta, log_mv);
    const double u_det = law.r() / beta;  // deterministic critical point, upper anchor
    const double span0 = std::max(1.0, std::abs(u_det));
    if (sigma == 0.0) replicas = 1;
    const double tol_u = 1e-3;

    CriticalPointResult result;
    for (std::int64_t n : n_ladder) {
        RenewalKernel kernel(law, n);
        std::vector<DisorderField> fields;
        fields.reserve(static_cast<std::size_t>(replicas));
        for (int r = 0; r < replicas; ++r)
            fields.push_back(sample_disorder(combine_seed(master_seed, r), n, sigma));
        auto pinned = [&](double u) {
            std::vector<double> vals(static_cast<std::size_t>(replicas));
            parallel_replicas(replicas, workers, [&](int r) {
                PartitionResult pr =
                    compute_partition(kernel, beta, u, fields[static_cast<std::size_t>(r)].values,
                                      0, false);
                vals[static_cast<std::size_t>(r)] =
                    pr.log_z_free / (beta * static_cast<double>(n));
            });
            QuenchedStat st = reduce_mean(vals);
            double eps = std::max(5.0 * st.stderr_, 10.0 / (beta * static_cast<double>(n)));
            return st.estimate > eps;
        };
        double lo = u_c_a, hi = u_det + 0.25 * span0;
        int guard = 0;
        while (pinned(lo)) {
            lo -= 0.1 * span0;
            if (++guard > 8) throw NoBracket("criterion already met at the low end");
        }
        guard = 0;
        while (!pinned(hi)) {
            hi += 0.25 * span0;
            if (++guard > 8) throw NoBracket("criterion never met at the high end");
        }
        while (hi - lo > tol_u) {
            double mid = 0.5 * (lo + hi);
            if (pinned(mid))
                hi = mid;
            else
                lo = mid;
        }
        result.ladder.push_back({n, 0.5 * (lo + hi)});
    }
    if (result.ladder.size() == 1) {
        result.estimate = result.ladder[0].u;
        result.uncertainty = 2.0 * tol_u;
        return result;
    }
    auto richardson = [](const LadderPoint& p1, const LadderPoint& p2) {
        double h1 = 1.0 / static_cast<double>(p1.n), h2 = 1.0 / static_cast<double>(p2.n);
        return (p2.u * h1 - p1.u * h2) / (h1 - h2);
    };
    const auto& pts = result.ladder;
    result.estimate = richardson(pts[pts.size() - 2], pts.back());
    double spread = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            spread = std::max(spread, std::abs(richardson(pts[i], pts[j]) - result.estimate));
    result.uncertainty =
        tol_u + spread + 0.25 * std::abs(result.estimate - pts.back().u);
    return result;
}

double freeenrel_residual(const ExcursionLaw& law, double beta, double u) {
    if (!law.recurrent() || law.b_e() <= 0.0 || law.b_e() == kInf)
        throw Unsupported("translate identity needs a recurrent exponential-tail law");
    double m = law.gamma_sum();
    if (m == kInf) throw DivergentSum("M_E(b_E) diverges; no loosened system");
    double f = annealed_free_energy(law, beta, u, 0.0);
    ExcursionLaw tld = law.loosen();
    double ft = annealed_free_energy(tld, beta, u + std::log(m) / beta, 0.0);
    return std::abs(beta * f - (beta * ft - law.b_e()));
}

CoupledLooseningResult coupled_loosening_check(const ExcursionLaw& law, double beta, double u,
                                               double b, std::int64_t n,
                                               const DisorderField& field) {
    ExcursionLaw hat = law.partially_loosen(b);
    double shift = law.log_mgf_finite(b) / beta;
    RenewalKernel kernel(law, n);
    RenewalKernel kernel_hat(hat, n);
    std::vector<double> log_zc = constrained_log_z(kernel, beta, u, field.values);
    std::vector<double> log_zc_hat = constrained_log_z(kernel_hat, beta, u + shift, field.values);
    CoupledLooseningResult res{};
    double lhs_c = log_zc_hat[static_cast<std::size_t>(n)];
    double rhs_c = log_zc[static_cast<std::size_t>(n)] + b * static_cast<double>(n);
    res.constrained_residual =
        (lhs_c == kNegInf && rhs_c == kNegInf) ? 0.0 : std::abs(lhs_c - rhs_c);
    double lhs_f = free_log_z(kernel_hat, log_zc_hat);
    LogAccumulator acc;
    for (std::int64_t k = 0; k <= n; ++k)
        acc.add(log_zc[static_cast<std::size_t>(k)] + b * static_cast<double>(k) +
                kernel_hat.log_survival_at(n - k));
    res.free_residual = std::abs(lhs_f - acc.log());
    return res;
}

double ccurves_shift_residual(const ExcursionLaw& law, double beta, double sigma, double b,
                              double u, std::int64_t n, int replicas,
                              std::uint64_t master_seed, int workers) {
    double shift = law.log_mgf_finite(b) / beta;
    PinningModel orig{law, beta, u, {sigma}};
    PinningModel hat{law.partially_loosen(b), beta, u + shift, {sigma}};
    QuenchedStat c1 = quenched_contact_fraction(orig, n, replicas, master_seed, workers);
    QuenchedStat c2 = quenched_contact_fraction(hat, n, replicas, master_seed, workers);
    return std::abs(c1.estimate - c2.estimate);
}

LoosenedCorrespondence loosened_correspondence(const ExcursionLaw& law, double beta, double u,
                                               std::optional<double> b, std::int64_t n,
                                               std::uint64_t master_seed) {
    LoosenedCorrespondence out;
    if (law.recurrent()) {
        out.deterministic_residual = freeenrel_residual(law, beta, u);
    } else {
        double bb = b.value_or(law.b_e() / 2.0);
        DisorderField field = sample_disorder(combine_seed(master_seed, 0), n, 1.0);
        out.coupled = coupled_loosening_check(law, beta, u, bb, n, field);
    }
    return out;
}

PinningModel force_model(double p, double beta, double u, double sigma) {
    if (!(p > 0.5 && p < 1.0)) throw InvalidLaw("force model requires p in (1/2, 1)");
    return PinningModel{ExcursionLaw::biased_rw(p), beta, u - kLog2 / beta, {sigma}};
}

double finite_size_allowance(std::int64_t n, double beta, double sigma) {
    double dn = static_cast<double>(n);
    return (std::log(dn + 1.0) + beta * sigma * std::sqrt(2.0 * std::log(dn)) + 1.0) /
           (beta * dn);
}

PhaseReport theorem1_report(const ExcursionLaw& law, double beta, double sigma,
                            const Theorem1Budget& budget) {
    if (law.recurrent() || law.b_e() == 0.0)
        throw Unsupported("Theorem-1 report needs a nontrivially transient law with b_E > 0");
    const double log_mv = 0.5 * beta * beta * sigma * sigma;
    PhaseReport rep(law);
    rep.beta = beta;
    rep.sigma = sigma;
    rep.transition_case = TransitionCase::thm1_transient_exp;
    rep.u_c_annealed = (law.r() - log_mv) / beta;
    rep.annealed_jump = 1.0 / law.m_e();
    double gs = law.gamma_sum();
    rep.loosened_shift = gs < kInf ? std::log(gs) / beta : kInf;
    rep.sigma_scaling_extrapolated = sigma != 1.0 && sigma != 0.0;

    RateProfile profile(law);
    const double sigma2 = sigma == 0.0 ? 1.0 : sigma * sigma;
    rep.delta0 = profile.delta0(beta, log_mv, sigma2);
    rep.quenched_jump_lower_bound =
        law.sup_support() < kInf ? 1.0 / law.sup_support() : rep.delta0;
    rep.gap_lower_bound = 0.5 * beta * rep.delta0 * rep.delta0;

    // (a) closed-form u_c^a vs the root-solvability boundary.
    {
        auto solvable = [&](double u) {
            return annealed_free_energy(law, beta, u, log_mv) > 0.0;
        };
        double lo = rep.u_c_annealed - 0.5, hi = rep.u_c_annealed + 0.5;
        for (int i = 0; i < 80; ++i) {
            double mid = 0.5 * (lo + hi);
            if (solvable(mid))
                hi = mid;
            else
                lo = mid;
        }
        double resid = std::abs(0.5 * (lo + hi) - rep.u_c_annealed);
        rep.checks.push_back({"u_c_annealed_root_boundary", resid < 1e-10, resid});
    }

    if (!budget.do_quenched) return rep;

    CriticalPointResult cp = quenched_critical_point(law, beta, sigma, budget.n_ladder,
                                                     budget.replicas, budget.master_seed,
                                                     budget.workers);
    rep.u_c_quenched_estimate = cp.estimate;
    rep.u_c_quenched_uncertainty = cp.uncertainty;
    rep.quenched_estimated = true;

    const std::int64_t n_big = budget.n_ladder.back();
    const double u_det = law.r() / beta;

    // (b) simulated f^q against the E:qfreeineq bound curve.
    {
        double worst = kNegInf;
        double allow = finite_size_allowance(n_big, beta, sigma);
        for (int i = 0; i < budget.scan_points; ++i) {
            double u = rep.u_c_annealed - 0.1 +
                       (u_det + 0.3 - rep.u_c_annealed + 0.1) * i /
                           std::max(1, budget.scan_points - 1);
            PinningModel model{law, beta, u, {sigma}};
            QuenchedStat fq = quenched_free_energy(model, n_big, budget.replicas,
                                                   budget.master_seed, budget.workers);
            double bound = profile.quenched_upper_bound(beta, u, log_mv, sigma2);
            worst = std::max(worst, fq.estimate - (bound + 3.0 * fq.stderr_ + allow));
        }
        rep.checks.push_back({"quenched_below_qfreeineq_bound", worst <= 0.0, worst});
    }

    // (c) critical-point gap.
    {
        double resid = rep.u_c_quenched_estimate -
                       (rep.u_c_annealed + rep.gap_lower_bound - 2.0 * cp.uncertainty);
        rep.checks.push_back({"critical_point_gap", resid >= 0.0, resid});
    }

    // (d) contact-fraction jump above the estimated critical point.
    {
        double floor = rep.quenched_jump_lower_bound - 2e-2;
        double worst = kInf;
        for (int k = 5; k >= 1; --k) {
            double u = rep.u_c_quenched_estimate + budget.jump_margin * k / 5.0;
            PinningModel model{law, beta, u, {sigma}};
            QuenchedStat c = quenched_contact_fraction(model, n_big, budget.replicas,
                                                       budget.master_seed, budget.workers);
            worst = std::min(worst, c.estimate - floor);
        }
        rep.checks.push_back({"contact_jump_floor", worst >= 0.0, worst});
    }

    if (budget.estimate_y) {
        // Alternate-proof floor: the loosened-system contact fraction at the
        // image of u_c^q under the partial-loosening shift.
        double b = law.b_e() / 2.0;
        double shift = law.log_mgf_finite(b) / beta;
        PinningModel hat{law.partially_loosen(b), beta, rep.u_c_quenched_estimate + shift,
                         {sigma}};
        QuenchedStat y = quenched_contact_fraction(hat, n_big, budget.replicas,
                                                   budget.master_seed, budget.workers);
        rep.y = y.estimate;
        rep.y_estimated = true;
        double u_test = rep.u_c_quenched_estimate + 2.0 * budget.jump_margin;
        PinningModel model{law, beta, u_test, {sigma}};
        QuenchedStat fq = quenched_free_energy(model, n_big, budget.replicas,
                                               budget.master_seed, budget.workers);
        double fa = annealed_free_energy(law, beta, u_test, log_mv);
        double lhs = fa - fq.estimate;
        double rhs = 0.5 * beta * beta * rep.y * rep.y;
        double slack = 3.0 * fq.stderr_ + finite_size_allowance(n_big, beta, sigma);
        rep.checks.push_back(
            {"alt_proof_gap_floor", lhs >= rhs - slack, lhs - (rhs - slack)});
    }
    return rep;
}

}  // namespace pinlab
