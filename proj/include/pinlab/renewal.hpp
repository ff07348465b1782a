#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pinlab/disorder.hpp"
#include "pinlab/excursion.hpp"

namespace pinlab {

/// Gaussian site disorder with standard deviation sigma; sigma = 0 is the
/// deterministic system. log M_V(beta) = beta^2 sigma^2 / 2.
struct DisorderSpec {
    double sigma = 0.0;
    double log_mv(double beta) const { return 0.5 * beta * beta * sigma * sigma; }
};

struct PinningModel {
    ExcursionLaw law;
    double beta;
    double u;
    DisorderSpec disorder;
};

struct PartitionResult {
    std::int64_t n;
    std::vector<double> log_zc;  // constrained prefix values, log_zc[0] = 0
    double log_z_free;
    double mean_contacts;  // exact <L_N> under the finite-volume Gibbs measure
    std::uint64_t seed;
};

/// Per-(law, N) tables shared across disorder realizations and u values:
/// windowed log pmf and the log survival table. The convolution window is the
/// smallest n with tail mass below `tail_mass` (full length for heavy tails).
class RenewalKernel {
public:
    RenewalKernel(ExcursionLaw law, std::int64_t n_max, double tail_mass = 1e-14);

    const ExcursionLaw& law() const { return law_; }
    std::int64_t n_max() const { return n_max_; }
    std::int64_t window() const { return window_; }
    double log_pmf_at(std::int64_t n) const { return log_pmf_[static_cast<std::size_t>(n)]; }
    double log_survival_at(std::int64_t m) const {
        return log_surv_[static_cast<std::size_t>(m)];
    }

private:
    ExcursionLaw law_;
    std::int64_t n_max_;
    std::int64_t window_;
    std::vector<double> log_pmf_;   // index 0..window
    std::vector<double> log_surv_;  // index 0..n_max
};

/// Z^c_0 = 1, Z^c_k = sum_n pmf(n) e^{beta(u+V_k)} Z^c_{k-n}, in log space.
std::vector<double> constrained_log_z(const RenewalKernel& kernel, double beta, double u,
                                      std::span<const double> v);

/// log sum_k exp(log Z^c_k) * survival(N-k).
double free_log_z(const RenewalKernel& kernel, std::span<const double> log_zc);

/// Constrained prefix, free value, and exact mean contact number in one pass.
PartitionResult compute_partition(const RenewalKernel& kernel, double beta, double u,
                                  std::span<const double> v, std::uint64_t seed = 0,
                                  bool want_contacts = true);

PartitionResult compute_partition(const PinningModel& model, const DisorderField& field,
                                  std::int64_t n);

/// log P(tau_k = N) for k = 0..N (exact k-fold convolution of the law).
std::vector<double> contact_count_dp(const ExcursionLaw& law, std::int64_t n,
                                     std::int64_t cap = 8192);

struct BruteForceResult {
    double log_z_free;
    double log_z_constrained;
    double mean_contacts;
};

/// Exhaustive enumeration over contact-time subsets; N <= 20.
BruteForceResult brute_force(const ExcursionLaw& law, double beta, double u,
                             std::span<const double> v, std::int64_t n);

}  // namespace pinlab
