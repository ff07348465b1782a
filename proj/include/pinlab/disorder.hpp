#pragma once

#include <cstdint>
#include <vector>

namespace pinlab {

/// One realization of the i.i.d. Gaussian site variables V_1..V_N.
struct DisorderField {
    std::uint64_t seed;
    double sigma;
    std::vector<double> values;  // values[i-1] = V_i
};

/// Counter-based generator: field values are a pure function of (seed, index),
/// so realizations are random-access and replica-parallel.
std::uint64_t splitmix64(std::uint64_t z);

/// Derive a replica/stream seed from a master seed.
std::uint64_t combine_seed(std::uint64_t master, std::uint64_t index);

/// Standard-normal variate at position `index` of stream `seed`.
double gaussian_at(std::uint64_t seed, std::uint64_t index);

/// sigma = 0 yields the deterministic (V = 0) system.
DisorderField sample_disorder(std::uint64_t seed, std::int64_t n, double sigma);

}  // namespace pinlab
