#include "pinlab/disorder.hpp"

#include <cmath>

#include "pinlab/errors.hpp"

namespace pinlab {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr double kTwoPi = 6.283185307179586;

double to_unit_open(std::uint64_t h) {
    // (0, 1): 53 mantissa bits, offset so 0 is excluded.
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}
}  // namespace

std::uint64_t splitmix64(std::uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t combine_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master + kGolden * (index + 1));
}

double gaussian_at(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t h1 = splitmix64(seed + kGolden * (2 * index + 1));
    std::uint64_t h2 = splitmix64(seed + kGolden * (2 * index + 2));
    double u1 = to_unit_open(h1);
    double u2 = to_unit_open(h2);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

DisorderField sample_disorder(std::uint64_t seed, std::int64_t n, double sigma) {
    if (n < 1) throw InvalidLaw("disorder field length must be >= 1");
    if (sigma < 0) throw InvalidLaw("sigma must be >= 0");
    DisorderField field{seed, sigma, {}};
    field.values.resize(static_cast<std::size_t>(n));
    if (sigma == 0.0) return field;
    for (std::int64_t i = 0; i < n; ++i)
        field.values[static_cast<std::size_t>(i)] =
            sigma * gaussian_at(seed, static_cast<std::uint64_t>(i));
    return field;
}

}  // namespace pinlab
