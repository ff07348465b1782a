#include <doctest.h>

#include <cmath>

#include "pinlab/disorder.hpp"

using namespace pinlab;

TEST_CASE("disorder reproducibility and sigma scaling") {
    DisorderField a = sample_disorder(42, 1000, 1.0);
    DisorderField b = sample_disorder(42, 1000, 1.0);
    CHECK(a.values == b.values);  // bitwise

    DisorderField zero = sample_disorder(7, 64, 0.0);
    for (double v : zero.values) CHECK(v == 0.0);

    DisorderField half = sample_disorder(42, 1000, 0.5);
    for (std::size_t i = 0; i < half.values.size(); ++i)
        CHECK(half.values[i] == doctest::Approx(0.5 * a.values[i]).epsilon(1e-15));
}

TEST_CASE("disorder field statistics") {
    const std::int64_t n = 1'000'000;
    DisorderField f = sample_disorder(20260811, n, 1.0);
    double mean = 0.0, var = 0.0;
    for (double v : f.values) mean += v;
    mean /= static_cast<double>(n);
    for (double v : f.values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n - 1);
    CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(var == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("adjacent seeds decorrelate") {
    const std::int64_t n = 200'000;
    DisorderField a = sample_disorder(1000, n, 1.0);
    DisorderField b = sample_disorder(1001, n, 1.0);
    double corr = 0.0;
    for (std::int64_t i = 0; i < n; ++i)
        corr += a.values[static_cast<std::size_t>(i)] * b.values[static_cast<std::size_t>(i)];
    corr /= static_cast<double>(n);
    CHECK(std::abs(corr) < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("replica seeds are distinct") {
    CHECK(combine_seed(1, 0) != combine_seed(1, 1));
    CHECK(combine_seed(1, 0) != combine_seed(2, 0));
}
