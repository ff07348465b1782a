#include <doctest.h>

#include <cmath>
#include <map>

#include "pinlab/errors.hpp"
#include "pinlab/excursion.hpp"
#include "pinlab/law_json.hpp"
#include "test_oracles.hpp"

using namespace pinlab;

namespace {

ExcursionLaw tilted_srw(double b) {
    // Recurrent law with exponential tails and SRW prefactors.
    return ExcursionLaw::biased_rw(0.5).tilt(-b);
}

double total_mass(const ExcursionLaw& law) { return law.tail_sum(0) + law.mass_inf(); }

}  // namespace

TEST_CASE("biased RW pmf against path enumeration") {
    for (double p : {0.5, 0.7}) {
        ExcursionLaw law = ExcursionLaw::biased_rw(p);
        for (int n = 2; n <= 20; n += 2) {
            double expect = oracle::biased_rw_first_return(p, n);
            CHECK(law.pmf(n) == doctest::Approx(expect).epsilon(1e-11));
        }
        CHECK(law.pmf(3) == 0.0);
        CHECK(law.pmf(1) == 0.0);
    }
    CHECK(ExcursionLaw::biased_rw(0.5).pmf(2) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("biased RW first-return Monte Carlo cross-check" * doctest::skip(false)) {
    const double p = 0.7;
    const std::uint64_t walks = 2'000'000;
    auto st = oracle::biased_rw_monte_carlo(p, walks, 5, 12345);
    ExcursionLaw law = ExcursionLaw::biased_rw(p);
    for (int k = 1; k <= 5; ++k) {
        double q = law.pmf(2 * k);
        double sigma = std::sqrt(q * (1 - q) / static_cast<double>(walks));
        CHECK(std::abs(st.freq[static_cast<std::size_t>(k)] - q) < 3.0 * sigma);
    }
    double mi = law.mass_inf();
    double sigma = std::sqrt(mi * (1 - mi) / static_cast<double>(walks));
    CHECK(std::abs(st.escape_fraction - mi) < 3.0 * sigma);
}

TEST_CASE("mass at infinity") {
    CHECK(ExcursionLaw::biased_rw(0.5).mass_inf() == 0.0);
    ExcursionLaw law = ExcursionLaw::biased_rw(0.7);
    // Partial-sum oracle with geometric tail bound (pmf itself is validated
    // against path enumeration above).
    double s = 0.0;
    double w0 = 4.0 * 0.7 * 0.3;
    for (int k = 1; k <= 2000; ++k) s += law.pmf(2 * k);
    double tail_bound = law.pmf(2 * 2000) * w0 / (1 - w0);
    CHECK(std::abs((1.0 - s) - law.mass_inf()) < tail_bound + 1e-12);
    CHECK(law.mass_inf() == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(ExcursionLaw::geometric_prefactor_normalized(0.2, 3.0).mass_inf() == 0.0);
}

TEST_CASE("normalization of constructors and transforms") {
    std::vector<ExcursionLaw> laws;
    laws.push_back(ExcursionLaw::biased_rw(0.5));
    laws.push_back(ExcursionLaw::biased_rw(0.7));
    laws.push_back(ExcursionLaw::geometric_prefactor_normalized(0.2, 3.0));
    laws.push_back(ExcursionLaw::geometric_prefactor(0.2, 1.5, 0.5));
    laws.push_back(ExcursionLaw::power_law_normalized(2.5));
    laws.push_back(ExcursionLaw::finite_support({{2, 0.6}}, 0.4));
    laws.push_back(ExcursionLaw::biased_rw(0.7).tilt(0.0));
    laws.push_back(ExcursionLaw::biased_rw(0.7).tilt(0.03));
    laws.push_back(tilted_srw(0.2));
    laws.push_back(tilted_srw(0.2).loosen());
    laws.push_back(ExcursionLaw::biased_rw(0.7).partially_loosen(0.04));
    laws.push_back(ExcursionLaw::geometric_prefactor_normalized(0.3, 3.0).loosen());
    for (const auto& law : laws) {
        CAPTURE(law.family_name());
        CHECK(total_mass(law) == doctest::Approx(1.0).epsilon(1e-12));
        // Cross-check the certified tail against a plain partial sum.
        double partial = 0.0;
        for (std::int64_t n = 1; n <= 512; ++n) partial += law.pmf(n);
        CHECK(partial + law.tail_sum(512) + law.mass_inf() ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("survival is nonincreasing with survival(0) = 1") {
    for (const auto& law :
         {ExcursionLaw::biased_rw(0.7), ExcursionLaw::geometric_prefactor_normalized(0.2, 1.5),
          ExcursionLaw::finite_support({{1, 0.3}, {3, 0.3}}, 0.4)}) {
        CHECK(law.survival(0) == doctest::Approx(1.0).epsilon(1e-12));
        double prev = 1.0 + 1e-15;
        for (std::int64_t n = 0; n <= 64; ++n) {
            double s = law.survival(n);
            CHECK(s <= prev + 1e-14);
            prev = s;
        }
    }
}

TEST_CASE("prefactors grow subexponentially") {
    for (const auto& law : {ExcursionLaw::biased_rw(0.7),
                            ExcursionLaw::geometric_prefactor_normalized(0.2, 3.0)}) {
        auto slope = [&](std::int64_t n) {
            return std::abs(law.log_pmf(n) + law.b_e() * static_cast<double>(n)) /
                   static_cast<double>(n);
        };
        CHECK(slope(10000) < slope(100));
        CHECK(slope(10000) < 5e-3);
    }
}

TEST_CASE("survival decay matches b_E under regular decay") {
    for (const auto& law :
         {tilted_srw(0.2), ExcursionLaw::geometric_prefactor_normalized(0.2, 1.5)}) {
        double slope = law.log_survival(10000) / 10000.0;
        CHECK(std::abs(slope + law.b_e()) < 1e-2);
    }
}

TEST_CASE("finite mgf") {
    ExcursionLaw det = ExcursionLaw::finite_support({{2, 1.0}}, 0.0);
    for (double x : {-1.0, -0.2, 0.0, 0.5, 3.0})
        CHECK(det.mgf_finite(x) == doctest::Approx(std::exp(2 * x)).epsilon(1e-14));

    for (const auto& law : {ExcursionLaw::biased_rw(0.7),
                            ExcursionLaw::geometric_prefactor_normalized(0.1, 3.0)})
        CHECK(law.mgf_finite(0.0) == doctest::Approx(1.0).epsilon(1e-13));

    // Direct-summation oracle at x = b_E for the summable-prefactor case.
    ExcursionLaw gp = ExcursionLaw::geometric_prefactor_normalized(0.1, 3.0);
    double kappa = std::get<GeometricPrefactor>(gp.repr()).kappa;
    double num = 0.0, den = 0.0;
    for (long long n = 1; n <= 3'000'000; ++n) {
        num += kappa * std::pow(static_cast<double>(n), -3.0);
        den += kappa * std::pow(static_cast<double>(n), -3.0) * std::exp(-0.1 * n);
    }
    CHECK(gp.mgf_finite(0.1) == doctest::Approx(num / den).epsilon(1e-10));

    CHECK_THROWS_AS((void)gp.mgf_finite(0.100001), DivergentSum);
    // Case (i): prefactor sum diverges at b_E.
    ExcursionLaw diverging = ExcursionLaw::geometric_prefactor_normalized(0.2, 0.5);
    CHECK_THROWS_AS((void)diverging.mgf_finite(0.2), DivergentSum);
}

TEST_CASE("full mgf boundary behavior") {
    ExcursionLaw law = ExcursionLaw::biased_rw(0.7);
    CHECK(law.mgf(0.0) == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(law.mgf(0.01) == kInf);
    CHECK(law.mgf(-0.3) < 0.6);
    CHECK(ExcursionLaw::biased_rw(0.5).mgf(0.0) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("b_E' limits") {
    CHECK(ExcursionLaw::finite_support({{2, 1.0}}, 0.0).b_e_prime() == 2.0);
    double z2 = oracle::zeta(2.0), z3 = oracle::zeta(3.0);
    CHECK(ExcursionLaw::geometric_prefactor_normalized(0.2, 3.0).b_e_prime() ==
          doctest::Approx(z2 / z3).epsilon(1e-9));
    CHECK(ExcursionLaw::geometric_prefactor_normalized(0.2, 1.5).b_e_prime() == kInf);
    CHECK(ExcursionLaw::biased_rw(0.7).b_e_prime() == kInf);
}

TEST_CASE("closed-form tail analytics") {
    ExcursionLaw law = ExcursionLaw::biased_rw(0.7);
    CHECK(law.b_e() == doctest::Approx(0.0871766935723889).epsilon(1e-14));
    CHECK(law.r() == doctest::Approx(0.5108256237659907).epsilon(1e-14));
    CHECK(law.m_e() == doctest::Approx(3.5).epsilon(1e-12));
    CHECK(law.log_mgf_finite(law.b_e()) == doctest::Approx(law.r()).epsilon(1e-12));
}

TEST_CASE("tilt") {
    ExcursionLaw law = ExcursionLaw::biased_rw(0.7);
    // alpha = 0 conditions on finiteness.
    ExcursionLaw cond = law.tilt(0.0);
    CHECK(cond.mass_inf() == 0.0);
    CHECK(cond.pmf(2) == doctest::Approx(law.pmf(2) / 0.6).epsilon(1e-13));

    // Deterministic support is tilt-invariant.
    ExcursionLaw det = ExcursionLaw::finite_support({{2, 1.0}}, 0.0);
    CHECK(det.tilt(0.7).pmf(2) == doctest::Approx(1.0).epsilon(1e-13));

    // Mean of the tilted law equals (log M_E^f)' (finite difference oracle).
    for (double alpha : {-0.5, 0.0, 0.05}) {
        ExcursionLaw tl = law.tilt(alpha);
        double mean = 0.0;
        for (std::int64_t n = 2; n <= 4000; n += 2) mean += static_cast<double>(n) * tl.pmf(n);
        mean += 0.0;  // tail below 1e-16 at n = 4000 for these alphas
        double h = 1e-6;
        double fd = (law.log_mgf_finite(alpha + h) - law.log_mgf_finite(alpha - h)) / (2 * h);
        CHECK(mean == doctest::Approx(fd).epsilon(1e-8));
    }

    CHECK_THROWS_AS((void)law.tilt(0.1), DivergentSum);  // above b_E ~ 0.0872
}

TEST_CASE("tilt composition") {
    for (const auto& law : {ExcursionLaw::biased_rw(0.7),
                            ExcursionLaw::geometric_prefactor_normalized(0.2, 3.0)}) {
        ExcursionLaw two_step = law.tilt(0.01).tilt(0.02);
        ExcursionLaw one_step = law.tilt(0.03);
        for (std::int64_t n = 1; n <= 1000; ++n)
            CHECK(two_step.pmf(n) == doctest::Approx(one_step.pmf(n)).epsilon(1e-12));
    }
}

TEST_CASE("loosening identity for the biased walk") {
    // E:PXpform in law form: pmf_p(n) = (4p(1-p))^{n/2} pmf_{1/2}(n).
    ExcursionLaw p7 = ExcursionLaw::biased_rw(0.7);
    ExcursionLaw srw = ExcursionLaw::biased_rw(0.5);
    double w0 = 4.0 * 0.7 * 0.3;
    for (std::int64_t n = 2; n <= 1000; n += 2)
        CHECK(p7.pmf(n) ==
              doctest::Approx(std::pow(w0, static_cast<double>(n) / 2.0) * srw.pmf(n))
                  .epsilon(1e-12));

    // Loosening the recurrent restriction recovers the simple walk pointwise.
    ExcursionLaw loosened = p7.tilt(0.0).loosen();
    for (std::int64_t n = 1; n <= 200; ++n)
        CHECK(std::abs(loosened.pmf(n) - srw.pmf(n)) < 1e-14);
    CHECK(loosened.b_e() == 0.0);
}

TEST_CASE("loosen of a geometric-prefactor law is the power law") {
    ExcursionLaw gp = ExcursionLaw::geometric_prefactor_normalized(0.2, 3.0);
    ExcursionLaw loosened = gp.loosen();
    double gamma_total = gp.gamma_sum();
    double kappa = std::get<GeometricPrefactor>(gp.repr()).kappa;
    ExcursionLaw expect = ExcursionLaw::power_law(3.0, kappa / gamma_total);
    for (std::int64_t n = 1; n <= 100; ++n)
        CHECK(loosened.pmf(n) == doctest::Approx(expect.pmf(n)).epsilon(1e-13));
    CHECK(loosened.b_e() == 0.0);

    CHECK_THROWS_AS((void)ExcursionLaw::biased_rw(0.7).loosen(), NotRecurrent);
    CHECK_THROWS_AS((void)ExcursionLaw::geometric_prefactor_normalized(0.2, 0.5).loosen(),
                    DivergentSum);
}

TEST_CASE("partial loosening") {
    ExcursionLaw law = ExcursionLaw::biased_rw(0.7);
    ExcursionLaw hat = law.partially_loosen(0.04);
    CHECK(hat.mass_inf() == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(hat.tail_sum(0) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(hat.b_e() == doctest::Approx(law.b_e() - 0.04).epsilon(1e-12));

    // b -> 0 recovers the original law.
    ExcursionLaw tiny = law.partially_loosen(1e-9);
    for (std::int64_t n = 2; n <= 100; n += 2)
        CHECK(tiny.pmf(n) == doctest::Approx(law.pmf(n)).epsilon(1e-6));

    // Survival ratio stays bounded away from 0 and tends to 1.
    double min_ratio = kInf;
    for (std::int64_t m : {1, 2, 5, 10, 50, 100, 500, 1000, 5000, 10000}) {
        double ratio = hat.survival(m) / law.survival(m);
        min_ratio = std::min(min_ratio, ratio);
    }
    CHECK(min_ratio > 0.5);
    CHECK(hat.survival(10000) / law.survival(10000) == doctest::Approx(1.0).epsilon(1e-6));

    CHECK_THROWS_AS((void)law.partially_loosen(0.2), InvalidLaw);
}

TEST_CASE("log mgf_finite is convex") {
    for (const auto& law : {ExcursionLaw::biased_rw(0.7),
                            ExcursionLaw::geometric_prefactor_normalized(0.2, 3.0)}) {
        double hi = law.b_e();
        std::vector<double> vals;
        for (int i = 0; i <= 40; ++i) vals.push_back(law.log_mgf_finite(-2.0 + (hi + 2.0) * i / 41));
        for (std::size_t i = 1; i + 1 < vals.size(); ++i)
            CHECK(vals[i + 1] - 2 * vals[i] + vals[i - 1] >= -1e-10);
    }
}

TEST_CASE("law JSON round trip") {
    std::vector<ExcursionLaw> laws;
    laws.push_back(ExcursionLaw::biased_rw(0.7));
    laws.push_back(ExcursionLaw::geometric_prefactor(0.2, 1.5, 0.5));
    laws.push_back(ExcursionLaw::power_law_normalized(2.5));
    laws.push_back(ExcursionLaw::finite_support({{1, 0.3}, {3, 0.3}}, 0.4));
    laws.push_back(ExcursionLaw::biased_rw(0.7).partially_loosen(0.04));
    laws.push_back(tilted_srw(0.2));
    for (const auto& law : laws) {
        ExcursionLaw back = law_from_json(law_to_json(law));
        CAPTURE(law.family_name());
        CHECK(back.mass_inf() == doctest::Approx(law.mass_inf()).epsilon(1e-14));
        for (std::int64_t n = 1; n <= 50; ++n) {
            if (law.pmf(n) == 0.0)
                CHECK(back.pmf(n) == 0.0);
            else
                CHECK(back.pmf(n) == doctest::Approx(law.pmf(n)).epsilon(1e-13));
        }
    }
}
