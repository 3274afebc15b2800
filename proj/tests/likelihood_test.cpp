#include <doctest.h>

#include <algorithm>
#include <boost/math/distributions/non_central_t.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <vector>

#include "plike/errors.hpp"
#include "plike/likelihood.hpp"
#include "plike/montecarlo.hpp"
#include "plike/power.hpp"

using namespace plike;

namespace {

const TestSpec kOne10{TestFamily::two_sample, 10, Tails::one_tailed};
const TestSpec kTwo10{TestFamily::two_sample, 10, Tails::two_tailed};

// Two-tailed P density ratio evaluated with Boost's distributions.
double boost_two_tailed_likelihood(double p, double theta, int n) {
    const double df = 2.0 * n - 2.0;
    const double ncp = theta * std::sqrt(0.5 * n);
    const boost::math::students_t central(df);
    const double t = boost::math::quantile(boost::math::complement(central, 0.5 * p));
    if (ncp == 0.0) return 1.0;
    const boost::math::non_central_t shifted(df, ncp);
    return (boost::math::pdf(shifted, t) + boost::math::pdf(shifted, -t)) / (2.0 * boost::math::pdf(central, t));
}

std::vector<double> symmetric_grid(double half_width, double step) {
    std::vector<double> grid;
    const int k = static_cast<int>(std::lround(half_width / step));
    for (int i = -k; i <= k; ++i) grid.push_back(i * step);
    return grid;
}

}  // namespace

TEST_SUITE("likelihood from P") {
    TEST_CASE("two-tailed P = 0.01 support ratios (frozen from the density-ratio oracle)") {
        const auto p = PValue::make(0.01, Tails::two_tailed);
        const double r15_0 = boost_two_tailed_likelihood(0.01, 1.5, 10) / boost_two_tailed_likelihood(0.01, 0.0, 10);
        const double r2_0 = boost_two_tailed_likelihood(0.01, 2.0, 10) / boost_two_tailed_likelihood(0.01, 0.0, 10);
        CHECK(r15_0 == doctest::Approx(15.208961).epsilon(1e-6));
        CHECK(r2_0 == doctest::Approx(6.1418047).epsilon(1e-6));

        CHECK(likelihood_ratio(p, 1.5, 0.0, kTwo10) == doctest::Approx(15.208961).epsilon(1e-6));
        CHECK(likelihood_ratio(p, 2.0, 0.0, kTwo10) == doctest::Approx(6.1418047).epsilon(1e-6));
        CHECK(likelihood_ratio(p, 1.5, 2.0, kTwo10) == doctest::Approx(2.4763016).epsilon(1e-6));
    }

    TEST_CASE("two-tailed curve is exactly even") {
        const auto p = PValue::make(0.01, Tails::two_tailed);
        const auto grid = symmetric_grid(4.0, 0.01);
        const auto curve = likelihood_curve(p, grid, kTwo10, Normalization::raw_density_scale);
        const std::size_t m = grid.size();
        for (std::size_t i = 0; i < m; ++i) CHECK(curve.values[i] == curve.values[m - 1 - i]);
    }

    TEST_CASE("ratio identities") {
        const auto p = PValue::make(0.03, Tails::one_tailed);
        for (double a : {-0.5, 0.0, 0.8, 1.7}) {
            CHECK(likelihood_ratio(p, a, a, kOne10) == 1.0);
            for (double b : {0.2, 1.1})
                CHECK(likelihood_ratio(p, a, b, kOne10) ==
                      doctest::Approx(1.0 / likelihood_ratio(p, b, a, kOne10)).epsilon(1e-13));
        }
    }

    TEST_CASE("one-tailed 0.005 and 0.995 curves are mirror images") {
        const auto grid = symmetric_grid(5.0, 0.01);
        const auto low = likelihood_curve(PValue::make(0.005, Tails::one_tailed), grid, kOne10);
        const auto high = likelihood_curve(PValue::make(0.995, Tails::one_tailed), grid, kOne10);
        const std::size_t m = grid.size();
        for (std::size_t i = 0; i < m; ++i) CHECK(std::abs(low.values[i] - high.values[m - 1 - i]) < 1e-9);
    }

    TEST_CASE("support ratio matches fixed-effect simulations in the P band") {
        // Horizontal section at P = 0.01 restricted to theta = 1.5 and theta = 0.
        auto band_count = [](double theta, std::uint64_t seed) {
            SimConfig config{.spec = kTwo10, .runs = 1'000'000, .theta = ThetaMode::fixed(theta), .seed = seed};
            const PCloud cloud = run_cloud(config);
            return static_cast<double>(std::count_if(cloud.records.begin(), cloud.records.end(), [](const auto& r) {
                return r.p >= 0.0095 && r.p <= 0.0105;
            }));
        };
        const double at_15 = band_count(1.5, 101);
        const double at_0 = band_count(0.0, 202);
        const double observed = at_15 / at_0;
        const double se = observed * std::sqrt(1.0 / at_15 + 1.0 / at_0);
        const double expected = (power(0.0105, 1.5, kTwo10) - power(0.0095, 1.5, kTwo10)) /
                                (power(0.0105, 0.0, kTwo10) - power(0.0095, 0.0, kTwo10));
        CHECK(expected == doctest::Approx(likelihood_ratio(PValue::make(0.01, Tails::two_tailed), 1.5, 0.0, kTwo10))
                              .epsilon(0.01));
        CHECK(std::abs(observed - expected) < 3.0 * se);
    }

    TEST_CASE("raw scale at zero effect is the null density") {
        for (double p : {0.001, 0.025, 0.4}) {
            CHECK(likelihood_from_p(PValue::make(p, Tails::one_tailed), 0.0, kOne10) == 1.0);
            CHECK(likelihood_from_p(PValue::make(p, Tails::two_tailed), 0.0, kTwo10) == 1.0);
        }
    }

    TEST_CASE("finite difference agrees with the density ratio") {
        for (double p : {1e-4, 0.003, 0.025, 0.2, 0.6, 0.97, 1.0 - 1e-4}) {
            for (double theta : {-1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0}) {
                for (const TestSpec& spec : {kOne10, kTwo10}) {
                    const PValue obs = PValue::make(p, spec.tails());
                    const double exact = likelihood_from_p(obs, theta, spec);
                    const double fd = likelihood_from_p(obs, theta, spec, LikelihoodMethod::finite_difference);
                    CAPTURE(p);
                    CAPTURE(theta);
                    CHECK(std::abs(fd - exact) <= 1e-3 * exact);
                }
            }
        }
    }

    TEST_CASE("errors") {
        CHECK_THROWS_AS(likelihood_from_p(PValue{1e-15, Tails::one_tailed}, 1.0, kOne10), DomainError);
        CHECK_THROWS_AS(likelihood_from_p(PValue{kPCeiling, Tails::one_tailed}, 1.0, kOne10), DomainError);
        CHECK_THROWS_AS(likelihood_from_p(PValue::make(0.01, Tails::two_tailed), 1.0, kOne10), DomainError);
        const auto p = PValue::make(0.001, Tails::one_tailed);
        CHECK_THROWS_AS(likelihood_ratio(p, 1.0, -60.0, kOne10), OverflowGuardError);
        const std::vector<double> empty;
        CHECK_THROWS_AS(likelihood_curve(p, empty, kOne10), DomainError);
        const std::vector<double> unsorted{1.0, 0.0};
        CHECK_THROWS_AS(likelihood_curve(p, unsorted, kOne10), DomainError);
    }
}

TEST_SUITE("likelihood curves") {
    TEST_CASE("reference example: n = 10, P = 0.025, default grid") {
        const auto grid = default_theta_grid();
        REQUIRE(grid.size() == 601);
        CHECK(grid.front() == -1.0);
        CHECK(grid.back() == 5.0);
        const auto curve = likelihood_curve(PValue::make(0.025, Tails::one_tailed), grid, kOne10);
        CHECK(count_local_maxima(curve.values) == 1);
        CHECK(*std::max_element(curve.values.begin(), curve.values.end()) == 1.0);
    }

    TEST_CASE("normalizations differ only by a constant") {
        const auto p = PValue::make(0.04, Tails::two_tailed);
        const auto grid = theta_grid(-1.0, 3.0, 0.25);
        const auto raw = likelihood_curve(p, grid, kTwo10, Normalization::raw_density_scale);
        const auto unit = likelihood_curve(p, grid, kTwo10, Normalization::max_one);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(unit.values[i] * unit.scale == doctest::Approx(raw.values[i]).epsilon(1e-14));
            CHECK(unit.values[i] / unit.values[3] == doctest::Approx(raw.values[i] / raw.values[3]).epsilon(1e-13));
        }
    }

    TEST_CASE("larger samples give narrower curves nearer zero") {
        const auto p = PValue::make(0.025, Tails::one_tailed);
        const auto grid = theta_grid(-3.0, 12.0, 0.005);
        const auto big = likelihood_curve(p, grid, kOne10.with_n(100));
        const auto small = likelihood_curve(p, grid, kOne10.with_n(3));
        CHECK(half_maximum_width(big) < half_maximum_width(small));
        CHECK(std::abs(curve_mode(big)) < std::abs(curve_mode(small)));
    }

    TEST_CASE("smaller one-tailed P moves the mode outward") {
        const auto grid = theta_grid(-2.0, 6.0, 0.005);
        double prev_mode = HUGE_VAL;
        for (double p : {0.0005, 0.005, 0.05, 0.2, 0.45}) {
            const double mode = curve_mode(likelihood_curve(PValue::make(p, Tails::one_tailed), grid, kOne10));
            CHECK(mode < prev_mode);
            prev_mode = mode;
        }
    }

    TEST_CASE("two-tailed curves are bimodal, one-tailed unimodal") {
        const auto grid = symmetric_grid(4.0, 0.01);
        for (double p : {0.001, 0.01, 0.05, 0.2}) {
            CAPTURE(p);
            const auto two = likelihood_curve(PValue::make(p, Tails::two_tailed), grid, kTwo10);
            CHECK(count_local_maxima(two.values) == 2);
            const auto one = likelihood_curve(PValue::make(p, Tails::one_tailed), grid, kOne10);
            CHECK(count_local_maxima(one.values) == 1);
        }
    }

    TEST_CASE("reference-code compatibility mode ignores the tail mode") {
        const auto p = PValue::make(0.01, Tails::two_tailed);
        const auto grid = symmetric_grid(4.0, 0.01);
        const auto compat = likelihood_curve(p, grid, kTwo10, Normalization::max_one, LikelihoodMethod::one_sided_compat);
        CHECK(count_local_maxima(compat.values) == 1);
        const double one_sided = likelihood_from_p(PValue::make(0.01, Tails::one_tailed), 1.0, kOne10,
                                                   LikelihoodMethod::finite_difference);
        CHECK(likelihood_from_p(p, 1.0, kTwo10, LikelihoodMethod::one_sided_compat) == one_sided);
    }

    TEST_CASE("half-maximum width needs bracketing grid") {
        const auto p = PValue::make(0.025, Tails::one_tailed);
        const auto narrow = likelihood_curve(p, theta_grid(1.0, 1.5, 0.01), kOne10);
        CHECK_THROWS_AS(half_maximum_width(narrow), DomainError);
    }

    TEST_CASE("local maxima counting") {
        const std::vector<double> plateau{0, 1, 1, 0, 2, 0};
        CHECK(count_local_maxima(plateau) == 2);
        const std::vector<double> monotone{0, 1, 2, 3};
        CHECK(count_local_maxima(monotone) == 0);
    }
}
