#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "plike/errors.hpp"
#include "plike/montecarlo.hpp"
#include "plike/pdensity.hpp"
#include "plike/power.hpp"

using namespace plike;

namespace {

const TestSpec kOne10{TestFamily::two_sample, 10, Tails::one_tailed};
const TestSpec kTwo10{TestFamily::two_sample, 10, Tails::two_tailed};

// Integral over (0, 1) in log coordinates toward each end, so that steep
// behaviour near either boundary is resolved.
double integrate_unit(const std::function<double(double)>& f) {
    const double lo = std::log(1e-15);
    const double left = oracle::simpson([&](double s) { return f(std::exp(s)) * std::exp(s); }, lo,
                                        std::log(0.5), 4000);
    const double right = oracle::simpson([&](double s) { return f(1.0 - std::exp(s)) * std::exp(s); }, lo,
                                         std::log(0.5), 4000);
    return left + right;
}

}  // namespace

TEST_SUITE("P density") {
    TEST_CASE("uniform at zero effect") {
        for (const TestSpec& spec : {kOne10, kTwo10}) {
            for (double x : default_p_grid()) {
                CHECK(std::abs(p_density(x, 0.0, spec) - 1.0) < 1e-6);
                CHECK(std::abs(p_density_difference(x, 0.0, spec) - 1.0) < 1e-6);
            }
        }
    }

    TEST_CASE("matches the simulated effect-size slice near 0.025") {
        SimConfig config{.spec = kTwo10, .runs = 1'000'000, .theta = ThetaMode::uniform(-4, 4), .seed = 2024};
        const PCloud cloud = run_cloud(config);
        std::size_t total = 0, in_bin = 0;
        for (const auto& r : cloud.records) {
            if (r.theta < 0.495 || r.theta > 0.505) continue;
            ++total;
            if (r.p >= 0.02 && r.p < 0.03) ++in_bin;
        }
        const double mass = oracle::simpson([](double x) { return p_density(x, 0.5, kTwo10); }, 0.02, 0.03, 200);
        const double mean = mass * static_cast<double>(total);
        const double sd = std::sqrt(mean * (1.0 - mass));
        CHECK(std::abs(static_cast<double>(in_bin) - mean) < 4.0 * sd);
        // Height at 0.025 is close to the bin average.
        CHECK(p_density(0.025, 0.5, kTwo10) == doctest::Approx(mass / 0.01).epsilon(0.01));
    }

    TEST_CASE("negative effect puts one-tailed mass at the right end") {
        CHECK(p_density(0.9, -0.5, kOne10) > p_density(0.1, -0.5, kOne10));
        CHECK(p_density(0.1, 0.5, kOne10) > p_density(0.9, 0.5, kOne10));
    }

    TEST_CASE("normalization") {
        for (const TestSpec& spec : {kOne10, kTwo10}) {
            for (double theta : {-2.0, -0.5, 0.0, 0.5, 2.0}) {
                CAPTURE(theta);
                const double integral = integrate_unit([&](double x) { return p_density(x, theta, spec); });
                CHECK(std::abs(integral - 1.0) < 1e-4);
            }
        }
    }

    TEST_CASE("finite difference agrees with the closed form") {
        for (const TestSpec& spec : {kOne10, kTwo10}) {
            for (double theta : {-1.0, 0.3, 1.0, 2.0}) {
                for (double x = 0.01; x < 0.995; x += 0.02) {
                    const double exact = p_density(x, theta, spec);
                    CHECK(p_density_difference(x, theta, spec) == doctest::Approx(exact).epsilon(1e-4));
                }
            }
        }
    }

    TEST_CASE("two-tailed density is even in the effect size") {
        for (double theta : {0.25, 1.0, 2.5})
            for (double x : {0.001, 0.05, 0.4, 0.9})
                CHECK(p_density(x, theta, kTwo10) == doctest::Approx(p_density(x, -theta, kTwo10)).epsilon(1e-12));
    }

    TEST_CASE("one-tailed density decreases on (0, 0.5] for positive effects") {
        for (double theta : {0.1, 0.5, 2.0}) {
            double prev = HUGE_VAL;
            for (double x = 0.001; x <= 0.5; x += 0.001) {
                const double d = p_density(x, theta, kOne10);
                CHECK(d < prev);
                prev = d;
            }
        }
    }

    TEST_CASE("curve records clamped grid points") {
        const std::vector<double> grid{0.0, 0.5, 1.0};
        const auto curve = p_density_curve(0.5, kTwo10, grid);
        CHECK(curve.clamped == std::vector<std::size_t>{0, 2});
        for (double v : curve.values) CHECK(std::isfinite(v));
        const auto fd = p_density_curve(0.5, kTwo10, default_p_grid(), DensityMethod::finite_difference);
        CHECK(fd.values.size() == 101);
        CHECK(fd.clamped.empty());
        CHECK_THROWS_AS(p_density(1.5, 0.5, kTwo10), DomainError);
        CHECK_THROWS_AS(p_density(-0.1, 0.5, kTwo10), DomainError);
    }

    TEST_CASE("default grid") {
        const auto grid = default_p_grid();
        REQUIRE(grid.size() == 101);
        CHECK(grid.front() == 0.001);
        CHECK(grid[1] == 0.01);
        CHECK(grid[99] == doctest::Approx(0.99));
        CHECK(grid.back() == 0.999);
    }
}
