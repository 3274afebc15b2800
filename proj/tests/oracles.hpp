#pragma once

// Test-only reference computations. Everything here is deliberately written
// from first principles and shares no code with the library's evaluation
// paths.

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>

namespace oracle {

/// Composite Simpson rule with `panels` (even) subintervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels % 2 == 1) ++panels;
    const double h = (b - a) / panels;
    double sum = f(a) + f(b);
    for (int i = 1; i < panels; ++i) sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

/// Student t density from its textbook closed form.
inline double t_density(double t, double df) {
    return std::tgamma(0.5 * (df + 1.0)) / (std::sqrt(df * std::numbers::pi) * std::tgamma(0.5 * df)) *
           std::pow(1.0 + t * t / df, -0.5 * (df + 1.0));
}

/// Central t CDF by quadrature of the density from 0 (symmetry gives 0.5 below).
inline double t_cdf_by_quadrature(double t, double df) {
    const double half = simpson([df](double x) { return t_density(x, df); }, 0.0, std::abs(t), 20000);
    return t >= 0.0 ? 0.5 + half : 0.5 - half;
}

/// Root of a monotone increasing function on [lo, hi] by plain bisection.
inline double bisect(const std::function<double(double)>& f, double target, double lo, double hi,
                     int iterations = 200) {
    for (int i = 0; i < iterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Monte Carlo estimate of Pr(T <= t) with T = (Z + ncp) / sqrt(chi2_df / df).
struct McEstimate {
    double value;
    double std_error;
};
inline McEstimate noncentral_t_cdf_mc(double t, double df, double ncp, std::int64_t draws,
                                      std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::chi_squared_distribution<double> chi2(df);
    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < draws; ++i) {
        const double value = (normal(gen) + ncp) / std::sqrt(chi2(gen) / df);
        if (value <= t) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(draws);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(draws))};
}

/// Exact count of length-n head/tail sequences with at most `heads` heads,
/// by walking all 2^n bit patterns.
inline std::uint64_t sequences_with_at_most(int n, int heads) {
    std::uint64_t count = 0;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits)
        if (std::popcount(bits) <= heads) ++count;
    return count;
}

}  // namespace oracle
