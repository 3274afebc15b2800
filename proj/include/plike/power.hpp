#pragma once

// Power of the t-test as a function of significance level and effect size,
// and its inverse in the level (the P-value quantile at a given effect size).

#include <span>
#include <vector>

#include "plike/significance.hpp"

namespace plike {

/// Pr(P <= alpha | theta). Two-tailed power sums both rejection regions.
/// At theta = 0 this is the size alpha.
double power(double alpha, double theta, const TestSpec& spec);

/// 1 - power(alpha, theta, spec), evaluated directly so that it keeps its
/// relative accuracy when power is close to one.
double power_complement(double alpha, double theta, const TestSpec& spec);

/// The level x at which power(x, theta, spec) == q; the q-quantile of the
/// P-value distribution at theta. q = 0.5 gives the median P.
double p_quantile(double q, double theta, const TestSpec& spec);

struct PowerCurve {
    TestSpec spec;
    double alpha;
    std::vector<double> grid;
    std::vector<double> values;
};

PowerCurve power_curve(double alpha, std::span<const double> grid, const TestSpec& spec);

}  // namespace plike
