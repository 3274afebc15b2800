#pragma once

// Probability density of the P-value at a fixed effect size: the derivative
// of the power curve with respect to the significance level.

#include <cstddef>
#include <span>
#include <vector>

#include "plike/significance.hpp"

namespace plike {

enum class DensityMethod {
    /// Change of variables through the t statistic (default).
    closed_form,
    /// Central finite difference of power(x) with step 1e-7.
    finite_difference,
};

inline constexpr double kDifferenceStep = 1e-7;

/// One-tailed:  f_ncp(t_x) / f_0(t_x),              t_x = upper t quantile at x.
/// Two-tailed: [f_ncp(t) + f_ncp(-t)] / (2 f_0(t)),  t = upper t quantile at x/2.
/// x is clamped to [kPFloor, kPCeiling]; values outside [0, 1] are an error.
double p_density(double x, double theta, const TestSpec& spec);

/// (power(x + h) - power(x - h)) / 2h, with x clamped so both evaluation
/// points stay inside (0, 1).
double p_density_difference(double x, double theta, const TestSpec& spec,
                            double step = kDifferenceStep);

double p_density(double x, double theta, const TestSpec& spec, DensityMethod method);

struct PDensityCurve {
    TestSpec spec;
    double theta;
    DensityMethod method;
    std::vector<double> grid;
    std::vector<double> values;
    /// Indices of grid points evaluated at a clamped location.
    std::vector<std::size_t> clamped;
};

/// {0.001, 0.01, 0.02, ..., 0.99, 0.999}.
std::vector<double> default_p_grid();

PDensityCurve p_density_curve(double theta, const TestSpec& spec, std::span<const double> grid,
                              DensityMethod method = DensityMethod::closed_form);

}  // namespace plike
