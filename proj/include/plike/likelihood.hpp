#pragma once

// Likelihood functions of effect size indexed by an observed P-value.
//
// L(theta) is proportional to the density of the observed P at theta, which
// is the slope of the power curve in the significance level. Only ratios of
// likelihoods within one curve carry meaning.

#include <cstddef>
#include <span>
#include <vector>

#include "plike/significance.hpp"

namespace plike {

enum class Normalization { raw_density_scale, max_one };

enum class LikelihoodMethod {
    /// Exact density ratio through the t statistic, honouring the P's tails.
    density_ratio,
    /// Finite difference of power in the level (step 1e-7), honouring tails.
    finite_difference,
    /// Reference-code compatibility: finite difference of the one-sided power
    /// regardless of the tail mode of the observed P. For a two-tailed P this
    /// yields a unimodal curve rather than the symmetric bimodal one.
    one_sided_compat,
};

/// Raw-density-scale likelihood of theta given the observed P. The tail mode
/// of `observed` must match `spec`. Throws DomainError when observed.value
/// sits at or beyond the numeric clamp [kPFloor, kPCeiling].
double likelihood_from_p(const PValue& observed, double theta, const TestSpec& spec,
                         LikelihoodMethod method = LikelihoodMethod::density_ratio);

/// L(theta1) / L(theta2). Throws OverflowGuardError when L(theta2) < 1e-300.
double likelihood_ratio(const PValue& observed, double theta1, double theta2,
                        const TestSpec& spec,
                        LikelihoodMethod method = LikelihoodMethod::density_ratio);

struct LikelihoodCurve {
    TestSpec spec;
    PValue observed_p;
    Normalization normalization;
    LikelihoodMethod method;
    std::vector<double> grid;
    std::vector<double> values;
    /// values[i] * scale is the raw-density-scale likelihood.
    double scale;
};

/// Evaluates the likelihood on a nonempty ascending grid.
LikelihoodCurve likelihood_curve(const PValue& observed, std::span<const double> grid,
                                 const TestSpec& spec,
                                 Normalization normalization = Normalization::max_one,
                                 LikelihoodMethod method = LikelihoodMethod::density_ratio);

/// lo, lo + step, ..., hi, built as lo + i * step.
std::vector<double> theta_grid(double lo, double hi, double step);

/// -1 to 5 in steps of 0.01 (601 points).
std::vector<double> default_theta_grid();

/// Grid location of the (first) maximum.
double curve_mode(const LikelihoodCurve& curve);

/// Width of the region around the mode where the curve stays above half its
/// maximum, with linear interpolation at the crossings. Throws DomainError if
/// the grid does not bracket both crossings.
double half_maximum_width(const LikelihoodCurve& curve);

/// Number of strict interior local maxima (plateaus count once).
std::size_t count_local_maxima(std::span<const double> values);

}  // namespace plike
