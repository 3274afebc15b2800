#include "plike/pdensity.hpp"

#include <algorithm>
#include <cmath>

#include "plike/errors.hpp"
#include "plike/power.hpp"

namespace plike {

namespace {

void require_unit_interval(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("P must lie in [0, 1]");
}

double difference_clamp(double x, double step) {
    return std::clamp(x, 2.0 * step, 1.0 - 2.0 * step);
}

}  // namespace

double p_density(double x, double theta, const TestSpec& spec) {
    require_unit_interval(x);
    const Ncp ncp = spec.ncp(theta);
    if (ncp.value() == 0.0) return 1.0;
    x = std::clamp(x, kPFloor, kPCeiling);
    const Df df = spec.df();
    if (spec.tails() == Tails::one_tailed) {
        const double t = central_t_upper_quantile(x, df);
        return noncentral_t_pdf(t, df, ncp) / central_t_pdf(t, df);
    }
    const double t = central_t_upper_quantile(0.5 * x, df);
    const double both = noncentral_t_pdf(t, df, ncp) + noncentral_t_pdf(-t, df, ncp);
    return both / (2.0 * central_t_pdf(t, df));
}

double p_density_difference(double x, double theta, const TestSpec& spec, double step) {
    require_unit_interval(x);
    if (!(step > 0.0 && step < 0.25)) throw DomainError("difference step must lie in (0, 0.25)");
    x = difference_clamp(x, step);
    if (power(x, theta, spec) > 0.5)
        return (power_complement(x - step, theta, spec) - power_complement(x + step, theta, spec)) / (2.0 * step);
    return (power(x + step, theta, spec) - power(x - step, theta, spec)) / (2.0 * step);
}

double p_density(double x, double theta, const TestSpec& spec, DensityMethod method) {
    return method == DensityMethod::closed_form ? p_density(x, theta, spec)
                                                : p_density_difference(x, theta, spec);
}

std::vector<double> default_p_grid() {
    std::vector<double> grid{0.001};
    for (int k = 1; k <= 99; ++k) grid.push_back(0.01 * k);
    grid.push_back(0.999);
    return grid;
}

PDensityCurve p_density_curve(double theta, const TestSpec& spec, std::span<const double> grid,
                              DensityMethod method) {
    PDensityCurve curve{spec, theta, method, {grid.begin(), grid.end()}, {}, {}};
    curve.values.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        const double used = method == DensityMethod::closed_form
                                 ? std::clamp(x, kPFloor, kPCeiling)
                                 : difference_clamp(x, kDifferenceStep);
        if (used != x) curve.clamped.push_back(i);
        curve.values.push_back(p_density(x, theta, spec, method));
    }
    return curve;
}

}  // namespace plike
