#include "plike/power.hpp"

#include <cmath>

#include "plike/errors.hpp"

namespace plike {

double power(double alpha, double theta, const TestSpec& spec) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("significance level must lie in (0, 1)");
    const Df df = spec.df();
    const Ncp ncp = spec.ncp(theta);
    if (spec.tails() == Tails::one_tailed) {
        const double critical = central_t_upper_quantile(alpha, df);
        return noncentral_t_sf(critical, df, ncp);
    }
    const double critical = central_t_upper_quantile(0.5 * alpha, df);
    return noncentral_t_sf(critical, df, ncp) + noncentral_t_cdf(-critical, df, ncp);
}

double power_complement(double alpha, double theta, const TestSpec& spec) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("significance level must lie in (0, 1)");
    const Df df = spec.df();
    const Ncp ncp = spec.ncp(theta);
    if (spec.tails() == Tails::one_tailed) return noncentral_t_cdf(central_t_upper_quantile(alpha, df), df, ncp);
    const double critical = central_t_upper_quantile(0.5 * alpha, df);
    // Pr(-c < T < c), taken from whichever side keeps both terms small.
    if (ncp.value() >= 0.0) return noncentral_t_cdf(critical, df, ncp) - noncentral_t_cdf(-critical, df, ncp);
    return noncentral_t_sf(-critical, df, ncp) - noncentral_t_sf(critical, df, ncp);
}

double p_quantile(double q, double theta, const TestSpec& spec) {
    if (!(q > 0.0 && q < 1.0)) throw DomainError("quantile level must lie in (0, 1)");
    // Bisection on log(alpha); power is increasing in alpha.
    double lo = std::log(1e-300);
    double hi = 0.0;
    double mid = 0.5 * (lo + hi);
    for (int iter = 0; iter < 400; ++iter) {
        mid = 0.5 * (lo + hi);
        const double alpha = std::exp(mid);
        if (alpha >= 1.0) break;
        const double value = power(alpha, theta, spec);
        if (std::abs(value - q) <= 1e-12) return alpha;
        if (value < q) lo = mid; else hi = mid;
        if (hi - lo <= 1e-15) break;
    }
    return std::exp(mid);
}

PowerCurve power_curve(double alpha, std::span<const double> grid, const TestSpec& spec) {
    PowerCurve curve{spec, alpha, {grid.begin(), grid.end()}, {}};
    curve.values.reserve(grid.size());
    for (double theta : grid) curve.values.push_back(power(alpha, theta, spec));
    return curve;
}

}  // namespace plike
