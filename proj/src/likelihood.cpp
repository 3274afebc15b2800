#include "plike/likelihood.hpp"

#include <algorithm>
#include <cmath>

#include "plike/errors.hpp"
#include "plike/pdensity.hpp"

namespace plike {

double likelihood_from_p(const PValue& observed, double theta, const TestSpec& spec,
                         LikelihoodMethod method) {
    if (!(observed.value > kPFloor && observed.value < kPCeiling))
        throw DomainError("observed P is at the numeric boundary; clamp it into [1e-15, 1-1e-15]");
    if (observed.tails != spec.tails())
        throw DomainError("observed P and test spec disagree on the tail mode");
    switch (method) {
        case LikelihoodMethod::density_ratio:
            return p_density(observed.value, theta, spec);
        case LikelihoodMethod::finite_difference:
            return p_density_difference(observed.value, theta, spec);
        case LikelihoodMethod::one_sided_compat:
            return p_density_difference(observed.value, theta, spec.with_tails(Tails::one_tailed));
    }
    throw DomainError("unknown likelihood method");
}

double likelihood_ratio(const PValue& observed, double theta1, double theta2, const TestSpec& spec,
                        LikelihoodMethod method) {
    const double denominator = likelihood_from_p(observed, theta2, spec, method);
    if (denominator < 1e-300)
        throw OverflowGuardError("likelihood of the reference effect size is below 1e-300");
    return likelihood_from_p(observed, theta1, spec, method) / denominator;
}

LikelihoodCurve likelihood_curve(const PValue& observed, std::span<const double> grid,
                                 const TestSpec& spec, Normalization normalization,
                                 LikelihoodMethod method) {
    if (grid.empty()) throw DomainError("likelihood grid is empty");
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw DomainError("likelihood grid must be sorted ascending");

    LikelihoodCurve curve{spec, observed, normalization, method, {grid.begin(), grid.end()}, {}, 1.0};
    curve.values.reserve(grid.size());
    for (double theta : grid) curve.values.push_back(likelihood_from_p(observed, theta, spec, method));

    if (normalization == Normalization::max_one) {
        const double peak = *std::max_element(curve.values.begin(), curve.values.end());
        if (!(peak > 0.0)) throw DomainError("likelihood vanishes on the whole grid");
        for (double& v : curve.values) v /= peak;
        curve.scale = peak;
    }
    return curve;
}

std::vector<double> theta_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo)) throw DomainError("grid needs lo <= hi and a positive step");
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) grid.push_back(lo + static_cast<double>(i) * step);
    return grid;
}

std::vector<double> default_theta_grid() {
    std::vector<double> grid;
    grid.reserve(601);
    for (int i = -100; i <= 500; ++i) grid.push_back(0.01 * i);
    return grid;
}

double curve_mode(const LikelihoodCurve& curve) {
    const auto it = std::max_element(curve.values.begin(), curve.values.end());
    return curve.grid[static_cast<std::size_t>(it - curve.values.begin())];
}

double half_maximum_width(const LikelihoodCurve& curve) {
    const auto& v = curve.values;
    const auto& g = curve.grid;
    const auto peak_it = std::max_element(v.begin(), v.end());
    const auto peak = static_cast<std::size_t>(peak_it - v.begin());
    const double half = 0.5 * *peak_it;

    auto crossing = [&](std::size_t inside, std::size_t outside) {
        const double frac = (v[inside] - half) / (v[inside] - v[outside]);
        return g[inside] + frac * (g[outside] - g[inside]);
    };

    std::size_t i = peak;
    while (i > 0 && v[i - 1] >= half) --i;
    if (i == 0) throw DomainError("grid does not reach the lower half-maximum crossing");
    const double left = crossing(i, i - 1);

    std::size_t j = peak;
    while (j + 1 < v.size() && v[j + 1] >= half) ++j;
    if (j + 1 == v.size()) throw DomainError("grid does not reach the upper half-maximum crossing");
    const double right = crossing(j, j + 1);
    return right - left;
}

std::size_t count_local_maxima(std::span<const double> values) {
    std::size_t count = 0;
    std::size_t i = 1;
    while (i + 1 < values.size()) {
        if (values[i] > values[i - 1]) {
            std::size_t j = i;
            while (j + 1 < values.size() && values[j + 1] == values[i]) ++j;
            if (j + 1 < values.size() && values[j + 1] < values[i]) ++count;
            i = j + 1;
        } else {
            ++i;
        }
    }
    return count;
}

}  // namespace plike
