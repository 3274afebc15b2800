#include "plike/significance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "plike/errors.hpp"

namespace plike {

namespace {

double clamp_p(double p) { return std::clamp(p, kPFloor, kPCeiling); }

struct Moments {
    double mean = 0.0;
    double sum_sq = 0.0;  // sum of squared deviations
};

// Two-pass mean and centred sum of squares.
Moments moments(std::span<const double> xs) {
    Moments m;
    for (double x : xs) m.mean += x;
    m.mean /= static_cast<double>(xs.size());
    for (double x : xs) m.sum_sq += (x - m.mean) * (x - m.mean);
    return m;
}

void require_size(std::span<const double> xs, int n, const char* which) {
    if (xs.size() != static_cast<std::size_t>(n))
        throw DomainError(std::string(which) + " has " + std::to_string(xs.size()) +
                          " observations, test spec expects " + std::to_string(n));
}

TTestResult one_sample_t(std::span<const double> xs, const TestSpec& spec) {
    const Moments m = moments(xs);
    const double n = static_cast<double>(xs.size());
    if (m.sum_sq <= 0.0) throw DegenerateInputError("sample has zero variance");
    const double se = std::sqrt(m.sum_sq / (n - 1.0) / n);
    const double t = m.mean / se;
    return {t, p_from_t(t, spec.df(), spec.tails())};
}

}  // namespace

TestSpec::TestSpec(TestFamily family, int n, Tails tails) : family_(family), n_(n), tails_(tails) {
    if (n < 2) throw DomainError("sample size must be at least 2");
}

Df TestSpec::df() const {
    return Df(family_ == TestFamily::two_sample ? 2.0 * n_ - 2.0 : n_ - 1.0);
}

Ncp TestSpec::ncp(double theta) const {
    if (!std::isfinite(theta)) throw DomainError("effect size must be finite");
    const double scale = family_ == TestFamily::two_sample ? std::sqrt(0.5 * n_) : std::sqrt(n_);
    return Ncp(theta * scale);
}

PValue PValue::make(double value, Tails tails, Direction direction) {
    if (!(value > 0.0 && value < 1.0)) throw DomainError("P value must lie in (0, 1)");
    return {value, tails, direction};
}

PValue p_from_t(double t, Df df, Tails tails) {
    const Direction dir = t >= 0.0 ? Direction::positive : Direction::negative;
    if (tails == Tails::one_tailed) return {clamp_p(central_t_sf(t, df)), tails, dir};
    return {clamp_p(2.0 * central_t_sf(std::abs(t), df)), tails, dir};
}

TTestResult t_test(std::span<const double> group_a, std::span<const double> group_b,
                   const TestSpec& spec) {
    require_size(group_a, spec.n(), "group a");
    switch (spec.family()) {
        case TestFamily::one_sample:
            if (!group_b.empty()) throw DomainError("one-sample test takes a single group");
            return one_sample_t(group_a, spec);
        case TestFamily::paired: {
            require_size(group_b, spec.n(), "group b");
            std::vector<double> diffs(group_a.size());
            std::transform(group_a.begin(), group_a.end(), group_b.begin(), diffs.begin(),
                           std::minus<>());
            return one_sample_t(diffs, spec);
        }
        case TestFamily::two_sample: {
            require_size(group_b, spec.n(), "group b");
            const Moments a = moments(group_a);
            const Moments b = moments(group_b);
            const double n = spec.n();
            const double pooled = (a.sum_sq + b.sum_sq) / (2.0 * n - 2.0);
            if (pooled <= 0.0) throw DegenerateInputError("both groups have zero variance");
            const double t = (a.mean - b.mean) / std::sqrt(pooled * 2.0 / n);
            return {t, p_from_t(t, spec.df(), spec.tails())};
        }
    }
    throw DomainError("unknown test family");
}

TTestResult t_test(std::span<const double> sample, const TestSpec& spec) {
    if (spec.family() != TestFamily::one_sample)
        throw DomainError("single-group t_test requires a one-sample spec");
    return t_test(sample, {}, spec);
}

PValue convert_tails(const PValue& p, Direction t_sign) {
    if (!(p.value > 0.0 && p.value < 1.0)) throw DomainError("P value must lie in (0, 1)");
    if (p.tails == Tails::two_tailed) {
        if (t_sign == Direction::ambiguous)
            throw DomainError("two-tailed to one-tailed conversion needs the sign of t");
        const double one = t_sign == Direction::positive ? 0.5 * p.value : 1.0 - 0.5 * p.value;
        return {clamp_p(one), Tails::one_tailed, t_sign};
    }
    if (p.value < 0.5) return {clamp_p(2.0 * p.value), Tails::two_tailed, Direction::positive};
    if (p.value > 0.5) return {clamp_p(2.0 * (1.0 - p.value)), Tails::two_tailed, Direction::negative};
    return {kPCeiling, Tails::two_tailed, Direction::ambiguous};
}

std::string_view to_string(TestFamily family) {
    switch (family) {
        case TestFamily::one_sample: return "one_sample";
        case TestFamily::two_sample: return "two_sample";
        case TestFamily::paired: return "paired";
    }
    return "?";
}

std::string_view to_string(Tails tails) {
    return tails == Tails::one_tailed ? "one" : "two";
}

std::optional<TestFamily> parse_family(std::string_view text) {
    if (text == "one_sample" || text == "one.sample") return TestFamily::one_sample;
    if (text == "two_sample" || text == "two.sample") return TestFamily::two_sample;
    if (text == "paired") return TestFamily::paired;
    return std::nullopt;
}

std::optional<Tails> parse_tails(std::string_view text) {
    if (text == "one" || text == "one_tailed" || text == "one.sided") return Tails::one_tailed;
    if (text == "two" || text == "two_tailed" || text == "two.sided") return Tails::two_tailed;
    return std::nullopt;
}

}  // namespace plike
