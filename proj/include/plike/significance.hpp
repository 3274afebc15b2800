#pragma once

// Student's t-test P-values and tail conventions.

#include <optional>
#include <span>
#include <string_view>

#include "plike/tdist.hpp"

namespace plike {

enum class TestFamily { one_sample, two_sample, paired };
enum class Tails { one_tailed, two_tailed };

/// Sign of the observed t statistic. `ambiguous` marks a two-tailed P that
/// was produced from a one-tailed P of exactly 0.5.
enum class Direction { positive, negative, ambiguous };

/// Test family, per-group sample size and tail mode. Fixes the degrees of
/// freedom and the mapping from effect size to noncentrality.
class TestSpec {
public:
    TestSpec(TestFamily family, int n, Tails tails);

    TestFamily family() const noexcept { return family_; }
    int n() const noexcept { return n_; }
    Tails tails() const noexcept { return tails_; }

    /// 2n - 2 for two-sample, n - 1 otherwise.
    Df df() const;
    /// theta * sqrt(n / 2) for two-sample, theta * sqrt(n) otherwise.
    Ncp ncp(double theta) const;

    TestSpec with_n(int n) const { return {family_, n, tails_}; }
    TestSpec with_tails(Tails tails) const { return {family_, n_, tails}; }

private:
    TestFamily family_;
    int n_;
    Tails tails_;
};

inline constexpr double kPFloor = 1e-15;
inline constexpr double kPCeiling = 1.0 - 1e-15;

struct PValue {
    double value;
    Tails tails;
    Direction direction = Direction::positive;

    /// Validates 0 < value < 1.
    static PValue make(double value, Tails tails, Direction direction = Direction::positive);
};

struct TTestResult {
    double t;
    PValue p;
};

/// Classic pooled-variance t-test. The one-tailed alternative is "effect > 0",
/// i.e. mean(group_a) > mean(group_b) (or mean > 0 for one-sample).
/// P values are clamped to [kPFloor, kPCeiling].
TTestResult t_test(std::span<const double> group_a, std::span<const double> group_b,
                   const TestSpec& spec);

/// One-sample overload.
TTestResult t_test(std::span<const double> sample, const TestSpec& spec);

/// Two-tailed and one-tailed P for a given t statistic, clamped.
PValue p_from_t(double t, Df df, Tails tails);

/// Two-tailed -> one-tailed using the sign of t; one-tailed -> two-tailed,
/// recording the implied direction. `t_sign` is ignored for one->two.
PValue convert_tails(const PValue& p, Direction t_sign);

std::string_view to_string(TestFamily family);
std::string_view to_string(Tails tails);
std::optional<TestFamily> parse_family(std::string_view text);
std::optional<Tails> parse_tails(std::string_view text);

}  // namespace plike
