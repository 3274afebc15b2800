#pragma once

// The two-statisticians coin example: one toss sequence analysed under a
// fixed-n binomial design and under a toss-until-first-head design.

#include <span>
#include <vector>

namespace plike {

enum class CoinSampling { fixed_n, until_first_head };

struct CoinOutcome {
    int tosses;
    int heads;
    CoinSampling sampling;

    /// Validates the outcome; until_first_head requires exactly one head.
    static CoinOutcome make(int tosses, int heads, CoinSampling sampling);
};

/// Pr(heads <= observed | tosses, p0): lower-tail binomial sum.
double binomial_p(const CoinOutcome& outcome, double p0);

/// Pr(first head needs at least `tosses` tosses | p0) = (1 - p0)^(tosses - 1).
double negative_binomial_p(const CoinOutcome& outcome, double p0);

/// fixed_n:          C(n, h) p^h (1 - p)^(n - h)
/// until_first_head: p (1 - p)^(tosses - 1)
std::vector<double> coin_likelihood(const CoinOutcome& outcome, std::span<const double> grid);

double binomial_coefficient(int n, int k);

}  // namespace plike
