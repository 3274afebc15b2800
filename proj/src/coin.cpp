#include "plike/coin.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "plike/errors.hpp"

namespace plike {

namespace {

void require_probability(double p, const char* what) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError(std::string(what) + " must lie in (0, 1)");
}

// p^heads (1 - p)^(tosses - heads); shared by both designs so their ratio is
// exactly the binomial coefficient.
double sequence_probability(double p, int tosses, int heads) {
    return std::pow(p, heads) * std::pow(1.0 - p, tosses - heads);
}

}  // namespace

CoinOutcome CoinOutcome::make(int tosses, int heads, CoinSampling sampling) {
    if (tosses < 1) throw DomainError("at least one toss is required");
    if (heads < 0 || heads > tosses) throw DomainError("heads must lie in [0, tosses]");
    if (sampling == CoinSampling::until_first_head && heads != 1)
        throw DomainError("toss-until-first-head outcomes contain exactly one head");
    return {tosses, heads, sampling};
}

double binomial_coefficient(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return std::round(c);
}

double binomial_p(const CoinOutcome& outcome, double p0) {
    require_probability(p0, "null head probability");
    if (outcome.sampling != CoinSampling::fixed_n)
        throw DomainError("binomial P requires a fixed-n outcome");
    const int n = outcome.tosses;
    double total = 0.0;
    for (int k = 0; k <= outcome.heads; ++k)
        total += binomial_coefficient(n, k) * std::pow(p0, k) * std::pow(1.0 - p0, n - k);
    return std::min(total, 1.0);
}

double negative_binomial_p(const CoinOutcome& outcome, double p0) {
    require_probability(p0, "null head probability");
    if (outcome.sampling != CoinSampling::until_first_head)
        throw DomainError("negative binomial P requires a toss-until-first-head outcome");
    return std::pow(1.0 - p0, outcome.tosses - 1);
}

std::vector<double> coin_likelihood(const CoinOutcome& outcome, std::span<const double> grid) {
    std::vector<double> values;
    values.reserve(grid.size());
    for (double p : grid) {
        require_probability(p, "likelihood grid point");
        const double sequence = sequence_probability(p, outcome.tosses, outcome.heads);
        values.push_back(outcome.sampling == CoinSampling::fixed_n
                             ? binomial_coefficient(outcome.tosses, outcome.heads) * sequence
                             : sequence);
    }
    return values;
}

}  // namespace plike
