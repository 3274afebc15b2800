#pragma once

// Seeded Monte Carlo engine for (effect size, P-value) clouds, their vertical
// and horizontal histogram slices, and the two-stage stopping-rule design.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "plike/significance.hpp"

namespace plike {

/// fixed_n tests once. two_stage retests after adding `stage2_increment`
/// observations per group whenever the first P lands in [band_low, band_high].
struct StoppingRule {
    enum class Kind { fixed_n, two_stage };

    Kind kind = Kind::fixed_n;
    double band_low = 0.05;
    double band_high = 0.15;
    int stage2_increment = 5;

    static StoppingRule fixed_n() { return {}; }
    static StoppingRule two_stage(double low = 0.05, double high = 0.15, int increment = 5) {
        return {Kind::two_stage, low, high, increment};
    }
};

struct ThetaMode {
    enum class Kind { uniform, fixed };

    Kind kind = Kind::uniform;
    double lo = -4.0;
    double hi = 4.0;

    static ThetaMode uniform(double lo, double hi) { return {Kind::uniform, lo, hi}; }
    static ThetaMode fixed(double theta) { return {Kind::fixed, theta, theta}; }
};

struct SimConfig {
    TestSpec spec;
    std::int64_t runs = 1;
    ThetaMode theta = ThetaMode::uniform(-4.0, 4.0);
    std::uint64_t seed = 0;
    StoppingRule rule = StoppingRule::fixed_n();
    /// Worker threads. Results are identical for every worker count.
    int workers = 1;
    /// Upper bound on simulated observations (all groups, all stages).
    double sample_budget = 2e10;

    /// Throws DomainError for inconsistent settings.
    void validate() const;
    /// Worst-case observation count for the configured runs.
    double planned_samples() const;
};

struct CloudRecord {
    double theta;
    double p;
    int stage;    // 1 or 2
    int final_n;  // per-group sample size of the reported test
};

struct PCloud {
    std::vector<CloudRecord> records;
    std::optional<SimConfig> config;

    /// Uniform-mode bounds when the config is known, else the data range.
    std::pair<double, double> theta_range() const;
};

/// Simulates `config.runs` experiments. Run i draws from stream i of the seed,
/// so the cloud is bit-identical for a given seed regardless of workers.
/// Throws BudgetError when planned_samples() exceeds the budget.
PCloud run_cloud(const SimConfig& config);

enum class SliceAxis { vertical, horizontal };

/// Equal-width histogram normalized so that sum(density) * width == 1.
struct Histogram {
    SliceAxis axis;
    double lo;
    double hi;
    std::vector<std::size_t> counts;
    std::vector<double> density;
    std::size_t total = 0;

    std::size_t bins() const noexcept { return counts.size(); }
    double width() const noexcept { return (hi - lo) / static_cast<double>(counts.size()); }
    double lower(std::size_t i) const noexcept { return lo + static_cast<double>(i) * width(); }
    double upper(std::size_t i) const noexcept { return lo + static_cast<double>(i + 1) * width(); }
    double center(std::size_t i) const noexcept { return lo + (static_cast<double>(i) + 0.5) * width(); }
};

/// Histogram over P in [0, 1] of records with theta in [theta_lo, theta_hi].
/// Optionally restricted to one stopping stage. Throws EmptySliceError.
Histogram vertical_slice(const PCloud& cloud, double theta_lo, double theta_hi, int bins,
                         std::optional<int> stage = std::nullopt);

/// Histogram over theta of records with P in [p_lo, p_hi]. The theta axis
/// defaults to cloud.theta_range(). Throws EmptySliceError.
Histogram horizontal_slice(const PCloud& cloud, double p_lo, double p_hi, int bins,
                           std::optional<std::pair<double, double>> theta_range = std::nullopt,
                           std::optional<int> stage = std::nullopt);

/// Largest standardized deviation between observed bin counts and expected
/// bin probabilities (which must sum to one). Bins whose expected count falls
/// below `min_expected` are pooled into a single cell before testing.
struct HistogramCheck {
    double max_abs_z;
    std::size_t cells;
};
HistogramCheck compare_histogram(const Histogram& hist, std::span<const double> expected_mass,
                                 double min_expected = 5.0);

/// Kolmogorov-Smirnov distance of a sample from Uniform(0, 1).
double ks_uniform_distance(std::vector<double> sample);

/// Asymptotic two-sided Kolmogorov P-value for distance d at sample size n.
double ks_p_value(double d, std::size_t n);

/// Header `theta,p,stage,final_n`; 17 significant digits; '\n' line endings.
void write_cloud_csv(std::ostream& out, const PCloud& cloud);

/// Parses the format written by write_cloud_csv. Throws DataFormatError.
PCloud read_cloud_csv(std::istream& in);

}  // namespace plike
