#include "plike/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <string>
#include <thread>

#include "plike/csv.hpp"
#include "plike/errors.hpp"
#include "plike/rng.hpp"

namespace plike {

namespace {

// Per-worker sample buffers, sized for the largest stage.
struct Workspace {
    std::vector<double> a;
    std::vector<double> b;
};

// Appends `count` observations per group. Group a carries the effect:
// two-sample a ~ N(theta, 1), b ~ N(0, 1); paired differences a - b ~ N(theta, 1);
// one-sample a ~ N(theta, 1).
void draw_observations(Xoshiro256& gen, std::normal_distribution<double>& normal, TestFamily family,
                       double theta, int count, Workspace& ws) {
    for (int i = 0; i < count; ++i) {
        switch (family) {
            case TestFamily::one_sample:
                ws.a.push_back(theta + normal(gen));
                break;
            case TestFamily::two_sample:
                ws.a.push_back(theta + normal(gen));
                ws.b.push_back(normal(gen));
                break;
            case TestFamily::paired: {
                const double base = normal(gen);
                ws.b.push_back(base);
                ws.a.push_back(base + theta + normal(gen));
                break;
            }
        }
    }
}

CloudRecord simulate_run(const SimConfig& config, std::int64_t index, Workspace& ws) {
    Xoshiro256 gen = Xoshiro256::stream(config.seed, static_cast<std::uint64_t>(index));
    std::normal_distribution<double> normal(0.0, 1.0);

    double theta = config.theta.lo;
    if (config.theta.kind == ThetaMode::Kind::uniform)
        theta = std::uniform_real_distribution<double>(config.theta.lo, config.theta.hi)(gen);

    const TestSpec& spec = config.spec;
    ws.a.clear();
    ws.b.clear();
    draw_observations(gen, normal, spec.family(), theta, spec.n(), ws);
    const PValue first = t_test(ws.a, ws.b, spec).p;

    const StoppingRule& rule = config.rule;
    if (rule.kind == StoppingRule::Kind::fixed_n || first.value < rule.band_low ||
        first.value > rule.band_high)
        return {theta, first.value, 1, spec.n()};

    draw_observations(gen, normal, spec.family(), theta, rule.stage2_increment, ws);
    const TestSpec pooled = spec.with_n(spec.n() + rule.stage2_increment);
    return {theta, t_test(ws.a, ws.b, pooled).p.value, 2, pooled.n()};
}

std::size_t bin_index(double x, double lo, double width, std::size_t bins) {
    const auto i = static_cast<std::size_t>(std::floor((x - lo) / width));
    return std::min(i, bins - 1);
}

Histogram finish(Histogram h) {
    const double w = h.width();
    h.density.resize(h.counts.size());
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        h.density[i] = static_cast<double>(h.counts[i]) / (static_cast<double>(h.total) * w);
    return h;
}

void require_bins(int bins) {
    if (bins < 2) throw DomainError("a histogram needs at least 2 bins");
}

}  // namespace

void SimConfig::validate() const {
    if (runs < 1) throw DomainError("runs must be at least 1");
    if (workers < 1) throw DomainError("workers must be at least 1");
    if (theta.kind == ThetaMode::Kind::uniform && !(theta.lo < theta.hi))
        throw DomainError("uniform effect-size range needs lo < hi");
    if (!std::isfinite(theta.lo) || !std::isfinite(theta.hi))
        throw DomainError("effect-size bounds must be finite");
    if (rule.kind == StoppingRule::Kind::two_stage) {
        if (!(rule.band_low < rule.band_high)) throw DomainError("continue band needs low < high");
        if (rule.stage2_increment < 1) throw DomainError("stage-two increment must be positive");
    }
}

double SimConfig::planned_samples() const {
    const double groups = spec.family() == TestFamily::one_sample ? 1.0 : 2.0;
    const double per_group =
        spec.n() + (rule.kind == StoppingRule::Kind::two_stage ? rule.stage2_increment : 0);
    return static_cast<double>(runs) * groups * per_group;
}

std::pair<double, double> PCloud::theta_range() const {
    if (config && config->theta.kind == ThetaMode::Kind::uniform)
        return {config->theta.lo, config->theta.hi};
    if (records.empty()) throw EmptySliceError("cloud has no records");
    const auto [lo, hi] = std::minmax_element(records.begin(), records.end(),
                                              [](const auto& x, const auto& y) { return x.theta < y.theta; });
    if (lo->theta == hi->theta) return {lo->theta - 0.5, hi->theta + 0.5};
    return {lo->theta, hi->theta};
}

PCloud run_cloud(const SimConfig& config) {
    config.validate();
    if (config.planned_samples() > config.sample_budget)
        throw BudgetError("simulation needs " + std::to_string(config.planned_samples()) +
                          " observations, budget is " + std::to_string(config.sample_budget));

    PCloud cloud{std::vector<CloudRecord>(static_cast<std::size_t>(config.runs)), config};
    const int max_n = config.spec.n() + config.rule.stage2_increment;

    auto work = [&](std::int64_t begin, std::int64_t end) {
        Workspace ws;
        ws.a.reserve(static_cast<std::size_t>(max_n));
        ws.b.reserve(static_cast<std::size_t>(max_n));
        for (std::int64_t i = begin; i < end; ++i)
            cloud.records[static_cast<std::size_t>(i)] = simulate_run(config, i, ws);
    };

    const auto workers = static_cast<std::int64_t>(std::min<std::int64_t>(config.workers, config.runs));
    if (workers == 1) {
        work(0, config.runs);
        return cloud;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    {
        std::vector<std::jthread> threads;
        for (std::int64_t w = 0; w < workers; ++w) {
            const std::int64_t begin = config.runs * w / workers;
            const std::int64_t end = config.runs * (w + 1) / workers;
            threads.emplace_back([&, w, begin, end] {
                try {
                    work(begin, end);
                } catch (...) {
                    errors[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return cloud;
}

Histogram vertical_slice(const PCloud& cloud, double theta_lo, double theta_hi, int bins,
                         std::optional<int> stage) {
    require_bins(bins);
    if (!(theta_lo < theta_hi)) throw DomainError("effect-size band needs lo < hi");
    Histogram h{SliceAxis::vertical, 0.0, 1.0, std::vector<std::size_t>(static_cast<std::size_t>(bins)), {}, 0};
    for (const CloudRecord& r : cloud.records) {
        if (r.theta < theta_lo || r.theta > theta_hi) continue;
        if (stage && r.stage != *stage) continue;
        ++h.counts[bin_index(r.p, h.lo, h.width(), h.counts.size())];
        ++h.total;
    }
    if (h.total == 0) throw EmptySliceError("no records with effect size in the requested band");
    return finish(std::move(h));
}

Histogram horizontal_slice(const PCloud& cloud, double p_lo, double p_hi, int bins,
                           std::optional<std::pair<double, double>> theta_range,
                           std::optional<int> stage) {
    require_bins(bins);
    if (!(p_lo < p_hi)) throw DomainError("P band needs lo < hi");
    const auto [lo, hi] = theta_range ? *theta_range : cloud.theta_range();
    if (!(lo < hi)) throw DomainError("effect-size axis needs lo < hi");
    Histogram h{SliceAxis::horizontal, lo, hi, std::vector<std::size_t>(static_cast<std::size_t>(bins)), {}, 0};
    for (const CloudRecord& r : cloud.records) {
        if (r.p < p_lo || r.p > p_hi) continue;
        if (r.theta < lo || r.theta > hi) continue;
        if (stage && r.stage != *stage) continue;
        ++h.counts[bin_index(r.theta, h.lo, h.width(), h.counts.size())];
        ++h.total;
    }
    if (h.total == 0) throw EmptySliceError("no records with P in the requested band");
    return finish(std::move(h));
}

HistogramCheck compare_histogram(const Histogram& hist, std::span<const double> expected_mass,
                                 double min_expected) {
    if (expected_mass.size() != hist.bins())
        throw DomainError("expected masses must match the histogram bins");
    const double n = static_cast<double>(hist.total);
    auto z_score = [n](double observed, double mass) {
        const double mean = n * mass;
        const double var = n * mass * (1.0 - mass);
        if (var <= 0.0) return observed == mean ? 0.0 : HUGE_VAL;
        return std::abs(observed - mean) / std::sqrt(var);
    };

    HistogramCheck check{0.0, 0};
    double pooled_observed = 0.0;
    double pooled_mass = 0.0;
    for (std::size_t i = 0; i < hist.bins(); ++i) {
        const double mass = expected_mass[i];
        const double observed = static_cast<double>(hist.counts[i]);
        if (n * mass < min_expected) {
            pooled_observed += observed;
            pooled_mass += mass;
            continue;
        }
        check.max_abs_z = std::max(check.max_abs_z, z_score(observed, mass));
        ++check.cells;
    }
    if (pooled_mass > 0.0 || pooled_observed > 0.0) {
        check.max_abs_z = std::max(check.max_abs_z, z_score(pooled_observed, pooled_mass));
        ++check.cells;
    }
    return check;
}

double ks_uniform_distance(std::vector<double> sample) {
    if (sample.empty()) throw DomainError("KS distance needs a nonempty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double u = std::clamp(sample[i], 0.0, 1.0);
        d = std::max({d, static_cast<double>(i + 1) / n - u, u - static_cast<double>(i) / n});
    }
    return d;
}

double ks_p_value(double d, std::size_t n) {
    const double root_n = std::sqrt(static_cast<double>(n));
    const double lambda = (root_n + 0.12 + 0.11 / root_n) * d;
    if (lambda < 0.2) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

void write_cloud_csv(std::ostream& out, const PCloud& cloud) {
    out << "theta,p,stage,final_n\n";
    for (const CloudRecord& r : cloud.records) {
        out << csv::format_number(r.theta) << ',' << csv::format_number(r.p) << ',' << r.stage << ','
            << r.final_n << '\n';
    }
}

PCloud read_cloud_csv(std::istream& in) {
    PCloud cloud;
    std::string line;
    if (!std::getline(in, line)) throw DataFormatError("cloud CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "theta,p,stage,final_n")
        throw DataFormatError("cloud CSV header must be 'theta,p,stage,final_n'");
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = csv::split(line);
        if (fields.size() != 4)
            throw DataFormatError("line " + std::to_string(line_no) + ": expected 4 fields");
        try {
            CloudRecord r{csv::parse_number(fields[0]), csv::parse_number(fields[1]),
                          static_cast<int>(csv::parse_number(fields[2])),
                          static_cast<int>(csv::parse_number(fields[3]))};
            if (!(r.p > 0.0 && r.p < 1.0)) throw DataFormatError("P outside (0, 1)");
            if (r.stage != 1 && r.stage != 2) throw DataFormatError("stage must be 1 or 2");
            cloud.records.push_back(r);
        } catch (const DataFormatError& e) {
            throw DataFormatError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return cloud;
}

}  // namespace plike
