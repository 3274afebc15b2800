// plike: likelihoods, P-value densities and Monte Carlo clouds from the
// command line. Every subcommand writes CSV (stdout or --out).

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "output.hpp"
#include "plike/coin.hpp"
#include "plike/csv.hpp"
#include "plike/errors.hpp"
#include "plike/likelihood.hpp"
#include "plike/montecarlo.hpp"
#include "plike/pdensity.hpp"
#include "plike/power.hpp"
#include "plike/significance.hpp"

namespace {

using namespace plike;
using nlohmann::json;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitBudget = 4;

// Flag problems detected after CLI11 parsing; reported as usage errors.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SpecFlags {
    int n = 10;
    std::string family = "two_sample";
    std::string tails = "two";

    void add_to(CLI::App& app, int default_n, std::string default_tails = "two") {
        n = default_n;
        tails = std::move(default_tails);
        app.add_option("--n", n, "Per-group sample size")->capture_default_str();
        app.add_option("--family", family, "one_sample | two_sample | paired")->capture_default_str();
        app.add_option("--tails", tails, "one | two")->capture_default_str();
    }

    TestSpec build() const {
        const auto f = parse_family(family);
        if (!f) throw UsageError("unknown --family '" + family + "'");
        const auto t = parse_tails(tails);
        if (!t) throw UsageError("unknown --tails '" + tails + "'");
        return TestSpec(*f, n, *t);
    }

    json echo() const { return {{"n", n}, {"family", family}, {"tails", tails}}; }
};

struct OutputFlags {
    std::string out;
    std::string format = "csv";
    bool gnuplot = false;

    void add_to(CLI::App& app) {
        app.add_option("--out", out, "Output CSV path (stdout when omitted)");
        app.add_option("--format", format, "Output format (csv)")->check(CLI::IsMember({"csv"}));
        app.add_flag("--gnuplot", gnuplot, "Also write <out>.gp, a gnuplot script for the CSV");
    }
};

struct GridFlags {
    double from;
    double to;
    double step;

    void add_to(CLI::App& app, double lo, double hi, double by) {
        from = lo;
        to = hi;
        step = by;
        app.add_option("--from", from, "Grid start")->capture_default_str();
        app.add_option("--to", to, "Grid end")->capture_default_str();
        app.add_option("--step", step, "Grid step")->capture_default_str();
    }

    json echo() const { return {{"from", from}, {"to", to}, {"step", step}}; }
};

struct SimFlags {
    std::int64_t runs = 100000;
    std::string theta = "uniform:-4:4";
    std::optional<std::uint64_t> seed;
    int workers = 1;
    double budget = 2e10;

    void add_to(CLI::App& app) {
        app.add_option("--runs", runs, "Number of simulated experiments")->capture_default_str();
        app.add_option("--theta", theta, "Effect sizes: uniform:LO:HI or fixed:X")->capture_default_str();
        app.add_option("--seed", seed, "RNG seed (generated and printed when omitted)");
        app.add_option("--workers", workers, "Worker threads (output does not depend on it)")
            ->capture_default_str();
        app.add_option("--budget", budget, "Maximum simulated observations")->capture_default_str();
    }
};

std::vector<std::string> split_colon(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t colon = text.find(':', start);
        parts.push_back(text.substr(start, colon == std::string::npos ? std::string::npos : colon - start));
        if (colon == std::string::npos) break;
        start = colon + 1;
    }
    return parts;
}

double parse_flag_number(const std::string& text, const std::string& flag) {
    try {
        return csv::parse_number(text);
    } catch (const DataFormatError&) {
        throw UsageError(flag + ": '" + text + "' is not a number");
    }
}

std::pair<double, double> parse_range(const std::string& text, const std::string& flag) {
    const auto parts = split_colon(text);
    if (parts.size() != 2) throw UsageError(flag + " expects LO:HI");
    const double lo = parse_flag_number(parts[0], flag);
    const double hi = parse_flag_number(parts[1], flag);
    if (!(lo < hi)) throw UsageError(flag + " needs LO < HI");
    return {lo, hi};
}

ThetaMode parse_theta(const std::string& text) {
    const auto parts = split_colon(text);
    if (parts.size() == 3 && parts[0] == "uniform")
        return ThetaMode::uniform(parse_flag_number(parts[1], "--theta"), parse_flag_number(parts[2], "--theta"));
    if (parts.size() == 2 && parts[0] == "fixed") return ThetaMode::fixed(parse_flag_number(parts[1], "--theta"));
    throw UsageError("--theta expects uniform:LO:HI or fixed:X");
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
    if (seed) return *seed;
    std::random_device device;
    const std::uint64_t generated = (static_cast<std::uint64_t>(device()) << 32) ^ device();
    std::cerr << "seed: " << generated << "\n";
    return generated;
}

std::string line_script(const std::string& out, const std::string& xlabel, const std::string& ylabel) {
    return "set datafile separator ','\nset key off\nset xlabel '" + xlabel + "'\nset ylabel '" + ylabel +
           "'\nplot '" + out + "' every ::1 using 1:2 with lines\n";
}

// ---------------------------------------------------------------------------

void run_likelihood(cli::RunContext& ctx, const SpecFlags& spec_flags, double p, const GridFlags& grid,
                    bool raw, const std::string& method, const OutputFlags& output) {
    const TestSpec spec = spec_flags.build();
    if (!(p > 0.0 && p < 1.0)) throw UsageError("--p must lie strictly between 0 and 1");
    LikelihoodMethod chosen = LikelihoodMethod::density_ratio;
    if (method == "difference") chosen = LikelihoodMethod::finite_difference;
    if (method == "compat") chosen = LikelihoodMethod::one_sided_compat;

    const auto curve = likelihood_curve(PValue::make(p, spec.tails()), theta_grid(grid.from, grid.to, grid.step),
                                        spec, raw ? Normalization::raw_density_scale : Normalization::max_one,
                                        chosen);
    cli::CsvBuilder table({"theta", "likelihood"});
    for (std::size_t i = 0; i < curve.grid.size(); ++i) table.row({curve.grid[i], curve.values[i]});

    ctx.config = {{"spec", spec_flags.echo()}, {"p", p},         {"grid", grid.echo()},
                  {"raw", raw},                {"method", method}};
    cli::emit(ctx, table.text(), output.out,
              output.gnuplot ? line_script(output.out, "effect size", "likelihood") : "");
}

void run_pdensity(cli::RunContext& ctx, const SpecFlags& spec_flags, double theta,
                  const std::optional<GridFlags>& grid, const std::string& method, const OutputFlags& output) {
    const TestSpec spec = spec_flags.build();
    std::vector<double> xs = default_p_grid();
    if (grid) {
        if (!(grid->from >= 0.0 && grid->to <= 1.0)) throw UsageError("P grid must lie within [0, 1]");
        xs = theta_grid(grid->from, grid->to, grid->step);
    }
    const auto curve = p_density_curve(
        theta, spec, xs, method == "difference" ? DensityMethod::finite_difference : DensityMethod::closed_form);
    cli::CsvBuilder table({"p", "density"});
    for (std::size_t i = 0; i < curve.grid.size(); ++i) table.row({curve.grid[i], curve.values[i]});
    for (std::size_t i : curve.clamped)
        std::cerr << "note: P = " << curve.grid[i] << " was clamped to the representable range\n";

    ctx.config = {{"spec", spec_flags.echo()}, {"theta", theta}, {"method", method}};
    if (grid) ctx.config["grid"] = grid->echo();
    cli::emit(ctx, table.text(), output.out, output.gnuplot ? line_script(output.out, "P", "density") : "");
}

void run_power(cli::RunContext& ctx, const SpecFlags& spec_flags, double alpha, const GridFlags& grid,
               const OutputFlags& output) {
    const TestSpec spec = spec_flags.build();
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("--alpha must lie strictly between 0 and 1");
    const auto curve = power_curve(alpha, theta_grid(grid.from, grid.to, grid.step), spec);
    cli::CsvBuilder table({"theta", "power"});
    for (std::size_t i = 0; i < curve.grid.size(); ++i) table.row({curve.grid[i], curve.values[i]});
    ctx.config = {{"spec", spec_flags.echo()}, {"alpha", alpha}, {"grid", grid.echo()}};
    cli::emit(ctx, table.text(), output.out, output.gnuplot ? line_script(output.out, "effect size", "power") : "");
}

void run_simulation(cli::RunContext& ctx, const SpecFlags& spec_flags, const SimFlags& sim, StoppingRule rule,
                    const OutputFlags& output) {
    SimConfig config{.spec = spec_flags.build(),
                     .runs = sim.runs,
                     .theta = parse_theta(sim.theta),
                     .seed = resolve_seed(sim.seed),
                     .rule = rule,
                     .workers = sim.workers,
                     .sample_budget = sim.budget};
    const PCloud cloud = run_cloud(config);
    std::ostringstream buffer;
    write_cloud_csv(buffer, cloud);

    ctx.config = {{"spec", spec_flags.echo()}, {"runs", sim.runs},       {"theta", sim.theta},
                  {"seed", config.seed},       {"workers", sim.workers}, {"budget", sim.budget}};
    if (rule.kind == StoppingRule::Kind::two_stage)
        ctx.config["stopping"] = {{"band", {rule.band_low, rule.band_high}}, {"increment", rule.stage2_increment}};
    const std::string script = "set datafile separator ','\nset key off\nset xlabel 'effect size'\n"
                               "set ylabel 'P'\nplot '" + output.out + "' every ::1 using 1:2 with dots\n";
    cli::emit(ctx, buffer.str(), output.out, output.gnuplot ? script : "");
}

PCloud load_cloud(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataFormatError("cannot open cloud file '" + path + "'");
    return read_cloud_csv(in);
}

void run_slice(cli::RunContext& ctx, const std::string& cloud_path, const std::string& axis,
               const std::string& band_text, int bins, const std::string& range_text, std::optional<int> stage,
               const OutputFlags& output) {
    const auto band = parse_range(band_text, "--band");
    const PCloud cloud = load_cloud(cloud_path);
    Histogram hist;
    if (axis == "vertical") {
        if (!range_text.empty()) throw UsageError("--range applies to horizontal slices only");
        hist = vertical_slice(cloud, band.first, band.second, bins, stage);
    } else {
        std::optional<std::pair<double, double>> range;
        if (!range_text.empty()) range = parse_range(range_text, "--range");
        hist = horizontal_slice(cloud, band.first, band.second, bins, range, stage);
    }
    cli::CsvBuilder table({"lower", "upper", "center", "count", "density"});
    for (std::size_t i = 0; i < hist.bins(); ++i)
        table.row({hist.lower(i), hist.upper(i), hist.center(i), static_cast<double>(hist.counts[i]),
                   hist.density[i]});

    ctx.config = {{"cloud", cloud_path}, {"axis", axis},   {"band", band_text}, {"bins", bins},
                  {"range", range_text}, {"records", hist.total}};
    if (stage) ctx.config["stage"] = *stage;
    const std::string script = "set datafile separator ','\nset key off\nset style fill solid 0.5\n"
                               "plot '" + output.out + "' every ::1 using 3:5 with boxes\n";
    cli::emit(ctx, table.text(), output.out, output.gnuplot ? script : "");
}

void run_coin(cli::RunContext& ctx, int tosses, int heads, double p0, const GridFlags& grid,
              const OutputFlags& output) {
    const auto fixed = CoinOutcome::make(tosses, heads, CoinSampling::fixed_n);
    std::ostringstream report;
    report << "binomial_p," << csv::format_number(binomial_p(fixed, p0)) << "\n";
    const std::vector<double> probe{p0};
    if (heads == 1) {
        const auto sequential = CoinOutcome::make(tosses, heads, CoinSampling::until_first_head);
        report << "negative_binomial_p," << csv::format_number(negative_binomial_p(sequential, p0)) << "\n";
        report << "likelihood_ratio,"
               << csv::format_number(coin_likelihood(fixed, probe)[0] / coin_likelihood(sequential, probe)[0])
               << "\n";
    } else {
        report << "negative_binomial_p,NA\nlikelihood_ratio,NA\n";
    }

    if (!(grid.from > 0.0 && grid.to < 1.0)) throw UsageError("coin grid must lie inside (0, 1)");
    const auto xs = theta_grid(grid.from, grid.to, grid.step);
    const auto binomial = coin_likelihood(fixed, xs);
    cli::CsvBuilder table({"p", "binomial_likelihood", "negative_binomial_likelihood"});
    if (heads == 1) {
        const auto negative = coin_likelihood(CoinOutcome::make(tosses, 1, CoinSampling::until_first_head), xs);
        for (std::size_t i = 0; i < xs.size(); ++i) table.row({xs[i], binomial[i], negative[i]});
    } else {
        for (std::size_t i = 0; i < xs.size(); ++i)
            table.row_mixed({csv::format_number(xs[i]), csv::format_number(binomial[i]), "NA"});
    }

    std::cout << report.str();
    ctx.config = {{"tosses", tosses}, {"heads", heads}, {"p0", p0}, {"grid", grid.echo()}};
    if (!output.out.empty())
        cli::emit(ctx, table.text(), output.out,
                  output.gnuplot ? line_script(output.out, "probability of heads", "likelihood") : "");
}

std::vector<std::vector<double>> read_columns(const std::string& path, bool header) {
    std::ifstream in(path);
    if (!in) throw DataFormatError("cannot open data file '" + path + "'");
    std::vector<std::vector<double>> columns;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (header && line_no == 1) continue;
        const auto fields = csv::split(line);
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (columns.empty()) columns.resize(fields.size());
        if (fields.size() != columns.size())
            throw DataFormatError("line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(columns.size()) + " fields");
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (fields[c].empty()) continue;  // ragged columns
            try {
                columns[c].push_back(csv::parse_number(fields[c]));
            } catch (const DataFormatError& e) {
                throw DataFormatError("line " + std::to_string(line_no) + ": " + e.what());
            }
        }
    }
    if (columns.empty()) throw DataFormatError("data file '" + path + "' has no rows");
    return columns;
}

void run_ttest(cli::RunContext& ctx, const std::string& data_path, bool header, const std::string& family_text,
               const std::string& tails_text, const OutputFlags& output) {
    const auto family = parse_family(family_text);
    if (!family) throw UsageError("unknown --family '" + family_text + "'");
    const auto tails = parse_tails(tails_text);
    if (!tails) throw UsageError("unknown --tails '" + tails_text + "'");

    const auto columns = read_columns(data_path, header);
    const std::size_t needed = *family == TestFamily::one_sample ? 1 : 2;
    if (columns.size() < needed)
        throw DataFormatError("the " + std::string(to_string(*family)) + " test needs " + std::to_string(needed) +
                              " data columns");
    TTestResult result{};
    int n = 0;
    try {
        n = static_cast<int>(columns[0].size());
        if (needed == 2 && columns[1].size() != columns[0].size())
            throw DataFormatError("both groups must have the same number of observations");
        const TestSpec spec(*family, n, *tails);
        result = needed == 1 ? t_test(columns[0], spec) : t_test(columns[0], columns[1], spec);
    } catch (const DomainError& e) {
        throw DataFormatError(e.what());
    } catch (const DegenerateInputError& e) {
        throw DataFormatError(e.what());
    }

    const TestSpec spec(*family, n, *tails);
    const char* direction = result.p.direction == Direction::positive   ? "positive"
                            : result.p.direction == Direction::negative ? "negative"
                                                                        : "ambiguous";
    cli::CsvBuilder table({"family", "n", "df", "t", "p", "tails", "direction"});
    table.row_mixed({std::string(to_string(*family)), std::to_string(n), csv::format_number(spec.df().value()),
                     csv::format_number(result.t), csv::format_number(result.p.value),
                     std::string(to_string(*tails)), direction});
    ctx.config = {{"data", data_path}, {"header", header}, {"family", family_text}, {"tails", tails_text}};
    cli::emit(ctx, table.text(), output.out, "");
}

std::string join_arguments(int argc, char** argv) {
    std::string line;
    for (int i = 0; i < argc; ++i) {
        if (i) line += ' ';
        line += argv[i];
    }
    return line;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Likelihood functions from P-values, P-value densities and Monte Carlo P clouds."};
    app.set_version_flag("--version", PLIKE_VERSION);
    app.require_subcommand(1);

    cli::RunContext ctx;
    ctx.command_line = join_arguments(argc, argv);
    OutputFlags output;

    // likelihood
    SpecFlags lik_spec;
    double lik_p = 0.0;
    GridFlags lik_grid;
    bool lik_raw = false;
    std::string lik_method = "density";
    auto* likelihood = app.add_subcommand("likelihood", "Likelihood of effect sizes given an observed P");
    lik_spec.add_to(*likelihood, 10);
    likelihood->add_option("--p", lik_p, "Observed P value")->required();
    lik_grid.add_to(*likelihood, -1.0, 5.0, 0.01);
    likelihood->add_flag("--raw", lik_raw, "Raw density scale instead of max-one normalization");
    likelihood->add_option("--method", lik_method, "density | difference | compat (one-sided difference, ignores --tails)")
        ->check(CLI::IsMember({"density", "difference", "compat"}))
        ->capture_default_str();
    output.add_to(*likelihood);

    // pdensity
    SpecFlags pd_spec;
    double pd_theta = 0.0;
    GridFlags pd_grid;
    std::string pd_method = "closed";
    auto* pdensity = app.add_subcommand("pdensity", "Density of P for a given effect size");
    pd_spec.add_to(*pdensity, 10);
    pdensity->add_option("--effect", pd_theta, "Effect size (standardized)")->required();
    pd_grid.add_to(*pdensity, 0.001, 0.999, 0.001);
    pdensity->add_option("--method", pd_method, "closed | difference")
        ->check(CLI::IsMember({"closed", "difference"}))
        ->capture_default_str();
    output.add_to(*pdensity);

    // power
    SpecFlags pw_spec;
    double pw_alpha = 0.05;
    GridFlags pw_grid;
    auto* power_cmd = app.add_subcommand("power", "Power as a function of effect size");
    pw_spec.add_to(*power_cmd, 10);
    power_cmd->add_option("--alpha", pw_alpha, "Significance level")->capture_default_str();
    pw_grid.add_to(*power_cmd, -4.0, 4.0, 0.01);
    output.add_to(*power_cmd);

    // cloud
    SpecFlags cloud_spec;
    SimFlags cloud_sim;
    auto* cloud = app.add_subcommand("cloud", "Simulate a cloud of (effect size, P) pairs");
    cloud_spec.add_to(*cloud, 10);
    cloud_sim.add_to(*cloud);
    output.add_to(*cloud);

    // stopping
    SpecFlags stop_spec;
    SimFlags stop_sim;
    std::string stop_band = "0.05:0.15";
    int stop_increment = 5;
    auto* stopping = app.add_subcommand("stopping", "Simulate the two-stage stopping rule");
    stop_spec.add_to(*stopping, 5, "one");
    stop_sim.add_to(*stopping);
    stopping->add_option("--band", stop_band, "Continue when P lies in LO:HI")->capture_default_str();
    stopping->add_option("--increment", stop_increment, "Observations added per group")->capture_default_str();
    output.add_to(*stopping);

    // slice
    std::string slice_cloud, slice_axis = "vertical", slice_band, slice_range;
    int slice_bins = 50;
    std::optional<int> slice_stage;
    auto* slice = app.add_subcommand("slice", "Histogram of a vertical or horizontal slice of a cloud CSV");
    slice->add_option("--cloud", slice_cloud, "Cloud CSV written by 'cloud' or 'stopping'")->required();
    slice->add_option("--axis", slice_axis, "vertical (theta band) | horizontal (P band)")
        ->check(CLI::IsMember({"vertical", "horizontal"}))
        ->capture_default_str();
    slice->add_option("--band", slice_band, "LO:HI of the sliced coordinate")->required();
    slice->add_option("--bins", slice_bins, "Histogram bins")->capture_default_str();
    slice->add_option("--range", slice_range, "Effect-size axis LO:HI for horizontal slices");
    slice->add_option("--stage", slice_stage, "Only records reported at this stage (1 or 2)");
    output.add_to(*slice);

    // coin
    int coin_tosses = 6, coin_heads = 1;
    double coin_p0 = 0.5;
    GridFlags coin_grid;
    auto* coin = app.add_subcommand("coin", "The two-statisticians coin example");
    coin->add_option("--tosses", coin_tosses, "Number of tosses")->capture_default_str();
    coin->add_option("--heads", coin_heads, "Number of heads")->capture_default_str();
    coin->add_option("--p0", coin_p0, "Null probability of heads")->capture_default_str();
    coin_grid.add_to(*coin, 0.001, 0.999, 0.001);
    output.add_to(*coin);

    // ttest
    std::string tt_data, tt_family = "two_sample", tt_tails = "two";
    bool tt_header = false;
    auto* ttest = app.add_subcommand("ttest", "Student t test on a comma-separated data file");
    ttest->add_option("--data", tt_data, "One sample per column")->required();
    ttest->add_flag("--header", tt_header, "First line is a header");
    ttest->add_option("--family", tt_family, "one_sample | two_sample | paired")->capture_default_str();
    ttest->add_option("--tails", tt_tails, "one | two")->capture_default_str();
    output.add_to(*ttest);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*likelihood) {
            ctx.subcommand = "likelihood";
            run_likelihood(ctx, lik_spec, lik_p, lik_grid, lik_raw, lik_method, output);
        } else if (*pdensity) {
            ctx.subcommand = "pdensity";
            const bool custom = pdensity->count("--from") + pdensity->count("--to") + pdensity->count("--step") > 0;
            run_pdensity(ctx, pd_spec, pd_theta, custom ? std::optional(pd_grid) : std::nullopt, pd_method, output);
        } else if (*power_cmd) {
            ctx.subcommand = "power";
            run_power(ctx, pw_spec, pw_alpha, pw_grid, output);
        } else if (*cloud) {
            ctx.subcommand = "cloud";
            run_simulation(ctx, cloud_spec, cloud_sim, StoppingRule::fixed_n(), output);
        } else if (*stopping) {
            ctx.subcommand = "stopping";
            const auto band = parse_range(stop_band, "--band");
            run_simulation(ctx, stop_spec, stop_sim, StoppingRule::two_stage(band.first, band.second, stop_increment),
                           output);
        } else if (*slice) {
            ctx.subcommand = "slice";
            run_slice(ctx, slice_cloud, slice_axis, slice_band, slice_bins, slice_range, slice_stage, output);
        } else if (*coin) {
            ctx.subcommand = "coin";
            run_coin(ctx, coin_tosses, coin_heads, coin_p0, coin_grid, output);
        } else if (*ttest) {
            ctx.subcommand = "ttest";
            run_ttest(ctx, tt_data, tt_header, tt_family, tt_tails, output);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DataFormatError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitData;
    } catch (const EmptySliceError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitData;
    } catch (const BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
