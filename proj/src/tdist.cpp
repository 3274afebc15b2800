#include "plike/tdist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "plike/errors.hpp"
#include "quadrature.hpp"

namespace plike {

namespace {

constexpr double kSeriesTolerance = 1e-12;
constexpr double kExtremeT = 1e6;
constexpr int kBetaFractionCap = 20000;
constexpr long kSeriesCap = 200000;

void require_finite(double t, const char* what) {
    if (!std::isfinite(t)) throw DomainError(std::string(what) + " must be finite");
}

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_fraction(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kBetaFractionCap; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < eps) return h;
    }
    throw ConvergenceError("incomplete beta continued fraction did not converge");
}

// I_x(a, b) with y = 1 - x supplied separately to keep precision near x = 1.
double beta_regularized(double x, double y, double a, double b) {
    if (x <= 0.0) return 0.0;
    if (y <= 0.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log(y);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_fraction(a, b, x) / a;
    return 1.0 - front * beta_fraction(b, a, y) / b;
}

// 0.5 * I_{df/(df+t^2)}(df/2, 1/2): the central t mass beyond |t|.
double central_tail(double t, double nu) {
    const double t2 = t * t;
    const double denom = nu + t2;
    return 0.5 * beta_regularized(nu / denom, t2 / denom, 0.5 * nu, 0.5);
}

// Non-central t CDF for t >= 0:
//   F = Phi(-d) + 1/2 sum_j [ P_j I_x(j+1/2, v/2) + d/sqrt(2) Q_j I_x(j+1, v/2) ]
// with P_j = e^-L L^j / j!, Q_j = e^-L L^j / Gamma(j+3/2), L = d^2/2,
// x = t^2/(v+t^2). Summation starts at the Poisson mode and proceeds in both
// directions using the incomplete beta recurrences.
double nct_cdf_nonnegative(double t, double nu, double delta) {
    const double t2 = t * t;
    const double x = t2 / (nu + t2);
    const double y = nu / (nu + t2);
    if (x <= 0.0) return normal_cdf(-delta);

    const double b = 0.5 * nu;
    const double lambda = 0.5 * delta * delta;
    const double c = delta / std::numbers::sqrt2;
    const double abs_c = std::abs(c);
    if (lambda == 0.0) return 0.5 + 0.5 * beta_regularized(x, y, 0.5, b);

    const double k = std::floor(lambda);
    const double log_x = std::log(x);
    const double log_y = std::log(y);
    const double log_lambda = std::log(lambda);
    const double lg_b = std::lgamma(b);

    const double p_mode = std::exp(-lambda + k * log_lambda - std::lgamma(k + 1.0));
    const double q_mode = std::exp(-lambda + k * log_lambda - std::lgamma(k + 1.5));
    const double ratio_mode = std::exp(std::lgamma(k + 1.0) - std::lgamma(k + 1.5));

    auto recurrence_gap = [&](double a) {
        // I_x(a, b) - I_x(a + 1, b)
        return std::exp(std::lgamma(a + b) - std::lgamma(a + 1.0) - lg_b + a * log_x + b * log_y);
    };

    const double ia_mode = beta_regularized(x, y, k + 0.5, b);
    const double ib_mode = beta_regularized(x, y, k + 1.0, b);
    const double ga_mode = recurrence_gap(k + 0.5);
    const double gb_mode = recurrence_gap(k + 1.0);

    double sum = p_mode * ia_mode + c * q_mode * ib_mode;
    double magnitude = std::abs(p_mode * ia_mode) + std::abs(c * q_mode * ib_mode);
    double poisson_mass = p_mode;

    // Backward: j = k-1 .. 0.
    {
        double p = p_mode, q = q_mode, ratio = ratio_mode;
        double ia = ia_mode, ib = ib_mode;
        double ga = ga_mode, gb = gb_mode;
        double a1 = k + 0.5, a2 = k + 1.0;
        for (double j = k - 1.0; j >= 0.0; j -= 1.0) {
            ga *= a1 / (x * (a1 - 1.0 + b));
            gb *= a2 / (x * (a2 - 1.0 + b));
            a1 -= 1.0;
            a2 -= 1.0;
            ia = std::min(1.0, ia + ga);
            ib = std::min(1.0, ib + gb);
            p *= (j + 1.0) / lambda;
            q *= (j + 1.5) / lambda;
            ratio *= (j + 1.5) / (j + 1.0);
            const double term_a = p * ia;
            const double term_b = c * q * ib;
            sum += term_a + term_b;
            magnitude += std::abs(term_a) + std::abs(term_b);
            poisson_mass += p;
            if (j < lambda) {
                const double below = p * j / (lambda - j);
                const double bound = below * (1.0 + abs_c * ratio);
                if (bound <= kSeriesTolerance * std::max(magnitude, std::numeric_limits<double>::min()))
                    break;
            }
        }
    }

    // Forward: j = k+1, k+2, ...
    {
        double p = p_mode, q = q_mode, ratio = ratio_mode;
        double ia = ia_mode, ib = ib_mode;
        double ga = ga_mode, gb = gb_mode;
        double a1 = k + 0.5, a2 = k + 1.0;
        long steps = 0;
        for (double j = k + 1.0;; j += 1.0) {
            if (++steps > kSeriesCap)
                throw ConvergenceError("non-central t series exceeded its iteration cap");
            ia = std::max(0.0, ia - ga);
            ib = std::max(0.0, ib - gb);
            ga *= x * (a1 + b) / (a1 + 1.0);
            gb *= x * (a2 + b) / (a2 + 1.0);
            a1 += 1.0;
            a2 += 1.0;
            p *= lambda / j;
            q *= lambda / (j + 0.5);
            ratio *= j / (j + 0.5);
            const double term_a = p * ia;
            const double term_b = c * q * ib;
            sum += term_a + term_b;
            magnitude += std::abs(term_a) + std::abs(term_b);
            poisson_mass += p;
            const double remaining = std::max(0.0, 1.0 - poisson_mass);
            const double bound = remaining * (ia + abs_c * ratio * ib);
            if (bound <= kSeriesTolerance * std::max(magnitude, std::numeric_limits<double>::min()))
                break;
            if (p == 0.0 && j > lambda) break;
        }
    }

    const double f = normal_cdf(-delta) + 0.5 * sum;
    return std::clamp(f, 0.0, 1.0);
}

// Solves central_t_sf(t) = alpha for alpha in (0, 0.5) with a bracketed
// Newton iteration on log sf(t).
double upper_quantile_solve(double alpha, double nu) {
    const double target = std::log(alpha);
    double lo = 0.0;
    double hi = 1.0;
    while (central_tail(hi, nu) > alpha) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw ConvergenceError("t quantile bracket overflow");
    }
    double t = 0.5 * (lo + hi);
    const Df df(nu);
    for (int iter = 0; iter < 500; ++iter) {
        const double sf = central_tail(t, nu);
        const double g = std::log(sf) - target;
        if (g > 0.0) lo = t; else hi = t;
        if (g == 0.0) return t;
        const double slope = -central_t_pdf(t, df) / sf;
        double next = t - g / slope;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - t) <= 1e-15 * std::max(1.0, std::abs(t)) || hi - lo <= 1e-15 * hi)
            return next;
        t = next;
    }
    throw ConvergenceError("t quantile iteration did not converge");
}

// Integral of exp(f) over [lo, hi] for a log-concave f peaked at `peak`,
// in geometrically widening panels outward from the peak.
template <class F>
double integrate_from_peak(F& h, double lo, double peak, double hi, double scale, double rel_tol = 1e-14) {
    const double tol = rel_tol * scale;
    double total = 0.0;
    for (int side = -1; side <= 1; side += 2) {
        const double end = side < 0 ? lo : hi;
        double width = scale;
        double from = peak;
        while (side < 0 ? from > end : from < end) {
            double to = from + side * width;
            if (side < 0 ? to < end : to > end) to = end;
            const double a = std::min(from, to), b = std::max(from, to);
            const auto [estimate, error] = detail::GaussKronrod15::apply(h, a, b);
            total += error <= tol ? estimate : detail::integrate_adaptive(h, a, b, tol, 30);
            from = to;
            width *= 2.0;
        }
    }
    return total;
}

// log Phi(z), accurate far into the lower tail where erfc underflows.
constexpr double kAsymptoticZ = -30.0;

double log_normal_cdf(double z) {
    if (z > kAsymptoticZ) return std::log(0.5 * std::erfc(-z / std::numbers::sqrt2));
    const double z2 = z * z;
    return -0.5 * z2 - std::log(-z) - 0.5 * std::log(2.0 * std::numbers::pi) +
           std::log1p(-1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2));
}

// log Phi(z) - log Phi(zp) without cancelling two large negative numbers.
double log_normal_cdf_change(double z, double zp) {
    if (z > kAsymptoticZ || zp > kAsymptoticZ) return log_normal_cdf(z) - log_normal_cdf(zp);
    auto tail = [](double u) {
        const double u2 = u * u;
        return std::log1p(-1.0 / u2 + 3.0 / (u2 * u2) - 15.0 / (u2 * u2 * u2));
    };
    return -0.5 * (z - zp) * (z + zp) - std::log(z / zp) + tail(z) - tail(zp);
}

// P(T <= t) as the chi mixture  int_0^inf Phi(t s / sqrt(v) - d) chi_v(s) ds.
// Every term is positive, so small tails keep full relative accuracy where
// the incomplete-beta series would have to be complemented.
double nct_lower_by_mixture(double t, double nu, double delta) {
    const double slope = t / std::sqrt(nu);
    auto log_integrand = [&](double s) {
        return (nu - 1.0) * std::log(s) - 0.5 * s * s + log_normal_cdf(slope * s - delta);
    };
    // The log-integrand is concave for v >= 1; ternary search for its peak.
    double a = 0.0, b = std::sqrt(nu) + 40.0;
    for (int i = 0; i < 200 && b - a > 1e-10 * (1.0 + b); ++i) {
        const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
        if (log_integrand(m1) < log_integrand(m2))
            a = m1;
        else
            b = m2;
    }
    const double peak = std::max(0.5 * (a + b), 1e-300);
    const double log_norm = -(0.5 * nu - 1.0) * std::log(2.0) - std::lgamma(0.5 * nu);
    const double log_scale = log_norm + log_integrand(peak);
    // The integral of the peak-normalized integrand is below 30.
    if (log_scale + std::log(30.0) < std::log(std::numeric_limits<double>::min())) return 0.0;

    const double z_peak = slope * peak - delta;
    auto h = [&](double s) {
        if (s <= 0.0) return 0.0;
        return std::exp((nu - 1.0) * std::log(s / peak) - 0.5 * (s - peak) * (s + peak) +
                        log_normal_cdf_change(slope * s - delta, z_peak));
    };
    const double scale = std::max(peak / std::sqrt(peak * peak + std::max(nu - 1.0, 0.0)), 0.05);
    const double integral =
        integrate_from_peak(h, std::max(0.0, peak - 14.0), peak, peak + 14.0, scale, kSeriesTolerance);
    return std::exp(log_scale) * integral;
}

// Complemented series values below this are recomputed by the mixture.
constexpr double kComplementLimit = 1e-2;

double complemented_tail(double t, double nu, double delta) {
    // 1 - F(t; v, d) for t >= 0, equal to F(-t; v, -d).
    const double value = 1.0 - nct_cdf_nonnegative(t, nu, delta);
    if (value >= kComplementLimit || nu < 1.0) return std::max(value, 0.0);
    return nct_lower_by_mixture(-t, nu, -delta);
}

}  // namespace

Df::Df(double value) : value_(value) {
    if (!(value > 0.0) || std::isnan(value)) throw DomainError("degrees of freedom must be positive");
}

Ncp::Ncp(double value) : value_(value) { require_finite(value, "noncentrality parameter"); }

double normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z) noexcept {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double incomplete_beta(double x, double a, double b) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete beta argument must lie in [0, 1]");
    if (!(a > 0.0 && b > 0.0)) throw DomainError("incomplete beta shape parameters must be positive");
    return beta_regularized(x, 1.0 - x, a, b);
}

double central_t_cdf(double t, Df df) {
    require_finite(t, "t");
    const double tail = central_tail(t, df.value());
    return t > 0.0 ? 1.0 - tail : tail;
}

double central_t_sf(double t, Df df) {
    require_finite(t, "t");
    const double tail = central_tail(t, df.value());
    return t > 0.0 ? tail : 1.0 - tail;
}

double central_t_pdf(double t, Df df) {
    require_finite(t, "t");
    const double nu = df.value();
    const double log_density = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                               0.5 * std::log(nu * std::numbers::pi) -
                               0.5 * (nu + 1.0) * std::log1p(t * t / nu);
    return std::exp(log_density);
}

double central_t_upper_quantile(double alpha, Df df) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("tail probability must lie in (0, 1)");
    if (alpha == 0.5) return 0.0;
    if (alpha < 0.5) return upper_quantile_solve(alpha, df.value());
    return -upper_quantile_solve(1.0 - alpha, df.value());
}

double central_t_quantile(double p, Df df) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("probability must lie in (0, 1)");
    if (p == 0.5) return 0.0;
    if (p > 0.5) return upper_quantile_solve(1.0 - p, df.value());
    return -upper_quantile_solve(p, df.value());
}

double noncentral_t_cdf(double t, Df df, Ncp ncp) {
    require_finite(t, "t");
    if (t > kExtremeT) return 1.0;
    if (t < -kExtremeT) return 0.0;
    const double delta = ncp.value();
    if (delta == 0.0) return central_t_cdf(t, df);
    if (t >= 0.0) return nct_cdf_nonnegative(t, df.value(), delta);
    return complemented_tail(-t, df.value(), -delta);
}

double noncentral_t_sf(double t, Df df, Ncp ncp) {
    require_finite(t, "t");
    if (t > kExtremeT) return 0.0;
    if (t < -kExtremeT) return 1.0;
    const double delta = ncp.value();
    if (delta == 0.0) return central_t_sf(t, df);
    if (t >= 0.0) return complemented_tail(t, df.value(), delta);
    return nct_cdf_nonnegative(-t, df.value(), -delta);
}

double noncentral_t_pdf(double t, Df df, Ncp ncp) {
    require_finite(t, "t");
    const double nu = df.value();
    const double delta = ncp.value();
    const double s2 = nu + t * t;
    const double mu = delta * t / std::sqrt(s2);

    const double log_front = std::log(2.0) - 0.5 * std::log(2.0 * std::numbers::pi) -
                             0.5 * std::log(nu) + 0.5 * (nu + 1.0) * (std::log(nu) - std::log(s2)) -
                             0.5 * nu * std::log(2.0) - std::lgamma(0.5 * nu) -
                             0.5 * delta * delta * nu / s2;

    // Mode of x^nu exp(-(x - mu)^2 / 2) on (0, inf).
    const double root = std::sqrt(mu * mu + 4.0 * nu);
    const double peak = mu >= 0.0 ? 0.5 * (mu + root) : 2.0 * nu / (root - mu);
    auto log_integrand = [&](double x) { return nu * std::log(x) - 0.5 * (x - mu) * (x - mu); };
    const double log_peak = log_integrand(peak);
    if (log_front + log_peak + std::log(30.0) < std::log(std::numeric_limits<double>::min())) return 0.0;
    auto h = [&](double x) {
        if (x <= 0.0) return 0.0;
        return std::exp(nu * std::log(x / peak) - 0.5 * (x - peak) * (x + peak - 2.0 * mu));
    };

    // Curvature of the log-integrand is at most -1, so 14 units either side
    // of the peak leaves a relative remainder below exp(-98).
    const double scale = peak / std::sqrt(peak * peak + nu);
    const double lo = std::max(0.0, peak - 14.0);
    const double hi = peak + 14.0;
    const double integral = integrate_from_peak(h, lo, peak, hi, scale);
    return std::exp(log_front + log_peak) * integral;
}

}  // namespace plike
