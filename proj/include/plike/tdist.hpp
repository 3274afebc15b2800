#pragma once

// Central and non-central Student-t distribution primitives.
//
// All functions are pure and thread-safe. Arguments are validated and
// violations raise plike::DomainError.

namespace plike {

/// Degrees of freedom; strictly positive.
class Df {
public:
    explicit Df(double value);
    double value() const noexcept { return value_; }

private:
    double value_;
};

/// Noncentrality parameter; finite.
class Ncp {
public:
    explicit Ncp(double value);
    double value() const noexcept { return value_; }

private:
    double value_;
};

double normal_cdf(double z) noexcept;
double normal_pdf(double z) noexcept;

/// Regularized incomplete beta function I_x(a, b), evaluated by continued
/// fraction. Throws ConvergenceError if the fraction fails to converge.
double incomplete_beta(double x, double a, double b);

double central_t_cdf(double t, Df df);

/// Upper tail 1 - cdf(t), accurate far into the tail.
double central_t_sf(double t, Df df);

double central_t_pdf(double t, Df df);

double central_t_quantile(double p, Df df);

/// The t with central_t_sf(t) == alpha. Keeps full relative precision for
/// tiny alpha, where 1 - alpha would round to one.
double central_t_upper_quantile(double alpha, Df df);

/// Non-central t CDF from a Poisson-weighted incomplete beta series summed
/// outward from the Poisson mode. Relative truncation tolerance 1e-12.
double noncentral_t_cdf(double t, Df df, Ncp ncp);

/// Upper tail 1 - cdf(t).
double noncentral_t_sf(double t, Df df, Ncp ncp);

/// Non-central t density. Evaluated from the mixture representation
///
///   f(t) = C(t) * integral_0^inf x^df exp(-(x - mu)^2 / 2) dx,
///   mu = ncp * t / sqrt(df + t^2),
///
/// whose integrand is positive and log-concave, so the result keeps its
/// relative accuracy deep in the tails.
double noncentral_t_pdf(double t, Df df, Ncp ncp);

}  // namespace plike
