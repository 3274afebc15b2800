#pragma once

// Adaptive 15-point Gauss-Kronrod quadrature (internal).

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

namespace plike::detail {

struct GaussKronrod15 {
    static constexpr std::array<double, 8> nodes = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
    static constexpr std::array<double, 8> kronrod_weights = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    // Gauss weights for nodes[1], nodes[3], nodes[5], nodes[7].
    static constexpr std::array<double, 4> gauss_weights = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

    // Returns {kronrod estimate, |kronrod - gauss|}.
    template <class F>
    static std::pair<double, double> apply(F& f, double a, double b) {
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        const double fc = f(mid);
        double kronrod = fc * kronrod_weights[7];
        double gauss = fc * gauss_weights[3];
        for (int i = 0; i < 7; ++i) {
            const double dx = half * nodes[i];
            const double pair = f(mid - dx) + f(mid + dx);
            kronrod += kronrod_weights[i] * pair;
            if (i % 2 == 1) gauss += gauss_weights[i / 2] * pair;
        }
        return {kronrod * half, std::abs(kronrod - gauss) * half};
    }
};

template <class F>
double integrate_adaptive(F& f, double a, double b, double abs_tol, int depth) {
    const auto [estimate, error] = GaussKronrod15::apply(f, a, b);
    if (error <= abs_tol || error <= 50.0 * 2.2e-16 * std::abs(estimate) || depth <= 0)
        return estimate;
    const double mid = 0.5 * (a + b);
    return integrate_adaptive(f, a, mid, 0.5 * abs_tol, depth - 1) +
           integrate_adaptive(f, mid, b, 0.5 * abs_tol, depth - 1);
}

/// Integrates f over [a, b] to roughly rel_tol relative accuracy.
template <class F>
double integrate(F f, double a, double b, double rel_tol = 1e-13) {
    const double rough = GaussKronrod15::apply(f, a, b).first;
    const double tol = std::max(rel_tol * std::abs(rough), 1e-300);
    return integrate_adaptive(f, a, b, tol, 30);
}

}  // namespace plike::detail
