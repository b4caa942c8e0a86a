#pragma once

// Independent reference computations used as test oracles.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace testsupport {

using cplx = std::complex<double>;

/// Roots by Durand-Kerner (Weierstrass) simultaneous iteration on the
/// monic polynomial. coeffs ascending, leading coefficient nonzero.
inline std::vector<cplx> durand_kerner(const std::vector<cplx>& coeffs, int iterations = 2000) {
    const std::size_t n = coeffs.size() - 1;
    std::vector<cplx> c(coeffs.size());
    for (std::size_t k = 0; k <= n; ++k) c[k] = coeffs[k] / coeffs[n];
    double radius = 0.0;
    for (std::size_t k = 0; k < n; ++k) radius = std::max(radius, std::abs(c[k]));
    radius = 1.0 + radius;
    std::vector<cplx> z(n);
    for (std::size_t k = 0; k < n; ++k) z[k] = std::polar(0.9 * radius, 0.4 + 2.0 * std::numbers::pi * k / n);
    auto eval = [&](cplx x) {
        cplx acc = c[n];
        for (std::size_t k = n; k-- > 0;) acc = acc * x + c[k];
        return acc;
    };
    for (int it = 0; it < iterations; ++it) {
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cplx denom{1.0};
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) denom *= (z[i] - z[j]);
            const cplx step = eval(z[i]) / denom;
            z[i] -= step;
            change = std::max(change, std::abs(step));
        }
        if (change < 1e-15) break;
    }
    return z;
}

/// Composite midpoint rule for (1/2pi) int ln|g(jw)| dw on |w| <= W with
/// log-spaced cells; a crude but fully independent check for smooth cases.
template <typename LogAbs>
double ct_midpoint(const LogAbs& log_abs, double w_max, int cells_per_decade = 4000) {
    const double lo = 1e-6;
    const int decades = static_cast<int>(std::ceil(std::log10(w_max / lo)));
    const int n = decades * cells_per_decade;
    double sum = 0.0;
    // Cell [0, lo] by a single midpoint.
    sum += log_abs(0.5 * lo) * lo;
    for (int i = 0; i < n; ++i) {
        const double a = lo * std::pow(10.0, static_cast<double>(i) / cells_per_decade);
        const double b = lo * std::pow(10.0, static_cast<double>(i + 1) / cells_per_decade);
        const double m = std::sqrt(a * b);
        sum += log_abs(m) * (b - a);
    }
    return sum / std::numbers::pi;
}

}  // namespace testsupport
