#pragma once

#include <functional>
#include <vector>

#include "filtsens/closedform.hpp"
#include "filtsens/rational.hpp"

namespace filtsens {

inline constexpr double kDefaultQuadTol = 1e-6;
inline constexpr long kDefaultEvalBudget = 1'000'000;

struct QuadratureOptions {
    double tol = kDefaultQuadTol;
    long max_evaluations = kDefaultEvalBudget;
    // Integrate over [0, inf) and double, using |g(jw)| = |g(-jw)|. Off means
    // the full axis is integrated.
    bool use_symmetry = true;
};

struct QuadratureResult {
    double value = 0.0;  ///< +-inf when diverged
    double abs_error_estimate = 0.0;
    long n_evaluations = 0;
    bool diverged = false;
    int divergence_sign = 0;  ///< +1 or -1 when diverged
    Unit unit = Unit::Nats;
};

/// Raw adaptive Gauss-Kronrod (7/15) integration of f over the consecutive
/// intervals of `breaks` (sorted, at least two points). Panels are refined
/// largest-error first until the summed |K15 - G7| estimate is <= tol.
struct AdaptiveResult {
    double value = 0.0;
    double abs_error = 0.0;
    long evaluations = 0;
    bool converged = false;
};

[[nodiscard]] AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, std::vector<double> breaks,
                                                double tol, long max_evaluations = kDefaultEvalBudget);

/// (1/2pi) int ln|g(jw)| dw over the real line, in nats. Throws
/// ErrorCode::NotConverged when the budget runs out and the divergence probe
/// finds the tail settled; ErrorCode::Inconclusive when the probe cannot decide.
[[nodiscard]] QuadratureResult ct_log_integral(const RationalTF& g, const QuadratureOptions& opt = {});
[[nodiscard]] inline QuadratureResult ct_log_integral(const RationalTF& g, double tol) {
    return ct_log_integral(g, QuadratureOptions{.tol = tol});
}

/// (1/2pi) int ln|g(jw)| dw / w^2 over the real line, in nats, integrated in
/// the inverted variable 1/w. Throws ErrorCode::OriginRoot if g(0) = 0 or g
/// has a pole at 0.
[[nodiscard]] QuadratureResult ct_weighted_log_integral(const RationalTF& g, const QuadratureOptions& opt = {});
[[nodiscard]] inline QuadratureResult ct_weighted_log_integral(const RationalTF& g, double tol) {
    return ct_weighted_log_integral(g, QuadratureOptions{.tol = tol});
}

/// (1/2pi) int_{-pi}^{pi} log2|g(e^{jw})| dw, in bits.
[[nodiscard]] QuadratureResult dt_log_integral(const RationalTF& g, const QuadratureOptions& opt = {});
[[nodiscard]] inline QuadratureResult dt_log_integral(const RationalTF& g, double tol) {
    return dt_log_integral(g, QuadratureOptions{.tol = tol});
}

/**
 * Decides whether the continuous-time integral diverges by integrating the
 * decades [10^k, 10^(k+1)], k = 2..5, of the tail (and the mirrored decades
 * near w = 0). A nonzero limit of the integrand makes these increments grow
 * tenfold per decade; a convergent integrand makes them shrink.
 *
 * Diverged when the last three increments share a sign, each exceeds 10*tol
 * in magnitude and they are non-decreasing in magnitude. Settled when the
 * last increment is below 10*tol or the magnitudes strictly decrease; a
 * settled result carries the summed increments in `value`. Anything else
 * throws ErrorCode::Inconclusive.
 */
[[nodiscard]] QuadratureResult divergence_probe(const RationalTF& g, bool weighted, double tol = kDefaultQuadTol);

}  // namespace filtsens
