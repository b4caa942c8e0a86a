#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "filtsens/rational.hpp"

namespace filtsens {

inline constexpr double kDefaultEpsGain = 1e-9;
inline constexpr std::uint64_t kDefaultSeed = 0x5EEDF11E5ULL;

struct Tolerances {
    double eps_cancel = kDefaultEpsCancel;  ///< zero/pole cancellation matching
    double eps_class = kDefaultEpsClass;    ///< distance from the stability boundary
    double eps_gain = kDefaultEpsGain;      ///< relative, for exact-gain conditions
};

/**
 * The validated filtering configuration: plant transfer functions G_x (to the
 * estimated signal) and G_y (to the measured output) and filter F, with the
 * cancelled product F*G_y cached.
 *
 * Naming follows the roles the roots play in the integral formulas:
 * shared_unstable are the unstable poles common to G_x and G_y,
 * gx_stable_poles the remaining poles of G_x, fgy_other_poles the poles of
 * F*G_y other than the shared ones.
 */
struct FilteringSystem {
    RationalTF gx;
    RationalTF gy;
    RationalTF f;
    RationalTF fgy;
    TimeDomain domain;
    std::vector<cplx> shared_unstable;
    std::vector<cplx> gy_only_unstable;
    std::vector<cplx> gx_stable_poles;
    std::vector<cplx> fgy_other_poles;
    Tolerances tol;

    [[nodiscard]] double kx() const noexcept { return gx.gain(); }
    [[nodiscard]] double k() const noexcept { return fgy.gain(); }
    /// (m_x + n) - (n_x + m): how much faster F*G_y rolls off than G_x.
    [[nodiscard]] int degree_excess() const noexcept;
};

struct ValidationReport {
    bool a1_ok = false;  ///< G_x right-invertible (nonzero, SISO)
    bool a2_ok = false;  ///< F proper and stable
    bool a3_ok = false;  ///< F*G_y*G_x^-1 proper
    bool a4_ok = false;  ///< G_x - F*G_y stable (bounded error estimator)
    std::vector<std::string> diagnostics;
    std::vector<cplx> boundary_roots;

    [[nodiscard]] bool ok() const noexcept { return a1_ok && a2_ok && a3_ok && a4_ok; }
};

struct Validated {
    FilteringSystem system;
    ValidationReport report;
};

/// Every zero/pole of gx, gy, f and their cancelled product within eps_class
/// of the stability boundary.
[[nodiscard]] std::vector<cplx> collect_boundary_roots(const RationalTF& gx, const RationalTF& gy,
                                                       const RationalTF& f, const Tolerances& tol = {});

/**
 * Checks the four standing assumptions and assembles the system.
 *
 * Throws ErrorCode::DomainMismatch, ErrorCode::BoundaryRoot, or
 * ErrorCode::ZeroGx; assumption failures are reported, not thrown.
 */
[[nodiscard]] Validated validate(const RationalTF& gx, const RationalTF& gy, const RationalTF& f,
                                 const Tolerances& tol = {});

/// Estimation-error sensitivity P = (G_x - F*G_y) / G_x, built from the
/// factorization of the difference numerator.
[[nodiscard]] RationalTF build_p(const FilteringSystem& sys);

/// Estimate sensitivity M = F*G_y / G_x.
[[nodiscard]] RationalTF build_m(const FilteringSystem& sys);

/// Largest |P + M - 1| over n_samples pseudo-random frequencies:
/// log-uniform on [1e-3, 1e3] for continuous time, uniform on (-pi, pi) for
/// discrete time.
[[nodiscard]] double complementarity_check(const FilteringSystem& sys, int n_samples,
                                           std::uint64_t seed = kDefaultSeed);

/// Same check against an explicitly supplied P and M.
[[nodiscard]] double complementarity_check(const RationalTF& p, const RationalTF& m, int n_samples,
                                           std::uint64_t seed = kDefaultSeed);

}  // namespace filtsens
