#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "filtsens/poly.hpp"

namespace filtsens {

/// Selects the instability region: open right half-plane for continuous time,
/// exterior of the unit disk for discrete time.
enum class TimeDomain { Continuous, Discrete };

[[nodiscard]] std::string_view to_string(TimeDomain d) noexcept;

inline constexpr double kDefaultEpsCancel = 1e-8;
inline constexpr double kDefaultEpsClass = 1e-9;

/// Tolerance used when checking that a root list is closed under conjugation.
inline constexpr double kConjugateTol = 1e-9;

/**
 * Proper rational transfer function in zero-pole-gain form,
 * gain * prod(x - zeros) / prod(x - poles).
 *
 * Construction enforces properness and conjugate closure of both root lists
 * (real-coefficient systems). A zero gain denotes the zero function; its
 * roots are kept so degree bookkeeping stays meaningful.
 */
class RationalTF {
public:
    RationalTF(double gain, std::vector<cplx> zeros, std::vector<cplx> poles, TimeDomain domain);

    [[nodiscard]] static RationalTF constant(double gain, TimeDomain domain) {
        return RationalTF(gain, {}, {}, domain);
    }

    [[nodiscard]] double gain() const noexcept { return gain_; }
    [[nodiscard]] std::span<const cplx> zeros() const noexcept { return zeros_; }
    [[nodiscard]] std::span<const cplx> poles() const noexcept { return poles_; }
    [[nodiscard]] TimeDomain domain() const noexcept { return domain_; }
    [[nodiscard]] bool is_zero() const noexcept { return gain_ == 0.0; }

    [[nodiscard]] Polynomial numerator() const { return from_roots(gain_, zeros_); }
    [[nodiscard]] Polynomial denominator() const { return from_roots(1.0, poles_); }

    /// Value at an arbitrary complex point (no pole check).
    [[nodiscard]] cplx at(cplx x) const noexcept;

    /// ln|g(x)| accumulated as a sum of logarithms, safe for very large or
    /// very small |x|.
    [[nodiscard]] double log_abs_at(cplx x) const noexcept;

private:
    double gain_;
    std::vector<cplx> zeros_;
    std::vector<cplx> poles_;
    TimeDomain domain_;
};

/// Roots split by location relative to the stability boundary.
struct ClassifiedRoots {
    std::vector<cplx> nmp;
    std::vector<cplx> mp;
    std::vector<cplx> boundary;
};

/// len(poles) - len(zeros).
[[nodiscard]] int relative_degree(const RationalTF& g) noexcept;

/// g at x = j*freq (continuous) or x = exp(j*freq) (discrete). Throws
/// ErrorCode::PoleEvaluation within 1e-12 of a pole.
[[nodiscard]] cplx evaluate(const RationalTF& g, double freq);

/// The point on the frequency axis for the domain of g.
[[nodiscard]] cplx frequency_point(TimeDomain domain, double freq) noexcept;

/// Root match metric: absolute distance for roots of modulus <= 1, relative
/// beyond that.
[[nodiscard]] bool roots_match(cplx a, cplx b, double eps) noexcept;
[[nodiscard]] double root_distance(cplx a, cplx b) noexcept;

/**
 * f * g with common zero/pole factors removed pairwise.
 *
 * Each zero of f is greedily paired with the nearest pole of g inside
 * eps_cancel, and each zero of g with the nearest pole of f. The gain is
 * f.gain * g.gain.
 */
[[nodiscard]] RationalTF product_cancel(const RationalTF& f, const RationalTF& g,
                                        double eps_cancel = kDefaultEpsCancel);

/// Removes zero/pole pairs of a single transfer function that coincide within eps_cancel.
[[nodiscard]] RationalTF cancel_common(const RationalTF& g, double eps_cancel = kDefaultEpsCancel);

[[nodiscard]] ClassifiedRoots classify(std::span<const cplx> roots, TimeDomain domain,
                                       double eps_class = kDefaultEpsClass);

[[nodiscard]] bool is_unstable(cplx r, TimeDomain domain, double eps_class = kDefaultEpsClass) noexcept;
[[nodiscard]] bool is_stable(cplx r, TimeDomain domain, double eps_class = kDefaultEpsClass) noexcept;

/**
 * Removes from `from` one element matched to each element of `what`, using
 * greedy nearest pairing under roots_match(eps). Returns the remainder;
 * elements of `what` that found no partner are appended to `unmatched` when
 * it is non-null.
 */
[[nodiscard]] std::vector<cplx> remove_matched(std::span<const cplx> from, std::span<const cplx> what,
                                               double eps, std::vector<cplx>* unmatched = nullptr);

/// Checks that a root list is closed under conjugation within kConjugateTol.
/// Returns the index of the first root without a conjugate partner, or -1.
[[nodiscard]] long find_unpaired_root(std::span<const cplx> roots, double tol = kConjugateTol);

}  // namespace filtsens
