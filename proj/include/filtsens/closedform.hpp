#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "filtsens/sysmodel.hpp"

namespace filtsens {

enum class CaseTag {
    CT_P_Case1,          ///< m_x + n > n_x + m + 1
    CT_P_Case2,          ///< m_x + n = n_x + m + 1
    CT_P_Case3_Bounded,  ///< m_x + n = n_x + m and K = 2 K_x
    CT_P_Unbounded,      ///< m_x + n = n_x + m and K != 2 K_x
    CT_M_Bounded,
    CT_M_Unbounded,
    DT_P_Case1,  ///< m_x + n >= n_x + m + 1
    DT_P_Case2,  ///< m_x + n = n_x + m
    DT_M,
};

[[nodiscard]] std::string_view to_string(CaseTag tag) noexcept;

/// Natural log for continuous time, base 2 for discrete time.
enum class Unit { Nats, Bits };

[[nodiscard]] std::string_view to_string(Unit u) noexcept;
[[nodiscard]] inline Unit unit_for(TimeDomain d) noexcept {
    return d == TimeDomain::Continuous ? Unit::Nats : Unit::Bits;
}

/// One named sum of a closed-form expression and its signed contribution.
struct Term {
    std::string name;
    double contribution;
};

struct IntegralOutcome {
    bool bounded = false;
    double value = 0.0;          ///< meaningful only when bounded
    int sign_if_unbounded = 0;   ///< +1 or -1 when unbounded, 0 otherwise
    Unit unit = Unit::Nats;
    std::optional<CaseTag> case_tag;
    std::vector<Term> terms;     ///< contributions sum to value when bounded
    std::string condition;       ///< the branch condition that fired (verbatim for unbounded)
    std::vector<std::string> notes;

    /// value expressed in the other unit (bits for nats and vice versa).
    [[nodiscard]] double value_in_other_unit() const noexcept;
};

/**
 * Factorization of the numerator of G_x - F*G_y after clearing denominators:
 *
 *   Gamma = K_x * num(G_x) * den(F G_y without shared poles)
 *         - K   * den(G_x without shared poles) * num(F G_y)
 *
 * Its roots are the shared unstable poles plus the residual zeros.
 */
struct GammaFactorization {
    Polynomial gamma;
    double lead = 0.0;
    std::vector<cplx> matched_shared_poles;  ///< Gamma roots assigned to the shared unstable poles
    std::vector<cplx> residual_roots;
    std::vector<cplx> nmp_residual;
    bool collapsed = false;  ///< degree dropped because K = K_x with equal degrees
    /// |sum of roots + c[d-1]/c[d]| relative to max(1, that coefficient ratio).
    double coefficient_identity_residual = 0.0;
};

/// Gamma before factorization, with no degree checks. The zero polynomial
/// means G_x = F*G_y identically.
[[nodiscard]] Polynomial gamma_polynomial(const FilteringSystem& sys);

/// Throws ErrorCode::SharedPoleNotCancelled if some shared unstable pole is
/// not a root of Gamma (within 1e-6), ErrorCode::DegreeCollapse if Gamma
/// loses degree unexpectedly or vanishes identically.
[[nodiscard]] GammaFactorization gamma_factorization(const FilteringSystem& sys);

/// Which branch applies, from degrees and gains alone.
[[nodiscard]] CaseTag ct_p_case(const FilteringSystem& sys);
[[nodiscard]] CaseTag dt_p_case(const FilteringSystem& sys);

/// Closed-form continuous-time P-integral, (1/2pi) int ln|P(jw)| dw, in nats.
[[nodiscard]] IntegralOutcome ct_p_integral(const FilteringSystem& sys);

/// Closed-form continuous-time weighted M-integral, (1/2pi) int ln|M(jw)| dw/w^2,
/// in nats. Throws ErrorCode::ZeroGain for K = 0, ErrorCode::OriginRoot when
/// M has a root at s = 0.
[[nodiscard]] IntegralOutcome ct_m_integral(const FilteringSystem& sys);

/// Closed-form discrete-time P-integral in bits. Throws
/// ErrorCode::DegenerateGain when equal degrees meet K = K_x.
[[nodiscard]] IntegralOutcome dt_p_integral(const FilteringSystem& sys);

/// Closed-form discrete-time M-integral in bits. Throws ErrorCode::ZeroGain for K = 0.
[[nodiscard]] IntegralOutcome dt_m_integral(const FilteringSystem& sys);

/**
 * Integral of a continuous-time sensitivity function evaluated directly by
 * pairing its zeros and poles, int ln|(jw - a)/(jw - b)|^2 dw = 2pi(|Re a| - |Re b|).
 *
 * With weighted = true the 1/w^2-weighted integral is computed by inverting
 * the frequency axis, which maps each root r to 1/r and leaves the constant
 * g(0); bounded iff |g(0)| = 1.
 */
[[nodiscard]] IntegralOutcome lemma_direct_ct(const RationalTF& g, bool weighted,
                                              double eps_gain = kDefaultEpsGain,
                                              double eps_class = kDefaultEpsClass);

/// Discrete-time counterpart: log2|gain| plus log2 of every root outside the unit disk,
/// numerator minus denominator.
[[nodiscard]] IntegralOutcome lemma_direct_dt(const RationalTF& g, double eps_class = kDefaultEpsClass);

/// Residue-theorem (limit term plus NMP zero sums) values of the P- and
/// weighted M-integrals. Each is present only when its normalization
/// constant (|P(j inf)| or |M(0)|) has unit modulus.
struct Lemma1Values {
    std::optional<double> p_value;
    std::optional<double> m_value;
    std::vector<std::string> notes;
};

/// Continuous time only. Throws ErrorCode::PreconditionUnmet when neither
/// normalization constant has unit modulus.
[[nodiscard]] Lemma1Values lemma1_crosscheck(const FilteringSystem& sys);

}  // namespace filtsens
