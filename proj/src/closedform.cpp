#include "filtsens/closedform.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "filtsens/error.hpp"

namespace filtsens {

namespace {

double sum_re(std::span<const cplx> roots) {
    double s = 0.0;
    for (const auto& r : roots) s += r.real();
    return s;
}

double sum_log2_abs(std::span<const cplx> roots) {
    double s = 0.0;
    for (const auto& r : roots) s += std::log2(std::abs(r));
    return s;
}

double total(const std::vector<Term>& terms) {
    return std::accumulate(terms.begin(), terms.end(), 0.0,
                           [](double acc, const Term& t) { return acc + t.contribution; });
}

void require_domain(const FilteringSystem& sys, TimeDomain d, const char* who) {
    if (sys.domain != d) {
        throw Error(ErrorCode::DomainMismatch,
                    std::string(who) + ": requires a " + std::string(to_string(d)) + " system");
    }
}

void require_proper_excess(const FilteringSystem& sys, const char* who) {
    if (!sys.fgy.is_zero() && sys.degree_excess() < 0) {
        throw Error(ErrorCode::PreconditionUnmet, std::string(who) + ": F*G_y*G_x^-1 is improper (A3)");
    }
}

// 0 - x rather than -x so empty sums print as 0, not -0.
double negated(double x) { return 0.0 - x; }

bool gain_equal(double a, double b, double eps_gain) { return std::abs(a - b) <= eps_gain * std::abs(b); }

}  // namespace

std::string_view to_string(CaseTag tag) noexcept {
    switch (tag) {
        case CaseTag::CT_P_Case1: return "CT_P_Case1";
        case CaseTag::CT_P_Case2: return "CT_P_Case2";
        case CaseTag::CT_P_Case3_Bounded: return "CT_P_Case3_Bounded";
        case CaseTag::CT_P_Unbounded: return "CT_P_Unbounded";
        case CaseTag::CT_M_Bounded: return "CT_M_Bounded";
        case CaseTag::CT_M_Unbounded: return "CT_M_Unbounded";
        case CaseTag::DT_P_Case1: return "DT_P_Case1";
        case CaseTag::DT_P_Case2: return "DT_P_Case2";
        case CaseTag::DT_M: return "DT_M";
    }
    return "?";
}

std::string_view to_string(Unit u) noexcept { return u == Unit::Nats ? "nats" : "bits"; }

double IntegralOutcome::value_in_other_unit() const noexcept {
    return unit == Unit::Nats ? value / std::numbers::ln2 : value * std::numbers::ln2;
}

CaseTag ct_p_case(const FilteringSystem& sys) {
    require_domain(sys, TimeDomain::Continuous, "ct_p_case");
    if (sys.fgy.is_zero()) return CaseTag::CT_P_Case1;
    require_proper_excess(sys, "ct_p_case");
    const int excess = sys.degree_excess();
    if (excess >= 2) return CaseTag::CT_P_Case1;
    if (excess == 1) return CaseTag::CT_P_Case2;
    return gain_equal(sys.k(), 2.0 * sys.kx(), sys.tol.eps_gain) ? CaseTag::CT_P_Case3_Bounded
                                                                   : CaseTag::CT_P_Unbounded;
}

CaseTag dt_p_case(const FilteringSystem& sys) {
    require_domain(sys, TimeDomain::Discrete, "dt_p_case");
    if (sys.fgy.is_zero()) return CaseTag::DT_P_Case1;
    require_proper_excess(sys, "dt_p_case");
    return sys.degree_excess() >= 1 ? CaseTag::DT_P_Case1 : CaseTag::DT_P_Case2;
}

IntegralOutcome ct_p_integral(const FilteringSystem& sys) {
    IntegralOutcome out;
    out.unit = Unit::Nats;
    const CaseTag tag = ct_p_case(sys);
    out.case_tag = tag;
    const double kx = sys.kx();
    const double k = sys.k();

    if (tag == CaseTag::CT_P_Unbounded) {
        const double ratio = std::abs((kx - k) / kx);
        out.bounded = false;
        out.sign_if_unbounded = ratio > 1.0 ? +1 : -1;
        out.condition = "m_x+n = n_x+m and K ≠ 2K_x";
        out.notes.push_back("integrand tends to ln|(K_x-K)/K_x| = " + std::to_string(std::log(ratio)) +
                            " at infinite frequency");
        return out;
    }

    const GammaFactorization gf = gamma_factorization(sys);
    const auto gx_zeros = classify(sys.gx.zeros(), TimeDomain::Continuous, sys.tol.eps_class);
    const double r_bar = sum_re(gf.nmp_residual);
    const double p_bar = sum_re(sys.shared_unstable);

    out.bounded = true;
    switch (tag) {
        case CaseTag::CT_P_Case1:
        case CaseTag::CT_P_Case2:
            out.terms = {{"sum_Re_r_bar", r_bar},
                         {"sum_Re_p_bar", p_bar},
                         {"sum_Re_z_bar", negated(sum_re(gx_zeros.nmp))}};
            if (tag == CaseTag::CT_P_Case2) {
                out.terms.push_back({"K_over_2Kx", negated(k / (2.0 * kx))});
                out.condition = "m_x+n = n_x+m+1";
            } else {
                out.condition = sys.fgy.is_zero() ? "K = 0" : "m_x+n > n_x+m+1";
            }
            break;
        case CaseTag::CT_P_Case3_Bounded:
            out.terms = {{"sum_Re_r_bar", r_bar},
                         {"sum_Re_z_mp", sum_re(gx_zeros.mp)},
                         {"sum_Re_p_bar", p_bar},
                         {"sum_Re_p_stable", negated(sum_re(sys.gx_stable_poles))},
                         {"sum_Re_z_fgy", negated(sum_re(sys.fgy.zeros()))},
                         {"sum_Re_p_fgy", sum_re(sys.fgy_other_poles)}};
            out.condition = "m_x+n = n_x+m and K = 2K_x";
            break;
        default:
            break;
    }
    out.value = total(out.terms);
    return out;
}

IntegralOutcome ct_m_integral(const FilteringSystem& sys) {
    require_domain(sys, TimeDomain::Continuous, "ct_m_integral");
    if (sys.fgy.is_zero()) throw Error(ErrorCode::ZeroGain, "ct_m_integral: K = 0, so M vanishes identically");
    require_proper_excess(sys, "ct_m_integral");

    // M zeros: stable poles of G_x and zeros of F*G_y; M poles: zeros of G_x
    // and the remaining poles of F*G_y.
    const auto& stable_px = sys.gx_stable_poles;
    const auto zx = sys.gx.zeros();
    const auto zj = sys.fgy.zeros();
    const auto& pj = sys.fgy_other_poles;
    const double origin = sys.tol.eps_class;
    for (const auto* list : {&stable_px, &pj}) {
        for (const auto& r : *list) {
            if (std::abs(r) <= origin) throw Error(ErrorCode::OriginRoot, "ct_m_integral: M has a root at s = 0");
        }
    }
    for (const auto list : {zx, zj}) {
        for (const auto& r : list) {
            if (std::abs(r) <= origin) throw Error(ErrorCode::OriginRoot, "ct_m_integral: M has a root at s = 0");
        }
    }

    double log_m0 = std::log(std::abs(sys.k())) - std::log(std::abs(sys.kx()));
    for (const auto& r : stable_px) log_m0 += std::log(std::abs(r));
    for (const auto& r : zj) log_m0 += std::log(std::abs(r));
    for (const auto& r : zx) log_m0 -= std::log(std::abs(r));
    for (const auto& r : pj) log_m0 -= std::log(std::abs(r));

    IntegralOutcome out;
    out.unit = Unit::Nats;
    if (std::abs(std::expm1(log_m0)) > sys.tol.eps_gain) {
        out.case_tag = CaseTag::CT_M_Unbounded;
        out.bounded = false;
        out.sign_if_unbounded = log_m0 > 0.0 ? +1 : -1;
        out.condition = "|K·Πp_i·Πz_j| ≠ |K_x·Πz_i·Πp_j|";
        out.notes.push_back("integrand tends to ln|M(0)| = " + std::to_string(log_m0) + " at zero frequency");
        return out;
    }

    double inv_pj = 0.0;
    for (const auto& r : pj) inv_pj += (1.0 / r).real();
    double inv_pi = 0.0;
    for (const auto& r : stable_px) inv_pi += (1.0 / r).real();
    double inv_zj = 0.0;
    for (const auto& r : zj) inv_zj += std::abs((1.0 / r).real());
    double inv_zi = 0.0;
    for (const auto& r : zx) inv_zi += std::abs((1.0 / r).real());

    out.case_tag = CaseTag::CT_M_Bounded;
    out.bounded = true;
    out.condition = "|K·Πp_i·Πz_j| = |K_x·Πz_i·Πp_j|";
    out.terms = {{"sum_inv_p_fgy", 0.5 * inv_pj},
                 {"sum_inv_p_stable", negated(0.5 * inv_pi)},
                 {"sum_absRe_inv_z_fgy", 0.5 * inv_zj},
                 {"sum_absRe_inv_z_gx", negated(0.5 * inv_zi)}};
    out.value = total(out.terms);
    return out;
}

IntegralOutcome dt_p_integral(const FilteringSystem& sys) {
    IntegralOutcome out;
    out.unit = Unit::Bits;
    const CaseTag tag = dt_p_case(sys);
    out.case_tag = tag;
    const double kx = sys.kx();
    const double k = sys.k();
    if (tag == CaseTag::DT_P_Case2 && gain_equal(k, kx, sys.tol.eps_gain)) {
        throw Error(ErrorCode::DegenerateGain,
                    "dt_p_integral: m_x+n = n_x+m with K = K_x; log|(K_x-K)/K_x| is -inf and Gamma loses degree");
    }

    const GammaFactorization gf = gamma_factorization(sys);
    const auto gx_zeros = classify(sys.gx.zeros(), TimeDomain::Discrete, sys.tol.eps_class);
    out.bounded = true;
    out.terms = {{"sum_log_p_bar", sum_log2_abs(sys.shared_unstable)},
                 {"sum_log_z_bar", negated(sum_log2_abs(gx_zeros.nmp))},
                 {"sum_log_r_bar", sum_log2_abs(gf.nmp_residual)}};
    if (tag == CaseTag::DT_P_Case2) {
        out.terms.push_back({"log_gain_ratio", std::log2(std::abs((kx - k) / kx))});
        out.condition = "m_x+n = n_x+m";
    } else {
        out.condition = sys.fgy.is_zero() ? "K = 0" : "m_x+n >= n_x+m+1";
    }
    out.value = total(out.terms);
    return out;
}

IntegralOutcome dt_m_integral(const FilteringSystem& sys) {
    require_domain(sys, TimeDomain::Discrete, "dt_m_integral");
    if (sys.fgy.is_zero()) throw Error(ErrorCode::ZeroGain, "dt_m_integral: K = 0, so log|M| is undefined");
    require_proper_excess(sys, "dt_m_integral");

    const auto zj = classify(sys.fgy.zeros(), TimeDomain::Discrete, sys.tol.eps_class);
    const auto zi = classify(sys.gx.zeros(), TimeDomain::Discrete, sys.tol.eps_class);
    IntegralOutcome out;
    out.unit = Unit::Bits;
    out.case_tag = CaseTag::DT_M;
    out.bounded = true;
    out.condition = "always bounded";
    out.terms = {{"sum_log_z_bar_fgy", sum_log2_abs(zj.nmp)},
                 {"sum_log_z_bar_gx", negated(sum_log2_abs(zi.nmp))},
                 {"log_K_over_Kx", std::log2(std::abs(sys.k())) - std::log2(std::abs(sys.kx()))}};
    out.value = total(out.terms);
    return out;
}

}  // namespace filtsens
