#include <cmath>
#include <numeric>
#include <sstream>

#include "filtsens/closedform.hpp"
#include "filtsens/error.hpp"

namespace filtsens {

namespace {

constexpr double kLemmaMatchTol = 1e-6;

double total(const std::vector<Term>& terms) {
    return std::accumulate(terms.begin(), terms.end(), 0.0,
                           [](double acc, const Term& t) { return acc + t.contribution; });
}

void reject_boundary(const RationalTF& g, double eps_class, const char* who) {
    for (const auto list : {g.zeros(), g.poles()}) {
        if (!classify(list, g.domain(), eps_class).boundary.empty()) {
            throw Error(ErrorCode::BoundaryRoot, std::string(who) + ": root on the stability boundary");
        }
    }
}

std::string describe(cplx r) {
    std::ostringstream os;
    os.precision(10);
    os << r.real();
    if (r.imag() != 0.0) os << (r.imag() < 0 ? " - " : " + ") << std::abs(r.imag()) << "j";
    return os.str();
}

}  // namespace

IntegralOutcome lemma_direct_ct(const RationalTF& g, bool weighted, double eps_gain, double eps_class) {
    if (g.domain() != TimeDomain::Continuous) {
        throw Error(ErrorCode::DomainMismatch, "lemma_direct_ct: requires a continuous-time function");
    }
    if (g.is_zero()) throw Error(ErrorCode::ZeroGain, "lemma_direct_ct: ln|g| is undefined for g = 0");

    IntegralOutcome out;
    out.unit = Unit::Nats;

    if (!weighted) {
        reject_boundary(g, eps_class, "lemma_direct_ct");
        if (g.zeros().size() < g.poles().size()) {
            out.sign_if_unbounded = -1;
            out.condition = "strictly proper: ln|g(jw)| -> -inf as w -> inf";
            return out;
        }
        const double log_gain = std::log(std::abs(g.gain()));
        if (std::abs(std::expm1(log_gain)) > eps_gain) {
            out.sign_if_unbounded = log_gain > 0.0 ? +1 : -1;
            out.condition = "|g(j inf)| ≠ 1";
            return out;
        }
        double zs = 0.0;
        for (const auto& r : g.zeros()) zs += std::abs(r.real());
        double ps = 0.0;
        for (const auto& r : g.poles()) ps += std::abs(r.real());
        out.bounded = true;
        out.condition = "|g(j inf)| = 1";
        out.terms = {{"half_sum_absRe_zeros", 0.5 * zs}, {"half_sum_absRe_poles", 0.0 - 0.5 * ps}};
        out.value = total(out.terms);
        return out;
    }

    for (const auto list : {g.zeros(), g.poles()}) {
        for (const auto& r : list) {
            if (std::abs(r) <= eps_class) {
                throw Error(ErrorCode::OriginRoot, "lemma_direct_ct: weighted integral needs g(0) finite and nonzero");
            }
        }
    }
    reject_boundary(g, eps_class, "lemma_direct_ct");

    // Substituting w = -1/v maps each root r to 1/r; the constant becomes g(0).
    double log_c = std::log(std::abs(g.gain()));
    for (const auto& r : g.zeros()) log_c += std::log(std::abs(r));
    for (const auto& r : g.poles()) log_c -= std::log(std::abs(r));
    if (std::abs(std::expm1(log_c)) > eps_gain) {
        out.sign_if_unbounded = log_c > 0.0 ? +1 : -1;
        out.condition = "|g(0)| ≠ 1";
        return out;
    }
    double zs = 0.0;
    for (const auto& r : g.zeros()) zs += std::abs((1.0 / r).real());
    double ps = 0.0;
    for (const auto& r : g.poles()) ps += std::abs((1.0 / r).real());
    out.bounded = true;
    out.condition = "|g(0)| = 1";
    out.terms = {{"half_sum_absRe_inv_zeros", 0.5 * zs}, {"half_sum_absRe_inv_poles", 0.0 - 0.5 * ps}};
    out.value = total(out.terms);
    return out;
}

IntegralOutcome lemma_direct_dt(const RationalTF& g, double eps_class) {
    if (g.domain() != TimeDomain::Discrete) {
        throw Error(ErrorCode::DomainMismatch, "lemma_direct_dt: requires a discrete-time function");
    }
    if (g.is_zero()) throw Error(ErrorCode::ZeroGain, "lemma_direct_dt: log|g| is undefined for g = 0");
    reject_boundary(g, eps_class, "lemma_direct_dt");

    double zs = 0.0;
    for (const auto& r : classify(g.zeros(), TimeDomain::Discrete, eps_class).nmp) zs += std::log2(std::abs(r));
    double ps = 0.0;
    for (const auto& r : classify(g.poles(), TimeDomain::Discrete, eps_class).nmp) ps += std::log2(std::abs(r));

    IntegralOutcome out;
    out.unit = Unit::Bits;
    out.bounded = true;
    out.condition = "always bounded";
    out.terms = {{"log_gain", std::log2(std::abs(g.gain()))},
                 {"sum_log_outer_zeros", zs},
                 {"sum_log_outer_poles", 0.0 - ps}};
    out.value = total(out.terms);
    return out;
}

Lemma1Values lemma1_crosscheck(const FilteringSystem& sys) {
    if (sys.domain != TimeDomain::Continuous) {
        throw Error(ErrorCode::PreconditionUnmet, "lemma1_crosscheck: continuous-time systems only");
    }
    Lemma1Values out;
    const double kx = sys.kx();
    const double k = sys.k();
    const double eps_gain = sys.tol.eps_gain;
    const double eps_class = sys.tol.eps_class;
    const int excess = sys.degree_excess();
    const bool trivial = sys.fgy.is_zero();

    // Z_x: NMP zeros of G_x where F*G_y does not vanish.
    std::vector<cplx> zx;
    std::vector<cplx> excluded;
    for (const auto& z : classify(sys.gx.zeros(), TimeDomain::Continuous, eps_class).nmp) {
        const bool hit = std::any_of(sys.fgy.zeros().begin(), sys.fgy.zeros().end(),
                                     [&](cplx q) { return roots_match(z, q, sys.tol.eps_cancel); });
        if (hit && !trivial) {
            excluded.push_back(z);
            out.notes.push_back("NMP zero " + describe(z) + " of G_x is also a zero of F*G_y; excluded from Z_x");
        } else {
            zx.push_back(z);
        }
    }
    double sum_re_zx = 0.0;
    double sum_re_inv_zx = 0.0;
    for (const auto& z : zx) {
        sum_re_zx += z.real();
        sum_re_inv_zx += (1.0 / z).real();
    }

    // M = (K/K_x) prod(s - a) / prod(s - b).
    std::vector<cplx> a = sys.gx_stable_poles;
    a.insert(a.end(), sys.fgy.zeros().begin(), sys.fgy.zeros().end());
    std::vector<cplx> b(sys.gx.zeros().begin(), sys.gx.zeros().end());
    b.insert(b.end(), sys.fgy_other_poles.begin(), sys.fgy_other_poles.end());

    // P side.
    const double p_inf = (trivial || excess >= 1) ? 1.0 : (kx - k) / kx;
    const bool p_ready = (trivial || excess >= 0) && std::abs(std::abs(p_inf) - 1.0) <= eps_gain;
    if (p_ready) {
        double limit = 0.0;
        if (!trivial && excess == 1) {
            limit = -k / (2.0 * kx);
        } else if (!trivial && excess == 0) {
            cplx diff{0.0};
            for (const auto& r : b) diff += r;
            for (const auto& r : a) diff -= r;
            limit = (-(k / kx) * diff / (2.0 * p_inf)).real();
        }
        std::vector<cplx> zp;
        if (!trivial && !gamma_polynomial(sys).is_zero()) {
            const GammaFactorization gf = gamma_factorization(sys);
            zp = sys.shared_unstable;
            zp.insert(zp.end(), gf.nmp_residual.begin(), gf.nmp_residual.end());
            // A Z_x exclusion cancels in P as well; drop the matching numerator root.
            zp = remove_matched(zp, excluded, kLemmaMatchTol);
        }
        double sum_re_zp = 0.0;
        for (const auto& r : zp) sum_re_zp += r.real();
        out.p_value = trivial ? 0.0 : limit + sum_re_zp - sum_re_zx;
    } else {
        out.notes.push_back("P-integral cross-check skipped: |P(j inf)| ≠ 1");
    }

    // M side.
    bool m_ready = !trivial;
    if (m_ready) {
        for (const auto* list : {&a, &b}) {
            for (const auto& r : *list) {
                if (std::abs(r) <= eps_class) m_ready = false;
            }
        }
    }
    if (m_ready) {
        double log_m0 = std::log(std::abs(k)) - std::log(std::abs(kx));
        for (const auto& r : a) log_m0 += std::log(std::abs(r));
        for (const auto& r : b) log_m0 -= std::log(std::abs(r));
        m_ready = std::abs(std::expm1(log_m0)) <= eps_gain;
    }
    if (m_ready) {
        cplx dlog{0.0};  // M'(0)/M(0)
        for (const auto& r : b) dlog += 1.0 / r;
        for (const auto& r : a) dlog -= 1.0 / r;
        std::vector<cplx> zm = classify(sys.fgy.zeros(), TimeDomain::Continuous, eps_class).nmp;
        zm = remove_matched(zm, excluded, sys.tol.eps_cancel);
        double sum_re_inv_zm = 0.0;
        for (const auto& r : zm) sum_re_inv_zm += (1.0 / r).real();
        out.m_value = 0.5 * dlog.real() + sum_re_inv_zm - sum_re_inv_zx;
    } else {
        out.notes.push_back("M-integral cross-check skipped: M(0) is zero or |M(0)| ≠ 1");
    }

    if (!out.p_value && !out.m_value) {
        throw Error(ErrorCode::PreconditionUnmet,
                    "lemma1_crosscheck: neither |P(j inf)| = 1 nor |M(0)| = 1 holds");
    }
    return out;
}

}  // namespace filtsens
