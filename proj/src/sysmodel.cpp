#include "filtsens/sysmodel.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "filtsens/closedform.hpp"
#include "filtsens/error.hpp"

namespace filtsens {

namespace {

std::string describe(cplx r) {
    std::ostringstream os;
    os.precision(10);
    os << r.real();
    if (r.imag() != 0.0) os << (r.imag() < 0 ? " - " : " + ") << std::abs(r.imag()) << "j";
    return os.str();
}

// 53 random mantissa bits mapped onto [0, 1); independent of the standard
// library's distribution implementation so samples are portable.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double sample_frequency(TimeDomain domain, std::mt19937_64& rng) {
    const double u = unit_uniform(rng);
    if (domain == TimeDomain::Continuous) return std::pow(10.0, -3.0 + 6.0 * u);
    return std::numbers::pi * (2.0 * u - 1.0);
}

bool near_pole(const RationalTF& g, cplx x) {
    for (const auto& p : g.poles()) {
        if (std::abs(x - p) <= 1e-6 * std::max(1.0, std::abs(p))) return true;
    }
    return false;
}

}  // namespace

std::vector<cplx> collect_boundary_roots(const RationalTF& gx, const RationalTF& gy, const RationalTF& f,
                                         const Tolerances& tol) {
    std::vector<cplx> out;
    auto scan = [&](std::span<const cplx> roots) {
        const auto c = classify(roots, gx.domain(), tol.eps_class);
        out.insert(out.end(), c.boundary.begin(), c.boundary.end());
    };
    for (const RationalTF* g : {&gx, &gy, &f}) {
        scan(g->zeros());
        scan(g->poles());
    }
    return out;
}

Validated validate(const RationalTF& gx, const RationalTF& gy, const RationalTF& f, const Tolerances& tol) {
    if (gx.domain() != gy.domain() || gx.domain() != f.domain()) {
        throw Error(ErrorCode::DomainMismatch, "validate: G_x, G_y and F must share one time domain");
    }
    if (gx.is_zero()) throw Error(ErrorCode::ZeroGx, "validate: G_x is the zero function (A1 fails)");

    const TimeDomain domain = gx.domain();
    if (const auto boundary = collect_boundary_roots(gx, gy, f, tol); !boundary.empty()) {
        throw Error(ErrorCode::BoundaryRoot, "validate: root " + describe(boundary.front()) +
                                                 " lies on the stability boundary (within eps_class)");
    }

    RationalTF fgy = product_cancel(f, gy, tol.eps_cancel);
    // Roots of the cancelled product are a subset of the inputs, so no new
    // boundary roots can appear here.

    ValidationReport report;
    report.a1_ok = true;

    report.a2_ok = true;
    for (const auto& p : f.poles()) {
        if (!is_stable(p, domain, tol.eps_class)) {
            report.a2_ok = false;
            report.diagnostics.push_back("A2: F has unstable pole " + describe(p));
        }
    }

    report.a3_ok = fgy.is_zero() || relative_degree(fgy) >= relative_degree(gx);
    if (!report.a3_ok) {
        report.diagnostics.push_back("A3: F*G_y*G_x^-1 is improper (relative degree of F*G_y " +
                                     std::to_string(relative_degree(fgy)) + " < relative degree of G_x " +
                                     std::to_string(relative_degree(gx)) + ")");
    }

    bool structure_ok = true;
    const auto gx_unstable = classify(gx.poles(), domain, tol.eps_class).nmp;
    const auto gy_unstable = classify(gy.poles(), domain, tol.eps_class).nmp;

    std::vector<cplx> missing_in_gy;
    std::vector<cplx> gy_only = remove_matched(gy_unstable, gx_unstable, tol.eps_cancel, &missing_in_gy);
    for (const auto& p : missing_in_gy) {
        structure_ok = false;
        report.diagnostics.push_back("A4: unstable pole " + describe(p) + " of G_x does not appear in G_y");
    }
    std::vector<cplx> shared = remove_matched(gx_unstable, missing_in_gy, tol.eps_cancel);

    std::vector<cplx> gx_rest = remove_matched(gx.poles(), shared, tol.eps_cancel);

    std::vector<cplx> shared_not_in_fgy;
    std::vector<cplx> fgy_rest = remove_matched(fgy.poles(), shared, tol.eps_cancel, &shared_not_in_fgy);
    if (!fgy.is_zero()) {
        for (const auto& p : shared_not_in_fgy) {
            structure_ok = false;
            report.diagnostics.push_back("A4: shared unstable pole " + describe(p) +
                                         " is cancelled inside F*G_y, so G_x - F*G_y keeps it");
        }
        for (const auto& p : fgy_rest) {
            if (is_unstable(p, domain, tol.eps_class)) {
                structure_ok = false;
                const bool from_gy = std::any_of(gy_only.begin(), gy_only.end(),
                                                 [&](cplx q) { return roots_match(p, q, tol.eps_cancel); });
                report.diagnostics.push_back(
                    from_gy ? "A4: unstable pole " + describe(p) + " of G_y is not cancelled by a zero of F"
                            : "A4: F*G_y has unstable pole " + describe(p) + " not shared with G_x");
            }
        }
    }

    FilteringSystem sys{gx,
                        gy,
                        f,
                        std::move(fgy),
                        domain,
                        std::move(shared),
                        std::move(gy_only),
                        std::move(gx_rest),
                        std::move(fgy_rest),
                        tol};

    if (structure_ok && report.a3_ok) {
        if (gamma_polynomial(sys).is_zero()) {
            report.diagnostics.push_back("G_x - F*G_y vanishes identically (P = 0, M = 1)");
        } else {
            try {
                (void)gamma_factorization(sys);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::SharedPoleNotCancelled && e.code() != ErrorCode::DegreeCollapse) throw;
                structure_ok = false;
                report.diagnostics.push_back(std::string("A4: ") + e.what());
            }
        }
    }
    report.a4_ok = structure_ok && report.a2_ok && report.a3_ok;
    return {std::move(sys), std::move(report)};
}

RationalTF build_p(const FilteringSystem& sys) {
    if (sys.fgy.is_zero()) return RationalTF::constant(1.0, sys.domain);
    if (gamma_polynomial(sys).is_zero()) return RationalTF::constant(0.0, sys.domain);

    const GammaFactorization gf = gamma_factorization(sys);
    std::vector<cplx> zeros = sys.shared_unstable;
    zeros.insert(zeros.end(), gf.residual_roots.begin(), gf.residual_roots.end());
    std::vector<cplx> poles(sys.gx.zeros().begin(), sys.gx.zeros().end());
    poles.insert(poles.end(), sys.fgy_other_poles.begin(), sys.fgy_other_poles.end());
    return RationalTF(gf.lead / sys.kx(), std::move(zeros), std::move(poles), sys.domain);
}

RationalTF build_m(const FilteringSystem& sys) {
    std::vector<cplx> zeros = sys.gx_stable_poles;
    zeros.insert(zeros.end(), sys.fgy.zeros().begin(), sys.fgy.zeros().end());
    std::vector<cplx> poles(sys.gx.zeros().begin(), sys.gx.zeros().end());
    poles.insert(poles.end(), sys.fgy_other_poles.begin(), sys.fgy_other_poles.end());
    return RationalTF(sys.k() / sys.kx(), std::move(zeros), std::move(poles), sys.domain);
}

double complementarity_check(const RationalTF& p, const RationalTF& m, int n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw Error(ErrorCode::InvalidArgument, "complementarity_check: n_samples must be >= 1");
    if (p.domain() != m.domain()) throw Error(ErrorCode::DomainMismatch, "complementarity_check: mixed domains");
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    int taken = 0;
    int attempts = 0;
    while (taken < n_samples) {
        if (++attempts > 100 * n_samples) {
            throw Error(ErrorCode::InvalidArgument, "complementarity_check: no pole-free sample frequencies found");
        }
        const double w = sample_frequency(p.domain(), rng);
        const cplx x = frequency_point(p.domain(), w);
        if (near_pole(p, x) || near_pole(m, x)) continue;
        worst = std::max(worst, std::abs(p.at(x) + m.at(x) - 1.0));
        ++taken;
    }
    return worst;
}

double complementarity_check(const FilteringSystem& sys, int n_samples, std::uint64_t seed) {
    return complementarity_check(build_p(sys), build_m(sys), n_samples, seed);
}

}  // namespace filtsens
