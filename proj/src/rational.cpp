#include "filtsens/rational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "filtsens/error.hpp"

namespace filtsens {

namespace {

std::string describe(cplx r) {
    std::ostringstream os;
    os.precision(12);
    os << r.real() << (r.imag() < 0 ? " - " : " + ") << std::abs(r.imag()) << "j";
    return os.str();
}

bool finite(cplx r) { return std::isfinite(r.real()) && std::isfinite(r.imag()); }

}  // namespace

std::string_view to_string(TimeDomain d) noexcept {
    return d == TimeDomain::Continuous ? "ct" : "dt";
}

RationalTF::RationalTF(double gain, std::vector<cplx> zeros, std::vector<cplx> poles, TimeDomain domain)
    : gain_(gain), zeros_(std::move(zeros)), poles_(std::move(poles)), domain_(domain) {
    if (!std::isfinite(gain_)) throw Error(ErrorCode::InvalidArgument, "RationalTF: gain must be finite");
    if (zeros_.size() > poles_.size()) {
        throw Error(ErrorCode::Improper, "RationalTF: more zeros (" + std::to_string(zeros_.size()) +
                                             ") than poles (" + std::to_string(poles_.size()) + ")");
    }
    for (const auto* list : {&zeros_, &poles_}) {
        for (const auto& r : *list) {
            if (!finite(r)) throw Error(ErrorCode::InvalidArgument, "RationalTF: non-finite root");
        }
        if (const long k = find_unpaired_root(*list); k >= 0) {
            throw Error(ErrorCode::NotConjugateClosed,
                        std::string("RationalTF: ") + (list == &zeros_ ? "zero " : "pole ") +
                            describe((*list)[static_cast<std::size_t>(k)]) + " has no conjugate partner");
        }
    }
}

cplx RationalTF::at(cplx x) const noexcept {
    cplx num{gain_};
    for (const auto& z : zeros_) num *= (x - z);
    cplx den{1.0};
    for (const auto& p : poles_) den *= (x - p);
    return num / den;
}

double RationalTF::log_abs_at(cplx x) const noexcept {
    double acc = std::log(std::abs(gain_));
    for (const auto& z : zeros_) acc += std::log(std::abs(x - z));
    for (const auto& p : poles_) acc -= std::log(std::abs(x - p));
    return acc;
}

int relative_degree(const RationalTF& g) noexcept {
    return static_cast<int>(g.poles().size()) - static_cast<int>(g.zeros().size());
}

cplx frequency_point(TimeDomain domain, double freq) noexcept {
    if (domain == TimeDomain::Continuous) return {0.0, freq};
    return std::polar(1.0, freq);
}

cplx evaluate(const RationalTF& g, double freq) {
    const cplx x = frequency_point(g.domain(), freq);
    for (const auto& p : g.poles()) {
        if (std::abs(x - p) <= 1e-12) {
            throw Error(ErrorCode::PoleEvaluation,
                        "evaluate: frequency " + std::to_string(freq) + " hits pole " + describe(p));
        }
    }
    return g.at(x);
}

double root_distance(cplx a, cplx b) noexcept {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) / scale;
}

bool roots_match(cplx a, cplx b, double eps) noexcept { return root_distance(a, b) <= eps; }

std::vector<cplx> remove_matched(std::span<const cplx> from, std::span<const cplx> what, double eps,
                                 std::vector<cplx>* unmatched) {
    std::vector<cplx> rest(from.begin(), from.end());
    for (const auto& w : what) {
        auto best = rest.end();
        double best_dist = std::numeric_limits<double>::infinity();
        for (auto it = rest.begin(); it != rest.end(); ++it) {
            const double d = root_distance(*it, w);
            if (d <= eps && d < best_dist) {
                best = it;
                best_dist = d;
            }
        }
        if (best != rest.end()) {
            rest.erase(best);
        } else if (unmatched != nullptr) {
            unmatched->push_back(w);
        }
    }
    return rest;
}

namespace {

// Greedy nearest-pair cancellation of `zeros` against `poles`; both are
// trimmed in place.
void cancel_pairs(std::vector<cplx>& zeros, std::vector<cplx>& poles, double eps) {
    std::vector<cplx> kept;
    kept.reserve(zeros.size());
    for (const auto& z : zeros) {
        auto best = poles.end();
        double best_dist = std::numeric_limits<double>::infinity();
        for (auto it = poles.begin(); it != poles.end(); ++it) {
            const double d = root_distance(z, *it);
            if (d <= eps && d < best_dist) {
                best = it;
                best_dist = d;
            }
        }
        if (best != poles.end()) {
            poles.erase(best);
        } else {
            kept.push_back(z);
        }
    }
    zeros = std::move(kept);
}

}  // namespace

RationalTF product_cancel(const RationalTF& f, const RationalTF& g, double eps_cancel) {
    if (f.domain() != g.domain()) throw Error(ErrorCode::DomainMismatch, "product_cancel: mixed time domains");
    if (!(eps_cancel > 0.0)) throw Error(ErrorCode::InvalidArgument, "product_cancel: eps_cancel must be positive");

    std::vector<cplx> fz(f.zeros().begin(), f.zeros().end());
    std::vector<cplx> fp(f.poles().begin(), f.poles().end());
    std::vector<cplx> gz(g.zeros().begin(), g.zeros().end());
    std::vector<cplx> gp(g.poles().begin(), g.poles().end());
    cancel_pairs(fz, gp, eps_cancel);
    cancel_pairs(gz, fp, eps_cancel);

    std::vector<cplx> zeros = std::move(fz);
    zeros.insert(zeros.end(), gz.begin(), gz.end());
    std::vector<cplx> poles = std::move(fp);
    poles.insert(poles.end(), gp.begin(), gp.end());
    return RationalTF(f.gain() * g.gain(), std::move(zeros), std::move(poles), f.domain());
}

RationalTF cancel_common(const RationalTF& g, double eps_cancel) {
    std::vector<cplx> z(g.zeros().begin(), g.zeros().end());
    std::vector<cplx> p(g.poles().begin(), g.poles().end());
    cancel_pairs(z, p, eps_cancel);
    return RationalTF(g.gain(), std::move(z), std::move(p), g.domain());
}

bool is_unstable(cplx r, TimeDomain domain, double eps_class) noexcept {
    if (domain == TimeDomain::Continuous) return r.real() > eps_class;
    return std::abs(r) > 1.0 + eps_class;
}

bool is_stable(cplx r, TimeDomain domain, double eps_class) noexcept {
    if (domain == TimeDomain::Continuous) return r.real() < -eps_class;
    return std::abs(r) < 1.0 - eps_class;
}

ClassifiedRoots classify(std::span<const cplx> roots, TimeDomain domain, double eps_class) {
    if (!(eps_class > 0.0)) throw Error(ErrorCode::InvalidArgument, "classify: eps_class must be positive");
    ClassifiedRoots out;
    for (const auto& r : roots) {
        if (is_unstable(r, domain, eps_class)) {
            out.nmp.push_back(r);
        } else if (is_stable(r, domain, eps_class)) {
            out.mp.push_back(r);
        } else {
            out.boundary.push_back(r);
        }
    }
    return out;
}

long find_unpaired_root(std::span<const cplx> roots, double tol) {
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        const double scale = std::max(1.0, std::abs(roots[i]));
        if (std::abs(roots[i].imag()) <= tol * scale) {
            used[i] = true;
            continue;
        }
        std::size_t best = roots.size();
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t k = i + 1; k < roots.size(); ++k) {
            if (used[k]) continue;
            const double d = std::abs(roots[k] - std::conj(roots[i]));
            if (d <= tol * scale && d < best_dist) {
                best = k;
                best_dist = d;
            }
        }
        if (best == roots.size()) return static_cast<long>(i);
        used[i] = used[best] = true;
    }
    return -1;
}

}  // namespace filtsens
