#include "filtsens/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "filtsens/error.hpp"

namespace filtsens {

namespace {

// Kronrod 15-point abscissae on [-1, 1] (non-negative half) with the Kronrod
// weights and the weights of the embedded 7-point Gauss rule at the odd
// indices.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kMinPanelRel = 1e-13;
// Limits of ln|g| at w = 0 or w = inf below this are taken as exactly zero;
// floating-point gain products leave residues of a few ulps.
constexpr double kLimitSnap = 1e-12;
constexpr double kConjPairTol = 1e-9;
constexpr double kNearCircle = 0.05;
// Share of the evaluation budget held back for the divergence probe: eight
// decade integrals of kProbePieceBudget evaluations each.
constexpr long kProbePieceBudget = 12'500;
constexpr long kProbeBudget = 8 * kProbePieceBudget;

struct Panel {
    double a;
    double b;
    double value;
    double error;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    const double value = resk * half;
    double error = std::abs((resk - resg) * half);
    if (!std::isfinite(value)) error = std::numeric_limits<double>::infinity();
    return {a, b, value, error};
}

// One factor of ln|g(jw)|: a real root, or a conjugate pair represented by
// its upper member; sign +1 for zeros and -1 for poles.
struct Factor {
    cplx root;
    bool pair;
    double sign;
};

std::vector<Factor> factorize(const RationalTF& g) {
    std::vector<Factor> out;
    auto add = [&](std::span<const cplx> roots, double sign) {
        std::vector<bool> used(roots.size(), false);
        for (std::size_t i = 0; i < roots.size(); ++i) {
            if (used[i]) continue;
            used[i] = true;
            const cplx r = roots[i];
            const double scale = std::max(1.0, std::abs(r));
            if (std::abs(r.imag()) <= kConjPairTol * scale) {
                out.push_back({cplx{r.real(), 0.0}, false, sign});
                continue;
            }
            std::size_t best = roots.size();
            double best_dist = std::numeric_limits<double>::infinity();
            for (std::size_t k = i + 1; k < roots.size(); ++k) {
                if (used[k]) continue;
                const double d = std::abs(roots[k] - std::conj(r));
                if (d < best_dist) {
                    best = k;
                    best_dist = d;
                }
            }
            if (best == roots.size()) throw Error(ErrorCode::NotConjugateClosed, "quadrature: unpaired complex root");
            used[best] = true;
            out.push_back({r.imag() > 0 ? r : std::conj(r), true, sign});
        }
    };
    add(g.zeros(), 1.0);
    add(g.poles(), -1.0);
    return out;
}

double log1p_ratio(double x) { return x == 0.0 ? 1.0 : std::log1p(x) / x; }

/**
 * ln|g(jw)| for a real-coefficient continuous-time function, split so that
 * both ends of the axis can be integrated without cancellation:
 *
 *   ln|g(jw)| = c_inf + d*ln|w| + S_inf(1/w)   (large |w|)
 *   ln|g(jw)| = c_0 + S_0(w)                   (small |w|)
 *
 * where S_inf(v) and S_0(w) are O(v^2) and O(w^2); the helpers return S/v^2
 * and S/w^2 directly.
 */
class CtLogMagnitude {
public:
    explicit CtLogMagnitude(const RationalTF& g) : g_(g), factors_(factorize(g)) {
        degree_ = static_cast<int>(g.zeros().size()) - static_cast<int>(g.poles().size());
        c_inf_ = std::log(std::abs(g.gain()));
        if (degree_ == 0 && std::abs(c_inf_) <= kLimitSnap) c_inf_ = 0.0;
        c_0_ = std::log(std::abs(g.gain()));
        for (const auto& fa : factors_) c_0_ += fa.sign * (fa.pair ? 2.0 : 1.0) * std::log(std::abs(fa.root));
        if (std::abs(c_0_) <= kLimitSnap) c_0_ = 0.0;
    }

    double direct(double w) const { return g_.log_abs_at(cplx{0.0, w}); }

    int degree() const { return degree_; }
    double c_inf() const { return c_inf_; }
    double c_0() const { return c_0_; }

    // S_inf(v) / v^2.
    double tail_over_v2(double v) const {
        double s = 0.0;
        const double v2 = v * v;
        for (const auto& fa : factors_) {
            const double re = fa.root.real();
            const double m2 = std::norm(fa.root);
            const double x_over = fa.pair ? (4.0 * re * re - 2.0 * m2) + m2 * m2 * v2 : re * re;
            s += fa.sign * 0.5 * log1p_ratio(x_over * v2) * x_over;
        }
        return s;
    }

    // S_0(w) / w^2.
    double head_over_w2(double w) const {
        double s = 0.0;
        const double w2 = w * w;
        for (const auto& fa : factors_) {
            const double re = fa.root.real();
            const double m2 = std::norm(fa.root);
            const double x_over = fa.pair ? ((4.0 * re * re - 2.0 * m2) + w2) / (m2 * m2) : 1.0 / m2;
            s += fa.sign * 0.5 * log1p_ratio(x_over * w2) * x_over;
        }
        return s;
    }

    // ln|g(jw)| * (1 + w^2), stable for any w.
    double scaled_by_sec2(double w) const {
        const double aw = std::abs(w);
        if (aw <= 1.0) return direct(w) * (1.0 + w * w);
        const double v = 1.0 / aw;
        const double constant = c_inf_ + degree_ * std::log(aw);
        return constant * (1.0 + w * w) + tail_over_v2(v) * (1.0 + v * v);
    }

    // ln|g(j/u)| * (1 + u^2), stable for any u.
    double inverted_scaled_by_sec2(double u) const {
        const double au = std::abs(u);
        if (au <= 1.0) return direct(1.0 / u) * (1.0 + u * u);
        const double w = 1.0 / au;
        return c_0_ * (1.0 + u * u) + head_over_w2(w) * (1.0 + w * w);
    }

    // ln|g(jw)| for |w| >= 1 via the tail split.
    double tail_value(double w) const {
        const double aw = std::abs(w);
        const double v = 1.0 / aw;
        return c_inf_ + degree_ * std::log(aw) + tail_over_v2(v) * v * v;
    }

    // ln|g(jw)| for |w| <= 1 via the head split.
    double head_value(double w) const { return c_0_ + head_over_w2(w) * w * w; }

    const std::vector<Factor>& factors() const { return factors_; }

private:
    const RationalTF& g_;
    std::vector<Factor> factors_;
    int degree_ = 0;
    double c_inf_ = 0.0;
    double c_0_ = 0.0;
};

void reject_boundary(const RationalTF& g, const char* who) {
    for (const auto list : {g.zeros(), g.poles()}) {
        if (!classify(list, g.domain(), kDefaultEpsClass).boundary.empty()) {
            throw Error(ErrorCode::BoundaryRoot, std::string(who) + ": root on the stability boundary");
        }
    }
}

void require(const RationalTF& g, TimeDomain d, const char* who) {
    if (g.domain() != d) {
        throw Error(ErrorCode::DomainMismatch, std::string(who) + ": wrong time domain");
    }
    if (g.is_zero()) throw Error(ErrorCode::ZeroGain, std::string(who) + ": log of the zero function");
}

void check_options(const QuadratureOptions& opt) {
    if (!(opt.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "quadrature: tol must be positive");
    if (opt.max_evaluations < 2 * kProbeBudget) {
        throw Error(ErrorCode::InvalidArgument, "quadrature: evaluation budget too small");
    }
}

// Breakpoints in theta = atan(w) for features of the integrand at |w| = t.
std::vector<double> theta_breaks(const std::vector<double>& scales, bool symmetric) {
    constexpr double half_pi = std::numbers::pi / 2.0;
    std::vector<double> out{0.0, half_pi, std::atan(1.0)};
    for (const double t : scales) {
        if (!(t > 0.0) || !std::isfinite(t)) continue;
        const double th = std::atan(t);
        if (th > 1e-9 && th < half_pi - 1e-9) out.push_back(th);
    }
    if (!symmetric) {
        const std::size_t n = out.size();
        for (std::size_t i = 1; i < n; ++i) out.push_back(-out[i]);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(), [](double x, double y) { return std::abs(x - y) <= 1e-12; }),
              out.end());
    return out;
}

QuadratureResult finish(const AdaptiveResult& r, Unit unit) {
    QuadratureResult out;
    out.value = r.value;
    out.abs_error_estimate = r.abs_error;
    out.n_evaluations = r.evaluations;
    out.unit = unit;
    return out;
}

QuadratureResult after_failure(const RationalTF& g, bool weighted, const AdaptiveResult& r, double tol) {
    QuadratureResult probe = divergence_probe(g, weighted, tol);
    if (probe.diverged) {
        probe.n_evaluations += r.evaluations;
        return probe;
    }
    throw Error(ErrorCode::NotConverged,
                "quadrature: error estimate " + std::to_string(r.abs_error) + " above tolerance after " +
                    std::to_string(r.evaluations) + " evaluations, and the tail does not diverge");
}

}  // namespace

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, std::vector<double> breaks, double tol,
                                  long max_evaluations) {
    if (breaks.size() < 2) throw Error(ErrorCode::InvalidArgument, "integrate_adaptive: need at least two breakpoints");
    std::sort(breaks.begin(), breaks.end());
    const double span = breaks.back() - breaks.front();

    std::vector<Panel> panels;
    std::vector<bool> active;
    AdaptiveResult out;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (breaks[i + 1] <= breaks[i]) continue;
        panels.push_back(gk15(f, breaks[i], breaks[i + 1]));
        active.push_back(true);
        out.evaluations += 15;
    }

    // Max-heap on error; ties broken by panel index so the refinement order
    // is independent of the heap implementation.
    auto worse = [&](std::size_t x, std::size_t y) {
        if (panels[x].error != panels[y].error) return panels[x].error < panels[y].error;
        return x > y;
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(worse)> heap(worse);
    for (std::size_t i = 0; i < panels.size(); ++i) heap.push(i);

    auto total_error = [&] {
        double e = 0.0;
        for (std::size_t i = 0; i < panels.size(); ++i)
            if (active[i]) e += panels[i].error;
        return e;
    };

    double err = total_error();
    long since_resum = 0;
    while (err > tol && !heap.empty() && out.evaluations + 30 <= max_evaluations) {
        const std::size_t i = heap.top();
        heap.pop();
        const Panel p = panels[i];
        const double mid = 0.5 * (p.a + p.b);
        if (p.b - p.a <= kMinPanelRel * std::max(span, std::abs(mid))) continue;  // frozen: stays active
        active[i] = false;
        const Panel left = gk15(f, p.a, mid);
        const Panel right = gk15(f, mid, p.b);
        out.evaluations += 30;
        panels.push_back(left);
        active.push_back(true);
        heap.push(panels.size() - 1);
        panels.push_back(right);
        active.push_back(true);
        heap.push(panels.size() - 1);
        err += left.error + right.error - p.error;
        if (++since_resum == 64 || !(err > tol)) {
            err = total_error();
            since_resum = 0;
        }
    }

    // Ordered reduction over panels in left-to-right order.
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < panels.size(); ++i)
        if (active[i]) order.push_back(i);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return panels[x].a < panels[y].a; });
    for (const std::size_t i : order) {
        out.value += panels[i].value;
        out.abs_error += panels[i].error;
    }
    out.converged = std::isfinite(out.value) && out.abs_error <= tol;
    return out;
}

QuadratureResult ct_log_integral(const RationalTF& g, const QuadratureOptions& opt) {
    require(g, TimeDomain::Continuous, "ct_log_integral");
    reject_boundary(g, "ct_log_integral");
    check_options(opt);
    const CtLogMagnitude lm(g);

    std::vector<double> scales;
    for (const auto& fa : lm.factors()) {
        scales.push_back(std::abs(fa.root.imag()));
        scales.push_back(std::abs(fa.root));
    }
    const double norm = opt.use_symmetry ? 1.0 / std::numbers::pi : 0.5 / std::numbers::pi;
    auto integrand = [&](double theta) { return norm * lm.scaled_by_sec2(std::tan(theta)); };
    const AdaptiveResult r = integrate_adaptive(integrand, theta_breaks(scales, opt.use_symmetry), opt.tol,
                                                opt.max_evaluations - kProbeBudget);
    if (r.converged) return finish(r, Unit::Nats);
    return after_failure(g, false, r, opt.tol);
}

QuadratureResult ct_weighted_log_integral(const RationalTF& g, const QuadratureOptions& opt) {
    require(g, TimeDomain::Continuous, "ct_weighted_log_integral");
    for (const auto list : {g.zeros(), g.poles()}) {
        for (const auto& r : list) {
            if (std::abs(r) <= kDefaultEpsClass) {
                throw Error(ErrorCode::OriginRoot, "ct_weighted_log_integral: g has a root at s = 0");
            }
        }
    }
    reject_boundary(g, "ct_weighted_log_integral");
    check_options(opt);
    const CtLogMagnitude lm(g);

    // In the inverted variable u = 1/w each root r behaves like 1/r.
    std::vector<double> scales;
    for (const auto& fa : lm.factors()) {
        const cplx inv = 1.0 / fa.root;
        scales.push_back(std::abs(inv.imag()));
        scales.push_back(std::abs(inv));
    }
    const double norm = opt.use_symmetry ? 1.0 / std::numbers::pi : 0.5 / std::numbers::pi;
    auto integrand = [&](double theta) { return norm * lm.inverted_scaled_by_sec2(std::tan(theta)); };
    const AdaptiveResult r = integrate_adaptive(integrand, theta_breaks(scales, opt.use_symmetry), opt.tol,
                                                opt.max_evaluations - kProbeBudget);
    if (r.converged) return finish(r, Unit::Nats);
    return after_failure(g, true, r, opt.tol);
}

QuadratureResult dt_log_integral(const RationalTF& g, const QuadratureOptions& opt) {
    require(g, TimeDomain::Discrete, "dt_log_integral");
    reject_boundary(g, "dt_log_integral");
    check_options(opt);

    const double lo = opt.use_symmetry ? 0.0 : -std::numbers::pi;
    std::vector<double> breaks{lo, std::numbers::pi};
    for (const auto list : {g.zeros(), g.poles()}) {
        for (const auto& r : list) {
            if (std::abs(std::abs(r) - 1.0) > kNearCircle) continue;
            for (const double a : {std::arg(r), -std::arg(r)}) {
                if (a > lo && a < std::numbers::pi) breaks.push_back(a);
            }
        }
    }
    const double norm = (opt.use_symmetry ? 1.0 : 0.5) / std::numbers::pi / std::numbers::ln2;
    auto integrand = [&](double w) { return norm * g.log_abs_at(std::polar(1.0, w)); };
    const AdaptiveResult r = integrate_adaptive(integrand, std::move(breaks), opt.tol, opt.max_evaluations);
    if (!r.converged) {
        throw Error(ErrorCode::NotConverged, "dt_log_integral: error estimate " + std::to_string(r.abs_error) +
                                                 " above tolerance after " + std::to_string(r.evaluations) +
                                                 " evaluations");
    }
    return finish(r, Unit::Bits);
}

QuadratureResult divergence_probe(const RationalTF& g, bool weighted, double tol) {
    require(g, TimeDomain::Continuous, "divergence_probe");
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "divergence_probe: tol must be positive");
    if (weighted) {
        for (const auto list : {g.zeros(), g.poles()}) {
            for (const auto& r : list) {
                if (std::abs(r) <= kDefaultEpsClass) {
                    throw Error(ErrorCode::OriginRoot, "divergence_probe: g has a root at s = 0");
                }
            }
        }
    }
    const CtLogMagnitude lm(g);

    // Unweighted: (1/pi) ln|g(jw)| on [R, 10R] and on [1/(10R), 1/R].
    // Weighted, in u = 1/w: (1/pi) ln|g(j/u)| on the same two ranges.
    auto far = [&](double x) {
        return (weighted ? lm.head_value(1.0 / x) : lm.tail_value(x)) / std::numbers::pi;
    };
    auto near = [&](double x) {
        return (weighted ? lm.tail_value(1.0 / x) : lm.head_value(x)) / std::numbers::pi;
    };

    QuadratureResult out;
    out.unit = Unit::Nats;
    std::vector<double> increments;
    const double piece_tol = tol * 1e-2;
    for (int k = 2; k <= 5; ++k) {
        const double r0 = std::pow(10.0, k);
        const double r1 = 10.0 * r0;
        const AdaptiveResult hi = integrate_adaptive(far, {r0, r1}, piece_tol * r1, kProbePieceBudget);
        const AdaptiveResult lo = integrate_adaptive(near, {1.0 / r1, 1.0 / r0}, piece_tol, kProbePieceBudget);
        out.n_evaluations += hi.evaluations + lo.evaluations;
        increments.push_back(hi.value + lo.value);
    }

    const std::size_t n = increments.size();
    const double threshold = 10.0 * tol;
    const double a = increments[n - 3];
    const double b = increments[n - 2];
    const double c = increments[n - 1];
    const bool same_sign = (a > 0 && b > 0 && c > 0) || (a < 0 && b < 0 && c < 0);
    const bool large = std::abs(a) > threshold && std::abs(b) > threshold && std::abs(c) > threshold;
    const bool growing = std::abs(a) <= std::abs(b) && std::abs(b) <= std::abs(c);
    if (same_sign && large && growing) {
        out.diverged = true;
        out.divergence_sign = c > 0 ? +1 : -1;
        out.value = out.divergence_sign * std::numeric_limits<double>::infinity();
        out.abs_error_estimate = std::numeric_limits<double>::infinity();
        return out;
    }
    bool shrinking = true;
    for (std::size_t i = 1; i < n; ++i) shrinking = shrinking && std::abs(increments[i]) < std::abs(increments[i - 1]);
    if (std::abs(c) <= threshold || shrinking) {
        for (const double x : increments) out.value += x;
        out.abs_error_estimate = std::abs(c);
        return out;
    }
    throw Error(ErrorCode::Inconclusive, "divergence_probe: tail increments neither settle nor grow consistently");
}

}  // namespace filtsens
