#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "filtsens/closedform.hpp"
#include "filtsens/error.hpp"

namespace filtsens {

namespace {

constexpr double kSharedMatchTol = 1e-6;

// Minimum-total-distance assignment of each target to a distinct candidate.
// Exact dynamic programme over subsets of targets; the target count is the
// number of shared unstable poles, which is small in practice.
std::vector<std::size_t> optimal_assignment(std::span<const cplx> targets, std::span<const cplx> candidates) {
    const std::size_t k = targets.size();
    const std::size_t n = candidates.size();
    if (k == 0) return {};
    if (k > n) throw Error(ErrorCode::SharedPoleNotCancelled, "more shared unstable poles than roots of Gamma");

    if (k > 16) {
        // Greedy fallback keeps the cost bounded for pathological inputs.
        std::vector<std::size_t> pick(k);
        std::vector<bool> used(n, false);
        for (std::size_t t = 0; t < k; ++t) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < n; ++c) {
                if (used[c]) continue;
                const double d = root_distance(targets[t], candidates[c]);
                if (d < best) {
                    best = d;
                    pick[t] = c;
                }
            }
            used[pick[t]] = true;
        }
        return pick;
    }

    const std::size_t full = (std::size_t{1} << k) - 1;
    const double inf = std::numeric_limits<double>::infinity();
    // cost[c][mask]: best cost using candidates [0, c) to cover `mask`.
    std::vector<std::vector<double>> cost(n + 1, std::vector<double>(full + 1, inf));
    std::vector<std::vector<int>> choice(n + 1, std::vector<int>(full + 1, -1));
    cost[0][0] = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t mask = 0; mask <= full; ++mask) {
            if (cost[c][mask] == inf) continue;
            if (cost[c][mask] < cost[c + 1][mask]) {
                cost[c + 1][mask] = cost[c][mask];
                choice[c + 1][mask] = -1;
            }
            for (std::size_t t = 0; t < k; ++t) {
                if (mask & (std::size_t{1} << t)) continue;
                const std::size_t next = mask | (std::size_t{1} << t);
                const double v = cost[c][mask] + root_distance(targets[t], candidates[c]);
                if (v < cost[c + 1][next]) {
                    cost[c + 1][next] = v;
                    choice[c + 1][next] = static_cast<int>(t);
                }
            }
        }
    }
    std::vector<std::size_t> pick(k);
    std::size_t mask = full;
    for (std::size_t c = n; c > 0; --c) {
        const int t = choice[c][mask];
        if (t >= 0) {
            pick[static_cast<std::size_t>(t)] = c - 1;
            mask &= ~(std::size_t{1} << t);
        }
    }
    return pick;
}

std::string describe(cplx r) {
    std::ostringstream os;
    os.precision(10);
    os << r;
    return os.str();
}

}  // namespace

int FilteringSystem::degree_excess() const noexcept {
    const auto mx = static_cast<int>(gx.zeros().size());
    const auto nx = static_cast<int>(gx.poles().size());
    const auto m = static_cast<int>(fgy.zeros().size());
    const auto n = static_cast<int>(fgy.poles().size());
    return (mx + n) - (nx + m);
}

Polynomial gamma_polynomial(const FilteringSystem& sys) {
    std::vector<cplx> first(sys.gx.zeros().begin(), sys.gx.zeros().end());
    first.insert(first.end(), sys.fgy_other_poles.begin(), sys.fgy_other_poles.end());
    std::vector<cplx> second = sys.gx_stable_poles;
    second.insert(second.end(), sys.fgy.zeros().begin(), sys.fgy.zeros().end());
    return subtract(from_roots(sys.kx(), first), from_roots(sys.k(), second));
}

GammaFactorization gamma_factorization(const FilteringSystem& sys) {
    GammaFactorization out;
    out.gamma = gamma_polynomial(sys);
    if (out.gamma.is_zero()) {
        throw Error(ErrorCode::DegreeCollapse, "G_x - F*G_y vanishes identically; Gamma has no factorization");
    }

    const int excess = sys.degree_excess();
    const int deg_first = static_cast<int>(sys.gx.zeros().size() + sys.fgy_other_poles.size());
    const int deg_second = static_cast<int>(sys.gx_stable_poles.size() + sys.fgy.zeros().size());
    const int predicted = sys.fgy.is_zero() ? deg_first : std::max(deg_first, deg_second);
    const double kx = sys.kx();
    const double k = sys.k();
    const bool collapse_expected =
        excess == 0 && !sys.fgy.is_zero() && std::abs(kx - k) <= sys.tol.eps_gain * std::abs(kx);

    if (collapse_expected) {
        std::vector<cplx> c(out.gamma.coeffs().begin(), out.gamma.coeffs().end());
        const double limit = sys.tol.eps_gain * out.gamma.max_abs_coeff();
        while (c.size() > 1 && std::abs(c.back()) <= limit) c.pop_back();
        out.gamma = Polynomial(std::move(c));
        out.collapsed = out.gamma.degree() < predicted;
    } else if (out.gamma.degree() < predicted) {
        throw Error(ErrorCode::DegreeCollapse, "Gamma has degree " + std::to_string(out.gamma.degree()) +
                                                   " but the degree and gain conditions predict " +
                                                   std::to_string(predicted));
    }
    out.lead = out.gamma.leading().real();

    std::vector<cplx> roots;
    if (out.gamma.degree() >= 1) roots = find_roots(out.gamma);

    const auto pick = optimal_assignment(sys.shared_unstable, roots);
    std::vector<bool> taken(roots.size(), false);
    for (std::size_t t = 0; t < pick.size(); ++t) {
        const cplx root = roots[pick[t]];
        if (root_distance(root, sys.shared_unstable[t]) > kSharedMatchTol) {
            throw Error(ErrorCode::SharedPoleNotCancelled,
                        "G_x - F*G_y does not vanish at shared unstable pole " + describe(sys.shared_unstable[t]) +
                            " (nearest Gamma root " + describe(root) + ")");
        }
        taken[pick[t]] = true;
        out.matched_shared_poles.push_back(root);
    }
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (!taken[i]) out.residual_roots.push_back(roots[i]);
    }
    for (const auto& r : out.residual_roots) {
        if (is_unstable(r, sys.domain, sys.tol.eps_class)) out.nmp_residual.push_back(r);
    }

    if (out.gamma.degree() >= 1) {
        const auto c = out.gamma.coeffs();
        const std::size_t d = c.size() - 1;
        const cplx expected = -c[d - 1] / c[d];
        cplx sum{0.0};
        double scale = 1.0;
        for (const auto& r : roots) {
            sum += r;
            scale += std::abs(r);
        }
        out.coefficient_identity_residual = std::abs(sum - expected) / std::max(scale, std::abs(expected));
    }
    return out;
}

}  // namespace filtsens
