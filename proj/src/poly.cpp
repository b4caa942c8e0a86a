#include "filtsens/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

#include <Eigen/Dense>

#include "filtsens/error.hpp"

namespace filtsens {

namespace {

constexpr double kCancelRel = 1e-12;
constexpr double kRealSnapRel = 1e-12;

// Parlett-Reinsch balancing with radix 2: rescales rows/columns so their
// off-diagonal norms are comparable, without changing the eigenvalues.
template <typename Matrix>
void balance(Matrix& a) {
    constexpr double radix = 2.0;
    constexpr double sqrdx = radix * radix;
    const Eigen::Index n = a.rows();
    bool done = false;
    while (!done) {
        done = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double c = 0.0;
            double r = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix;
            double f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= sqrdx;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                a.row(i) /= f;
                a.col(i) *= f;
            }
        }
    }
}

// Value and first derivative by Horner's scheme.
std::pair<cplx, cplx> horner_with_derivative(std::span<const cplx> c, cplx x) {
    cplx p = c.back();
    cplx dp{0.0};
    for (std::size_t k = c.size() - 1; k-- > 0;) {
        dp = dp * x + p;
        p = p * x + c[k];
    }
    return {p, dp};
}

void polish(std::span<const cplx> c, std::vector<cplx>& roots) {
    for (auto& r : roots) {
        for (int step = 0; step < 2; ++step) {
            const auto [p, dp] = horner_with_derivative(c, r);
            if (p == cplx{0.0} || dp == cplx{0.0}) break;
            const cplx candidate = r - p / dp;
            if (!std::isfinite(candidate.real()) || !std::isfinite(candidate.imag())) break;
            const auto [pc, dpc] = horner_with_derivative(c, candidate);
            (void)dpc;
            if (std::abs(pc) < std::abs(p)) {
                r = candidate;
            } else {
                break;
            }
        }
    }
}

// Eigenvalues of the balanced companion matrix of the monic polynomial with
// coefficients c (ascending, c.back() != 0, degree >= 2).
template <typename Scalar>
Eigen::VectorXcd companion_eigenvalues(std::span<const cplx> c) {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const auto n = static_cast<Eigen::Index>(c.size()) - 1;
    Matrix companion = Matrix::Zero(n, n);
    for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const cplx v = -c[static_cast<std::size_t>(i)] / c.back();
        if constexpr (std::is_same_v<Scalar, double>) {
            companion(i, n - 1) = v.real();
        } else {
            companion(i, n - 1) = v;
        }
    }
    balance(companion);
    if constexpr (std::is_same_v<Scalar, double>) {
        Eigen::EigenSolver<Matrix> solver(companion, false);
        if (solver.info() != Eigen::Success) {
            throw Error(ErrorCode::NotConverged, "find_roots: companion eigenvalue iteration did not converge");
        }
        return solver.eigenvalues();
    } else {
        Eigen::ComplexEigenSolver<Matrix> solver(companion, false);
        if (solver.info() != Eigen::Success) {
            throw Error(ErrorCode::NotConverged, "find_roots: companion eigenvalue iteration did not converge");
        }
        return solver.eigenvalues();
    }
}

// Real coefficients: the real eigensolver returns complex eigenvalues in
// exact conjugate pairs. Only the upper-half-plane member of each pair and
// the real roots are polished; the lower members are mirrored, so the result
// is exactly conjugate-symmetric.
std::vector<cplx> real_polynomial_roots(std::span<const cplx> c) {
    const Eigen::VectorXcd ev = companion_eigenvalues<double>(c);
    std::vector<cplx> upper;
    std::vector<cplx> real;
    long lower = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const cplx r = ev[i];
        if (r.imag() > 0.0) {
            upper.push_back(r);
        } else if (r.imag() < 0.0) {
            ++lower;
        } else {
            real.push_back(r);
        }
    }
    if (lower != static_cast<long>(upper.size())) {
        throw Error(ErrorCode::NotConverged, "find_roots: unpaired complex eigenvalue");
    }
    polish(c, upper);
    polish(c, real);
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(ev.size()));
    for (auto r : real) out.emplace_back(r.real(), 0.0);
    for (auto r : upper) {
        // Polishing may push a root across the real axis; fold it back.
        const double scale = std::max(1.0, std::abs(r));
        if (std::abs(r.imag()) <= kRealSnapRel * scale) {
            out.emplace_back(r.real(), 0.0);
            out.emplace_back(r.real(), 0.0);
            continue;
        }
        const cplx up{r.real(), std::abs(r.imag())};
        out.push_back(up);
        out.push_back(std::conj(up));
    }
    return out;
}

}  // namespace

Polynomial::Polynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
    while (coeffs_.size() > 1 && coeffs_.back() == cplx{0.0}) coeffs_.pop_back();
    if (coeffs_.empty()) coeffs_.push_back(cplx{0.0});
}

double Polynomial::max_abs_coeff() const noexcept {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

bool Polynomial::is_real(double rel_tol) const noexcept {
    const double limit = rel_tol * max_abs_coeff();
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [&](const cplx& c) { return std::abs(c.imag()) <= limit; });
}

cplx Polynomial::operator()(cplx x) const noexcept { return evaluate(*this, x); }

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() == 1) return Polynomial{};
    std::vector<cplx> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
    return Polynomial(std::move(d));
}

Polynomial from_roots(cplx gain, std::span<const cplx> roots) {
    std::vector<cplx> c{gain};
    c.reserve(roots.size() + 1);
    for (const auto& r : roots) {
        c.push_back(cplx{0.0});
        for (std::size_t k = c.size() - 1; k > 0; --k) c[k] = c[k - 1] - r * c[k];
        c[0] = -r * c[0];
    }
    return Polynomial(std::move(c));
}

Polynomial multiply(const Polynomial& a, const Polynomial& b) {
    const auto ca = a.coeffs();
    const auto cb = b.coeffs();
    std::vector<cplx> c(ca.size() + cb.size() - 1, cplx{0.0});
    for (std::size_t i = 0; i < ca.size(); ++i)
        for (std::size_t j = 0; j < cb.size(); ++j) c[i + j] += ca[i] * cb[j];
    return Polynomial(std::move(c));
}

Polynomial subtract(const Polynomial& a, const Polynomial& b) {
    const auto ca = a.coeffs();
    const auto cb = b.coeffs();
    const std::size_t n = std::max(ca.size(), cb.size());
    std::vector<cplx> c(n, cplx{0.0});
    for (std::size_t k = 0; k < ca.size(); ++k) c[k] += ca[k];
    for (std::size_t k = 0; k < cb.size(); ++k) c[k] -= cb[k];

    const double limit = kCancelRel * std::max(a.max_abs_coeff(), b.max_abs_coeff());
    while (c.size() > 1 && std::abs(c.back()) <= limit) c.pop_back();
    if (c.size() == 1 && std::abs(c[0]) <= limit) c[0] = cplx{0.0};
    return Polynomial(std::move(c));
}

cplx evaluate(const Polynomial& p, cplx x) noexcept {
    const auto c = p.coeffs();
    cplx acc = c.back();
    for (std::size_t k = c.size() - 1; k-- > 0;) acc = acc * x + c[k];
    return acc;
}

std::vector<cplx> find_roots(const Polynomial& p) {
    if (p.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "find_roots: zero polynomial has no finite root set");

    const auto all = p.coeffs();
    std::vector<cplx> roots;

    // Exact zeros at the origin are split off before the eigen solve.
    std::size_t shift = 0;
    while (shift < all.size() - 1 && all[shift] == cplx{0.0}) ++shift;
    roots.assign(shift, cplx{0.0});

    const std::span<const cplx> c = all.subspan(shift);
    const auto n = static_cast<Eigen::Index>(c.size()) - 1;
    if (n == 0) return roots;

    std::vector<cplx> found;
    if (n == 1) {
        found.push_back(-c[0] / c[1]);
        if (p.is_real()) found[0].imag(0.0);
    } else if (p.is_real()) {
        found = real_polynomial_roots(c);
    } else {
        const Eigen::VectorXcd ev = companion_eigenvalues<cplx>(c);
        found.assign(ev.data(), ev.data() + ev.size());
        polish(c, found);
    }
    roots.insert(roots.end(), found.begin(), found.end());
    return roots;
}

}  // namespace filtsens
