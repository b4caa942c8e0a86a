#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

namespace filtsens {

using cplx = std::complex<double>;

/**
 * Dense univariate polynomial with complex coefficients, stored in ascending
 * power order. The leading coefficient is nonzero except for the zero
 * polynomial, which is a single zero coefficient.
 */
class Polynomial {
public:
    /// The zero polynomial.
    Polynomial() : coeffs_{cplx{0.0}} {}

    /// Trailing (highest-power) coefficients that are exactly zero are dropped.
    explicit Polynomial(std::vector<cplx> coeffs);
    Polynomial(std::initializer_list<cplx> coeffs)
        : Polynomial(std::vector<cplx>(coeffs)) {}

    [[nodiscard]] int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    [[nodiscard]] bool is_zero() const noexcept {
        return coeffs_.size() == 1 && coeffs_[0] == cplx{0.0};
    }
    [[nodiscard]] std::span<const cplx> coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] cplx operator[](std::size_t k) const { return coeffs_.at(k); }
    [[nodiscard]] cplx leading() const noexcept { return coeffs_.back(); }
    [[nodiscard]] double max_abs_coeff() const noexcept;

    /// True when every imaginary part is within rel_tol of the largest coefficient modulus.
    [[nodiscard]] bool is_real(double rel_tol = 1e-12) const noexcept;

    [[nodiscard]] cplx operator()(cplx x) const noexcept;

    [[nodiscard]] Polynomial derivative() const;

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    std::vector<cplx> coeffs_;
};

/// gain * prod(x - r) expanded into coefficients.
[[nodiscard]] Polynomial from_roots(cplx gain, std::span<const cplx> roots);

[[nodiscard]] Polynomial multiply(const Polynomial& a, const Polynomial& b);

/// Coefficientwise a - b. Leading coefficients whose modulus falls below
/// 1e-12 times the largest input coefficient modulus are treated as cancelled,
/// so the result reports its true degree.
[[nodiscard]] Polynomial subtract(const Polynomial& a, const Polynomial& b);

[[nodiscard]] cplx evaluate(const Polynomial& p, cplx x) noexcept;

/**
 * All roots of p with multiplicity.
 *
 * Eigenvalues of the balanced companion matrix, followed by two safeguarded
 * Newton steps per root. Polynomials with real coefficients go through the
 * real eigensolver and come back exactly conjugate-symmetric.
 * Throws ErrorCode::ZeroPolynomial for the zero polynomial.
 */
[[nodiscard]] std::vector<cplx> find_roots(const Polynomial& p);

}  // namespace filtsens
