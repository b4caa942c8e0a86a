#include <doctest.h>

#include <cmath>
#include <numbers>

#include "filtsens/closedform.hpp"
#include "filtsens/error.hpp"
#include "filtsens/quad.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/reference.hpp"

using filtsens::cplx;
using filtsens::QuadratureOptions;
using filtsens::RationalTF;
using filtsens::TimeDomain;
using testsupport::reference_system;

namespace {

constexpr auto CT = TimeDomain::Continuous;
constexpr auto DT = TimeDomain::Discrete;

filtsens::ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const filtsens::Error& e) {
        return e.code();
    }
    FAIL("expected filtsens::Error");
    return filtsens::ErrorCode::InvalidArgument;
}

bool oracle_close(double q, double v) { return std::abs(q - v) <= std::max(1e-3, 1e-3 * std::abs(v)); }

}  // namespace

TEST_CASE("integrate_adaptive on smooth and kinked integrands") {
    const auto sine = filtsens::integrate_adaptive([](double x) { return std::sin(x); }, {0.0, std::numbers::pi}, 1e-12);
    CHECK(sine.converged);
    CHECK(sine.value == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(sine.abs_error <= 1e-12);

    const auto kink = filtsens::integrate_adaptive([](double x) { return std::abs(x - 0.3); }, {0.0, 1.0}, 1e-10);
    CHECK(kink.converged);
    CHECK(kink.value == doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-10));

    // A logarithmic singularity at an interior break point.
    const auto logs = filtsens::integrate_adaptive([](double x) { return std::log(std::abs(x)); }, {-1.0, 0.0, 1.0}, 1e-8);
    CHECK(logs.converged);
    CHECK(logs.value == doctest::Approx(-2.0).epsilon(1e-8));

    CHECK(code_of([] { (void)filtsens::integrate_adaptive([](double) { return 1.0; }, {0.0}, 1e-6); }) ==
          filtsens::ErrorCode::InvalidArgument);
}

TEST_CASE("integrate_adaptive respects the evaluation budget") {
    const auto r = filtsens::integrate_adaptive([](double x) { return std::sin(1.0 / (x + 1e-4)); }, {0.0, 1.0}, 1e-14, 3000);
    CHECK(r.evaluations <= 3000);
    CHECK_FALSE(r.converged);
}

TEST_CASE("integrate_adaptive is bit-reproducible") {
    auto f = [](double x) { return std::log(std::abs(std::cos(7 * x)) + 1e-3); };
    const auto a = filtsens::integrate_adaptive(f, {0.0, 3.0}, 1e-9);
    const auto b = filtsens::integrate_adaptive(f, {0.0, 3.0}, 1e-9);
    CHECK(a.value == b.value);
    CHECK(a.abs_error == b.abs_error);
    CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("CT quadrature of simple functions") {
    const auto allpass = filtsens::ct_log_integral(RationalTF(1.0, {1.0}, {-1.0}, CT));
    CHECK(std::abs(allpass.value) <= 1e-6);
    CHECK_FALSE(allpass.diverged);
    CHECK(allpass.abs_error_estimate <= 1e-6);
    CHECK(allpass.unit == filtsens::Unit::Nats);

    // (s - 2)(s + 0.5) / ((s + 1)(s + 3)): (1/2)(2 + 0.5 - 1 - 3) = -0.75.
    const auto mixed = filtsens::ct_log_integral(RationalTF(1.0, {2.0, -0.5}, {-1.0, -3.0}, CT));
    CHECK(mixed.value == doctest::Approx(-0.75).epsilon(1e-6));

    const auto one = filtsens::ct_weighted_log_integral(RationalTF::constant(1.0, CT));
    CHECK(std::abs(one.value) <= 1e-12);
}

TEST_CASE("CT quadrature agrees with a crude midpoint rule") {
    const RationalTF g(1.0, {cplx{0.4, 1.5}, cplx{0.4, -1.5}, -0.2}, {cplx{-0.3, 0.8}, cplx{-0.3, -0.8}, -2.0}, CT);
    const auto q = filtsens::ct_log_integral(g);
    const double mid = testsupport::ct_midpoint([&](double w) { return g.log_abs_at(cplx{0.0, w}); }, 1e6);
    // Truncation at 1e6 leaves an O(1/W) tail.
    CHECK(std::abs(q.value - mid) <= 1e-4);
    CHECK(q.value == doctest::Approx(0.5 * (0.8 + 0.2 - 0.6 - 2.0)).epsilon(1e-6));
}

TEST_CASE("full axis and symmetric reduction agree") {
    for (const char* name : {"ct_p_case1", "ct_p_case2", "ct_p_case3"}) {
        CAPTURE(name);
        const RationalTF p = filtsens::build_p(reference_system(name).system);
        const auto half = filtsens::ct_log_integral(p, QuadratureOptions{});
        const auto full = filtsens::ct_log_integral(p, QuadratureOptions{.use_symmetry = false});
        CHECK(std::abs(half.value - full.value) <= half.abs_error_estimate + full.abs_error_estimate);
    }
    const RationalTF m = filtsens::build_m(reference_system("ct_m_balanced").system);
    const auto half = filtsens::ct_weighted_log_integral(m, QuadratureOptions{});
    const auto full = filtsens::ct_weighted_log_integral(m, QuadratureOptions{.use_symmetry = false});
    CHECK(std::abs(half.value - full.value) <= half.abs_error_estimate + full.abs_error_estimate);

    const RationalTF pd = filtsens::build_p(reference_system("dt_p_case1").system);
    const auto dh = filtsens::dt_log_integral(pd, QuadratureOptions{});
    const auto df = filtsens::dt_log_integral(pd, QuadratureOptions{.use_symmetry = false});
    CHECK(std::abs(dh.value - df.value) <= dh.abs_error_estimate + df.abs_error_estimate);
}

TEST_CASE("quadrature reproduces the reference values") {
    const auto c1 = filtsens::ct_log_integral(filtsens::build_p(reference_system("ct_p_case1").system));
    CHECK(std::abs(c1.value - 0.0101) <= 1e-3);
    const auto c3 = filtsens::ct_log_integral(filtsens::build_p(reference_system("ct_p_case3").system));
    CHECK(std::abs(c3.value - 0.3991) <= 1e-3);
    const auto m = filtsens::ct_weighted_log_integral(filtsens::build_m(reference_system("ct_m_balanced").system));
    CHECK(std::abs(m.value + 28.6667) <= 5e-2);
    const auto d1 = filtsens::dt_log_integral(filtsens::build_p(reference_system("dt_p_case1").system));
    CHECK(std::abs(d1.value - 1.0512) <= 1e-3);
    CHECK(d1.unit == filtsens::Unit::Bits);
    const auto dm = filtsens::dt_log_integral(filtsens::build_m(reference_system("dt_m").system));
    CHECK(std::abs(dm.value - 0.5443) <= 1e-3);
}

TEST_CASE("DT quadrature of (z - 2)/z is one bit") {
    const auto q = filtsens::dt_log_integral(RationalTF(1.0, {2.0}, {0.0}, DT));
    CHECK(q.value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("DT quadrature near the unit circle") {
    // Roots at modulus 0.97 and 1.03 produce sharp peaks.
    const RationalTF g(1.0, {std::polar(1.03, 1.0), std::polar(1.03, -1.0)},
                       {std::polar(0.97, 2.0), std::polar(0.97, -2.0)}, DT);
    const auto q = filtsens::dt_log_integral(g);
    CHECK(q.value == doctest::Approx(filtsens::lemma_direct_dt(g).value).epsilon(1e-7));
}

TEST_CASE("divergence verdicts") {
    SUBCASE("Case 4 diverges upward") {
        const RationalTF p = filtsens::build_p(reference_system("ct_p_case4").system);
        const auto q = filtsens::ct_log_integral(p);
        CHECK(q.diverged);
        CHECK(q.divergence_sign == 1);
        CHECK(q.value == std::numeric_limits<double>::infinity());
        CHECK(q.n_evaluations <= filtsens::kDefaultEvalBudget);
        const auto probe = filtsens::divergence_probe(p, false);
        CHECK(probe.diverged);
        CHECK(probe.divergence_sign == 1);
    }
    SUBCASE("unbalanced M diverges downward") {
        const RationalTF m = filtsens::build_m(reference_system("ct_m_unbalanced").system);
        const auto q = filtsens::ct_weighted_log_integral(m);
        CHECK(q.diverged);
        CHECK(q.divergence_sign == -1);
        CHECK(q.n_evaluations <= filtsens::kDefaultEvalBudget);
    }
    SUBCASE("all-pass settles") {
        const auto probe = filtsens::divergence_probe(RationalTF(1.0, {1.0}, {-1.0}, CT), false);
        CHECK_FALSE(probe.diverged);
    }
    SUBCASE("bounded Case 3 settles") {
        const auto probe = filtsens::divergence_probe(filtsens::build_p(reference_system("ct_p_case3").system), false);
        CHECK_FALSE(probe.diverged);
    }
}

TEST_CASE("divergence follows the Case 3 knife edge") {
    const double kf = testsupport::reference_document("ct_p_case3").f.gain();
    testsupport::Rng rng(67);
    for (int trial = 0; trial < 6; ++trial) {
        const double rel = (rng.coin() ? 1 : -1) * std::pow(10.0, rng.uniform(-3, -1));
        CAPTURE(rel);
        const auto v = testsupport::with_filter_gain("ct_p_case3", kf * (1 + rel));
        const auto closed = filtsens::ct_p_integral(v.system);
        REQUIRE_FALSE(closed.bounded);
        const auto probe = filtsens::divergence_probe(filtsens::build_p(v.system), false);
        CHECK(probe.diverged);
        CHECK(probe.divergence_sign == closed.sign_if_unbounded);
    }
}

TEST_CASE("quadrature argument checks") {
    CHECK(code_of([] { (void)filtsens::ct_log_integral(RationalTF::constant(1.0, DT)); }) ==
          filtsens::ErrorCode::DomainMismatch);
    CHECK(code_of([] { (void)filtsens::ct_log_integral(RationalTF(1.0, {cplx{0, 1}, cplx{0, -1}}, {-1.0, -1.0}, CT)); }) ==
          filtsens::ErrorCode::BoundaryRoot);
    CHECK(code_of([] { (void)filtsens::ct_weighted_log_integral(RationalTF(1.0, {0.0}, {-1.0}, CT)); }) ==
          filtsens::ErrorCode::OriginRoot);
    CHECK(code_of([] { (void)filtsens::ct_log_integral(RationalTF::constant(1.0, CT), QuadratureOptions{.tol = 0.0}); }) ==
          filtsens::ErrorCode::InvalidArgument);
    CHECK(code_of([] { (void)filtsens::dt_log_integral(RationalTF::constant(0.0, DT)); }) == filtsens::ErrorCode::ZeroGain);
}

TEST_CASE("oracle agreement on generated systems") {
    testsupport::Rng rng(71);
    for (int trial = 0; trial < 30; ++trial) {
        const auto d = trial % 3 == 0 ? DT : CT;
        const int excess = rng.integer(0, 2);
        auto gains = testsupport::GainTarget::Free;
        if (d == CT && excess == 0) gains = testsupport::GainTarget::TwiceKx;
        const auto g = testsupport::generate_system(rng, d, excess, gains);
        const auto v = filtsens::validate(g.gx, g.gy, g.f);
        REQUIRE(v.report.ok());
        const RationalTF p = filtsens::build_p(v.system);
        const auto closed = d == CT ? filtsens::ct_p_integral(v.system) : filtsens::dt_p_integral(v.system);
        REQUIRE(closed.bounded);
        const auto q = d == CT ? filtsens::ct_log_integral(p) : filtsens::dt_log_integral(p);
        CHECK(oracle_close(q.value, closed.value));
    }
}
