#include <doctest.h>

#include <cmath>
#include <numeric>

#include "filtsens/closedform.hpp"
#include "filtsens/error.hpp"
#include "filtsens/quad.hpp"
#include "support/generators.hpp"
#include "support/reference.hpp"

using filtsens::CaseTag;
using filtsens::cplx;
using filtsens::IntegralOutcome;
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

double term(const IntegralOutcome& o, std::string_view name) {
    for (const auto& t : o.terms)
        if (t.name == name) return t.contribution;
    FAIL("missing term " << name);
    return 0.0;
}

double term_sum(const IntegralOutcome& o) {
    return std::accumulate(o.terms.begin(), o.terms.end(), 0.0,
                           [](double a, const filtsens::Term& t) { return a + t.contribution; });
}

}  // namespace

TEST_CASE("CT P-integral reference values") {
    const auto c1 = filtsens::ct_p_integral(reference_system("ct_p_case1").system);
    CHECK(c1.bounded);
    CHECK(c1.case_tag == CaseTag::CT_P_Case1);
    CHECK(std::abs(c1.value - 0.0101) <= 5e-4);
    CHECK(c1.unit == filtsens::Unit::Nats);

    const auto c2 = filtsens::ct_p_integral(reference_system("ct_p_case2").system);
    CHECK(c2.case_tag == CaseTag::CT_P_Case2);
    CHECK(std::abs(c2.value + 0.5015) <= 5e-4);
    CHECK(term(c2, "K_over_2Kx") == doctest::Approx(-1.25 * 1.34 / (2 * 1.67)).epsilon(1e-14));

    const auto c3 = filtsens::ct_p_integral(reference_system("ct_p_case3").system);
    CHECK(c3.case_tag == CaseTag::CT_P_Case3_Bounded);
    CHECK(std::abs(c3.value - 0.3991) <= 5e-4);

    const auto c4 = filtsens::ct_p_integral(reference_system("ct_p_case4").system);
    CHECK(c4.case_tag == CaseTag::CT_P_Unbounded);
    CHECK_FALSE(c4.bounded);
    CHECK(c4.sign_if_unbounded == 1);
    CHECK(c4.condition == "m_x+n = n_x+m and K ≠ 2K_x");
}

TEST_CASE("terms sum to the value") {
    for (const auto& s : filtsens::paper_scenarios()) {
        CAPTURE(s.name);
        const auto v = reference_system(s.name);
        const bool ct = v.system.domain == CT;
        const auto o = s.kind == filtsens::IntegralKind::P
                           ? (ct ? filtsens::ct_p_integral(v.system) : filtsens::dt_p_integral(v.system))
                           : (ct ? filtsens::ct_m_integral(v.system) : filtsens::dt_m_integral(v.system));
        if (o.bounded) {
            CHECK(term_sum(o) == o.value);
            CHECK(o.sign_if_unbounded == 0);
        } else {
            CHECK(o.sign_if_unbounded != 0);
        }
        CHECK(o.case_tag.has_value());
    }
}

TEST_CASE("CT M-integral reference values") {
    const auto m = filtsens::ct_m_integral(reference_system("ct_m_balanced").system);
    CHECK(m.bounded);
    CHECK(m.case_tag == CaseTag::CT_M_Bounded);
    CHECK(std::abs(m.value + 86.0 / 3.0) <= 1e-9);

    const auto u = filtsens::ct_m_integral(reference_system("ct_m_unbalanced").system);
    CHECK(u.case_tag == CaseTag::CT_M_Unbounded);
    CHECK(u.sign_if_unbounded == -1);
}

TEST_CASE("CT M-integral of M = 1 is zero") {
    const RationalTF gx(2.0, {-1.0}, {-2.0, -3.0}, CT);
    const RationalTF gy(1.0, {-1.0}, {-2.0}, CT);
    const RationalTF f(2.0, {}, {-3.0}, CT);
    const auto m = filtsens::ct_m_integral(filtsens::validate(gx, gy, f).system);
    CHECK(m.bounded);
    CHECK(std::abs(m.value) <= 1e-15);
}

TEST_CASE("origin roots are rejected at validation and K = 0 by the M-integral") {
    const RationalTF gx(1.0, {}, {-1.0, -2.0}, CT);
    const RationalTF gy(1.0, {}, {-1.0}, CT);
    // Integrator-free but with an F G_y pole near the origin.
    const RationalTF f(1.0, {}, {-1e-12}, CT);
    CHECK(code_of([&] { (void)filtsens::ct_m_integral(filtsens::validate(gx, gy, f).system); }) ==
          filtsens::ErrorCode::BoundaryRoot);
    const auto k0 = testsupport::with_filter_gain("ct_p_case1", 0.0);
    CHECK(code_of([&] { (void)filtsens::ct_m_integral(k0.system); }) == filtsens::ErrorCode::ZeroGain);
}

TEST_CASE("zero filter gain forces the first case") {
    const auto v = testsupport::with_filter_gain("ct_p_case3", 0.0);
    const auto p = filtsens::ct_p_integral(v.system);
    CHECK(p.case_tag == CaseTag::CT_P_Case1);
    CHECK(p.bounded);
    // P = 1 here, so only the NMP zeros of G_x and the residual can contribute, and they cancel.
    CHECK(std::abs(p.value) <= 1e-12);
}

TEST_CASE("DT reference values") {
    const auto d1 = filtsens::dt_p_integral(reference_system("dt_p_case1").system);
    CHECK(d1.case_tag == CaseTag::DT_P_Case1);
    CHECK(std::abs(d1.value - 1.0512) <= 5e-4);
    CHECK(d1.value == doctest::Approx(std::log2(2.0722)).epsilon(1e-4));
    CHECK(d1.unit == filtsens::Unit::Bits);

    const auto d2 = filtsens::dt_p_integral(reference_system("dt_p_case2").system);
    CHECK(d2.case_tag == CaseTag::DT_P_Case2);
    CHECK(std::abs(d2.value + 1.1255) <= 5e-4);
    CHECK(term(d2, "log_gain_ratio") == doctest::Approx(std::log2(std::abs((1.5 - 1.25 * 1.75) / 1.5))));

    const auto dm = filtsens::dt_m_integral(reference_system("dt_m").system);
    CHECK(dm.case_tag == CaseTag::DT_M);
    CHECK(std::abs(dm.value - 0.5443) <= 5e-4);
    CHECK(dm.value == doctest::Approx(std::log2(1.75 * 1.25 / 1.5)).epsilon(1e-12));
}

TEST_CASE("DT filter gain doubling adds one bit to the M-integral") {
    const auto base = filtsens::dt_m_integral(reference_system("dt_m").system);
    const auto doc = testsupport::reference_document("dt_m");
    const auto twice = filtsens::dt_m_integral(testsupport::with_filter_gain("dt_m", 2.0 * doc.f.gain()).system);
    CHECK(std::abs(twice.value - base.value - 1.0) <= 1e-12);
}

TEST_CASE("DT P-integral of a system without NMP residual is zero") {
    const RationalTF g(1.0, {}, {0.5}, DT);
    const RationalTF f(0.5, {}, {0.0}, DT);
    const auto v = filtsens::validate(g, g, f);
    REQUIRE(v.report.ok());
    const auto p = filtsens::dt_p_integral(v.system);
    CHECK(p.case_tag == CaseTag::DT_P_Case1);
    CHECK(std::abs(p.value) <= 1e-15);
    const auto q = filtsens::dt_log_integral(filtsens::build_p(v.system));
    CHECK(std::abs(q.value) <= 1e-6);
}

TEST_CASE("DT degenerate gain") {
    const auto v = testsupport::with_filter_gain("dt_p_case2", 1.5 / 1.25);
    CHECK(code_of([&] { (void)filtsens::dt_p_integral(v.system); }) == filtsens::ErrorCode::DegenerateGain);
    // The sensitivity itself is still well defined and its integral finite.
    const auto direct = filtsens::lemma_direct_dt(filtsens::build_p(v.system));
    CHECK(direct.bounded);
    CHECK(std::isfinite(direct.value));
    const auto q = filtsens::dt_log_integral(filtsens::build_p(v.system));
    CHECK(std::abs(q.value - direct.value) <= 1e-5);
}

TEST_CASE("domain checks") {
    const auto ct = reference_system("ct_p_case1");
    const auto dt = reference_system("dt_p_case1");
    CHECK(code_of([&] { (void)filtsens::dt_p_integral(ct.system); }) == filtsens::ErrorCode::DomainMismatch);
    CHECK(code_of([&] { (void)filtsens::ct_p_integral(dt.system); }) == filtsens::ErrorCode::DomainMismatch);
    CHECK(code_of([&] { (void)filtsens::lemma1_crosscheck(dt.system); }) ==
          filtsens::ErrorCode::PreconditionUnmet);
}

TEST_CASE("knife edge at K = 2 K_x") {
    const auto doc = testsupport::reference_document("ct_p_case3");
    const double kf = doc.f.gain();
    for (double rel : {1e-6, -1e-6, 1e-8, -1e-8}) {
        CAPTURE(rel);
        const auto o = filtsens::ct_p_integral(testsupport::with_filter_gain("ct_p_case3", kf * (1 + rel)).system);
        CHECK_FALSE(o.bounded);
        // |(K_x - K)/K_x| = |1 + rel|: slightly above one diverges upward.
        CHECK(o.sign_if_unbounded == (rel > 0 ? 1 : -1));
    }
    const auto exact = filtsens::ct_p_integral(testsupport::with_filter_gain("ct_p_case3", kf).system);
    CHECK(exact.bounded);
    CHECK(std::abs(exact.value - 0.3991) <= 5e-4);
}

TEST_CASE("value in the other unit") {
    const auto o = filtsens::dt_m_integral(reference_system("dt_m").system);
    CHECK(o.value_in_other_unit() == doctest::Approx(o.value * std::log(2.0)));
    const auto c = filtsens::ct_p_integral(reference_system("ct_p_case2").system);
    CHECK(c.value_in_other_unit() == doctest::Approx(c.value / std::log(2.0)));
}

TEST_CASE("lemma_direct examples") {
    const RationalTF allpass(1.0, {1.0}, {-1.0}, CT);
    const auto a = filtsens::lemma_direct_ct(allpass, false);
    CHECK(a.bounded);
    CHECK(a.value == 0.0);

    const auto two = filtsens::lemma_direct_dt(RationalTF::constant(2.0, DT));
    CHECK(two.value == doctest::Approx(1.0).epsilon(1e-15));
    const auto shifted = filtsens::lemma_direct_dt(RationalTF(1.0, {2.0}, {0.5}, DT));
    CHECK(shifted.value == doctest::Approx(1.0).epsilon(1e-15));

    const auto strictly = filtsens::lemma_direct_ct(RationalTF(1.0, {}, {-1.0}, CT), false);
    CHECK_FALSE(strictly.bounded);
    CHECK(strictly.sign_if_unbounded == -1);

    CHECK(filtsens::lemma_direct_ct(RationalTF::constant(1.0, CT), true).value == 0.0);
    CHECK(code_of([] { (void)filtsens::lemma_direct_ct(RationalTF(1.0, {0.0}, {-1.0}, CT), true); }) ==
          filtsens::ErrorCode::OriginRoot);
    CHECK(code_of([] { (void)filtsens::lemma_direct_dt(RationalTF(1.0, {}, {1.0}, DT)); }) ==
          filtsens::ErrorCode::BoundaryRoot);
}

TEST_CASE("weighted lemma_direct against a hand inversion") {
    // g = (s+2)/(s+1) has g(0) = 2: unbounded upward.
    const auto up = filtsens::lemma_direct_ct(RationalTF(1.0, {-2.0}, {-1.0}, CT), true);
    CHECK_FALSE(up.bounded);
    CHECK(up.sign_if_unbounded == 1);
    // g = 2(s+1)/(s+2): g(0) = 1; inverted roots -1 and -1/2 give (1/2)(1 - 1/2).
    const auto b = filtsens::lemma_direct_ct(RationalTF(2.0, {-1.0}, {-2.0}, CT), true);
    CHECK(b.bounded);
    CHECK(b.value == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("three-path agreement on the reference systems") {
    for (const auto& s : filtsens::paper_scenarios()) {
        CAPTURE(s.name);
        const auto v = reference_system(s.name);
        const bool ct = v.system.domain == CT;
        const bool p_kind = s.kind == filtsens::IntegralKind::P;
        const RationalTF g = p_kind ? filtsens::build_p(v.system) : filtsens::build_m(v.system);
        const auto closed = p_kind ? (ct ? filtsens::ct_p_integral(v.system) : filtsens::dt_p_integral(v.system))
                                   : (ct ? filtsens::ct_m_integral(v.system) : filtsens::dt_m_integral(v.system));
        const auto direct = ct ? filtsens::lemma_direct_ct(g, !p_kind) : filtsens::lemma_direct_dt(g);
        CHECK(closed.bounded == direct.bounded);
        if (closed.bounded) {
            CHECK(std::abs(closed.value - direct.value) <= 1e-9 * std::max(1.0, std::abs(closed.value)));
        } else {
            CHECK(closed.sign_if_unbounded == direct.sign_if_unbounded);
        }
    }
}

TEST_CASE("lemma 1 cross-check on the reference systems") {
    const auto c1 = filtsens::lemma1_crosscheck(reference_system("ct_p_case1").system);
    REQUIRE(c1.p_value.has_value());
    CHECK(std::abs(*c1.p_value - filtsens::ct_p_integral(reference_system("ct_p_case1").system).value) <= 1e-6);

    const auto c2 = filtsens::lemma1_crosscheck(reference_system("ct_p_case2").system);
    REQUIRE(c2.p_value.has_value());
    CHECK(std::abs(*c2.p_value + 0.5015) <= 5e-4);

    const auto c3 = filtsens::lemma1_crosscheck(reference_system("ct_p_case3").system);
    REQUIRE(c3.p_value.has_value());
    CHECK(std::abs(*c3.p_value - filtsens::ct_p_integral(reference_system("ct_p_case3").system).value) <= 1e-9);

    const auto m = filtsens::lemma1_crosscheck(reference_system("ct_m_balanced").system);
    REQUIRE(m.m_value.has_value());
    CHECK(std::abs(*m.m_value + 86.0 / 3.0) <= 1e-6);
}

TEST_CASE("lemma 1 excludes plant zeros shared with F G_y") {
    // NMP zero 2 in both G_x and G_y; K = 2 K_x so that |P(j inf)| = 1.
    const RationalTF gx(1.0, {2.0}, {-1.0, -3.0}, CT);
    const RationalTF gy(1.0, {2.0}, {-1.0}, CT);
    const RationalTF f(2.0, {}, {-4.0}, CT);
    const auto v = filtsens::validate(gx, gy, f);
    REQUIRE(v.report.ok());
    const auto l = filtsens::lemma1_crosscheck(v.system);
    REQUIRE(l.p_value.has_value());
    CHECK_FALSE(l.notes.empty());
    const auto p = filtsens::ct_p_integral(v.system);
    CHECK(std::abs(*l.p_value - p.value) <= 1e-9 * std::max(1.0, std::abs(p.value)));
}

TEST_CASE("case partition on generated systems") {
    testsupport::Rng rng(61);
    for (int trial = 0; trial < 120; ++trial) {
        const int excess = rng.integer(0, 3);
        const auto gains = excess == 0 && rng.coin() ? testsupport::GainTarget::TwiceKx : testsupport::GainTarget::Free;
        const auto g = testsupport::generate_system(rng, CT, excess, gains);
        const auto v = filtsens::validate(g.gx, g.gy, g.f);
        REQUIRE(v.report.ok());
        const CaseTag tag = filtsens::ct_p_case(v.system);
        CHECK(filtsens::ct_p_integral(v.system).case_tag == tag);
        switch (excess) {
            case 0:
                CHECK(tag == (gains == testsupport::GainTarget::TwiceKx ? CaseTag::CT_P_Case3_Bounded
                                                                       : CaseTag::CT_P_Unbounded));
                break;
            case 1: CHECK(tag == CaseTag::CT_P_Case2); break;
            default: CHECK(tag == CaseTag::CT_P_Case1); break;
        }
    }
    for (int trial = 0; trial < 60; ++trial) {
        const int excess = rng.integer(0, 2);
        const auto g = testsupport::generate_system(rng, DT, excess, testsupport::GainTarget::Free);
        const auto v = filtsens::validate(g.gx, g.gy, g.f);
        REQUIRE(v.report.ok());
        CHECK(filtsens::dt_p_case(v.system) == (excess == 0 ? CaseTag::DT_P_Case2 : CaseTag::DT_P_Case1));
        CHECK(filtsens::dt_p_integral(v.system).bounded);
        CHECK(filtsens::dt_m_integral(v.system).bounded);
    }
}

TEST_CASE("M(0) = +1 puts a zero of P at the origin") {
    const auto v = reference_system("ct_m_balanced");
    const RationalTF m = filtsens::build_m(v.system);
    CHECK(m.at(0.0).real() == doctest::Approx(1.0).epsilon(1e-12));
    const RationalTF p = filtsens::build_p(v.system);
    CHECK(filtsens::classify(p.zeros(), CT).boundary.size() == 1);
    CHECK(code_of([&] { (void)filtsens::lemma_direct_ct(p, false); }) == filtsens::ErrorCode::BoundaryRoot);
    // The M side is unaffected.
    CHECK(filtsens::lemma_direct_ct(m, true).bounded);
}
