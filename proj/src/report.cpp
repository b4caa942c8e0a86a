#include "filtsens/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace filtsens {

namespace {

using nlohmann::ordered_json;

ordered_json number(double x) {
    if (std::isinf(x)) return x > 0 ? "+inf" : "-inf";
    if (std::isnan(x)) return nullptr;
    return x;
}

ordered_json roots(std::span<const cplx> list) {
    ordered_json out = ordered_json::array();
    for (const auto& r : list) out.push_back({number(r.real()), number(r.imag())});
    return out;
}

ordered_json outcome_json(const IntegralOutcome& o) {
    ordered_json j;
    j["bounded"] = o.bounded;
    j["value"] = o.bounded ? number(o.value) : ordered_json(o.sign_if_unbounded > 0 ? "+inf" : "-inf");
    j["unit"] = to_string(o.unit);
    if (o.bounded) {
        j["value_other_unit"] = number(o.value_in_other_unit());
        j["other_unit"] = o.unit == Unit::Nats ? "bits" : "nats";
    }
    j["case"] = o.case_tag ? ordered_json(std::string(to_string(*o.case_tag))) : ordered_json(nullptr);
    j["condition"] = o.condition;
    ordered_json terms = ordered_json::array();
    for (const auto& t : o.terms) terms.push_back({{"name", t.name}, {"contribution", number(t.contribution)}});
    j["terms"] = std::move(terms);
    j["notes"] = o.notes;
    return j;
}

ordered_json quad_json(const QuadratureResult& q) {
    ordered_json j;
    j["diverged"] = q.diverged;
    j["value"] = number(q.value);
    j["unit"] = to_string(q.unit);
    if (q.diverged) j["divergence_sign"] = q.divergence_sign > 0 ? "+inf" : "-inf";
    j["abs_error_estimate"] = number(q.abs_error_estimate);
    j["n_evaluations"] = q.n_evaluations;
    return j;
}

ordered_json findings_json(const std::vector<Finding>& fs) {
    ordered_json out = ordered_json::array();
    for (const auto& f : fs)
        out.push_back({{"step", f.step}, {"code", std::string(to_string(f.code))}, {"message", f.message}});
    return out;
}

template <typename T, typename F>
ordered_json optional_json(const std::optional<T>& v, F&& convert) {
    return v ? ordered_json(convert(*v)) : ordered_json(nullptr);
}

ordered_json integral_json(const IntegralReport& r) {
    ordered_json j;
    j["closed_form"] = optional_json(r.closed_form, outcome_json);
    j["lemma_direct"] = optional_json(r.lemma_direct, outcome_json);
    j["lemma1"] = optional_json(r.lemma1, number);
    j["quadrature"] = optional_json(r.quadrature, quad_json);
    j["max_pairwise_delta"] = optional_json(r.max_pairwise_delta, number);
    j["findings"] = findings_json(r.findings);
    j["notes"] = r.notes;
    return j;
}

std::string fmt(double x, int digits = 6) {
    if (std::isinf(x)) return x > 0 ? "+inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

std::string outcome_text(const IntegralOutcome& o) {
    if (!o.bounded) return std::string(o.sign_if_unbounded > 0 ? "+inf" : "-inf") + "  (" + o.condition + ")";
    return fmt(o.value, 8) + " " + std::string(to_string(o.unit));
}

void integral_text(std::ostringstream& os, const char* title, const IntegralReport& r) {
    os << title << "\n";
    if (r.closed_form) {
        os << "  closed form   : " << outcome_text(*r.closed_form);
        if (r.closed_form->case_tag) os << "  [" << to_string(*r.closed_form->case_tag) << "]";
        os << "\n";
        for (const auto& t : r.closed_form->terms) os << "      " << t.name << " = " << fmt(t.contribution, 8) << "\n";
    }
    if (r.lemma_direct) os << "  lemma direct  : " << outcome_text(*r.lemma_direct) << "\n";
    if (r.lemma1) os << "  residue check : " << fmt(*r.lemma1, 8) << "\n";
    if (r.quadrature) {
        const auto& q = *r.quadrature;
        os << "  quadrature    : ";
        if (q.diverged) {
            os << (q.divergence_sign > 0 ? "+inf" : "-inf") << " (diverged)";
        } else {
            os << fmt(q.value, 8) << " +- " << fmt(q.abs_error_estimate, 2);
        }
        os << "  [" << q.n_evaluations << " evaluations]\n";
    }
    if (r.max_pairwise_delta) os << "  max delta     : " << fmt(*r.max_pairwise_delta, 3) << "\n";
    for (const auto& f : r.findings) os << "  ! " << f.step << ": " << to_string(f.code) << ": " << f.message << "\n";
    for (const auto& n : r.notes) os << "  note: " << n << "\n";
}

}  // namespace

std::string render_json(const AnalysisReport& report, int indent) {
    ordered_json j;
    j["domain"] = to_string(report.domain);
    const auto& v = report.validation;
    j["validation"] = {{"ok", v.ok()},           {"a1_ok", v.a1_ok},
                       {"a2_ok", v.a2_ok},       {"a3_ok", v.a3_ok},
                       {"a4_ok", v.a4_ok},       {"diagnostics", v.diagnostics},
                       {"boundary_roots", roots(v.boundary_roots)}};
    j["p_integral"] = optional_json(report.p_integral, integral_json);
    j["m_integral"] = optional_json(report.m_integral, integral_json);
    ordered_json deltas;
    deltas["p"] = report.p_integral ? optional_json(report.p_integral->max_pairwise_delta, number) : nullptr;
    deltas["m"] = report.m_integral ? optional_json(report.m_integral->max_pairwise_delta, number) : nullptr;
    j["deltas"] = std::move(deltas);
    j["complementarity_deviation"] = optional_json(report.complementarity_deviation, number);
    j["findings"] = findings_json(report.findings);
    j["exit_code"] = report.exit_code();
    return j.dump(indent);
}

std::string render_text(const AnalysisReport& report) {
    std::ostringstream os;
    const auto& v = report.validation;
    os << "domain: " << to_string(report.domain) << "\n";
    os << "assumptions: A1 " << (v.a1_ok ? "ok" : "FAIL") << ", A2 " << (v.a2_ok ? "ok" : "FAIL") << ", A3 "
       << (v.a3_ok ? "ok" : "FAIL") << ", A4 " << (v.a4_ok ? "ok" : "FAIL") << "\n";
    for (const auto& d : v.diagnostics) os << "  - " << d << "\n";
    for (const auto& f : report.findings) {
        os << "  ! " << f.step << ": " << to_string(f.code) << ": " << f.message << "\n";
    }
    if (report.complementarity_deviation) {
        os << "complementarity |P + M - 1|: " << fmt(*report.complementarity_deviation, 3) << "\n";
    }
    if (report.p_integral) integral_text(os, "P-integral", *report.p_integral);
    if (report.m_integral) {
        integral_text(os, report.domain == TimeDomain::Continuous ? "M-integral (weighted 1/w^2)" : "M-integral",
                      *report.m_integral);
    }
    return os.str();
}

}  // namespace filtsens
