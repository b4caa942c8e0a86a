#include "filtsens/analysis.hpp"

#include <cmath>
#include <functional>

namespace filtsens {

namespace {

template <typename T>
std::optional<T> attempt(std::vector<Finding>& findings, const char* step, const std::function<T()>& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        findings.push_back({step, e.code(), e.what()});
    }
    return std::nullopt;
}

void fill_delta(IntegralReport& r) {
    std::vector<double> values;
    if (r.closed_form && r.closed_form->bounded) values.push_back(r.closed_form->value);
    if (r.lemma_direct && r.lemma_direct->bounded) values.push_back(r.lemma_direct->value);
    if (r.lemma1) values.push_back(*r.lemma1);
    if (r.quadrature && !r.quadrature->diverged) values.push_back(r.quadrature->value);
    if (values.size() < 2) return;
    double worst = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t j = i + 1; j < values.size(); ++j) worst = std::max(worst, std::abs(values[i] - values[j]));
    r.max_pairwise_delta = worst;
}

}  // namespace

AnalysisReport analyze(const SystemSpecDocument& spec) {
    AnalysisReport report;
    report.domain = spec.domain;
    const AnalysisOptions& opt = spec.options;

    std::optional<FilteringSystem> sys;
    try {
        Validated v = validate(spec.gx, spec.gy, spec.f, opt.tol);
        report.validation = std::move(v.report);
        sys = std::move(v.system);
    } catch (const Error& e) {
        report.findings.push_back({"validate", e.code(), e.what()});
        report.validation.diagnostics.push_back(e.what());
        if (e.code() == ErrorCode::BoundaryRoot) {
            report.validation.boundary_roots = collect_boundary_roots(spec.gx, spec.gy, spec.f, opt.tol);
        }
        return report;
    }
    if (!report.validation.ok()) return report;

    const bool ct = spec.domain == TimeDomain::Continuous;
    const QuadratureOptions qopt{.tol = opt.quad_tol};

    std::optional<RationalTF> p = attempt<RationalTF>(report.findings, "build_p", [&] { return build_p(*sys); });
    const RationalTF m = build_m(*sys);
    if (p) {
        report.complementarity_deviation = attempt<double>(report.findings, "complementarity_check", [&] {
            return complementarity_check(*p, m, opt.complementarity_samples, opt.seed);
        });
    }

    std::optional<Lemma1Values> lemma1;
    if (ct && opt.run_lemma1) {
        std::vector<Finding> lf;
        lemma1 = attempt<Lemma1Values>(lf, "lemma1_crosscheck", [&] { return lemma1_crosscheck(*sys); });
        report.findings.insert(report.findings.end(), lf.begin(), lf.end());
    }

    IntegralReport pr;
    pr.closed_form = attempt<IntegralOutcome>(pr.findings, "closed_form", [&] {
        return ct ? ct_p_integral(*sys) : dt_p_integral(*sys);
    });
    if (p) {
        pr.lemma_direct = attempt<IntegralOutcome>(pr.findings, "lemma_direct", [&] {
            return ct ? lemma_direct_ct(*p, false, opt.tol.eps_gain, opt.tol.eps_class)
                      : lemma_direct_dt(*p, opt.tol.eps_class);
        });
        if (opt.run_quadrature) {
            pr.quadrature = attempt<QuadratureResult>(pr.findings, "quadrature", [&] {
                return ct ? ct_log_integral(*p, qopt) : dt_log_integral(*p, qopt);
            });
        }
    }
    if (!ct && !pr.closed_form && pr.lemma_direct && !pr.findings.empty() &&
        pr.findings.front().code == ErrorCode::DegenerateGain) {
        pr.notes.push_back("lemma_direct evaluates P from the reduced-degree factorization of Gamma; "
                           "this configuration lies outside the closed-form theorem");
    }
    if (lemma1) {
        pr.lemma1 = lemma1->p_value;
        pr.notes.insert(pr.notes.end(), lemma1->notes.begin(), lemma1->notes.end());
    }
    fill_delta(pr);
    report.p_integral = std::move(pr);

    IntegralReport mr;
    mr.closed_form = attempt<IntegralOutcome>(mr.findings, "closed_form", [&] {
        return ct ? ct_m_integral(*sys) : dt_m_integral(*sys);
    });
    mr.lemma_direct = attempt<IntegralOutcome>(mr.findings, "lemma_direct", [&] {
        return ct ? lemma_direct_ct(m, true, opt.tol.eps_gain, opt.tol.eps_class)
                  : lemma_direct_dt(m, opt.tol.eps_class);
    });
    if (opt.run_quadrature) {
        mr.quadrature = attempt<QuadratureResult>(mr.findings, "quadrature", [&] {
            return ct ? ct_weighted_log_integral(m, qopt) : dt_log_integral(m, qopt);
        });
    }
    if (lemma1) mr.lemma1 = lemma1->m_value;
    fill_delta(mr);
    report.m_integral = std::move(mr);
    return report;
}

}  // namespace filtsens
