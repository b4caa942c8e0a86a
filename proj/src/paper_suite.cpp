#include "filtsens/paper_suite.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "filtsens/closedform.hpp"
#include "filtsens/error.hpp"
#include "filtsens/spec_document.hpp"

namespace filtsens {

namespace {

// Same documents as the files under systems/.
constexpr std::string_view kCtPCase1 = R"json({
  "domain": "ct",
  "gx": {
    "gain": 1.67,
    "zeros": [[-0.05, 0.0]],
    "poles": [[-0.04, 0.0]]
  },
  "gy": {
    "gain": 1.25,
    "zeros": [[-0.06, 0.0], [-0.08, 0.0]],
    "poles": [[0.03, 0.0], [-0.01, 0.0], [-0.07, 0.0]]
  },
  "f": {
    "gain": 1.34,
    "zeros": [[0.03, 0.0], [-0.09, 0.0]],
    "poles": [[-0.68, 0.0], [-0.68, 0.0], [-0.68, 0.0]]
  }
})json";

constexpr std::string_view kCtPCase2 = R"json({
  "domain": "ct",
  "gx": {
    "gain": 1.67,
    "zeros": [[-0.05, 0.0]],
    "poles": [[-0.04, 0.0]]
  },
  "gy": {
    "gain": 1.25,
    "zeros": [[-0.06, 0.0], [-0.08, 0.0]],
    "poles": [[0.03, 0.0], [-0.01, 0.0], [-0.07, 0.0]]
  },
  "f": {
    "gain": 1.34,
    "zeros": [[0.03, 0.0], [-0.075, 0.0], [-0.09, 0.0]],
    "poles": [[-0.68, 0.0], [-0.68, 0.0], [-0.68, 0.0]]
  }
})json";

constexpr std::string_view kCtPCase3 = R"json({
  "domain": "ct",
  "gx": {
    "gain": 1.67,
    "zeros": [[-0.05, 0.0]],
    "poles": [[-0.04, 0.0]]
  },
  "gy": {
    "gain": 1.25,
    "zeros": [[-0.06, 0.0], [-0.08, 0.0]],
    "poles": [[0.03, 0.0], [-0.01, 0.0]]
  },
  "f": {
    "gain": 2.672,
    "zeros": [[0.03, 0.0], [-0.075, 0.0], [-0.09, 0.0]],
    "poles": [[-0.68, 0.0], [-0.68, 0.0], [-0.68, 0.0]]
  }
})json";

constexpr std::string_view kCtPCase4 = R"json({
  "domain": "ct",
  "gx": {
    "gain": 1.67,
    "zeros": [[-0.05, 0.0]],
    "poles": [[-0.04, 0.0]]
  },
  "gy": {
    "gain": 1.25,
    "zeros": [[-0.06, 0.0], [-0.08, 0.0]],
    "poles": [[0.03, 0.0], [-0.01, 0.0]]
  },
  "f": {
    "gain": 2.872,
    "zeros": [[0.03, 0.0], [-0.075, 0.0], [-0.09, 0.0]],
    "poles": [[-0.68, 0.0], [-0.68, 0.0], [-0.68, 0.0]]
  }
})json";

constexpr std::string_view kCtMBalanced = R"json({
  "domain": "ct",
  "gx": {
    "gain": 1.5,
    "zeros": [[-0.05, 0.0]],
    "poles": [[-0.025, 0.0]]
  },
  "gy": {
    "gain": 1.25,
    "zeros": [[-0.075, 0.0], [-0.75, 0.0]],
    "poles": [[0.05, 0.0], [-0.01, 0.0]]
  },
  "f": {
    "gain": 2.1333333333333333,
    "zeros": [[0.05, 0.0], [-0.1, 0.0], [-0.25, 0.0]],
    "poles": [[-0.5, 0.0], [-0.5, 0.0], [-0.5, 0.0]]
  }
})json";

constexpr std::string_view kCtMUnbalanced = R"json({
  "domain": "ct",
  "gx": {
    "gain": 1.5,
    "zeros": [[-0.05, 0.0]],
    "poles": [[-0.025, 0.0]]
  },
  "gy": {
    "gain": 1.25,
    "zeros": [[-0.075, 0.0], [-0.75, 0.0]],
    "poles": [[0.05, 0.0], [-0.01, 0.0]]
  },
  "f": {
    "gain": 2.0,
    "zeros": [[0.05, 0.0], [-0.1, 0.0], [-0.25, 0.0]],
    "poles": [[-0.5, 0.0], [-0.5, 0.0], [-0.5, 0.0]]
  }
})json";

constexpr std::string_view kDtPCase1 = R"json({
  "domain": "dt",
  "gx": {
    "gain": 1.5,
    "zeros": [[0.05, 0.0]],
    "poles": [[0.1, 0.0]]
  },
  "gy": {
    "gain": 1.25,
    "zeros": [[0.075, 0.0], [0.025, 0.0]],
    "poles": [[1.25, 0.0], [0.75, 0.0], [0.01, 0.0]]
  },
  "f": {
    "gain": 1.75,
    "zeros": [[1.25, 0.0], [0.25, 0.0]],
    "poles": [[0.5, 0.0], [0.5, 0.0], [0.5, 0.0]]
  }
})json";

constexpr std::string_view kDtPCase2 = R"json({
  "domain": "dt",
  "gx": {
    "gain": 1.5,
    "zeros": [[0.05, 0.0]],
    "poles": [[0.1, 0.0]]
  },
  "gy": {
    "gain": 1.25,
    "zeros": [[0.075, 0.0], [0.025, 0.0]],
    "poles": [[1.25, 0.0], [0.01, 0.0]]
  },
  "f": {
    "gain": 1.75,
    "zeros": [[1.25, 0.0], [0.75, 0.0], [0.25, 0.0]],
    "poles": [[0.5, 0.0], [0.5, 0.0], [0.5, 0.0]]
  }
})json";

constexpr std::string_view kDtM = R"json({
  "domain": "dt",
  "gx": {
    "gain": 1.5,
    "zeros": [[0.05, 0.0]],
    "poles": [[0.1, 0.0]]
  },
  "gy": {
    "gain": 1.25,
    "zeros": [[0.075, 0.0], [0.025, 0.0]],
    "poles": [[1.25, 0.0], [0.01, 0.0]]
  },
  "f": {
    "gain": 1.75,
    "zeros": [[1.25, 0.0], [0.75, 0.0], [0.25, 0.0]],
    "poles": [[0.5, 0.0], [0.5, 0.0], [0.5, 0.0]]
  }
})json";

std::string fmt(double x) {
    if (std::isinf(x)) return x > 0 ? "+inf" : "-inf";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

std::string signed_inf(int sign) { return sign > 0 ? "+inf" : "-inf"; }

ScenarioResult run_one(const Scenario& s, const SuiteOptions& options) {
    ScenarioResult r;
    r.name = std::string(s.name);
    r.expected = s.expected ? fmt(*s.expected) : signed_inf(s.expected_sign);
    r.quadrature = "-";
    try {
        SystemSpecDocument doc = parse_spec(s.document);
        if (options.eps_gain) doc.options.tol.eps_gain = *options.eps_gain;
        const Validated v = validate(doc.gx, doc.gy, doc.f, doc.options.tol);
        if (!v.report.ok()) {
            r.closed_form = "invalid";
            r.detail = "validation failed";
            return r;
        }
        const FilteringSystem& sys = v.system;
        const bool ct = sys.domain == TimeDomain::Continuous;
        const bool p_kind = s.kind == IntegralKind::P;

        const IntegralOutcome cf = p_kind ? (ct ? ct_p_integral(sys) : dt_p_integral(sys))
                                          : (ct ? ct_m_integral(sys) : dt_m_integral(sys));
        r.closed_form = cf.bounded ? fmt(cf.value) : signed_inf(cf.sign_if_unbounded);

        bool ok = true;
        if (s.expected) {
            if (!cf.bounded || std::abs(cf.value - *s.expected) > s.tolerance) {
                ok = false;
                r.detail = "closed form outside tolerance " + fmt(s.tolerance);
            }
        } else if (cf.bounded || cf.sign_if_unbounded != s.expected_sign) {
            ok = false;
            r.detail = "closed form boundedness or sign mismatch";
        }

        if (options.run_quadrature) {
            const RationalTF g = p_kind ? build_p(sys) : build_m(sys);
            const QuadratureOptions qopt{.tol = options.quad_tol};
            const QuadratureResult q = ct ? (p_kind ? ct_log_integral(g, qopt) : ct_weighted_log_integral(g, qopt))
                                          : dt_log_integral(g, qopt);
            r.quadrature = q.diverged ? signed_inf(q.divergence_sign) : fmt(q.value);
            if (s.expected) {
                const double ref = cf.bounded ? cf.value : *s.expected;
                if (q.diverged || std::abs(q.value - ref) > std::max(1e-3, 1e-3 * std::abs(ref))) {
                    ok = false;
                    if (r.detail.empty()) r.detail = "quadrature disagrees with closed form";
                }
            } else if (!q.diverged || q.divergence_sign != s.expected_sign) {
                ok = false;
                if (r.detail.empty()) r.detail = "quadrature divergence verdict mismatch";
            }
        }
        r.pass = ok;
    } catch (const Error& e) {
        if (r.closed_form.empty()) r.closed_form = "error";
        r.detail = std::string(to_string(e.code())) + ": " + e.what();
    }
    return r;
}

}  // namespace

const std::vector<Scenario>& paper_scenarios() {
    static const std::vector<Scenario> scenarios = {
        {"ct_p_case1", kCtPCase1, IntegralKind::P, 0.0101, 0, 5e-4},
        {"ct_p_case2", kCtPCase2, IntegralKind::P, -0.5015, 0, 5e-4},
        {"ct_p_case3", kCtPCase3, IntegralKind::P, 0.3991, 0, 5e-4},
        {"ct_p_case4", kCtPCase4, IntegralKind::P, std::nullopt, 1, 5e-4},
        {"ct_m_balanced", kCtMBalanced, IntegralKind::M, -28.6667, 0, 1e-3},
        {"ct_m_unbalanced", kCtMUnbalanced, IntegralKind::M, std::nullopt, -1, 5e-4},
        {"dt_p_case1", kDtPCase1, IntegralKind::P, 1.0512, 0, 5e-4},
        {"dt_p_case2", kDtPCase2, IntegralKind::P, -1.1255, 0, 5e-4},
        {"dt_m", kDtM, IntegralKind::M, 0.5443, 0, 5e-4},
    };
    return scenarios;
}

int SuiteReport::passed() const noexcept {
    int n = 0;
    for (const auto& r : results) n += r.pass ? 1 : 0;
    return n;
}

SuiteReport run_paper_suite(const SuiteOptions& options) {
    SuiteReport report;
    for (const auto& s : paper_scenarios()) report.results.push_back(run_one(s, options));
    return report;
}

std::string render_suite(const SuiteReport& report) {
    std::ostringstream os;
    char line[160];
    std::snprintf(line, sizeof line, "%-16s %12s %12s %12s  %s\n", "scenario", "expected", "closed form",
                  "quadrature", "result");
    os << line;
    for (const auto& r : report.results) {
        std::snprintf(line, sizeof line, "%-16s %12s %12s %12s  %s\n", r.name.c_str(), r.expected.c_str(),
                      r.closed_form.c_str(), r.quadrature.c_str(), r.pass ? "pass" : "FAIL");
        os << line;
        if (!r.pass && !r.detail.empty()) os << "    " << r.detail << "\n";
    }
    os << report.passed() << "/" << report.results.size() << " passed\n";
    return os.str();
}

}  // namespace filtsens
