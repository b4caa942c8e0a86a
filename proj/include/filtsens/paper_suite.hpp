#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "filtsens/quad.hpp"

namespace filtsens {

enum class IntegralKind { P, M };

/// A reference system with its published integral value. `expected` holds
/// the value for bounded scenarios; otherwise `expected_sign` is +1 or -1.
struct Scenario {
    std::string_view name;
    std::string_view document;  ///< JSON, same schema as analyze input
    IntegralKind kind;
    std::optional<double> expected;
    int expected_sign = 0;
    double tolerance = 5e-4;
};

[[nodiscard]] const std::vector<Scenario>& paper_scenarios();

struct SuiteOptions {
    double quad_tol = kDefaultQuadTol;
    std::optional<double> eps_gain;  ///< overrides the documents' value when set
    bool run_quadrature = true;
};

struct ScenarioResult {
    std::string name;
    std::string expected;
    std::string closed_form;
    std::string quadrature;
    bool pass = false;
    std::string detail;  ///< why it failed, empty on pass
};

struct SuiteReport {
    std::vector<ScenarioResult> results;
    [[nodiscard]] int passed() const noexcept;
    [[nodiscard]] bool all_passed() const noexcept { return passed() == static_cast<int>(results.size()); }
};

[[nodiscard]] SuiteReport run_paper_suite(const SuiteOptions& options = {});
[[nodiscard]] std::string render_suite(const SuiteReport& report);

}  // namespace filtsens
