#pragma once

#include <optional>
#include <string>
#include <vector>

#include "filtsens/closedform.hpp"
#include "filtsens/error.hpp"
#include "filtsens/quad.hpp"
#include "filtsens/spec_document.hpp"

namespace filtsens {

/// A step of the pipeline that raised instead of producing a value.
struct Finding {
    std::string step;
    ErrorCode code;
    std::string message;
};

struct IntegralReport {
    std::optional<IntegralOutcome> closed_form;
    std::optional<IntegralOutcome> lemma_direct;
    std::optional<double> lemma1;
    std::optional<QuadratureResult> quadrature;
    /// Largest spread between the bounded values above; absent with fewer than two.
    std::optional<double> max_pairwise_delta;
    std::vector<Finding> findings;
    std::vector<std::string> notes;
};

struct AnalysisReport {
    TimeDomain domain = TimeDomain::Continuous;
    ValidationReport validation;
    std::optional<IntegralReport> p_integral;
    std::optional<IntegralReport> m_integral;
    std::optional<double> complementarity_deviation;
    std::vector<Finding> findings;

    /// 0 when the analysis ran, 2 when validation failed.
    [[nodiscard]] int exit_code() const noexcept { return validation.ok() ? 0 : 2; }
};

/// Runs validation, builds P and M, and evaluates every enabled path for both
/// integrals. Module errors become findings; nothing here throws for a
/// parsed document.
[[nodiscard]] AnalysisReport analyze(const SystemSpecDocument& spec);

}  // namespace filtsens
