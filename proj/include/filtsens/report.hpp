#pragma once

#include <string>

#include "filtsens/analysis.hpp"

namespace filtsens {

/// Human-readable report, one section per integral.
[[nodiscard]] std::string render_text(const AnalysisReport& report);

/// Machine-readable report with top-level fields validation, p_integral,
/// m_integral, deltas and complementarity_deviation. Infinite values are
/// written as the strings "+inf" and "-inf". Byte-identical for identical
/// reports.
[[nodiscard]] std::string render_json(const AnalysisReport& report, int indent = 2);

}  // namespace filtsens
