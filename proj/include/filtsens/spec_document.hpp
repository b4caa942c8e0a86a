#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "filtsens/quad.hpp"
#include "filtsens/sysmodel.hpp"

namespace filtsens {

struct AnalysisOptions {
    Tolerances tol;
    double quad_tol = kDefaultQuadTol;
    bool run_quadrature = true;
    bool run_lemma1 = false;
    std::uint64_t seed = kDefaultSeed;
    int complementarity_samples = 100;
};

/// One system description as read from the JSON wire format:
///
///   { "domain": "ct" | "dt",
///     "gx": {"gain": g, "zeros": [[re, im], ...], "poles": [[re, im], ...]},
///     "gy": {...}, "f": {...},
///     "options": {"eps_cancel", "eps_class", "eps_gain", "quad_tol",
///                 "run_quadrature", "run_lemma1"} }
///
/// "options" and each of its members are optional.
struct SystemSpecDocument {
    TimeDomain domain;
    RationalTF gx;
    RationalTF gy;
    RationalTF f;
    AnalysisOptions options;
};

/// Throws ErrorCode::ParseError (malformed JSON, with line and column) or
/// ErrorCode::SchemaError (naming the offending field).
[[nodiscard]] SystemSpecDocument parse_spec(std::string_view text);

/// Reads and parses a file; I/O failures are reported as ParseError.
[[nodiscard]] SystemSpecDocument load_spec(const std::string& path);

}  // namespace filtsens
