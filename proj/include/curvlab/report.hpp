#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "curvlab/analysis.hpp"

namespace curvlab {

inline constexpr const char* kToolName = "curvlab";
inline constexpr const char* kToolVersion = "1.0.0";

struct Report {
    std::string tool = kToolName;
    std::string version = kToolVersion;
    std::string input;   // "catalog:<name>" or the file path as given
    std::string digest;  // FNV-1a 64 of the canonical definition text, 16 hex digits
    ClassificationReport analysis;
    /// Filled for catalog inputs, which carry expected verdicts.
    std::vector<ExpectationCheck> expectations;
};

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex_digest(std::uint64_t h);

/// Runs analyze() and attaches the input digest and expectation checks.
Report make_report(std::string input, const CatalogEntry& entry, const AnalysisOptions& options);

nlohmann::ordered_json to_json(const Report& r);
/// Inverse of to_json. Throws Error on a missing or mistyped field.
Report report_from_json(const nlohmann::ordered_json& j);

/// Two-space indented JSON with a trailing newline; byte-identical for identical inputs.
std::string render_machine(const Report& r);
std::string render_text(const Report& r);

/// Fixed-width scientific notation used by the text tables.
std::string sci(double v);

}  // namespace curvlab
