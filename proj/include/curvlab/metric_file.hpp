#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "curvlab/catalog.hpp"

namespace curvlab {

/// Optional [analysis] stanza.
struct AnalysisDefaults {
    std::optional<std::uint64_t> seed;
    std::optional<int> points;
    std::optional<double> tol_structural;
    std::optional<double> tol_derived;
    std::optional<double> tol_theorem;
};

/// A parsed definition file: the definition wrapped as a catalog entry without expectations.
struct MetricDocument {
    CatalogEntry entry;
    AnalysisDefaults analysis;
};

inline constexpr int kMetricFileVersion = 1;

/// Throws FileFormatError (with line) for syntax problems, StructureError when the parsed
/// definition fails validation, NotFoundError for an unknown catalog fiber.
MetricDocument parse_metric_file(std::string_view text);
/// "catalog:<name>" selects a built-in entry; anything else is a file path.
MetricDocument load_input(std::string_view source);

std::string export_metric_file(const CatalogEntry& entry, const AnalysisDefaults& analysis = {});

/// Same kind, charts, warping data and contact tensors, comparing expressions structurally.
bool same_definition(const CatalogEntry& a, const CatalogEntry& b);

}  // namespace curvlab
