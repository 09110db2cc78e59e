#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "curvlab/catalog.hpp"

namespace curvlab {

struct AnalysisOptions {
    std::uint64_t seed = 0;
    int points = 50;
    Tolerances tol;
    /// Worker threads for per-point curvature evaluation; results do not depend on it.
    int threads = 1;
    /// Where the settings came from: "default", "file" or "command line".
    std::string seed_source = "default";
    std::string tolerance_source = "default";
};

struct PredicateResult {
    std::string name;
    bool applicable = true;
    Verdict verdict;
    double threshold = 0.0;
    std::string note;
};

struct PointSummary {
    Point point;
    double scalar = 0.0;
    double riemann_norm = 0.0;
    double ricci_norm = 0.0;
    std::optional<double> weyl_norm;
    std::optional<double> div_weyl_norm;
    std::optional<double> bach_norm;
};

struct ClassificationReport {
    std::string label;
    EntryKind kind = EntryKind::plain;
    int dimension = 0;
    std::vector<std::string> coordinates;
    AnalysisOptions options;
    std::vector<PointSummary> points;
    std::vector<PredicateResult> predicates;
    /// Set when a structural validation failed (contact identities); the CLI exits with 2.
    std::string structural_failure;

    const PredicateResult* find(std::string_view name) const;
};

/// Runs every predicate that applies to the entry's kind and dimension on seeded points.
/// Numerical domain errors propagate.
ClassificationReport analyze(const CatalogEntry& entry, const AnalysisOptions& options);

struct ExpectationCheck {
    Expectation expected;
    bool passed = false;
    std::string detail;
};
/// Compares a report with the entry's expected list (verdicts and constants).
std::vector<ExpectationCheck> check_expectations(const CatalogEntry& entry, const ClassificationReport& report);

}  // namespace curvlab
