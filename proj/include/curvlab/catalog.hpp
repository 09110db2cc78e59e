#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "curvlab/contact.hpp"
#include "curvlab/warped.hpp"

namespace curvlab {

enum class EntryKind { plain, warped, contact };
const char* to_string(EntryKind k);

/// Where an expected value comes from: "exact" (closed form worked out by hand),
/// "reference" (a statement quoted from the literature), "computed" (frozen output of an
/// independent oracle).
struct ExpectedConstant {
    std::string name;
    double value = 0.0;
    double tolerance = 1e-6;
};

struct Expectation {
    std::string predicate;
    bool verdict = true;
    std::vector<ExpectedConstant> constants;
    std::string provenance;
};

using EntryDefinition = std::variant<MetricField, WarpedProductSpec, ContactStructure>;

struct CatalogEntry {
    std::string name;
    EntryKind kind = EntryKind::plain;
    EntryDefinition definition;
    MetricField chart;  // the metric the definition evaluates to
    std::vector<Expectation> expected;
    std::string notes;

    const WarpedProductSpec* warped() const { return std::get_if<WarpedProductSpec>(&definition); }
    const ContactStructure* contact() const { return std::get_if<ContactStructure>(&definition); }
};

const std::vector<CatalogEntry>& catalog_entries();
/// nullptr when absent.
const CatalogEntry* find_entry(std::string_view name);

/// Deterministic points inside the domain box shrunk by 5% of each width on both sides.
/// Throws Error on an empty or unbounded domain or count < 1.
std::vector<Point> sample_points(const MetricField& m, std::uint64_t seed, int count);
std::vector<Point> entry_points(const CatalogEntry& entry, std::uint64_t seed, int count);

}  // namespace curvlab
