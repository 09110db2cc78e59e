#include <doctest.h>

#include <set>

#include "curvlab/analysis.hpp"
#include "curvlab/error.hpp"
#include "support.hpp"

using namespace testing;

TEST_CASE("catalog has unique names and covers every kind")
{
    const auto& all = catalog_entries();
    CHECK(all.size() >= 13);
    std::set<std::string> names;
    int kinds[3] = {0, 0, 0};
    for (const CatalogEntry& e : all) {
        CHECK(names.insert(e.name).second);
        ++kinds[static_cast<int>(e.kind)];
        CHECK_FALSE(e.expected.empty());
        CHECK_FALSE(e.notes.empty());
        for (const Expectation& x : e.expected) {
            const std::set<std::string> known{"exact", "reference", "computed"};
            CHECK(known.count(x.provenance) == 1);
        }
    }
    CHECK(kinds[0] >= 5);
    CHECK(kinds[1] >= 4);
    CHECK(kinds[2] >= 4);
}

TEST_CASE("lookup by name")
{
    CHECK(find_entry("sphere_4") != nullptr);
    CHECK(find_entry("sphere_4")->kind == EntryKind::plain);
    CHECK(find_entry("frw_s3")->warped() != nullptr);
    CHECK(find_entry("nil3")->contact() != nullptr);
    CHECK(find_entry("no_such_metric") == nullptr);
    CHECK(find_entry("") == nullptr);
}

TEST_CASE("every catalog expectation is reproduced on 50 points")
{
    for (const CatalogEntry& e : catalog_entries()) {
        CAPTURE(e.name);
        AnalysisOptions opt;
        opt.points = 50;
        const ClassificationReport r = analyze(e, opt);
        CHECK(r.structural_failure.empty());
        for (const ExpectationCheck& c : check_expectations(e, r)) {
            CAPTURE(c.expected.predicate);
            CAPTURE(c.detail);
            CHECK(c.passed);
        }
    }
}

TEST_CASE("sampling is deterministic and stays inside the shrunk domain")
{
    for (const CatalogEntry& e : catalog_entries()) {
        CAPTURE(e.name);
        const auto a = entry_points(e, 7, 30), b = entry_points(e, 7, 30);
        REQUIRE(a.size() == 30);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
        const auto& dom = e.chart.domain();
        for (const Point& p : a)
            for (int k = 0; k < e.chart.dim(); ++k) {
                const double w = dom[k].hi - dom[k].lo;
                CHECK(p[k] >= dom[k].lo + 0.05 * w);
                CHECK(p[k] <= dom[k].hi - 0.05 * w);
            }
        CHECK(entry_points(e, 8, 1)[0] != a[0]);
    }
}

TEST_CASE("sampling rejects bad requests")
{
    CHECK_THROWS_AS(sample_points(entry("sphere_4").chart, 0, 0), Error);
    const MetricField unbounded = make_metric("u", {"x"}, {{0, 0, "1"}}, {1}, {{0.0, INFINITY}});
    CHECK_THROWS_AS(sample_points(unbounded, 0, 3), Error);
}
