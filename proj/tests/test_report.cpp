#include <doctest.h>

#include "curvlab/error.hpp"
#include "curvlab/metric_file.hpp"
#include "curvlab/report.hpp"
#include "support.hpp"

using namespace testing;

namespace {

Report report_for(const char* name, int threads = 1, int points = 10)
{
    AnalysisOptions opt;
    opt.points = points;
    opt.threads = threads;
    return make_report(std::string("catalog:") + name, entry(name), opt);
}

const nlohmann::ordered_json& predicate(const nlohmann::ordered_json& j, const std::string& name)
{
    for (const auto& p : j["predicates"])
        if (p["name"] == name) return p;
    FAIL("no predicate " << name);
    return j;
}

}  // namespace

TEST_CASE("FNV-1a 64 reference vectors")
{
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
    CHECK(hex_digest(0xcbf29ce484222325ULL) == "cbf29ce484222325");
    CHECK(hex_digest(0x1ULL) == "0000000000000001");
}

TEST_CASE("digest ignores comments and whitespace but not content")
{
    const Report a = report_for("s2xs2");
    CHECK(a.digest.size() == 16);
    CHECK(a.digest == hex_digest(fnv1a64(export_metric_file(entry("s2xs2")))));
    const std::string text = "# a comment\n\n" + export_metric_file(entry("s2xs2"));
    const MetricDocument d = parse_metric_file(text);
    AnalysisOptions opt;
    opt.points = 2;
    CHECK(make_report("file", d.entry, opt).digest == a.digest);
    CHECK(report_for("sphere_4").digest != a.digest);
}

TEST_CASE("machine report round-trips through JSON")
{
    for (const char* name : {"frw_s3", "pp_wave_4", "sasakian_r5", "kmu_solvable", "flat_3"}) {
        CAPTURE(name);
        const Report r = report_for(name);
        const std::string text = render_machine(r);
        CHECK(text.back() == '\n');
        const Report back = report_from_json(nlohmann::ordered_json::parse(text));
        CHECK(render_machine(back) == text);
        CHECK(back.analysis.points.size() == r.analysis.points.size());
    }
    CHECK_THROWS_AS(report_from_json(nlohmann::ordered_json::object()), Error);
    auto j = to_json(report_for("flat_3"));
    j["settings"]["seed"] = "zero";
    CHECK_THROWS_AS(report_from_json(j), Error);
}

TEST_CASE("machine output is deterministic and independent of the thread count")
{
    const std::string one = render_machine(report_for("warped_s2xs2", 1));
    CHECK(render_machine(report_for("warped_s2xs2", 1)) == one);
    CHECK(render_machine(report_for("warped_s2xs2", 3)) == one);
    CHECK(render_machine(report_for("warped_s2xs2", 8)) == one);
}

TEST_CASE("report contents")
{
    const auto j = to_json(report_for("frw_s3"));
    CHECK(j["tool"]["name"] == "curvlab");
    CHECK(j["tool"]["version"] == "1.0.0");
    CHECK(j["input"]["kind"] == "warped");
    CHECK(j["input"]["dimension"] == 4);
    CHECK(j["settings"]["points"] == 10);
    CHECK(predicate(j, "conformally_flat")["holds"] == true);
    CHECK(predicate(j, "conformally_flat")["witness"]["point"].size() == 4);
    CHECK(predicate(j, "einstein")["holds"] == false);
    CHECK(predicate(j, "einstein")["witness"]["index"] == 0);
    for (const auto& e : j["expectations"]) CHECK(e["passed"] == true);

    const auto s2xr = to_json(report_for("warped_s2xr"));
    CHECK(predicate(s2xr, "electric_weyl_zero")["holds"] == false);
    CHECK(predicate(s2xr, "electric_weyl_zero")["max_residual"].get<double>() > 1e-3);

    const auto flat = to_json(report_for("euclidean_4"));
    CHECK(predicate(flat, "conformally_flat")["max_residual"].get<double>() < 1e-10);
    CHECK(predicate(flat, "einstein")["constants"]["einstein_constant"].get<double>() == 0.0);

    const auto flat3 = to_json(report_for("flat_3"));
    CHECK(predicate(flat3, "conformally_flat")["applicable"] == false);
}

TEST_CASE("text report lists predicates with verdicts")
{
    const std::string text = render_text(report_for("frw_s3"));
    CHECK(text.find("frw_s3") != std::string::npos);
    const auto line_start = text.find("conformally_flat");
    REQUIRE(line_start != std::string::npos);
    const std::string line = text.substr(line_start, text.find('\n', line_start) - line_start);
    CHECK(line.find("true") != std::string::npos);
    CHECK(sci(1.5e-12) == "1.500e-12");
    CHECK(sci(0.0) == "0.000e+00");
}
