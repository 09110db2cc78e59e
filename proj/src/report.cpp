#include "curvlab/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "curvlab/error.hpp"
#include "curvlab/metric_file.hpp"

namespace curvlab {

using nlohmann::ordered_json;

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex_digest(std::uint64_t h)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

Report make_report(std::string input, const CatalogEntry& entry, const AnalysisOptions& options)
{
    Report r;
    r.input = std::move(input);
    r.digest = hex_digest(fnv1a64(export_metric_file(entry)));
    r.analysis = analyze(entry, options);
    if (!entry.expected.empty()) r.expectations = check_expectations(entry, r.analysis);
    return r;
}

namespace {

ordered_json vector_json(const Point& p)
{
    ordered_json a = ordered_json::array();
    for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(p[i]);
    return a;
}

Point vector_from(const ordered_json& a)
{
    Point p(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) p[static_cast<Eigen::Index>(i)] = a.at(i).get<double>();
    return p;
}

ordered_json constants_json(const std::vector<std::pair<std::string, double>>& cs)
{
    ordered_json o = ordered_json::object();
    for (const auto& [name, value] : cs) o[name] = value;
    return o;
}

EntryKind kind_from(const std::string& s)
{
    for (EntryKind k : {EntryKind::plain, EntryKind::warped, EntryKind::contact})
        if (s == to_string(k)) return k;
    throw Error("report: unknown kind '" + s + "'");
}

template <class T>
void put_optional(ordered_json& o, const char* key, const std::optional<T>& v)
{
    if (v) o[key] = *v;
}

template <class T>
std::optional<T> get_optional(const ordered_json& o, const char* key)
{
    if (!o.contains(key)) return std::nullopt;
    return o.at(key).get<T>();
}

}  // namespace

ordered_json to_json(const Report& r)
{
    const ClassificationReport& a = r.analysis;
    ordered_json j;
    j["tool"] = {{"name", r.tool}, {"version", r.version}};
    j["input"] = {{"source", r.input},
                  {"label", a.label},
                  {"kind", to_string(a.kind)},
                  {"dimension", a.dimension},
                  {"coordinates", a.coordinates},
                  {"digest", r.digest}};
    const AnalysisOptions& o = a.options;
    j["settings"] = {{"seed", o.seed},
                     {"seed_source", o.seed_source},
                     {"points", o.points},
                     {"tolerances",
                      {{"structural", o.tol.structural}, {"derived", o.tol.derived}, {"theorem", o.tol.theorem}}},
                     {"tolerance_source", o.tolerance_source}};

    ordered_json pts = ordered_json::array();
    for (std::size_t k = 0; k < a.points.size(); ++k) {
        const PointSummary& s = a.points[k];
        ordered_json p;
        p["index"] = k;
        p["coordinates"] = vector_json(s.point);
        p["scalar"] = s.scalar;
        p["riemann_norm"] = s.riemann_norm;
        p["ricci_norm"] = s.ricci_norm;
        put_optional(p, "weyl_norm", s.weyl_norm);
        put_optional(p, "div_weyl_norm", s.div_weyl_norm);
        put_optional(p, "bach_norm", s.bach_norm);
        pts.push_back(std::move(p));
    }
    j["points"] = std::move(pts);

    ordered_json preds = ordered_json::array();
    int n_true = 0, n_false = 0, n_na = 0;
    for (const PredicateResult& p : a.predicates) {
        ordered_json q;
        q["name"] = p.name;
        q["applicable"] = p.applicable;
        q["holds"] = p.verdict.holds;
        q["max_residual"] = p.verdict.max_residual;
        q["threshold"] = p.threshold;
        if (p.verdict.witness && *p.verdict.witness < a.points.size())
            q["witness"] = {{"index", *p.verdict.witness}, {"point", vector_json(a.points[*p.verdict.witness].point)}};
        else
            q["witness"] = nullptr;
        q["constants"] = constants_json(p.verdict.constants);
        q["note"] = p.note;
        preds.push_back(std::move(q));
        if (!p.applicable) ++n_na;
        else if (p.verdict.holds) ++n_true;
        else ++n_false;
    }
    j["predicates"] = std::move(preds);
    j["structural_failure"] = a.structural_failure;

    ordered_json exps = ordered_json::array();
    int failed = 0;
    for (const ExpectationCheck& c : r.expectations) {
        ordered_json e;
        e["predicate"] = c.expected.predicate;
        e["expected"] = c.expected.verdict;
        e["provenance"] = c.expected.provenance;
        ordered_json ks = ordered_json::array();
        for (const ExpectedConstant& k : c.expected.constants)
            ks.push_back({{"name", k.name}, {"value", k.value}, {"tolerance", k.tolerance}});
        e["constants"] = std::move(ks);
        e["passed"] = c.passed;
        e["detail"] = c.detail;
        exps.push_back(std::move(e));
        if (!c.passed) ++failed;
    }
    j["expectations"] = std::move(exps);
    j["summary"] = {{"predicates_true", n_true},
                    {"predicates_false", n_false},
                    {"not_applicable", n_na},
                    {"expectations_failed", failed}};
    return j;
}

Report report_from_json(const ordered_json& j)
{
    try {
        Report r;
        r.tool = j.at("tool").at("name").get<std::string>();
        r.version = j.at("tool").at("version").get<std::string>();
        const ordered_json& in = j.at("input");
        r.input = in.at("source").get<std::string>();
        r.digest = in.at("digest").get<std::string>();
        ClassificationReport& a = r.analysis;
        a.label = in.at("label").get<std::string>();
        a.kind = kind_from(in.at("kind").get<std::string>());
        a.dimension = in.at("dimension").get<int>();
        a.coordinates = in.at("coordinates").get<std::vector<std::string>>();
        const ordered_json& s = j.at("settings");
        a.options.seed = s.at("seed").get<std::uint64_t>();
        a.options.seed_source = s.at("seed_source").get<std::string>();
        a.options.points = s.at("points").get<int>();
        a.options.tol.structural = s.at("tolerances").at("structural").get<double>();
        a.options.tol.derived = s.at("tolerances").at("derived").get<double>();
        a.options.tol.theorem = s.at("tolerances").at("theorem").get<double>();
        a.options.tolerance_source = s.at("tolerance_source").get<std::string>();
        for (const ordered_json& p : j.at("points")) {
            PointSummary ps;
            ps.point = vector_from(p.at("coordinates"));
            ps.scalar = p.at("scalar").get<double>();
            ps.riemann_norm = p.at("riemann_norm").get<double>();
            ps.ricci_norm = p.at("ricci_norm").get<double>();
            ps.weyl_norm = get_optional<double>(p, "weyl_norm");
            ps.div_weyl_norm = get_optional<double>(p, "div_weyl_norm");
            ps.bach_norm = get_optional<double>(p, "bach_norm");
            a.points.push_back(std::move(ps));
        }
        for (const ordered_json& q : j.at("predicates")) {
            PredicateResult p;
            p.name = q.at("name").get<std::string>();
            p.applicable = q.at("applicable").get<bool>();
            p.verdict.holds = q.at("holds").get<bool>();
            p.verdict.max_residual = q.at("max_residual").get<double>();
            p.threshold = q.at("threshold").get<double>();
            if (!q.at("witness").is_null()) p.verdict.witness = q.at("witness").at("index").get<std::size_t>();
            for (const auto& [name, value] : q.at("constants").items())
                p.verdict.constants.emplace_back(name, value.get<double>());
            p.note = q.at("note").get<std::string>();
            a.predicates.push_back(std::move(p));
        }
        a.structural_failure = j.at("structural_failure").get<std::string>();
        for (const ordered_json& e : j.at("expectations")) {
            ExpectationCheck c;
            c.expected.predicate = e.at("predicate").get<std::string>();
            c.expected.verdict = e.at("expected").get<bool>();
            c.expected.provenance = e.at("provenance").get<std::string>();
            for (const ordered_json& k : e.at("constants"))
                c.expected.constants.push_back(
                    {k.at("name").get<std::string>(), k.at("value").get<double>(), k.at("tolerance").get<double>()});
            c.passed = e.at("passed").get<bool>();
            c.detail = e.at("detail").get<std::string>();
            r.expectations.push_back(std::move(c));
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("report: ") + e.what());
    }
}

std::string render_machine(const Report& r)
{
    return to_json(r).dump(2) + "\n";
}

namespace {

std::string pad(std::string s, std::size_t width)
{
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

std::string join(const std::vector<std::string>& parts, const char* sep)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

void range_row(std::ostringstream& out, const char* name, const std::vector<double>& xs)
{
    if (xs.empty()) return;
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    out << "  " << pad(name, 14) << pad(sci(*lo), 12) << sci(*hi) << "\n";
}

}  // namespace

std::string render_text(const Report& r)
{
    const ClassificationReport& a = r.analysis;
    const AnalysisOptions& o = a.options;
    std::ostringstream out;
    out << r.tool << " " << r.version << "  input " << r.input << "  digest " << r.digest << "\n";
    out << "label " << a.label << "  kind " << to_string(a.kind) << "  dimension " << a.dimension
        << "  coordinates (" << join(a.coordinates, ", ") << ")\n";
    out << "seed " << o.seed << " (" << o.seed_source << ")  points " << o.points << "\n";
    out << "tolerances structural " << sci(o.tol.structural) << "  derived " << sci(o.tol.derived) << "  theorem "
        << sci(o.tol.theorem) << " (" << o.tolerance_source << ")\n";
    if (!a.structural_failure.empty()) out << "STRUCTURE FAILURE: " << a.structural_failure << "\n";

    std::vector<double> scalar, riem, ric, weyl, divw, bach;
    for (const PointSummary& s : a.points) {
        scalar.push_back(s.scalar);
        riem.push_back(s.riemann_norm);
        ric.push_back(s.ricci_norm);
        if (s.weyl_norm) weyl.push_back(*s.weyl_norm);
        if (s.div_weyl_norm) divw.push_back(*s.div_weyl_norm);
        if (s.bach_norm) bach.push_back(*s.bach_norm);
    }
    out << "\ncurvature over points\n  " << pad("quantity", 14) << pad("min", 12) << "max\n";
    range_row(out, "scalar", scalar);
    range_row(out, "|Riemann|", riem);
    range_row(out, "|Ricci|", ric);
    range_row(out, "|Weyl|", weyl);
    range_row(out, "|div Weyl|", divw);
    range_row(out, "|Bach|", bach);

    out << "\n  " << pad("predicate", 26) << pad("verdict", 9) << pad("residual", 12) << pad("threshold", 12)
        << pad("witness", 9) << "constants\n";
    for (const PredicateResult& p : a.predicates) {
        out << "  " << pad(p.name, 26);
        if (!p.applicable) {
            out << pad("n/a", 9) << p.note << "\n";
            continue;
        }
        out << pad(p.verdict.holds ? "true" : "false", 9) << pad(sci(p.verdict.max_residual), 12)
            << pad(sci(p.threshold), 12) << pad(p.verdict.witness ? std::to_string(*p.verdict.witness) : "-", 9);
        std::vector<std::string> ks;
        for (const auto& [name, value] : p.verdict.constants) ks.push_back(name + "=" + format_number(value));
        out << join(ks, " ") << "\n";
        if (!p.note.empty()) out << "  " << pad("", 26) << p.note << "\n";
    }

    if (!r.expectations.empty()) {
        const auto failed = std::count_if(r.expectations.begin(), r.expectations.end(),
                                          [](const ExpectationCheck& c) { return !c.passed; });
        out << "\nexpectations " << r.expectations.size() - failed << "/" << r.expectations.size() << " passed\n";
        for (const ExpectationCheck& c : r.expectations)
            if (!c.passed)
                out << "  MISMATCH " << c.expected.predicate << " expected "
                    << (c.expected.verdict ? "true" : "false") << " [" << c.expected.provenance << "]: " << c.detail
                    << "\n";
    }
    return out.str();
}

}  // namespace curvlab
