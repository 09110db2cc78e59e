#include "curvlab/metric_file.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "curvlab/error.hpp"

namespace curvlab {

namespace {

struct Line {
    int number = 0;
    std::string key;
    std::string value;
    std::size_t value_column = 1;  // 1-based column where the value starts
};

struct Section {
    std::string name;
    int line = 0;
    std::vector<Line> lines;
};

std::string_view trim(std::string_view s)
{
    const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && ws(s.back())) s.remove_suffix(1);
    return s;
}

std::map<std::string, Section> split_sections(std::string_view text)
{
    std::map<std::string, Section> sections;
    Section* current = nullptr;
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view raw = text.substr(pos, end - pos);
        pos = end + 1;
        ++number;
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string_view line = trim(raw);
        if (line.empty()) {
            if (end == text.size()) break;
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') throw FileFormatError("unterminated section header", number);
            const std::string name(trim(line.substr(1, line.size() - 2)));
            if (name.empty()) throw FileFormatError("empty section name", number);
            if (sections.count(name)) throw FileFormatError("duplicate section [" + name + "]", number);
            current = &sections[name];
            current->name = name;
            current->line = number;
        } else {
            if (!current) throw FileFormatError("entry outside of any section", number);
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) throw FileFormatError("expected 'key = value'", number);
            Line l;
            l.number = number;
            l.key = std::string(trim(line.substr(0, eq)));
            const std::string_view rest = line.substr(eq + 1);
            const std::string_view value = trim(rest);
            l.value = std::string(value);
            l.value_column = static_cast<std::size_t>(value.data() - raw.data()) + 1;
            if (l.key.empty()) throw FileFormatError("missing key before '='", number);
            if (l.value.empty()) throw FileFormatError("missing value for '" + l.key + "'", number);
            for (const Line& other : current->lines)
                if (other.key == l.key)
                    throw FileFormatError("duplicate key '" + l.key + "' in [" + current->name + "]", number);
            current->lines.push_back(std::move(l));
        }
        if (end == text.size()) break;
    }
    return sections;
}

/// Tracks which keys of a section were consumed so leftovers can be reported.
class Reader {
public:
    Reader(const Section& s) : s_(s) {}

    const Line* find(const std::string& key)
    {
        for (const Line& l : s_.lines)
            if (l.key == key) {
                used_.insert(&l);
                return &l;
            }
        return nullptr;
    }
    const Line& require(const std::string& key)
    {
        if (const Line* l = find(key)) return *l;
        throw FileFormatError("missing key '" + key + "' in [" + s_.name + "]", s_.line);
    }
    /// Lines not yet consumed, in file order.
    std::vector<const Line*> rest()
    {
        std::vector<const Line*> out;
        for (const Line& l : s_.lines)
            if (!used_.count(&l)) out.push_back(&l);
        return out;
    }
    void finish()
    {
        for (const Line* l : rest())
            throw FileFormatError("unknown key '" + l->key + "' in [" + s_.name + "]", l->number);
    }
    const Section& section() const { return s_; }

private:
    const Section& s_;
    std::set<const Line*> used_;
};

ScalarExpr expression(const std::string& text, std::span<const std::string> coords, int line, std::size_t column)
{
    try {
        return parse_expr(text, coords);
    } catch (const ParseError& e) {
        throw FileFormatError("column " + std::to_string(column + e.offset()) + ": " + e.message(), line);
    }
}

double number(const std::string& text, int line, std::size_t column)
{
    const ScalarExpr e = expression(text, {}, line, column);
    try {
        return eval(e, {});
    } catch (const DomainError& err) {
        throw FileFormatError(std::string("invalid number: ") + err.what(), line);
    }
}

long integer(const Line& l)
{
    long v = 0;
    const char* first = l.value.data();
    const char* last = first + l.value.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last) throw FileFormatError("'" + l.key + "' must be an integer", l.number);
    return v;
}

std::vector<std::string> list(const Line& l)
{
    std::vector<std::string> out;
    std::stringstream ss(l.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string t(trim(item));
        if (t.empty()) throw FileFormatError("empty item in list '" + l.key + "'", l.number);
        out.push_back(t);
    }
    return out;
}

Interval interval(const Line& l)
{
    const std::string& v = l.value;
    if (v.size() < 2 || v.front() != '(' || v.back() != ')')
        throw FileFormatError("interval '" + l.key + "' must look like (lo, hi)", l.number);
    const std::string inner = v.substr(1, v.size() - 2);
    const auto comma = inner.find(',');
    if (comma == std::string::npos || inner.find(',', comma + 1) != std::string::npos)
        throw FileFormatError("interval '" + l.key + "' needs exactly two bounds", l.number);
    const std::string lo_text(trim(inner.substr(0, comma)));
    const std::string hi_text(trim(inner.substr(comma + 1)));
    const double lo = number(lo_text, l.number, l.value_column + 1);
    const double hi = number(hi_text, l.number, l.value_column + comma + 2);
    if (!(lo < hi)) throw FileFormatError("interval '" + l.key + "' is empty", l.number);
    return {lo, hi};
}

bool is_identifier(const std::string& s)
{
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

bool is_function_name(const std::string& s)
{
    static const std::set<std::string> names{"sin", "cos", "tan", "exp", "log", "sqrt"};
    return names.count(s) > 0;
}

std::vector<std::string> coordinates(const Line& l)
{
    std::vector<std::string> coords = list(l);
    std::set<std::string> seen;
    for (const std::string& c : coords) {
        if (!is_identifier(c) || is_function_name(c))
            throw FileFormatError("invalid coordinate name '" + c + "'", l.number);
        if (!seen.insert(c).second) throw FileFormatError("duplicate coordinate '" + c + "'", l.number);
    }
    return coords;
}

int coordinate_index(const std::string& name, const std::vector<std::string>& coords, int line)
{
    const auto it = std::find(coords.begin(), coords.end(), name);
    if (it == coords.end()) throw FileFormatError("unknown coordinate '" + name + "'", line);
    return static_cast<int>(it - coords.begin());
}

/// "name(a, b)" -> indices of a, b.
std::vector<int> indexed_key(const Line& l, const std::string& name, std::size_t arity,
                             const std::vector<std::string>& coords)
{
    const std::string& k = l.key;
    if (k.size() < name.size() + 2 || k.compare(0, name.size(), name) != 0 || k[name.size()] != '(' ||
        k.back() != ')')
        throw FileFormatError("expected '" + name + "(...)' but found '" + k + "'", l.number);
    Line inner = l;
    inner.value = k.substr(name.size() + 1, k.size() - name.size() - 2);
    const std::vector<std::string> args = list(inner);
    if (args.size() != arity)
        throw FileFormatError("'" + name + "' takes " + std::to_string(arity) + " coordinate names", l.number);
    std::vector<int> out;
    for (const std::string& a : args) out.push_back(coordinate_index(a, coords, l.number));
    return out;
}

struct ChartSections {
    const Section* header = nullptr;
    const Section* components = nullptr;
    const Section* domain = nullptr;
};

const Section* section(const std::map<std::string, Section>& all, const std::string& name, bool required, int line)
{
    const auto it = all.find(name);
    if (it == all.end()) {
        if (required) throw FileFormatError("missing section [" + name + "]", line);
        return nullptr;
    }
    return &it->second;
}

/// Header keys other than the chart description are consumed by the caller first.
MetricField read_chart(Reader& header, const Section& comps, const Section& dom)
{
    const Line& label_line = header.require("label");
    const Line& dim_line = header.require("dimension");
    const Line& coord_line = header.require("coordinates");
    const Line& sig_line = header.require("signature");
    const long dim = integer(dim_line);
    if (dim < 2 || dim > 8) throw FileFormatError("dimension must be between 2 and 8", dim_line.number);
    const std::vector<std::string> coords = coordinates(coord_line);
    if (static_cast<long>(coords.size()) != dim)
        throw FileFormatError("expected " + std::to_string(dim) + " coordinates", coord_line.number);
    std::vector<int> signature;
    for (const std::string& s : list(sig_line)) {
        if (s == "1" || s == "+1" || s == "+") signature.push_back(1);
        else if (s == "-1" || s == "-") signature.push_back(-1);
        else throw FileFormatError("signature entries must be +1 or -1", sig_line.number);
    }
    if (static_cast<long>(signature.size()) != dim)
        throw FileFormatError("expected " + std::to_string(dim) + " signature entries", sig_line.number);
    header.finish();

    const int n = static_cast<int>(dim);
    std::vector<ScalarExpr> components(static_cast<std::size_t>(n * n), ScalarExpr::constant(0.0));
    std::set<std::pair<int, int>> seen;
    for (const Line& l : comps.lines) {
        const std::vector<int> ij = indexed_key(l, "g", 2, coords);
        const int i = std::max(ij[0], ij[1]);
        const int j = std::min(ij[0], ij[1]);
        if (!seen.insert({i, j}).second) throw FileFormatError("component " + l.key + " given twice", l.number);
        const ScalarExpr e = expression(l.value, coords, l.number, l.value_column);
        components[static_cast<std::size_t>(i * n + j)] = e;
        components[static_cast<std::size_t>(j * n + i)] = e;
    }
    std::vector<std::optional<Interval>> domain(static_cast<std::size_t>(n));
    for (const Line& l : dom.lines) domain[coordinate_index(l.key, coords, l.number)] = interval(l);
    std::vector<Interval> box;
    for (int i = 0; i < n; ++i) {
        if (!domain[i]) throw FileFormatError("no domain interval for coordinate '" + coords[i] + "'", dom.line);
        box.push_back(*domain[i]);
    }
    return MetricField(label_line.value, coords, std::move(components), std::move(signature), std::move(box));
}

void read_version(Reader& r)
{
    if (const Line* v = r.find("version"))
        if (integer(*v) != kMetricFileVersion)
            throw FileFormatError("unsupported format version " + v->value, v->number);
}

void forbid(const std::map<std::string, Section>& all, std::initializer_list<const char*> names, const char* kind)
{
    for (const char* n : names)
        if (const auto it = all.find(n); it != all.end())
            throw FileFormatError("section [" + std::string(n) + "] is not used by " + kind + " definitions",
                                  it->second.line);
}

void read_analysis(const std::map<std::string, Section>& all, AnalysisDefaults& out)
{
    const Section* s = section(all, "analysis", false, 0);
    if (!s) return;
    Reader r(*s);
    if (const Line* l = r.find("seed")) {
        std::uint64_t v = 0;
        const auto res = std::from_chars(l->value.data(), l->value.data() + l->value.size(), v);
        if (res.ec != std::errc{} || res.ptr != l->value.data() + l->value.size())
            throw FileFormatError("seed must be a nonnegative integer", l->number);
        out.seed = v;
    }
    if (const Line* l = r.find("points")) {
        const long v = integer(*l);
        if (v < 1) throw FileFormatError("points must be at least 1", l->number);
        out.points = static_cast<int>(v);
    }
    const auto tol = [&](const char* key, std::optional<double>& dst) {
        if (const Line* l = r.find(key)) {
            const double v = number(l->value, l->number, l->value_column);
            if (!(v > 0.0)) throw FileFormatError(std::string(key) + " must be positive", l->number);
            dst = v;
        }
    };
    tol("tol_structural", out.tol_structural);
    tol("tol_derived", out.tol_derived);
    tol("tol_theorem", out.tol_theorem);
    r.finish();
}

}  // namespace

MetricDocument parse_metric_file(std::string_view text)
{
    const std::map<std::string, Section> all = split_sections(text);
    for (const auto& [name, s] : all) {
        static const std::set<std::string> known{"metric", "components", "domain", "warped", "contact",
                                                  "analysis", "fiber", "fiber.components", "fiber.domain"};
        if (!known.count(name)) throw FileFormatError("unknown section [" + name + "]", s.line);
    }
    const Section* meta = section(all, "metric", true, 1);
    Reader header(*meta);
    read_version(header);
    const Line& kind_line = header.require("kind");
    MetricDocument doc;
    CatalogEntry& e = doc.entry;
    if (kind_line.value == "plain" || kind_line.value == "contact") {
        const bool contact = kind_line.value == "contact";
        forbid(all, {"warped", "fiber", "fiber.components", "fiber.domain"}, contact ? "contact" : "plain");
        if (!contact) forbid(all, {"contact"}, "plain");
        MetricField chart = read_chart(header, *section(all, "components", true, meta->line),
                                       *section(all, "domain", true, meta->line));
        e.name = chart.label();
        e.chart = chart;
        if (!contact) {
            e.kind = EntryKind::plain;
            e.definition = std::move(chart);
        } else {
            const Section* cs_section = section(all, "contact", true, meta->line);
            const int n = chart.dim();
            const auto& coords = chart.coords();
            ContactStructure cs;
            cs.label = chart.label();
            cs.eta.assign(static_cast<std::size_t>(n), ScalarExpr::constant(0.0));
            cs.xi.assign(static_cast<std::size_t>(n), ScalarExpr::constant(0.0));
            cs.phi.assign(static_cast<std::size_t>(n * n), ScalarExpr::constant(0.0));
            for (const Line& l : cs_section->lines) {
                const std::string head = l.key.substr(0, l.key.find('('));
                if (head == "eta")
                    cs.eta[indexed_key(l, "eta", 1, coords)[0]] = expression(l.value, coords, l.number, l.value_column);
                else if (head == "xi")
                    cs.xi[indexed_key(l, "xi", 1, coords)[0]] = expression(l.value, coords, l.number, l.value_column);
                else if (head == "phi") {
                    const std::vector<int> ij = indexed_key(l, "phi", 2, coords);
                    cs.phi[static_cast<std::size_t>(ij[0] * n + ij[1])] =
                        expression(l.value, coords, l.number, l.value_column);
                } else
                    throw FileFormatError("unknown key '" + l.key + "' in [contact]", l.number);
            }
            cs.g = std::move(chart);
            check_shape(cs);
            e.kind = EntryKind::contact;
            e.definition = std::move(cs);
        }
    } else if (kind_line.value == "warped") {
        forbid(all, {"components", "domain", "contact"}, "warped");
        const Line& label = header.require("label");
        header.finish();
        const Section* ws = section(all, "warped", true, meta->line);
        Reader w(*ws);
        WarpedProductSpec spec;
        spec.label = label.value;
        const Line& eps = w.require("epsilon");
        const long epsilon = integer(eps);
        if (epsilon != 1 && epsilon != -1) throw FileFormatError("epsilon must be +1 or -1", eps.number);
        spec.epsilon = static_cast<int>(epsilon);
        if (const Line* t = w.find("t")) {
            if (!is_identifier(t->value) || is_function_name(t->value))
                throw FileFormatError("invalid coordinate name '" + t->value + "'", t->number);
            spec.t_name = t->value;
        }
        const Line& f = w.require("f");
        const std::vector<std::string> tcoords{spec.t_name};
        spec.f = expression(f.value, tcoords, f.number, f.value_column);
        spec.t_domain = interval(w.require("t_domain"));
        const Line& fiber = w.require("fiber");
        w.finish();
        if (fiber.value.rfind("catalog:", 0) == 0) {
            forbid(all, {"fiber", "fiber.components", "fiber.domain"}, "catalog-fiber warped");
            const std::string name = fiber.value.substr(8);
            const CatalogEntry* ref = find_entry(name);
            if (!ref) throw NotFoundError("line " + std::to_string(fiber.number) + ": unknown catalog entry '" + name + "'");
            if (ref->kind != EntryKind::plain)
                throw FileFormatError("fiber '" + name + "' is not a plain metric", fiber.number);
            spec.fiber = ref->chart;
        } else if (fiber.value == "inline") {
            const Section* fh = section(all, "fiber", true, fiber.number);
            Reader fr(*fh);
            spec.fiber = read_chart(fr, *section(all, "fiber.components", true, fh->line),
                                    *section(all, "fiber.domain", true, fh->line));
        } else {
            throw FileFormatError("fiber must be 'inline' or 'catalog:<name>'", fiber.number);
        }
        if (std::find(spec.fiber.coords().begin(), spec.fiber.coords().end(), spec.t_name) !=
            spec.fiber.coords().end())
            throw FileFormatError("fiber coordinates must not reuse '" + spec.t_name + "'", fiber.number);
        e.name = spec.label;
        e.kind = EntryKind::warped;
        e.chart = assemble_metric(spec);
        e.definition = std::move(spec);
    } else {
        throw FileFormatError("kind must be plain, warped or contact", kind_line.number);
    }
    read_analysis(all, doc.analysis);
    return doc;
}

MetricDocument load_input(std::string_view source)
{
    if (source.rfind("catalog:", 0) == 0) {
        const std::string name(source.substr(8));
        const CatalogEntry* e = find_entry(name);
        if (!e) throw NotFoundError("unknown catalog entry '" + name + "'");
        MetricDocument doc;
        doc.entry = *e;
        return doc;
    }
    std::ifstream in{std::string(source), std::ios::binary};
    if (!in) throw NotFoundError("cannot open '" + std::string(source) + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_metric_file(ss.str());
}

namespace {

void write_chart(std::ostringstream& out, const MetricField& m, const std::string& header,
                 const std::string& prefix)
{
    const auto& coords = m.coords();
    const int n = m.dim();
    out << "[" << header << "]\n";
    out << "label = " << m.label() << "\n";
    out << "dimension = " << n << "\n";
    out << "coordinates = ";
    for (int i = 0; i < n; ++i) out << (i ? ", " : "") << coords[i];
    out << "\nsignature = ";
    for (int i = 0; i < n; ++i) out << (i ? ", " : "") << m.signature()[i];
    out << "\n\n[" << prefix << "components]\n";
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            const ScalarExpr& e = m.component(i, j);
            if (e.is_constant() && e.constant_value() == 0.0) continue;
            out << "g(" << coords[i] << "," << coords[j] << ") = " << print_expr(e, coords) << "\n";
        }
    out << "\n[" << prefix << "domain]\n";
    for (int i = 0; i < n; ++i)
        out << coords[i] << " = (" << format_number(m.domain()[i].lo) << ", " << format_number(m.domain()[i].hi)
            << ")\n";
}

bool is_zero(const ScalarExpr& e) { return e.is_constant() && e.constant_value() == 0.0; }

}  // namespace

std::string export_metric_file(const CatalogEntry& entry, const AnalysisDefaults& analysis)
{
    std::ostringstream out;
    out << "# metric definition: " << entry.name << "\n";
    out << "[metric]\nversion = " << kMetricFileVersion << "\nkind = " << to_string(entry.kind) << "\n";
    if (const WarpedProductSpec* w = entry.warped()) {
        out << "label = " << w->label << "\n\n[warped]\n";
        out << "epsilon = " << w->epsilon << "\n";
        out << "t = " << w->t_name << "\n";
        const std::vector<std::string> tc{w->t_name};
        out << "f = " << print_expr(w->f, tc) << "\n";
        out << "t_domain = (" << format_number(w->t_domain.lo) << ", " << format_number(w->t_domain.hi) << ")\n";
        out << "fiber = inline\n\n";
        write_chart(out, w->fiber, "fiber", "fiber.");
    } else {
        // the chart header shares the [metric] section
        std::ostringstream chart;
        write_chart(chart, entry.chart, "metric", "");
        const std::string text = chart.str();
        out << text.substr(text.find('\n') + 1);
        if (const ContactStructure* cs = entry.contact()) {
            const auto& coords = cs->g.coords();
            const int n = cs->dim();
            out << "\n[contact]\n";
            for (int i = 0; i < n; ++i)
                if (!is_zero(cs->eta[i])) out << "eta(" << coords[i] << ") = " << print_expr(cs->eta[i], coords) << "\n";
            for (int i = 0; i < n; ++i)
                if (!is_zero(cs->xi[i])) out << "xi(" << coords[i] << ") = " << print_expr(cs->xi[i], coords) << "\n";
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const ScalarExpr& e = cs->phi[static_cast<std::size_t>(i * n + j)];
                    if (!is_zero(e))
                        out << "phi(" << coords[i] << "," << coords[j] << ") = " << print_expr(e, coords) << "\n";
                }
        }
    }
    if (analysis.seed || analysis.points || analysis.tol_structural || analysis.tol_derived || analysis.tol_theorem) {
        out << "\n[analysis]\n";
        if (analysis.seed) out << "seed = " << *analysis.seed << "\n";
        if (analysis.points) out << "points = " << *analysis.points << "\n";
        if (analysis.tol_structural) out << "tol_structural = " << format_number(*analysis.tol_structural) << "\n";
        if (analysis.tol_derived) out << "tol_derived = " << format_number(*analysis.tol_derived) << "\n";
        if (analysis.tol_theorem) out << "tol_theorem = " << format_number(*analysis.tol_theorem) << "\n";
    }
    return out.str();
}

namespace {

bool same_exprs(const std::vector<ScalarExpr>& a, const std::vector<ScalarExpr>& b)
{
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!structurally_equal(a[i], b[i])) return false;
    return true;
}

bool same_chart(const MetricField& a, const MetricField& b)
{
    if (a.label() != b.label() || a.coords() != b.coords() || a.signature() != b.signature()) return false;
    for (int i = 0; i < a.dim(); ++i) {
        if (a.domain()[i].lo != b.domain()[i].lo || a.domain()[i].hi != b.domain()[i].hi) return false;
        for (int j = 0; j < a.dim(); ++j)
            if (!structurally_equal(a.component(i, j), b.component(i, j))) return false;
    }
    return true;
}

}  // namespace

bool same_definition(const CatalogEntry& a, const CatalogEntry& b)
{
    if (a.kind != b.kind || a.name != b.name) return false;
    if (const WarpedProductSpec* wa = a.warped()) {
        const WarpedProductSpec* wb = b.warped();
        return wa->epsilon == wb->epsilon && wa->label == wb->label && wa->t_name == wb->t_name &&
               structurally_equal(wa->f, wb->f) && wa->t_domain.lo == wb->t_domain.lo &&
               wa->t_domain.hi == wb->t_domain.hi && same_chart(wa->fiber, wb->fiber);
    }
    if (!same_chart(a.chart, b.chart)) return false;
    if (const ContactStructure* ca = a.contact()) {
        const ContactStructure* cb = b.contact();
        return same_exprs(ca->eta, cb->eta) && same_exprs(ca->xi, cb->xi) && same_exprs(ca->phi, cb->phi);
    }
    return true;
}

}  // namespace curvlab
