#include "curvlab/catalog.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "curvlab/error.hpp"

namespace curvlab {

const char* to_string(EntryKind k)
{
    switch (k) {
    case EntryKind::plain: return "plain";
    case EntryKind::warped: return "warped";
    case EntryKind::contact: return "contact";
    }
    return "plain";
}

namespace {

constexpr double kPi = std::numbers::pi;

struct Entry {
    int i;
    int j;
    const char* expr;
};

ScalarExpr expr(const char* text, const std::vector<std::string>& coords) { return parse_expr(text, coords); }

MetricField make_metric(std::string label, std::vector<std::string> coords, std::initializer_list<Entry> entries,
                        std::vector<int> signature, std::vector<Interval> domain)
{
    std::vector<ComponentEntry> list;
    for (const Entry& e : entries) list.push_back({e.i, e.j, expr(e.expr, coords)});
    const int n = static_cast<int>(coords.size());
    return MetricField(std::move(label), coords, symmetric_components(n, list), std::move(signature),
                       std::move(domain));
}

MetricField flat(std::string label, std::vector<std::string> coords, std::vector<int> signature, Interval box)
{
    const int n = static_cast<int>(coords.size());
    std::vector<ComponentEntry> list;
    for (int i = 0; i < n; ++i) list.push_back({i, i, ScalarExpr::constant(signature[i])});
    std::vector<Interval> domain(static_cast<std::size_t>(n), box);
    return MetricField(std::move(label), coords, symmetric_components(n, list), std::move(signature),
                       std::move(domain));
}

ContactStructure make_contact(std::string label, MetricField g, std::initializer_list<const char*> eta,
                              std::initializer_list<const char*> xi, std::initializer_list<Entry> phi)
{
    ContactStructure cs;
    const auto& coords = g.coords();
    const int n = g.dim();
    for (const char* e : eta) cs.eta.push_back(expr(e, coords));
    for (const char* e : xi) cs.xi.push_back(expr(e, coords));
    cs.phi.assign(static_cast<std::size_t>(n * n), ScalarExpr::constant(0.0));
    for (const Entry& e : phi) cs.phi[static_cast<std::size_t>(e.i * n + e.j)] = expr(e.expr, coords);
    cs.g = g.with_label(label);
    cs.label = std::move(label);
    check_shape(cs);
    return cs;
}

Expectation expect(std::string predicate, bool verdict, std::string provenance,
                   std::vector<ExpectedConstant> constants = {})
{
    return {std::move(predicate), verdict, std::move(constants), std::move(provenance)};
}

ExpectedConstant constant(std::string name, double value, double tolerance = 1e-6)
{
    return {std::move(name), value, tolerance};
}

CatalogEntry plain_entry(MetricField m, std::vector<Expectation> expected, std::string notes)
{
    CatalogEntry e;
    e.name = m.label();
    e.kind = EntryKind::plain;
    e.chart = m;
    e.definition = std::move(m);
    e.expected = std::move(expected);
    e.notes = std::move(notes);
    return e;
}

CatalogEntry warped_entry(WarpedProductSpec spec, std::vector<Expectation> expected, std::string notes)
{
    CatalogEntry e;
    e.name = spec.label;
    e.kind = EntryKind::warped;
    e.chart = assemble_metric(spec);
    e.definition = std::move(spec);
    e.expected = std::move(expected);
    e.notes = std::move(notes);
    return e;
}

CatalogEntry contact_entry(ContactStructure cs, std::vector<Expectation> expected, std::string notes)
{
    CatalogEntry e;
    e.name = cs.label;
    e.kind = EntryKind::contact;
    e.chart = cs.g;
    e.definition = std::move(cs);
    e.expected = std::move(expected);
    e.notes = std::move(notes);
    return e;
}

const Interval kAngle{0.25, kPi - 0.25};
const Interval kTurn{0.0, 2.0 * kPi};

MetricField sphere_3(std::string label = "sphere_3")
{
    return make_metric(std::move(label), {"chi", "th", "ph"},
                       {{0, 0, "1"}, {1, 1, "sin(chi)^2"}, {2, 2, "sin(chi)^2*sin(th)^2"}}, {1, 1, 1},
                       {kAngle, kAngle, kTurn});
}

MetricField s2xs2() { return make_metric("s2xs2", {"th1", "ph1", "th2", "ph2"},
                                         {{0, 0, "1"}, {1, 1, "sin(th1)^2"}, {2, 2, "1"}, {3, 3, "sin(th2)^2"}},
                                         {1, 1, 1, 1}, {kAngle, kTurn, kAngle, kTurn}); }

MetricField s2xr() { return make_metric("s2xr", {"th", "ph", "s"}, {{0, 0, "1"}, {1, 1, "sin(th)^2"}, {2, 2, "1"}},
                                        {1, 1, 1}, {kAngle, kTurn, {-1.0, 1.0}}); }

MetricField flat_3() { return flat("flat_3", {"x", "y", "z"}, {1, 1, 1}, {-1.0, 1.0}); }

std::vector<Expectation> space_form(double c, int n)
{
    std::vector<Expectation> out{
        expect("einstein", true, "exact", {constant("einstein_constant", c * (n - 1))}),
        expect("constant_curvature", true, "exact", {constant("sectional_curvature", c)}),
    };
    if (n >= 4) {
        out.push_back(expect("conformally_flat", true, "exact"));
        out.push_back(expect("harmonic_weyl", true, "exact"));
        out.push_back(expect("bach_flat", true, "exact"));
        out.push_back(expect("weakly_conformally_flat", true, "exact"));
    }
    return out;
}

void add_plain(std::vector<CatalogEntry>& out)
{
    out.push_back(plain_entry(flat("euclidean_4", {"x", "y", "z", "w"}, {1, 1, 1, 1}, {-1.0, 1.0}),
                              space_form(0.0, 4), "Flat Euclidean space in Cartesian coordinates."));
    out.push_back(plain_entry(flat("minkowski_4", {"t", "x", "y", "z"}, {-1, 1, 1, 1}, {-1.0, 1.0}),
                              space_form(0.0, 4), "Flat Lorentzian space, signature (-,+,+,+)."));
    out.push_back(plain_entry(
        make_metric("sphere_4", {"chi", "th", "ph", "ps"},
                    {{0, 0, "1"}, {1, 1, "sin(chi)^2"}, {2, 2, "sin(chi)^2*sin(th)^2"},
                     {3, 3, "sin(chi)^2*sin(th)^2*sin(ph)^2"}},
                    {1, 1, 1, 1}, {kAngle, kAngle, kAngle, kTurn}),
        space_form(1.0, 4), "Unit 4-sphere in polar coordinates; polar angles kept 0.25 away from 0 and pi."));
    out.push_back(plain_entry(
        make_metric("hyperbolic_4", {"x", "y", "z", "w"},
                    {{0, 0, "1/w^2"}, {1, 1, "1/w^2"}, {2, 2, "1/w^2"}, {3, 3, "1/w^2"}}, {1, 1, 1, 1},
                    {{-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}, {0.5, 2.0}}),
        space_form(-1.0, 4), "Hyperbolic 4-space, upper half-space model."));
    out.push_back(plain_entry(sphere_3(), space_form(1.0, 3), "Unit 3-sphere; fiber of frw_s3."));
    out.push_back(plain_entry(flat_3(), space_form(0.0, 3), "Flat 3-space; fiber of frw_flat."));
    out.push_back(plain_entry(
        s2xs2(),
        {expect("einstein", true, "exact", {constant("einstein_constant", 1.0)}),
         expect("constant_curvature", false, "exact"), expect("conformally_flat", false, "exact"),
         expect("harmonic_weyl", true, "exact"), expect("bach_flat", true, "exact"),
         expect("weakly_conformally_flat", false, "computed"), expect("eardley_consistent", true, "reference")},
        "Product of two unit 2-spheres: Einstein without constant curvature. Fiber of warped_s2xs2."));
    out.push_back(plain_entry(s2xr(),
                              {expect("einstein", false, "exact"), expect("constant_curvature", false, "exact")},
                              "Unit 2-sphere times a line: not Einstein. Fiber of warped_s2xr."));
    out.push_back(plain_entry(
        make_metric("pp_wave_4", {"u", "v", "x", "y"},
                    {{0, 0, "(1+u^2)*(x^2-y^2)-(x^2+y^2)"}, {0, 1, "1"}, {2, 2, "1"}, {3, 3, "1"}},
                    {-1, 1, 1, 1}, std::vector<Interval>(4, Interval{-1.0, 1.0})),
        {expect("einstein", false, "exact"),
         expect("quasi_einstein", true, "exact",
                {constant("epsilon_U", 0.0), constant("a", 0.0), constant("b", 1.0)}),
         expect("conformally_flat", false, "exact"), expect("weakly_conformally_flat", true, "exact"),
         expect("harmonic_weyl", true, "exact"), expect("eardley_consistent", true, "reference")},
        "Plane-fronted wave 2 du dv + H du^2 + dx^2 + dy^2 with polynomial H. Ric = 2 du (x) du, a null dust: "
        "quasi-Einstein along the null direction d/dv with a = 0 and b normalized to +1."));
    out.push_back(plain_entry(
        make_metric("perturbed_4", {"x", "y", "z", "w"},
                    {{0, 0, "1+x^2*y/5"}, {1, 1, "1+z*w/4"}, {2, 2, "1+x*z^2/6"}, {3, 3, "1+y^2/5"},
                     {0, 1, "x*w/7"}, {1, 2, "y*z/9"}, {0, 3, "z^2/8"}},
                    {1, 1, 1, 1}, std::vector<Interval>(4, Interval{-1.0, 1.0})),
        {expect("einstein", false, "computed"), expect("conformally_flat", false, "computed"),
         expect("weakly_conformally_flat", false, "computed"), expect("eardley_consistent", true, "reference")},
        "Generic polynomial perturbation of the Euclidean metric; the Weyl kernel is trivial."));
}

WarpedProductSpec warped(std::string label, int epsilon, const char* f, Interval t_domain, MetricField fiber)
{
    WarpedProductSpec s;
    s.epsilon = epsilon;
    s.f = parse_expr(f, std::vector<std::string>{"t"});
    s.t_domain = t_domain;
    s.fiber = std::move(fiber);
    s.label = std::move(label);
    validate(s);
    return s;
}

std::vector<Expectation> einstein_fiber_warped(int epsilon_U, bool conformally_flat)
{
    return {expect("theorem_1_1_conditions", true, "reference"),
            expect("weakly_cf_along_U", true, "reference"),
            expect("weakly_conformally_flat", true, "reference"),
            expect("quasi_einstein", true, "reference", {constant("epsilon_U", epsilon_U)}),
            expect("harmonic_weyl", true, "reference"),
            expect("bach_flat", true, "reference"),
            expect("einstein", false, "exact"),
            expect("conformally_flat", conformally_flat, "exact")};
}

void add_warped(std::vector<CatalogEntry>& out)
{
    {
        auto ex = einstein_fiber_warped(-1, true);
        ex.push_back(expect("eardley_consistent", true, "reference"));
        out.push_back(warped_entry(warped("frw_s3", -1, "1+t^2", {0.5, 2.0}, sphere_3("sphere_3")), std::move(ex),
                                   "Closed FRW model -dt^2 + f(t)^2 g_S3 with f = 1 + t^2."));
    }
    {
        auto ex = einstein_fiber_warped(-1, true);
        ex.push_back(expect("eardley_consistent", true, "reference"));
        out.push_back(warped_entry(warped("frw_flat", -1, "t^2", {0.5, 2.0}, flat_3()), std::move(ex),
                                   "Spatially flat FRW model -dt^2 + t^4 (dx^2 + dy^2 + dz^2)."));
    }
    out.push_back(warped_entry(warped("warped_s2xs2", 1, "exp(t)", {-1.0, 1.0}, s2xs2()),
                               einstein_fiber_warped(1, false),
                               "dt^2 + exp(2t) g_{S2xS2}: Einstein fiber without constant curvature, so W != 0 "
                               "while every component of W along U vanishes."));
    out.push_back(warped_entry(warped("warped_s2xr", -1, "1+t^2", {0.5, 2.0}, s2xr()),
                               {expect("theorem_1_1_conditions", false, "exact"),
                                expect("weakly_cf_along_U", false, "exact"),
                                expect("quasi_einstein", false, "exact"),
                                expect("harmonic_weyl", false, "reference"),
                                expect("bach_flat", false, "computed"),
                                expect("einstein", false, "exact"),
                                expect("conformally_flat", false, "exact"),
                                expect("eardley_consistent", true, "reference")},
                               "Negative control: the fiber S2 x R is not Einstein, so none of the three "
                               "equivalent conditions holds. Ric has eigenvalue multiplicities (1, 2, 1), "
                               "so it is not quasi-Einstein either."));
}

std::vector<Expectation> sasakian_expectations(double a, double b, bool weyl_checks)
{
    std::vector<Expectation> out{
        expect("contact_structure", true, "exact"),
        expect("h_vanishes", true, "reference"),
        expect("k_contact", true, "reference"),
        expect("sasakian", true, "exact"),
        expect("eta_einstein", true, "exact", {constant("a", a), constant("b", b)}),
        expect("k_mu", true, "reference", {constant("k", 1.0)}),
    };
    if (weyl_checks) out.push_back(expect("weyl_reeb_vanishes", true, "reference"));
    return out;
}

const Interval kUnit{-1.0, 1.0};

void add_contact(std::vector<CatalogEntry>& out)
{
    out.push_back(contact_entry(
        make_contact("sasakian_r3",
                     make_metric("sasakian_r3_metric", {"x", "y", "z"},
                                 {{0, 0, "(1+y^2)/4"}, {0, 2, "-y/4"}, {1, 1, "1/4"}, {2, 2, "1/4"}}, {1, 1, 1},
                                 {kUnit, kUnit, kUnit}),
                     {"-y/2", "0", "1/2"}, {"0", "0", "2"}, {{0, 1, "1"}, {1, 0, "-1"}, {2, 1, "y"}}),
        sasakian_expectations(-2.0, 4.0, false),
        "Standard Sasakian structure on R^3: eta = (dz - y dx)/2, g = eta (x) eta + (dx^2 + dy^2)/4, "
        "phi-sectional curvature -3."));
    out.push_back(contact_entry(
        make_contact("sasakian_r5",
                     make_metric("sasakian_r5_metric", {"x1", "y1", "x2", "y2", "z"},
                                 {{0, 0, "(1+y1^2)/4"}, {0, 2, "y1*y2/4"}, {0, 4, "-y1/4"}, {1, 1, "1/4"},
                                  {2, 2, "(1+y2^2)/4"}, {2, 4, "-y2/4"}, {3, 3, "1/4"}, {4, 4, "1/4"}},
                                 {1, 1, 1, 1, 1}, std::vector<Interval>(5, kUnit)),
                     {"-y1/2", "0", "-y2/2", "0", "1/2"}, {"0", "0", "0", "0", "2"},
                     {{0, 1, "1"}, {1, 0, "-1"}, {2, 3, "1"}, {3, 2, "-1"}, {4, 1, "y1"}, {4, 3, "y2"}}),
        sasakian_expectations(-2.0, 6.0, true),
        "Standard Sasakian structure on R^5: eta = (dz - y1 dx1 - y2 dx2)/2, g = eta (x) eta + (sum dx^2 + dy^2)/4. "
        "eta-Einstein with a + b = 4."));
    out.push_back(contact_entry(
        make_contact("nil3",
                     make_metric("nil3_metric", {"x", "y", "z"},
                                 {{0, 0, "y^2/16+1/4"}, {0, 1, "-x*y/16"}, {0, 2, "-y/8"}, {1, 1, "x^2/16+1/4"},
                                  {1, 2, "x/8"}, {2, 2, "1/4"}},
                                 {1, 1, 1}, {kUnit, kUnit, kUnit}),
                     {"-y/4", "x/4", "1/2"}, {"0", "0", "2"},
                     {{1, 0, "-1"}, {2, 0, "x/2"}, {0, 1, "1"}, {2, 1, "y/2"}}),
        sasakian_expectations(-2.0, 4.0, false),
        "Left-invariant Sasakian structure on the Heisenberg group: eta = dz/2 + (x dy - y dx)/4."));
    out.push_back(contact_entry(
        make_contact("sasakian_s3",
                     make_metric("sasakian_s3_metric", {"th", "ph", "z"},
                                 {{0, 0, "1/4"}, {1, 1, "1/4"}, {1, 2, "cos(th)/4"},
                                  {2, 2, "1/4"}},
                                 {1, 1, 1}, {kAngle, kTurn, kUnit}),
                     {"0", "cos(th)/2", "1/2"}, {"0", "0", "2"},
                     {{1, 0, "1/sin(th)"}, {2, 0, "-cos(th)/sin(th)"}, {0, 1, "-sin(th)"}}),
        sasakian_expectations(2.0, 0.0, false),
        "Round unit 3-sphere as a Sasakian manifold in Hopf coordinates: Einstein, so eta-Einstein with b = 0."));
    out.push_back(contact_entry(
        make_contact("contact_perturbed",
                     make_metric("contact_perturbed_metric", {"x1", "y1", "x2", "y2", "z"},
                                 {{0, 0, "(1+y1^2)/4"}, {0, 2, "-y1/(4*y2)"}, {0, 4, "-y1/4"}, {1, 1, "1/4"},
                                  {2, 2, "1/(2*y2^2)"}, {2, 4, "1/(4*y2)"}, {3, 3, "1/(4*y2^2)"}, {4, 4, "1/4"}},
                                 {1, 1, 1, 1, 1}, {kUnit, kUnit, kUnit, {0.5, 2.0}, kUnit}),
                     {"-y1/2", "0", "1/(2*y2)", "0", "1/2"}, {"0", "0", "0", "0", "2"},
                     {{0, 1, "1"}, {1, 0, "-1"}, {4, 1, "y1"}, {2, 3, "1"}, {3, 2, "-1"}, {4, 3, "-1/y2"}}),
        {expect("contact_structure", true, "exact"), expect("h_vanishes", true, "exact"),
         expect("k_contact", true, "exact"), expect("sasakian", true, "exact"),
         expect("eta_einstein", false, "exact"), expect("weyl_reeb_vanishes", false, "reference")},
        "Negative control for eta-Einstein: Sasakian structure over the product of a flat plane and a "
        "hyperbolic plane, eta = (dz - y1 dx1 + dx2/y2)/2. K-contact but not eta-Einstein."));
    out.push_back(contact_entry(
        make_contact("contact_flat3",
                     make_metric("contact_flat3_metric", {"x", "y", "z"}, {{0, 0, "1/4"}, {1, 1, "1/4"}, {2, 2, "1/4"}},
                                 {1, 1, 1}, {kUnit, kUnit, kUnit}),
                     {"cos(z)/2", "sin(z)/2", "0"}, {"2*cos(z)", "2*sin(z)", "0"},
                     {{0, 2, "sin(z)"}, {1, 2, "-cos(z)"}, {2, 0, "-sin(z)"}, {2, 1, "cos(z)"}}),
        {expect("contact_structure", true, "exact"), expect("h_vanishes", false, "exact"),
         expect("k_contact", false, "exact"), expect("sasakian", false, "exact"),
         expect("eta_einstein", true, "exact", {constant("a", 0.0), constant("b", 0.0)}),
         expect("k_mu", true, "exact", {constant("k", 0.0), constant("mu", 0.0)})},
        "Flat contact metric structure on R^3 with eta = (cos z dx + sin z dy)/2: h != 0 and (k, mu) = (0, 0)."));
    out.push_back(contact_entry(
        make_contact("kmu_solvable",
                     make_metric("kmu_solvable_metric", {"u", "v", "w"},
                                 {{0, 0, "(exp(4*w)+exp(-4*w))/2"}, {0, 1, "(exp(4*w)-exp(-4*w))/2"}, {1, 1, "(exp(4*w)+exp(-4*w))/2"}, {2, 2, "1"}}, {1, 1, 1},
                                 {kUnit, kUnit, kUnit}),
                     {"(exp(2*w)+exp(-2*w))/2", "(exp(2*w)-exp(-2*w))/2", "0"}, {"(exp(2*w)+exp(-2*w))/2", "(exp(-2*w)-exp(2*w))/2", "0"},
                     {{2, 0, "(exp(2*w)-exp(-2*w))/2"}, {2, 1, "(exp(2*w)+exp(-2*w))/2"}, {0, 2, "(exp(2*w)-exp(-2*w))/2"}, {1, 2, "-(exp(2*w)+exp(-2*w))/2"}}),
        {expect("contact_structure", true, "exact"), expect("h_vanishes", false, "exact"),
         expect("k_contact", false, "exact"), expect("sasakian", false, "exact"),
         expect("eta_einstein", false, "exact"),
         expect("k_mu", true, "exact", {constant("k", 0.0), constant("mu", 4.0)})},
        "Non-Sasakian (k, mu)-space with k = 0, mu = 4 on a solvable Lie group."));
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries()
{
    static const std::vector<CatalogEntry> entries = [] {
        std::vector<CatalogEntry> out;
        add_plain(out);
        add_warped(out);
        add_contact(out);
        return out;
    }();
    return entries;
}

const CatalogEntry* find_entry(std::string_view name)
{
    for (const CatalogEntry& e : catalog_entries())
        if (e.name == name) return &e;
    return nullptr;
}

std::vector<Point> sample_points(const MetricField& m, std::uint64_t seed, int count)
{
    if (count < 1) throw Error("point count must be at least 1");
    const int n = m.dim();
    for (const Interval& iv : m.domain())
        if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.lo < iv.hi))
            throw Error("cannot sample an empty or unbounded domain");
    std::mt19937_64 rng(seed);
    // 53 random bits mapped to [0, 1); the standard distributions are not reproducible across libraries
    const auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        Point p(n);
        for (int i = 0; i < n; ++i) {
            const Interval& iv = m.domain()[i];
            const double margin = 0.05 * iv.width();
            p[i] = iv.lo + margin + uniform() * (iv.width() - 2.0 * margin);
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<Point> entry_points(const CatalogEntry& entry, std::uint64_t seed, int count)
{
    return sample_points(entry.chart, seed, count);
}

}  // namespace curvlab
