#include "curvlab/verify.hpp"

#include <algorithm>
#include <sstream>

#include "curvlab/catalog.hpp"
#include "curvlab/error.hpp"
#include "curvlab/report.hpp"

namespace curvlab {

bool VerificationReport::passed() const
{
    return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
}

const std::vector<std::pair<std::string, std::string>>& verification_targets()
{
    static const std::vector<std::pair<std::string, std::string>> targets = {
        {"thm1.1", "warped products over an interval: fiber Einstein, electric Weyl zero and harmonic Weyl "
                   "agree, and imply weak conformal flatness along U, quasi-Einstein and Bach-flat"},
        {"prop1.1", "K-contact, dimension >= 5: W(X,xi)xi = 0 if and only if eta-Einstein"},
        {"thm1.2", "eta-Einstein contact metrics with W(X,Y)xi = 0: k constant, Sasakian or the forced "
                   "3-dimensional branch; scalar curvature normalization of the (k,mu) formula"},
        {"eardley", "dimension 4: a Weyl tensor annihilating a non-null vector vanishes"},
        {"gebarowski", "warped products: harmonic Weyl if and only if the fiber is Einstein"},
    };
    return targets;
}

namespace {

const Expectation* expectation(const CatalogEntry& e, std::string_view predicate)
{
    for (const Expectation& x : e.expected)
        if (x.predicate == predicate) return &x;
    return nullptr;
}

class Run {
public:
    Run(VerificationReport& rep) : rep_(rep) {}

    std::vector<Point> points(const CatalogEntry& e) const { return entry_points(e, rep_.seed, rep_.points); }

    void check(const std::string& entry, std::string name, bool ok, std::string detail = {})
    {
        rep_.assertions.push_back({entry, std::move(name), ok, std::move(detail)});
    }
    void note(std::string text) { rep_.notes.push_back(std::move(text)); }
    const Tolerances& tol() const { return rep_.tol; }

private:
    VerificationReport& rep_;
};

void theorem_1_1(Run& run)
{
    const Tolerances& tol = run.tol();
    for (const CatalogEntry& e : catalog_entries()) {
        const WarpedProductSpec* spec = e.warped();
        if (!spec || e.chart.dim() < 4) continue;
        const std::vector<Point> pts = run.points(e);

        double closed = 0.0, formula = 0.0;
        for (const Point& p : pts) {
            const WarpedComparison c = compare_with_engine(*spec, p);
            closed = std::max({closed, c.riemann, c.ricci, c.scalar});
            const TensorValue engine = engine_electric_weyl(weyl(e.chart, p).weyl04);
            formula = std::max(formula, norm(engine - electric_weyl(*spec, p)) / (1.0 + norm(engine)));
        }
        run.check(e.name, "closed-form curvature matches the engine", closed < tol.derived,
                  "max relative difference " + sci(closed));
        run.check(e.name, "electric Weyl matches -(eps/(n-2)) FRic0", formula < tol.derived,
                  "max relative difference " + sci(formula));

        const Theorem11Report t = theorem_1_1_verify(*spec, pts, tol);
        run.check(e.name, "conditions (i), (ii), (iii) agree pointwise", t.conditions_agree,
                  "residuals " + sci(t.condition[0].max_residual) + ", " + sci(t.condition[1].max_residual) +
                      ", " + sci(t.condition[2].max_residual));
        const bool all_hold = t.condition[0].holds && t.condition[1].holds && t.condition[2].holds;
        const bool none_hold = std::all_of(t.points.begin(), t.points.end(), [](const Theorem11Point& p) {
            return !p.conditions[0] && !p.conditions[1] && !p.conditions[2];
        });
        if (const Expectation* x = expectation(e, "theorem_1_1_conditions")) {
            const bool ok = x->verdict ? all_hold : none_hold;
            run.check(e.name, std::string("conditions ") + (x->verdict ? "hold" : "fail") + " at every point", ok);
        }
        if (all_hold) {
            run.check(e.name, "weakly conformally flat along U", t.weakly_cf_along_U.holds,
                      "max |W(.,.)U| " + sci(t.weakly_cf_along_U.max_residual));
            run.check(e.name, "quasi-Einstein with U along d/dt", t.quasi_einstein_along_t.holds);
            run.check(e.name, "Bach-flat", t.bach_flat.holds, "max relative |B| " + sci(t.bach_flat.max_residual));
            run.note(e.name + ": max |W| " + sci(t.max_weyl_norm) +
                     (t.max_weyl_norm > 1e-3 ? " (weakly but not fully conformally flat)" : " (conformally flat)"));
        }
    }
}

void proposition_1_1(Run& run)
{
    const Tolerances& tol = run.tol();
    for (const CatalogEntry& e : catalog_entries()) {
        const ContactStructure* cs = e.contact();
        if (!cs || cs->dim() < 5) continue;
        const std::vector<Point> pts = run.points(e);
        if (!is_K_contact(*cs, pts, tol.theorem).holds) {
            run.note(e.name + ": not K-contact, outside the proposition's hypotheses");
            continue;
        }
        const Proposition11Report r = proposition_1_1_verify(*cs, pts, tol.theorem);
        run.check(e.name, "W(X,xi)xi = 0 iff eta-Einstein, at every point", r.equivalence == Tri::yes,
                  std::string("W(X,xi)xi = 0: ") + to_string(r.weyl_vanishes) +
                      ", eta-Einstein: " + to_string(r.eta_einstein));
        run.check(e.name, "each side is uniform across points",
                  r.weyl_vanishes != Tri::mixed && r.eta_einstein != Tri::mixed);
        if (r.sasakian_when_weyl_xy_xi_vanishes)
            run.check(e.name, "W(X,Y)xi = 0 implies Sasakian", *r.sasakian_when_weyl_xy_xi_vanishes);
    }
}

void theorem_1_2(Run& run)
{
    const Tolerances& tol = run.tol();
    int normalizations = 0;
    for (const CatalogEntry& e : catalog_entries()) {
        const ContactStructure* cs = e.contact();
        if (!cs) continue;
        const std::vector<Point> pts = run.points(e);

        const KMuFit km = fit_k_mu(*cs, pts, tol.theorem);
        if (km.holds && km.scalar) {
            ++normalizations;
            run.note(e.name + ": (k,mu) = (" + format_number(km.k) + ", " + format_number(*km.mu) +
                     "), scalar curvature " + format_number(km.scalar->engine) + "; without the 2m factor " +
                     format_number(km.scalar->printed) + ", with it " + format_number(km.scalar->traced) +
                     "; matches: " + km.scalar->matches);
        }

        const Theorem12Report r = theorem_1_2_reduction(*cs, pts, tol);
        if (!r.hypotheses_hold) {
            run.note(e.name + ": hypotheses fail (" + r.hypothesis_failure + ")");
            continue;
        }
        run.check(e.name, "k = (a+b)/2m is constant", r.k_variance < 1e-10,
                  "k = " + format_number(r.k_mean) + ", variance " + sci(r.k_variance));
        run.check(e.name, "k <= 1", r.k_mean <= 1.0 + tol.theorem);
        if (r.branch == "sasakian") {
            run.check(e.name, "k = 1 branch is Sasakian", *r.sasakian_residual < tol.derived,
                      "R(X,Y)xi residual " + sci(*r.sasakian_residual));
        } else {
            run.check(e.name, "k < 1 forced relation holds", *r.forced_relation_residual < tol.theorem,
                      "residual " + sci(*r.forced_relation_residual));
            run.check(e.name, "a = 2(m-1) and (m-1)h = 0", *r.a_minus_forced < tol.theorem && *r.m_minus_one_h < tol.theorem,
                      "|a - 2(m-1)| " + sci(*r.a_minus_forced) + ", |(m-1)h| " + sci(*r.m_minus_one_h));
            if (cs->dim() == 3)
                run.note(e.name + ": 3-dimensional branch, Ricci rank " + std::to_string(*r.ricci_rank) +
                         ", model " + r.model);
            else
                run.check(e.name, "k < 1 excluded above dimension 3", false, "k = " + format_number(r.k_mean));
        }
    }
    run.check("-", "scalar curvature normalization compared on a non-Sasakian (k,mu) fixture", normalizations > 0,
              std::to_string(normalizations) + " fixture(s)");
}

void eardley(Run& run)
{
    for (const CatalogEntry& e : catalog_entries()) {
        if (e.chart.dim() != 4) continue;
        const EardleyReport r = eardley_check(e.chart, run.points(e), 1e-6);
        run.check(e.name, "no non-null kernel vector with nonzero Weyl", r.consistent(),
                  std::to_string(r.non_null_kernel_points) + " non-null, " +
                      std::to_string(r.null_only_kernel_points) + " null-only kernel points; max |W| with non-null " +
                      sci(r.max_weyl_with_non_null_kernel));
        const Expectation* wcf = expectation(e, "weakly_conformally_flat");
        const Expectation* cf = expectation(e, "conformally_flat");
        if (wcf && wcf->verdict && cf && !cf->verdict)
            run.check(e.name, "weakly but not fully conformally flat through a null vector",
                      r.null_only_kernel_points == r.points && r.max_weyl_with_null_kernel > 1e-3,
                      "max |W| with null kernel " + sci(r.max_weyl_with_null_kernel));
    }
}

void gebarowski(Run& run)
{
    const Tolerances& tol = run.tol();
    for (const CatalogEntry& e : catalog_entries()) {
        const WarpedProductSpec* spec = e.warped();
        if (!spec || e.chart.dim() < 4) continue;
        int agree = 0, total = 0, einstein = 0;
        for (const Point& p : run.points(e)) {
            const GeometryJets j = geometry_jets(e.chart, p, 3);
            const bool harmonic = harmonic_weyl_residual(j) < tol.theorem;
            const bool fiber = fiber_einstein_residual(*spec, p) < tol.theorem;
            agree += harmonic == fiber;
            einstein += fiber;
            ++total;
        }
        run.check(e.name, "harmonic Weyl iff fiber Einstein", agree == total,
                  std::to_string(agree) + "/" + std::to_string(total) + " points agree; fiber Einstein at " +
                      std::to_string(einstein));
    }
}

}  // namespace

VerificationReport verify_target(std::string_view target, std::uint64_t seed, int points, const Tolerances& tol)
{
    VerificationReport rep;
    rep.target = std::string(target);
    rep.seed = seed;
    rep.points = points;
    rep.tol = tol;
    Run run(rep);
    if (target == "thm1.1") theorem_1_1(run);
    else if (target == "prop1.1") proposition_1_1(run);
    else if (target == "thm1.2") theorem_1_2(run);
    else if (target == "eardley") eardley(run);
    else if (target == "gebarowski") gebarowski(run);
    else throw NotFoundError("unknown verification target '" + std::string(target) + "'");
    return rep;
}

nlohmann::ordered_json to_json(const VerificationReport& r)
{
    nlohmann::ordered_json j;
    j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    j["target"] = r.target;
    j["settings"] = {{"seed", r.seed},
                     {"points", r.points},
                     {"tolerances",
                      {{"structural", r.tol.structural}, {"derived", r.tol.derived}, {"theorem", r.tol.theorem}}}};
    nlohmann::ordered_json as = nlohmann::ordered_json::array();
    for (const Assertion& a : r.assertions)
        as.push_back({{"entry", a.entry}, {"assertion", a.name}, {"passed", a.passed}, {"detail", a.detail}});
    j["assertions"] = std::move(as);
    j["notes"] = r.notes;
    j["passed"] = r.passed();
    return j;
}

std::string render_text(const VerificationReport& r)
{
    std::ostringstream out;
    out << kToolName << " " << kToolVersion << "  verify " << r.target << "  seed " << r.seed << "  points "
        << r.points << "\n\n";
    for (const Assertion& a : r.assertions) {
        out << (a.passed ? "  PASS  " : "  FAIL  ") << a.entry << ": " << a.name;
        if (!a.detail.empty()) out << "  [" << a.detail << "]";
        out << "\n";
    }
    if (!r.notes.empty()) {
        out << "\nnotes\n";
        for (const std::string& n : r.notes) out << "  " << n << "\n";
    }
    const auto failed = std::count_if(r.assertions.begin(), r.assertions.end(), [](const Assertion& a) { return !a.passed; });
    out << "\n" << r.assertions.size() - failed << "/" << r.assertions.size() << " assertions passed\n";
    return out.str();
}

}  // namespace curvlab
