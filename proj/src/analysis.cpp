#include "curvlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "curvlab/error.hpp"

namespace curvlab {

const PredicateResult* ClassificationReport::find(std::string_view name) const
{
    for (const PredicateResult& p : predicates)
        if (p.name == name) return &p;
    return nullptr;
}

namespace {

PredicateResult result(std::string name, Verdict v, double threshold, std::string note = {})
{
    PredicateResult r;
    r.name = std::move(name);
    r.verdict = std::move(v);
    r.threshold = threshold;
    r.note = std::move(note);
    return r;
}

PredicateResult not_applicable(std::string name, std::string why)
{
    PredicateResult r;
    r.name = std::move(name);
    r.applicable = false;
    r.verdict.holds = false;
    r.note = std::move(why);
    return r;
}

// Evaluates the jets of every point on up to `threads` workers. The first failure by point
// index is rethrown so errors are independent of scheduling.
std::vector<GeometryJets> point_jets(const MetricField& m, std::span<const Point> pts, int order, int threads)
{
    std::vector<std::optional<GeometryJets>> slots(pts.size());
    std::vector<std::exception_ptr> errors(pts.size());
    const auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t k = first; k < pts.size(); k += stride) {
            try {
                slots[k] = geometry_jets(m, pts[k], order);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(pts.size(), 1));
    if (workers == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    }
    std::vector<GeometryJets> out;
    out.reserve(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
        if (errors[k]) std::rethrow_exception(errors[k]);
        out.push_back(std::move(*slots[k]));
    }
    return out;
}

void add_generic(const MetricField& m, std::span<const Point> pts, const AnalysisOptions& options,
                 ClassificationReport& rep)
{
    const Tolerances& tol = options.tol;
    const int n = m.dim();
    const std::vector<GeometryJets> jets = point_jets(m, pts, n >= 4 ? 4 : 2, options.threads);
    Verdict einstein, cc, qe, cf, wcf, harm, bachv;
    std::optional<double> einstein_constant, sectional;
    std::optional<QuasiEinsteinFit> first_fit;
    int min_kernel = n;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const GeometryJets& j = jets[k];
        const TensorValue ric = values(j.ricci);
        PointSummary s;
        s.point = pts[k];
        s.scalar = j.scalar.value();
        s.riemann_norm = norm(values(j.riemann04));
        s.ricci_norm = norm(ric);

        const double er = einstein_residual(j);
        einstein.absorb(er, er < tol.theorem, k);
        if (!einstein_constant) einstein_constant = s.scalar / n;
        const double cr = constant_curvature_residual(j);
        cc.absorb(cr, cr < tol.theorem, k);
        if (!sectional) sectional = s.scalar / (n * (n - 1.0));

        const Eigen::MatrixXd g = to_matrix(values(j.g));
        const QuasiEinsteinFit fit = quasi_einstein_fit(g, to_matrix(ric), tol.theorem);
        qe.absorb(std::max(fit.residual, fit.rank_residual) / (1.0 + s.ricci_norm), fit.verdict, k);
        if (fit.verdict && !first_fit) first_fit = fit;

        if (n >= 4) {
            const double wn = norm(values(j.weyl04));
            s.weyl_norm = wn;
            const double cfr = conformal_flatness_residual(j);
            cf.absorb(cfr, cfr < tol.derived, k);
            const WeylKernel ker = weakly_cf_kernel(values(j.weyl13), g, tol.derived);
            const double smallest = ker.singular_values[n - 1] / (1.0 + ker.singular_values[0]);
            wcf.absorb(smallest, ker.dimension() > 0, k);
            min_kernel = std::min(min_kernel, ker.dimension());
            s.div_weyl_norm = norm(div_weyl(j));
            const double hr = harmonic_weyl_residual(j);
            harm.absorb(hr, hr < tol.theorem, k);
            s.bach_norm = norm(bach(j));
            const double br = bach_residual(j);
            bachv.absorb(br, br < tol.theorem, k);
        }
        rep.points.push_back(std::move(s));
    }
    if (einstein.holds) einstein.constants = {{"einstein_constant", *einstein_constant}};
    rep.predicates.push_back(result("einstein", einstein, tol.theorem));
    if (cc.holds) cc.constants = {{"sectional_curvature", *sectional}};
    rep.predicates.push_back(result("constant_curvature", cc, tol.theorem));
    std::string qe_note;
    if (qe.holds && first_fit) {
        qe.constants = {{"a", first_fit->a}, {"b", first_fit->b}};
        if (first_fit->has_direction) qe.constants.emplace_back("epsilon_U", first_fit->epsilon_U);
        else qe_note = "Einstein: b = 0 and no distinguished direction";
    }
    rep.predicates.push_back(result("quasi_einstein", qe, tol.theorem, qe_note));
    if (n < 4) {
        for (const char* name : {"conformally_flat", "weakly_conformally_flat", "harmonic_weyl", "bach_flat"})
            rep.predicates.push_back(not_applicable(name, "Weyl tensor vanishes identically below dimension 4"));
        return;
    }
    rep.predicates.push_back(result("conformally_flat", cf, tol.derived));
    wcf.constants = {{"min_kernel_dimension", min_kernel}};
    rep.predicates.push_back(result("weakly_conformally_flat", wcf, tol.derived));
    rep.predicates.push_back(result("harmonic_weyl", harm, tol.theorem));
    rep.predicates.push_back(result("bach_flat", bachv, tol.theorem));
    if (n == 4) {
        const EardleyReport e = eardley_check(m, pts, tol.theorem);
        Verdict v;
        v.holds = e.consistent();
        v.max_residual = e.max_weyl_with_non_null_kernel;
        if (!e.violations.empty()) v.witness = e.violations.front();
        v.constants = {{"non_null_kernel_points", static_cast<double>(e.non_null_kernel_points)},
                       {"null_only_kernel_points", static_cast<double>(e.null_only_kernel_points)},
                       {"max_weyl_with_null_kernel", e.max_weyl_with_null_kernel}};
        rep.predicates.push_back(result("eardley_consistent", v, tol.theorem));
    }
}

void add_warped(const WarpedProductSpec& spec, std::span<const Point> pts, const Tolerances& tol,
                ClassificationReport& rep)
{
    const int n = spec.fiber.dim() + 1;
    Verdict closed, fiber, relation, electric_formula;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const WarpedComparison c = compare_with_engine(spec, pts[k]);
        const double r = std::max({c.riemann, c.ricci, c.scalar, c.x_y_U});
        closed.absorb(r, r < tol.derived, k);
        const double fe = fiber_einstein_residual(spec, pts[k]);
        fiber.absorb(fe, fe < tol.theorem, k);
        if (n >= 4) {
            const double fr = fiber_weyl_relation(spec, pts[k]);
            relation.absorb(fr, fr < tol.derived, k);
            const WeylValues w = weyl(rep.kind == EntryKind::warped ? assemble_metric(spec) : spec.fiber, pts[k]);
            const TensorValue engine = engine_electric_weyl(w.weyl04);
            const double d = norm(engine - electric_weyl(spec, pts[k])) / (1.0 + norm(engine));
            electric_formula.absorb(d, d < tol.derived, k);
        }
    }
    rep.predicates.push_back(result("closed_form_agreement", closed, tol.derived));
    rep.predicates.push_back(result("fiber_einstein", fiber, tol.theorem));
    if (n < 4) return;
    rep.predicates.push_back(result("electric_weyl_formula", electric_formula, tol.derived));
    rep.predicates.push_back(result("fiber_weyl_relation", relation, tol.derived));
    const Theorem11Report t = theorem_1_1_verify(spec, pts, tol);
    Verdict electric, mixed, all3, agree, follow;
    for (std::size_t k = 0; k < t.points.size(); ++k) {
        const Theorem11Point& p = t.points[k];
        const double scale = 1.0 + p.riemann_norm;
        electric.absorb(p.electric_weyl / scale, p.conditions[1], k);
        mixed.absorb(p.mixed_weyl, p.mixed_weyl < tol.derived, k);
        const double worst = std::max({p.fiber_einstein, p.electric_weyl / scale, p.div_weyl / scale});
        all3.absorb(worst, p.conditions[0] && p.conditions[1] && p.conditions[2], k);
        agree.absorb(0.0, p.conditions_agree, k);
    }
    follow.holds = t.conclusions_follow;
    rep.predicates.push_back(result("electric_weyl_zero", electric, tol.theorem));
    rep.predicates.push_back(result("weyl_mixed_zero", mixed, tol.derived));
    rep.predicates.push_back(result("weakly_cf_along_U", t.weakly_cf_along_U, tol.theorem));
    rep.predicates.push_back(result("theorem_1_1_conditions", all3, tol.theorem));
    rep.predicates.push_back(result("theorem_1_1_equivalence", agree, tol.theorem,
                                    "fiber Einstein, electric Weyl zero and harmonic Weyl agree pointwise"));
    rep.predicates.push_back(result("theorem_1_1_conclusions", follow, tol.theorem,
                                    "where all conditions hold: weakly conformally flat along U, "
                                    "quasi-Einstein along U and Bach-flat"));
}

void add_contact(const ContactStructure& cs, std::span<const Point> pts, const Tolerances& tol,
                 ClassificationReport& rep)
{
    const StructureReport sr = verify_structure(cs, pts, tol.structural);
    Verdict sv;
    sv.holds = sr.ok;
    sv.max_residual = std::max({sr.worst.eta_xi, sr.worst.eta_metric, sr.worst.phi_squared, sr.worst.deta_phi,
                                sr.worst.xi_in_kernel});
    sv.witness = sr.witness;
    sv.constants = {{"min_contact_volume", sr.worst.contact_volume}};
    rep.predicates.push_back(result("contact_structure", sv, tol.structural, sr.ok ? "" : "violated: " + sr.violation));
    static const char* const dependent[] = {"h_vanishes", "h_properties", "nabla_xi_identity",
                                            "ricci_xi_xi_identity", "k_contact", "sasakian", "eta_einstein",
                                            "k_mu", "weyl_reeb_vanishes", "weyl_reeb_formula"};
    if (!sr.ok) {
        rep.structural_failure = cs.label + ": " + sr.violation;
        for (const char* name : dependent)
            rep.predicates.push_back(not_applicable(name, "contact structure failed validation"));
        return;
    }
    Verdict hz, hp, nabla, ricxx;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const HTensor h = compute_h(cs, pts[k]);
        const double hn = h.matrix.norm();
        hz.absorb(hn, hn < tol.derived, k);
        const double props = std::max({h.self_adjoint, h.trace, h.anticommute});
        hp.absorb(props, props < tol.structural, k);
        const NablaXiCheck nx = check_nabla_xi(cs, pts[k]);
        nabla.absorb(nx.nabla_xi, nx.nabla_xi < tol.derived, k);
        ricxx.absorb(nx.ricci_xi_xi, nx.ricci_xi_xi < tol.derived, k);
    }
    rep.predicates.push_back(result("h_vanishes", hz, tol.derived));
    rep.predicates.push_back(result("h_properties", hp, tol.structural, "self-adjoint, trace-free, anticommutes with phi"));
    rep.predicates.push_back(result("nabla_xi_identity", nabla, tol.derived));
    rep.predicates.push_back(result("ricci_xi_xi_identity", ricxx, tol.derived));
    const Verdict kc = is_K_contact(cs, pts, tol.theorem);
    rep.predicates.push_back(result("k_contact", kc, tol.theorem));
    rep.predicates.push_back(result("sasakian", is_sasakian(cs, pts, tol.theorem), tol.theorem));
    const EtaEinsteinFit ee = eta_einstein_fit(cs, pts, tol.theorem);
    Verdict eev = ee.verdict;
    std::string ee_note;
    if (ee.trace_residual)
        ee_note = "K-contact: |r - (2m+1)a - b| <= " + format_number(*ee.trace_residual) + ", |a + b - 2m| <= " +
                  format_number(*ee.reeb_residual);
    if (!eev.holds) eev.constants.clear();
    rep.predicates.push_back(result("eta_einstein", eev, tol.theorem, ee_note));

    const KMuFit km = fit_k_mu(cs, pts, tol.theorem);
    Verdict kv;
    kv.holds = km.holds;
    kv.max_residual = km.residual;
    if (!km.holds) kv.witness = km.witness;
    std::string km_note;
    if (km.holds) {
        kv.constants.emplace_back("k", km.k);
        if (km.mu) kv.constants.emplace_back("mu", *km.mu);
        else km_note = "mu undetermined (h = 0)";
        if (km.scalar) {
            kv.constants.emplace_back("scalar_engine", km.scalar->engine);
            kv.constants.emplace_back("scalar_printed_form", km.scalar->printed);
            kv.constants.emplace_back("scalar_traced_form", km.scalar->traced);
            kv.constants.emplace_back("ricci_formula_residual", *km.ricci_residual);
            km_note = "scalar curvature normalization matches: " + km.scalar->matches;
        }
    }
    rep.predicates.push_back(result("k_mu", kv, tol.theorem, km_note));

    if (cs.dim() < 5) {
        rep.predicates.push_back(not_applicable("weyl_reeb_vanishes", "needs dimension >= 5"));
        rep.predicates.push_back(not_applicable("weyl_reeb_formula", "needs dimension >= 5"));
        return;
    }
    Verdict wv, wf;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const WeylReebDouble d = weyl_reeb_double(cs, pts[k]);
        const double r = d.engine_norm / (1.0 + d.riemann_norm);
        wv.absorb(r, r < tol.theorem, k);
        wf.absorb(d.difference, d.difference < tol.derived, k);
    }
    rep.predicates.push_back(result("weyl_reeb_vanishes", wv, tol.theorem));
    if (kc.holds) rep.predicates.push_back(result("weyl_reeb_formula", wf, tol.derived));
    else rep.predicates.push_back(not_applicable("weyl_reeb_formula", "closed form assumes K-contact"));
}

}  // namespace

ClassificationReport analyze(const CatalogEntry& entry, const AnalysisOptions& options)
{
    ClassificationReport rep;
    rep.label = entry.name;
    rep.kind = entry.kind;
    rep.dimension = entry.chart.dim();
    rep.coordinates = entry.chart.coords();
    rep.options = options;
    const std::vector<Point> pts = entry_points(entry, options.seed, options.points);
    add_generic(entry.chart, pts, options, rep);
    if (const WarpedProductSpec* w = entry.warped()) add_warped(*w, pts, options.tol, rep);
    if (const ContactStructure* c = entry.contact()) add_contact(*c, pts, options.tol, rep);
    return rep;
}

std::vector<ExpectationCheck> check_expectations(const CatalogEntry& entry, const ClassificationReport& report)
{
    std::vector<ExpectationCheck> out;
    for (const Expectation& ex : entry.expected) {
        ExpectationCheck c;
        c.expected = ex;
        const PredicateResult* p = report.find(ex.predicate);
        if (!p || !p->applicable) {
            c.detail = "predicate not evaluated";
            out.push_back(std::move(c));
            continue;
        }
        c.passed = p->verdict.holds == ex.verdict;
        if (!c.passed) c.detail = "verdict " + std::string(p->verdict.holds ? "true" : "false");
        for (const ExpectedConstant& k : ex.constants) {
            const auto it = std::find_if(p->verdict.constants.begin(), p->verdict.constants.end(),
                                         [&](const auto& kv) { return kv.first == k.name; });
            if (it == p->verdict.constants.end()) {
                c.passed = false;
                c.detail += (c.detail.empty() ? "" : "; ") + k.name + " missing";
            } else if (!(std::abs(it->second - k.value) <= k.tolerance)) {
                c.passed = false;
                c.detail += (c.detail.empty() ? "" : "; ") + k.name + " = " + format_number(it->second);
            }
        }
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace curvlab
