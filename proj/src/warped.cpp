#include "curvlab/warped.hpp"

#include <cmath>

#include "curvlab/error.hpp"

namespace curvlab {

void validate(const WarpedProductSpec& spec)
{
    if (spec.epsilon != 1 && spec.epsilon != -1) throw StructureError("warped product epsilon must be +1 or -1");
    if (!spec.fiber.riemannian()) throw StructureError("warped product fiber must be Riemannian");
    if (spec.f.max_variable() > 0) throw StructureError("warping function may depend on t only");
    if (!(spec.t_domain.lo < spec.t_domain.hi)) throw StructureError("empty t domain");
    constexpr int samples = 17;
    for (int k = 0; k < samples; ++k) {
        const double t = spec.t_domain.lo + (k + 0.5) / samples * spec.t_domain.width();
        const double v = eval(spec.f, std::span<const double>(&t, 1));
        if (!(v > 0.0)) throw StructureError("warping function is not positive at t = " + format_number(t));
    }
}

MetricField assemble_metric(const WarpedProductSpec& spec)
{
    validate(spec);
    const MetricField& fib = spec.fiber;
    const int k = fib.dim();
    const int n = k + 1;
    std::vector<std::string> coords{spec.t_name};
    coords.insert(coords.end(), fib.coords().begin(), fib.coords().end());
    std::vector<int> shift(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) shift[i] = i + 1;
    const ScalarExpr f2 = ScalarExpr::power(spec.f, 2.0);
    std::vector<ScalarExpr> comps(static_cast<std::size_t>(n * n), ScalarExpr::constant(0.0));
    comps[0] = ScalarExpr::constant(spec.epsilon);
    for (int i = 0; i < k; ++i) {
        for (int j = i; j < k; ++j) {
            const ScalarExpr& c = fib.component(i, j);
            if (c.is_constant() && c.constant_value() == 0.0) continue;
            const ScalarExpr e = f2 * remap_variables(c, shift);
            comps[static_cast<std::size_t>((i + 1) * n + j + 1)] = e;
            comps[static_cast<std::size_t>((j + 1) * n + i + 1)] = e;
        }
    }
    std::vector<int> signature{spec.epsilon};
    signature.insert(signature.end(), fib.signature().begin(), fib.signature().end());
    std::vector<Interval> domain{spec.t_domain};
    domain.insert(domain.end(), fib.domain().begin(), fib.domain().end());
    return MetricField(spec.label, coords, comps, signature, domain)
        .with_degeneracy_threshold(fib.degeneracy_threshold());
}

WarpingJet warping_at(const WarpedProductSpec& spec, double t)
{
    const Jet j = eval_jet(spec.f, std::span<const double>(&t, 1), 2);
    return {j.value(), j.partial({0}), j.partial({0, 0})};
}

Point fiber_point(const Point& p) { return p.tail(p.size() - 1); }

namespace {

struct FiberData {
    WarpingJet w;
    GeometryJets fiber;
    TensorValue g;  // full metric restricted to the fiber block: f^2 g_F
    TensorValue gF;
    int n = 0;      // total dimension
};

FiberData fiber_data(const WarpedProductSpec& spec, const Point& p, int order = 2)
{
    FiberData d;
    d.w = warping_at(spec, p[0]);
    d.fiber = geometry_jets(spec.fiber, fiber_point(p), order);
    d.gF = values(d.fiber.g);
    d.g = d.gF * (d.w.f * d.w.f);
    d.n = spec.fiber.dim() + 1;
    return d;
}

TensorValue traceless_fiber_ricci(const FiberData& d)
{
    const int k = d.n - 1;
    return values(d.fiber.ricci) - (d.fiber.scalar.value() / k) * d.gF;
}

}  // namespace

ClosedFormRiemann closed_form_riemann(const WarpedProductSpec& spec, const Point& p)
{
    const FiberData d = fiber_data(spec, p);
    const int k = d.n - 1;
    const int n = d.n;
    const double eps = spec.epsilon;
    const double ff = d.w.ddf / d.w.f;
    const double hf = d.w.df / d.w.f;
    ClosedFormRiemann out;
    out.x_U_U = TensorValue(k, {Variance::up, Variance::down});
    out.x_U_y = TensorValue(k, lower_slots(2));
    for (int i = 0; i < k; ++i) {
        out.x_U_U({i, i}) = -ff;
        for (int j = 0; j < k; ++j) out.x_U_y({i, j}) = eps * ff * d.g({i, j});
    }
    const TensorValue fr04 = values(d.fiber.riemann04);
    const double f2 = d.w.f * d.w.f;
    out.fiber_block = TensorValue(k, lower_slots(4));
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            for (int c = 0; c < k; ++c)
                for (int e = 0; e < k; ++e)
                    out.fiber_block({a, b, c, e}) =
                        f2 * fr04({a, b, c, e}) -
                        eps * hf * hf * (d.g({e, b}) * d.g({c, a}) - d.g({c, b}) * d.g({e, a}));

    out.full04 = TensorValue(n, lower_slots(4));
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            for (int c = 0; c < k; ++c)
                for (int e = 0; e < k; ++e) out.full04({a + 1, b + 1, c + 1, e + 1}) = out.fiber_block({a, b, c, e});
    // R_j0i0 = g(R(d_i,U)U, d_j) = -(f''/f) g_ji, and its images under the symmetries
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            double gx = 0.0;
            for (int l = 0; l < k; ++l) gx += d.g({j, l}) * out.x_U_U({l, i});
            out.full04({j + 1, 0, i + 1, 0}) = gx;
            out.full04({0, j + 1, 0, i + 1}) = gx;
            out.full04({j + 1, 0, 0, i + 1}) = -gx;
            out.full04({0, j + 1, i + 1, 0}) = -gx;
        }
    return out;
}

ClosedFormRicci closed_form_ricci_scalar(const WarpedProductSpec& spec, const Point& p)
{
    const FiberData d = fiber_data(spec, p);
    const int k = d.n - 1;
    const int n = d.n;
    const double eps = spec.epsilon;
    const double ff = d.w.ddf / d.w.f;
    const double hf = d.w.df / d.w.f;
    ClosedFormRicci out;
    out.ricci = TensorValue(n, lower_slots(2));
    out.ricci({0, 0}) = -(n - 1) * ff;
    const TensorValue fric = values(d.fiber.ricci);
    const double bracket = eps * (ff + (n - 2) * hf * hf);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) out.ricci({i + 1, j + 1}) = fric({i, j}) - bracket * d.g({i, j});
    out.scalar = d.fiber.scalar.value() / (d.w.f * d.w.f) - eps * (n - 1) * (2 * ff + (n - 2) * hf * hf);
    return out;
}

WarpedComparison compare_with_engine(const WarpedProductSpec& spec, const Point& p)
{
    const MetricField m = assemble_metric(spec);
    const GeometryJets j = geometry_jets(m, p, 2);
    const TensorValue r04 = values(j.riemann04);
    const TensorValue r13 = values(j.riemann13);
    const ClosedFormRiemann cr = closed_form_riemann(spec, p);
    const ClosedFormRicci cric = closed_form_ricci_scalar(spec, p);
    WarpedComparison c;
    c.riemann = norm(r04 - cr.full04) / (1.0 + norm(r04));
    const TensorValue ric = values(j.ricci);
    c.ricci = norm(ric - cric.ricci) / (1.0 + norm(ric));
    c.scalar = std::abs(j.scalar.value() - cric.scalar) / (1.0 + std::abs(j.scalar.value()));
    const int n = m.dim();
    for (int a = 0; a < n; ++a)
        for (int x = 1; x < n; ++x)
            for (int y = 1; y < n; ++y) c.x_y_U = std::max(c.x_y_U, std::abs(r13({a, 0, x, y})));
    return c;
}

TensorValue electric_weyl(const WarpedProductSpec& spec, const Point& p)
{
    const FiberData d = fiber_data(spec, p);
    if (d.n < 4) throw DimensionError("electric Weyl part requires dimension >= 4");
    return traceless_fiber_ricci(d) * (-spec.epsilon / (d.n - 2.0));
}

TensorValue engine_electric_weyl(const TensorValue& weyl04)
{
    const int k = weyl04.dim() - 1;
    TensorValue e(k, lower_slots(2));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) e({i, j}) = weyl04({j + 1, 0, i + 1, 0});
    return e;
}

double mixed_weyl_check(const WarpedProductSpec& spec, const Point& p)
{
    const TensorValue w = weyl(assemble_metric(spec), p).weyl04;
    const int n = w.dim();
    double m = 0.0;
    for (int b = 1; b < n; ++b)
        for (int c = 1; c < n; ++c)
            for (int d = 1; d < n; ++d) m = std::max(m, std::abs(w({0, b, c, d})));
    return m;
}

double fiber_weyl_relation(const WarpedProductSpec& spec, const Point& p)
{
    const MetricField m = assemble_metric(spec);
    const int n = m.dim();
    if (n < 4) throw DimensionError("fiber Weyl relation requires dimension >= 4");
    const TensorValue w = weyl(m, p).weyl04;
    const FiberData d = fiber_data(spec, p);
    const int k = n - 1;
    const TensorValue f0 = traceless_fiber_ricci(d);
    const double f2 = d.w.f * d.w.f;
    TensorValue fw(k, lower_slots(4));
    if (k >= 4) fw = values(d.fiber.weyl04);
    const double coef = 1.0 / ((n - 2.0) * (n - 3.0));
    double worst = 0.0;
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            for (int c = 0; c < k; ++c)
                for (int e = 0; e < k; ++e) {
                    // x = d_c, y = d_e, z = d_b, w = d_a
                    const double rhs = f2 * fw({a, b, c, e}) -
                                       coef * (d.g({e, a}) * f0({c, b}) - d.g({c, a}) * f0({e, b}) +
                                               d.g({c, b}) * f0({e, a}) - d.g({e, b}) * f0({c, a}));
                    worst = std::max(worst, std::abs(w({a + 1, b + 1, c + 1, e + 1}) - rhs));
                }
    return worst / (1.0 + norm(w));
}

double fiber_einstein_residual(const WarpedProductSpec& spec, const Point& p)
{
    const FiberData d = fiber_data(spec, p);
    const TensorValue fric = values(d.fiber.ricci);
    return norm(traceless_fiber_ricci(d)) / (1.0 + norm(fric));
}

Theorem11Report theorem_1_1_verify(const WarpedProductSpec& spec, std::span<const Point> points, const Tolerances& tol)
{
    const MetricField m = assemble_metric(spec);
    const int n = m.dim();
    if (n < 4) throw DimensionError("the warped-product characterization requires dimension >= 4");
    Theorem11Report rep;
    rep.label = spec.label;
    Eigen::VectorXd dt = Eigen::VectorXd::Zero(n);
    dt[0] = 1.0;
    for (std::size_t idx = 0; idx < points.size(); ++idx) {
        const Point& p = points[idx];
        const GeometryJets j = geometry_jets(m, p, 4);
        Theorem11Point pt;
        pt.riemann_norm = norm(values(j.riemann04));
        const double scale = 1.0 + pt.riemann_norm;
        const TensorValue w04 = values(j.weyl04);
        const TensorValue w13 = values(j.weyl13);
        pt.fiber_einstein = fiber_einstein_residual(spec, p);
        pt.electric_weyl = norm(engine_electric_weyl(w04));
        pt.div_weyl = norm(div_weyl(j));
        for (int b = 1; b < n; ++b)
            for (int c = 1; c < n; ++c)
                for (int d = 1; d < n; ++d) pt.mixed_weyl = std::max(pt.mixed_weyl, std::abs(w04({0, b, c, d})));
        pt.weyl_along_U = weakly_cf_check(w13, dt);
        pt.weyl_norm = norm(w04);
        pt.bach_norm = norm(bach(j));
        pt.quasi_einstein = quasi_einstein_fit(to_matrix(values(j.g)), to_matrix(values(j.ricci)));
        if (pt.quasi_einstein.has_direction)
            pt.U_fiber_part = pt.quasi_einstein.U.tail(n - 1).norm() / pt.quasi_einstein.U.norm();

        pt.conditions[0] = pt.fiber_einstein < tol.theorem;
        pt.conditions[1] = pt.electric_weyl / scale < tol.theorem;
        pt.conditions[2] = pt.div_weyl / scale < tol.theorem;
        pt.conditions_agree = pt.conditions[0] == pt.conditions[1] && pt.conditions[1] == pt.conditions[2];
        pt.weakly_cf_along_U = pt.weyl_along_U / scale < tol.theorem;
        pt.quasi_einstein_along_t =
            pt.quasi_einstein.verdict && (!pt.quasi_einstein.has_direction || pt.U_fiber_part < tol.theorem);
        pt.bach_flat = pt.bach_norm / (scale * scale) < tol.theorem;

        rep.condition[0].absorb(pt.fiber_einstein, pt.conditions[0], idx);
        rep.condition[1].absorb(pt.electric_weyl / scale, pt.conditions[1], idx);
        rep.condition[2].absorb(pt.div_weyl / scale, pt.conditions[2], idx);
        rep.weakly_cf_along_U.absorb(pt.weyl_along_U / scale, pt.weakly_cf_along_U, idx);
        rep.quasi_einstein_along_t.absorb(pt.quasi_einstein.residual, pt.quasi_einstein_along_t, idx);
        rep.bach_flat.absorb(pt.bach_norm / (scale * scale), pt.bach_flat, idx);
        rep.conditions_agree = rep.conditions_agree && pt.conditions_agree;
        if (pt.conditions[0] && pt.conditions[1] && pt.conditions[2])
            rep.conclusions_follow =
                rep.conclusions_follow && pt.weakly_cf_along_U && pt.quasi_einstein_along_t && pt.bach_flat;
        rep.max_weyl_norm = std::max(rep.max_weyl_norm, pt.weyl_norm);
        rep.points.push_back(std::move(pt));
    }
    return rep;
}

}  // namespace curvlab
