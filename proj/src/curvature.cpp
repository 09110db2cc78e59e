#include "curvlab/curvature.hpp"

#include "curvlab/error.hpp"

namespace curvlab {

namespace {

void require_dim4(int n, const char* what)
{
    if (n < 4) throw DimensionError(std::string(what) + " requires dimension >= 4 (got " + std::to_string(n) + ")");
}

}  // namespace

JetTensor christoffel_from_metric(const JetTensor& g, const JetTensor& ginv)
{
    const int n = g.dim();
    const int order = g[0].order();
    if (order < 1) throw Error("christoffel symbols need metric jets of order >= 1");
    std::vector<JetTensor> dg;  // dg[l](i,j) = d_l g_ij
    dg.reserve(n);
    for (int l = 0; l < n; ++l) {
        JetTensor d(n, lower_slots(2));
        for (std::size_t f = 0; f < g.size(); ++f) d[f] = g[f].derivative(l);
        dg.push_back(std::move(d));
    }
    JetTensor first(n, lower_slots(3));  // Gamma_{l ij}
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                first({l, i, j}) = 0.5 * (dg[i]({j, l}) + dg[j]({i, l}) - dg[l]({i, j}));
    return raise_index(first, 0, ginv);
}

JetTensor christoffel(const MetricField& m, const Point& p, int jet_extra)
{
    if (jet_extra < 0 || jet_extra > 2) throw Error("christoffel jet_extra must be in 0..2");
    const JetTensor g = metric_jets(m, p, jet_extra + 1);
    return christoffel_from_metric(g, inverse_metric_jets(g));
}

template <class Scalar>
Tensor<Scalar> weyl_from_parts(const Tensor<Scalar>& riem13, const Tensor<Scalar>& ricci,
                               const Tensor<Scalar>& ricci_operator, const Scalar& scalar, const Tensor<Scalar>& g)
{
    const int n = riem13.dim();
    require_dim4(n, "Weyl tensor");
    const double c1 = 1.0 / (n - 2);
    const double c2 = 1.0 / ((n - 1.0) * (n - 2.0));
    Tensor<Scalar> w = riem13;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            for (int c = 0; c < n; ++c) {
                for (int d = 0; d < n; ++d) {
                    Scalar& x = w({a, b, c, d});
                    if (a == d) x += c1 * ricci({c, b});
                    if (a == c) x -= c1 * ricci({d, b});
                    add_product(x, g({c, b}), ricci_operator({a, d}), c1);
                    add_product(x, g({d, b}), ricci_operator({a, c}), -c1);
                    if (a == d) add_product(x, scalar, g({c, b}), -c2);
                    if (a == c) add_product(x, scalar, g({d, b}), c2);
                }
            }
        }
    }
    return w;
}

template TensorValue weyl_from_parts(const TensorValue&, const TensorValue&, const TensorValue&, const double&,
                                     const TensorValue&);
template JetTensor weyl_from_parts(const JetTensor&, const JetTensor&, const JetTensor&, const Jet&,
                                   const JetTensor&);

GeometryJets geometry_jets(const MetricField& m, const Point& p, int metric_order)
{
    if (metric_order < 2 || metric_order > kMaxJetOrder) throw Error("curvature needs metric jet order in 2..4");
    const int n = m.dim();
    GeometryJets out;
    out.metric_order = metric_order;
    out.g = metric_jets(m, p, metric_order);
    out.ginv = inverse_metric_jets(out.g);
    out.christoffel = christoffel_from_metric(out.g, out.ginv);
    const JetTensor& gam = out.christoffel;

    // dgam[c](a,d,b) = d_c Gamma^a_db
    std::vector<JetTensor> dgam;
    dgam.reserve(n);
    for (int c = 0; c < n; ++c) {
        JetTensor d(n, gam.variance());
        for (std::size_t f = 0; f < gam.size(); ++f) d[f] = gam[f].derivative(c);
        dgam.push_back(std::move(d));
    }

    const int curv_order = metric_order - 2;
    const auto& basis = out.g[0].basis();
    out.riemann13 = JetTensor(n, {Variance::up, Variance::down, Variance::down, Variance::down}, Jet(basis, curv_order));
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            for (int c = 0; c < n; ++c) {
                for (int d = 0; d < n; ++d) {
                    Jet& r = out.riemann13({a, b, c, d});
                    if (c == d) continue;
                    r += dgam[c]({a, d, b});
                    r -= dgam[d]({a, c, b});
                    for (int e = 0; e < n; ++e) {
                        r.add_product(gam({a, c, e}), gam({e, d, b}));
                        r.add_product(gam({a, d, e}), gam({e, c, b}), -1.0);
                    }
                }
            }
        }
    }
    out.riemann04 = lower_index(out.riemann13, 0, out.g);
    out.ricci = trace(out.riemann13, 0, 2);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            Jet avg = 0.5 * (out.ricci({i, j}) + out.ricci({j, i}));
            out.ricci({i, j}) = avg;
            out.ricci({j, i}) = avg;
        }
    }
    out.ricci_operator = raise_index(out.ricci, 0, out.ginv);
    out.scalar = Jet(basis, curv_order);
    for (int i = 0; i < n; ++i) out.scalar += out.ricci_operator({i, i});
    if (n >= 4) {
        out.weyl13 = weyl_from_parts(out.riemann13, out.ricci, out.ricci_operator, out.scalar, out.g);
        out.weyl04 = lower_index(out.weyl13, 0, out.g);
    }
    return out;
}

RiemannValues riemann(const MetricField& m, const Point& p)
{
    const GeometryJets j = geometry_jets(m, p, 2);
    return {values(j.riemann13), values(j.riemann04)};
}

RicciValues ricci_scalar(const MetricField& m, const Point& p)
{
    const GeometryJets j = geometry_jets(m, p, 2);
    return {values(j.ricci), j.scalar.value(), values(j.ricci_operator)};
}

WeylValues weyl(const MetricField& m, const Point& p)
{
    require_dim4(m.dim(), "Weyl tensor");
    const GeometryJets j = geometry_jets(m, p, 2);
    return {values(j.weyl13), values(j.weyl04)};
}

JetTensor covariant_derivative(const JetTensor& field, const JetTensor& christoffel)
{
    const int n = field.dim();
    const int rank = field.rank();
    const int order = std::min(field[0].order() - 1, christoffel[0].order());
    if (order < 0) throw Error("covariant derivative needs field jets of order >= 1");
    std::vector<Variance> variance{Variance::down};
    variance.insert(variance.end(), field.variance().begin(), field.variance().end());
    JetTensor out(n, variance);
    std::vector<int> idx(rank + 1);
    for (std::size_t f = 0; f < out.size(); ++f) {
        out.unflatten(f, idx);
        const int e = idx[0];
        const std::span<const int> inner(idx.data() + 1, static_cast<std::size_t>(rank));
        const std::size_t base = field.flat_index(inner);
        Jet acc = field[base].derivative(e).truncated(order);
        for (int s = 0; s < rank; ++s) {
            const int i = inner[s];
            const std::size_t stride = field.stride(s);
            const std::size_t zeroed = base - static_cast<std::size_t>(i) * stride;
            for (int q = 0; q < n; ++q) {
                const Jet& t = field[zeroed + static_cast<std::size_t>(q) * stride];
                if (field.variance(s) == Variance::down)
                    acc.add_product(christoffel({q, e, i}), t, -1.0);
                else
                    acc.add_product(christoffel({i, e, q}), t, 1.0);
            }
        }
        out[f] = std::move(acc);
    }
    return out;
}

TensorValue covariant_derivative(const JetTensorField& field, const MetricField& m, const Point& p)
{
    return values(covariant_derivative(field(p, 1), christoffel(m, p, 0)));
}

namespace {

/// nabla_e W_cabd with the derivative index first.
JetTensor weyl_gradient(const GeometryJets& jets) { return covariant_derivative(jets.weyl04, jets.christoffel); }

}  // namespace

TensorValue div_weyl(const GeometryJets& jets)
{
    const int n = jets.g.dim();
    require_dim4(n, "divergence of Weyl");
    if (jets.metric_order < 3) throw Error("divergence of Weyl needs metric jets of order >= 3");
    const JetTensor grad = weyl_gradient(jets);
    TensorValue out(n, lower_slots(3));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int d = 0; d < n; ++d) {
                double s = 0.0;
                for (int c = 0; c < n; ++c)
                    for (int e = 0; e < n; ++e) s += jets.ginv({c, e}).value() * grad({e, c, a, b, d}).value();
                out({a, b, d}) = s;
            }
    return out;
}

TensorValue div_weyl(const MetricField& m, const Point& p)
{
    require_dim4(m.dim(), "divergence of Weyl");
    return div_weyl(geometry_jets(m, p, 3));
}

TensorValue bach(const GeometryJets& jets)
{
    const int n = jets.g.dim();
    require_dim4(n, "Bach tensor");
    if (jets.metric_order < 4) throw Error("Bach tensor needs metric jets of order 4");
    const JetTensor grad = weyl_gradient(jets);

    // T_cab = nabla^d W_cabd, still carrying one derivative order
    const auto& basis = jets.g[0].basis();
    JetTensor t(n, lower_slots(3), Jet(basis, 1));
    for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                Jet& acc = t({c, a, b});
                for (int d = 0; d < n; ++d)
                    for (int e = 0; e < n; ++e) acc.add_product(jets.ginv({d, e}), grad({e, c, a, b, d}));
            }
    const JetTensor grad_t = covariant_derivative(t, jets.christoffel);

    const TensorValue ginv = values(jets.ginv);
    const TensorValue ric_up = values(raise_index(jets.ricci_operator, 1, jets.ginv));
    const TensorValue w = values(jets.weyl04);
    TensorValue out(n, lower_slots(2));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double first = 0.0, second = 0.0;
            for (int c = 0; c < n; ++c)
                for (int f = 0; f < n; ++f) {
                    first += ginv({c, f}) * grad_t({f, c, a, b}).value();
                    second += ric_up({c, f}) * w({c, a, b, f});
                }
            out({a, b}) = first / (n - 1) + second / (n - 2);
        }
    return out;
}

TensorValue bach(const MetricField& m, const Point& p)
{
    require_dim4(m.dim(), "Bach tensor");
    return bach(geometry_jets(m, p, 4));
}

CurvaturePacket curvature_packet(const MetricField& m, const Point& p, PacketLevel level)
{
    const int order = level == PacketLevel::bach ? 4 : level == PacketLevel::divergence ? 3 : 2;
    if (level != PacketLevel::curvature) require_dim4(m.dim(), "Weyl derivatives");
    const GeometryJets j = geometry_jets(m, p, order);
    CurvaturePacket pk;
    pk.point = p;
    pk.christoffel = j.christoffel;
    for (std::size_t f = 0; f < pk.christoffel.size(); ++f)
        pk.christoffel[f] = pk.christoffel[f].truncated(std::min(2, pk.christoffel[f].order()));
    pk.g = values(j.g);
    pk.ginv = values(j.ginv);
    pk.riem13 = values(j.riemann13);
    pk.riem04 = values(j.riemann04);
    pk.ricci = values(j.ricci);
    pk.scalar = j.scalar.value();
    pk.ricci_operator = values(j.ricci_operator);
    if (m.dim() >= 4) {
        pk.weyl13 = values(j.weyl13);
        pk.weyl04 = values(j.weyl04);
    }
    if (level != PacketLevel::curvature) pk.div_weyl = div_weyl(j);
    if (level == PacketLevel::bach) pk.bach = bach(j);
    return pk;
}

}  // namespace curvlab
