#include "curvlab/metric.hpp"

#include <cmath>

#include "curvlab/error.hpp"

namespace curvlab {

MetricField::MetricField(std::string label, std::vector<std::string> coords, std::vector<ScalarExpr> components,
                         std::vector<int> signature, std::vector<Interval> domain)
    : label_(std::move(label)),
      coords_(std::move(coords)),
      components_(std::move(components)),
      signature_(std::move(signature)),
      domain_(std::move(domain))
{
    const int n = dim();
    if (n < 1) throw StructureError("metric needs at least one coordinate");
    if (n > kMaxJetDim) throw DimensionError("metric dimension exceeds " + std::to_string(kMaxJetDim));
    if (static_cast<int>(components_.size()) != n * n) throw StructureError("component matrix must be n x n");
    if (static_cast<int>(signature_.size()) != n) throw StructureError("signature length must equal dimension");
    if (static_cast<int>(domain_.size()) != n) throw StructureError("domain needs one interval per coordinate");
    for (int s : signature_)
        if (s != 1 && s != -1) throw StructureError("signature entries must be +1 or -1");
    for (const auto& iv : domain_)
        if (!(iv.lo < iv.hi)) throw StructureError("empty domain interval");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (!structurally_equal(component(i, j), component(j, i)))
                throw StructureError("component matrix is not symmetric at (" + coords_[i] + ", " + coords_[j] + ")");
    for (const auto& c : components_)
        if (c.max_variable() >= n) throw StructureError("component references an unknown coordinate");
}

bool MetricField::contains(const Point& p) const
{
    if (p.size() != dim()) return false;
    for (int i = 0; i < dim(); ++i)
        if (!domain_[i].contains(p[i])) return false;
    return true;
}

bool MetricField::riemannian() const
{
    for (int s : signature_)
        if (s != 1) return false;
    return true;
}

MetricField MetricField::with_label(std::string label) const
{
    MetricField m = *this;
    m.label_ = std::move(label);
    return m;
}

MetricField MetricField::with_degeneracy_threshold(double eps) const
{
    MetricField m = *this;
    m.degeneracy_threshold_ = eps;
    return m;
}

MetricField MetricField::scaled(double c) const
{
    if (!(c > 0)) throw StructureError("metric scale factor must be positive");
    MetricField m = *this;
    for (auto& e : m.components_) e = ScalarExpr::constant(c) * e;
    return m;
}

std::vector<ScalarExpr> symmetric_components(int n, const std::vector<ComponentEntry>& entries)
{
    std::vector<ScalarExpr> out(static_cast<std::size_t>(n * n), ScalarExpr::constant(0.0));
    for (const auto& e : entries) {
        out[static_cast<std::size_t>(e.i * n + e.j)] = e.expr;
        out[static_cast<std::size_t>(e.j * n + e.i)] = e.expr;
    }
    return out;
}

JetTensor metric_jets(const MetricField& m, const Point& p, int order)
{
    if (!m.contains(p)) throw DomainError("point outside the metric's domain box", -1);
    const int n = m.dim();
    const std::span<const double> pt(p.data(), static_cast<std::size_t>(n));
    JetTensor g(n, lower_slots(2));
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            g({i, j}) = eval_jet(m.component(i, j), pt, order);
            if (j != i) g({j, i}) = g({i, j});
        }
    }
    const double det = to_matrix(values(g)).determinant();
    if (!(std::abs(det) > m.degeneracy_threshold()))
        throw DegenerateMetricError("degenerate metric: |det g| = " + format_number(std::abs(det)));
    return g;
}

JetTensor inverse_metric_jets(const JetTensor& g)
{
    const int n = g.dim();
    const Jet& like = g[0];
    const int order = like.order();
    const Eigen::MatrixXd g0 = to_matrix(values(g));
    const Eigen::MatrixXd g0inv = g0.inverse();

    // A = -g0^{-1} N where N is g with its constant part removed
    JetTensor a(n, {Variance::up, Variance::down}, zero_like(like));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Jet& acc = a({i, j});
            for (int k = 0; k < n; ++k) {
                Jet nk = g({k, j});
                nk.coefficients()[0] = 0.0;
                acc += (-g0inv(i, k)) * nk;
            }
        }
    }
    // inverse = sum_{k=0}^{order} A^k g0^{-1}
    JetTensor term(n, {Variance::up, Variance::up}, zero_like(like));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) term({i, j}).coefficients()[0] = g0inv(i, j);
    JetTensor inv = term;
    for (int k = 1; k <= order; ++k) {
        JetTensor next(n, {Variance::up, Variance::up}, zero_like(like));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l) next({i, j}).add_product(a({i, l}), term({l, j}));
        term = std::move(next);
        inv += term;
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            Jet avg = 0.5 * (inv({i, j}) + inv({j, i}));
            inv({i, j}) = avg;
            inv({j, i}) = avg;
        }
    }
    return inv;
}

Eigen::MatrixXd metric_values(const MetricField& m, const Point& p) { return to_matrix(values(metric_jets(m, p, 0))); }

Eigen::MatrixXd to_matrix(const TensorValue& t)
{
    if (t.rank() != 2) throw std::invalid_argument("to_matrix needs a rank-2 tensor");
    Eigen::MatrixXd m(t.dim(), t.dim());
    for (int i = 0; i < t.dim(); ++i)
        for (int j = 0; j < t.dim(); ++j) m(i, j) = t({i, j});
    return m;
}

TensorValue from_matrix(const Eigen::MatrixXd& m, std::vector<Variance> variance)
{
    TensorValue t(static_cast<int>(m.rows()), std::move(variance));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) t({i, j}) = m(i, j);
    return t;
}

Eigen::VectorXd to_vector(const TensorValue& t)
{
    if (t.rank() != 1) throw std::invalid_argument("to_vector needs a rank-1 tensor");
    Eigen::VectorXd v(t.dim());
    for (int i = 0; i < t.dim(); ++i) v[i] = t[static_cast<std::size_t>(i)];
    return v;
}

TensorValue from_vector(const Eigen::VectorXd& v, Variance variance)
{
    TensorValue t(static_cast<int>(v.size()), {variance});
    for (int i = 0; i < v.size(); ++i) t[static_cast<std::size_t>(i)] = v[i];
    return t;
}

bool signature_matches(const MetricField& m, const Point& p)
{
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(metric_values(m, p));
    int negative = 0, expected = 0;
    for (int i = 0; i < m.dim(); ++i) {
        if (es.eigenvalues()[i] < 0) ++negative;
        if (m.signature()[i] < 0) ++expected;
    }
    return negative == expected;
}

}  // namespace curvlab
