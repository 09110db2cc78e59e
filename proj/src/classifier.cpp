#include "curvlab/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "curvlab/error.hpp"

namespace curvlab {

void Verdict::absorb(double residual, bool ok, std::size_t point_index)
{
    const bool first_failure = holds && !ok;
    if (!ok) holds = false;
    if (first_failure || (holds && (!witness || residual > max_residual))) witness = point_index;
    max_residual = std::max(max_residual, residual);
}

const char* to_string(CausalCharacter c)
{
    switch (c) {
    case CausalCharacter::spacelike: return "spacelike";
    case CausalCharacter::timelike: return "timelike";
    default: return "null";
    }
}

namespace {

double second_singular_value(const Eigen::MatrixXd& t)
{
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(t);
    return t.rows() > 1 ? svd.singularValues()[1] : 0.0;
}

}  // namespace

QuasiEinsteinFit quasi_einstein_fit(const Eigen::MatrixXd& g, const Eigen::MatrixXd& ricci, double tol)
{
    const int n = static_cast<int>(g.rows());
    const Eigen::MatrixXd ginv = g.inverse();
    const Eigen::MatrixXd q = ginv * ricci;
    const double scale = 1.0 + ricci.norm();
    const Eigen::EigenSolver<Eigen::MatrixXd> es(q, false);
    const Eigen::VectorXcd lambda = es.eigenvalues();
    const double cluster_tol = 1e-7 * (1.0 + lambda.cwiseAbs().maxCoeff());

    // candidate a: means of eigenvalue clusters; keep the one leaving Ric - a g closest to rank one
    QuasiEinsteinFit fit;
    double best = std::numeric_limits<double>::infinity();
    std::vector<bool> used(n, false);
    for (int i = 0; i < n; ++i) {
        if (used[i]) continue;
        std::complex<double> sum = 0.0;
        int count = 0;
        for (int j = 0; j < n; ++j) {
            if (!used[j] && std::abs(lambda[j] - lambda[i]) <= cluster_tol) {
                used[j] = true;
                sum += lambda[j];
                ++count;
            }
        }
        const double a = (sum / static_cast<double>(count)).real();
        const double s2 = second_singular_value(ricci - a * g);
        if (s2 < best) {
            best = s2;
            fit.a = a;
        }
    }
    fit.rank_residual = best;

    const Eigen::MatrixXd t = ricci - fit.a * g;
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(t, Eigen::ComputeFullU);
    if (svd.singularValues()[0] < tol * scale) {
        fit.b = 0.0;
        fit.has_direction = false;
        fit.epsilon_U = 0;
        fit.residual = t.norm();
        fit.verdict = fit.residual < tol * scale;
        return fit;
    }
    Eigen::VectorXd w = svd.matrixU().col(0);
    const double beta = w.dot(t * w);
    const double norm_w = w.dot(ginv * w);
    const double null_tol = 1e-7 * (1.0 + ginv.norm());
    fit.has_direction = true;
    if (std::abs(norm_w) > null_tol) {
        fit.epsilon_U = norm_w > 0 ? 1 : -1;
        fit.u = w / std::sqrt(std::abs(norm_w));
        fit.b = beta * std::abs(norm_w);
    } else {
        fit.epsilon_U = 0;
        fit.u = std::sqrt(std::abs(beta)) * w;
        fit.b = beta > 0 ? 1.0 : -1.0;
    }
    fit.U = ginv * fit.u;
    Eigen::Index k = 0;
    fit.U.cwiseAbs().maxCoeff(&k);
    if (fit.U[k] < 0) {
        fit.U = -fit.U;
        fit.u = -fit.u;
    }
    fit.residual = (t - fit.b * fit.u * fit.u.transpose()).norm();
    fit.verdict = fit.rank_residual < tol * scale && fit.residual < tol * scale;
    return fit;
}

QuasiEinsteinFit quasi_einstein_fit(const MetricField& m, const Point& p, double tol)
{
    const GeometryJets j = geometry_jets(m, p, 2);
    return quasi_einstein_fit(to_matrix(values(j.g)), to_matrix(values(j.ricci)), tol);
}

double einstein_residual(const GeometryJets& j)
{
    const TensorValue ric = values(j.ricci);
    const double a = j.scalar.value() / j.g.dim();
    return norm(ric - a * values(j.g)) / (1.0 + norm(ric));
}

double constant_curvature_residual(const GeometryJets& j)
{
    const int n = j.g.dim();
    const double c = j.scalar.value() / (n * (n - 1.0));
    const TensorValue r04 = values(j.riemann04);
    return norm(r04 - constant_curvature_tensor(values(j.g), c)) / (1.0 + norm(r04));
}

double conformal_flatness_residual(const GeometryJets& j)
{
    if (j.g.dim() < 4) throw DimensionError("conformal flatness via Weyl needs dimension >= 4");
    return norm(values(j.weyl04)) / (1.0 + norm(values(j.riemann04)));
}

double harmonic_weyl_residual(const GeometryJets& j)
{
    return norm(div_weyl(j)) / (1.0 + norm(values(j.riemann04)));
}

double bach_residual(const GeometryJets& j)
{
    const double rn = norm(values(j.riemann04));
    return norm(bach(j)) / (1.0 + rn * rn);
}

Verdict is_einstein(const MetricField& m, std::span<const Point> points, double tol)
{
    Verdict v;
    double constant = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const GeometryJets j = geometry_jets(m, points[k], 2);
        const double res = einstein_residual(j);
        v.absorb(res, res < tol, k);
        if (k == 0) constant = j.scalar.value() / m.dim();
    }
    v.constants.emplace_back("einstein_constant", constant);
    return v;
}

double weakly_cf_check(const TensorValue& weyl13, const Eigen::VectorXd& v)
{
    if (v.norm() == 0.0) throw std::invalid_argument("weak conformal flatness needs a nonzero vector");
    const int n = weyl13.dim();
    double s = 0.0;
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d) {
                double x = 0.0;
                for (int b = 0; b < n; ++b) x += weyl13({a, b, c, d}) * v[b];
                s += x * x;
            }
    return std::sqrt(s);
}

double weakly_cf_check(const MetricField& m, const Point& p, const Eigen::VectorXd& v)
{
    return weakly_cf_check(weyl(m, p).weyl13, v);
}

WeylKernel weakly_cf_kernel(const TensorValue& weyl13, const Eigen::MatrixXd& g, double tol)
{
    const int n = weyl13.dim();
    Eigen::MatrixXd flat(n * n * n, n);
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d)
                for (int b = 0; b < n; ++b) flat((a * n + c) * n + d, b) = weyl13({a, b, c, d});
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(flat, Eigen::ComputeFullV);
    WeylKernel k;
    k.singular_values = svd.singularValues();
    const double cutoff = tol * (1.0 + k.singular_values[0]);
    std::vector<int> cols;
    for (int i = 0; i < n; ++i)
        if (k.singular_values[i] <= cutoff) cols.push_back(i);
    k.basis_matrix.resize(n, static_cast<Eigen::Index>(cols.size()));
    const double null_tol = 1e-7 * (1.0 + g.norm());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        KernelVector kv;
        kv.v = svd.matrixV().col(cols[c]);
        kv.norm_sq = kv.v.dot(g * kv.v);
        kv.kind = std::abs(kv.norm_sq) <= null_tol ? CausalCharacter::null
                  : kv.norm_sq > 0                  ? CausalCharacter::spacelike
                                                    : CausalCharacter::timelike;
        k.basis_matrix.col(static_cast<Eigen::Index>(c)) = kv.v;
        k.basis.push_back(std::move(kv));
    }
    if (!cols.empty()) {
        // the kernel contains a non-null vector iff g restricted to it is not identically zero
        const Eigen::MatrixXd gram = k.basis_matrix.transpose() * g * k.basis_matrix;
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
        k.contains_non_null = es.eigenvalues().cwiseAbs().maxCoeff() > null_tol;
    }
    return k;
}

WeylKernel weakly_cf_kernel(const MetricField& m, const Point& p, double tol)
{
    const GeometryJets j = geometry_jets(m, p, 2);
    if (m.dim() < 4) throw DimensionError("Weyl kernel requires dimension >= 4");
    return weakly_cf_kernel(values(j.weyl13), to_matrix(values(j.g)), tol);
}

EardleyReport eardley_check(const MetricField& m, std::span<const Point> points, double tol)
{
    if (m.dim() != 4) throw DimensionError("the four-dimensional rigidity check needs dimension 4");
    EardleyReport r;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const GeometryJets j = geometry_jets(m, points[k], 2);
        const TensorValue w13 = values(j.weyl13);
        const WeylKernel ker = weakly_cf_kernel(w13, to_matrix(values(j.g)), 1e-8);
        const double wnorm = norm(values(j.weyl04));
        ++r.points;
        if (ker.contains_non_null) {
            ++r.non_null_kernel_points;
            r.max_weyl_with_non_null_kernel = std::max(r.max_weyl_with_non_null_kernel, wnorm);
            if (wnorm > tol) r.violations.push_back(k);
        } else if (ker.dimension() > 0) {
            ++r.null_only_kernel_points;
            r.max_weyl_with_null_kernel = std::max(r.max_weyl_with_null_kernel, wnorm);
        }
    }
    return r;
}

Verdict harmonic_weyl_check(const MetricField& m, std::span<const Point> points, double tol)
{
    Verdict v;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const double res = harmonic_weyl_residual(geometry_jets(m, points[k], 3));
        v.absorb(res, res < tol, k);
    }
    return v;
}

TensorValue constant_curvature_tensor(const TensorValue& g, double c)
{
    const int n = g.dim();
    TensorValue r(n, lower_slots(4));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int cc = 0; cc < n; ++cc)
                for (int d = 0; d < n; ++d)
                    r({a, b, cc, d}) = c * (g({a, cc}) * g({b, d}) - g({a, d}) * g({b, cc}));
    return r;
}

Verdict constant_curvature_check(const MetricField& m, std::span<const Point> points, double tol)
{
    Verdict v;
    const int n = m.dim();
    double constant = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const GeometryJets j = geometry_jets(m, points[k], 2);
        const double res = constant_curvature_residual(j);
        v.absorb(res, res < tol, k);
        if (k == 0) constant = j.scalar.value() / (n * (n - 1.0));
    }
    v.constants.emplace_back("sectional_curvature", constant);
    return v;
}

Verdict conformally_flat_check(const MetricField& m, std::span<const Point> points, double tol)
{
    if (m.dim() < 4) throw DimensionError("conformal flatness via Weyl needs dimension >= 4");
    Verdict v;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const double res = conformal_flatness_residual(geometry_jets(m, points[k], 2));
        v.absorb(res, res < tol, k);
    }
    return v;
}

Verdict bach_flat_check(const MetricField& m, std::span<const Point> points, double tol)
{
    Verdict v;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const double res = bach_residual(geometry_jets(m, points[k], 4));
        v.absorb(res, res < tol, k);
    }
    return v;
}

}  // namespace curvlab
