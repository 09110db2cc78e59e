#include "curvlab/contact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "curvlab/error.hpp"

namespace curvlab {

void check_shape(const ContactStructure& cs)
{
    const int n = cs.dim();
    if (n < 3 || n % 2 == 0) throw StructureError("contact structures need odd dimension >= 3, got " + std::to_string(n));
    const auto un = static_cast<std::size_t>(n);
    if (cs.eta.size() != un) throw StructureError("eta must have " + std::to_string(n) + " components");
    if (cs.xi.size() != un) throw StructureError("xi must have " + std::to_string(n) + " components");
    if (cs.phi.size() != un * un) throw StructureError("phi must have " + std::to_string(n * n) + " components");
    if (!cs.g.riemannian()) throw StructureError("contact metric must be Riemannian");
    for (const auto* list : {&cs.eta, &cs.xi, &cs.phi})
        for (const ScalarExpr& e : *list)
            if (e.max_variable() >= n) throw StructureError("contact component references an unknown coordinate");
}

ContactFrame contact_frame(const ContactStructure& cs, const Point& p)
{
    check_shape(cs);
    const int n = cs.dim();
    if (!cs.g.contains(p)) throw DomainError("point outside the chart domain", -1);
    const std::span<const double> at(p.data(), static_cast<std::size_t>(n));
    ContactFrame f;
    f.eta.resize(n);
    f.xi.resize(n);
    f.phi.resize(n, n);
    f.dxi.resize(n, n);
    f.dphi.assign(static_cast<std::size_t>(n), Eigen::MatrixXd(n, n));
    Eigen::MatrixXd deta_raw(n, n);  // deta_raw(i,k) = d_k eta_i
    for (int i = 0; i < n; ++i) {
        const Jet e = eval_jet(cs.eta[i], at, 1);
        const Jet x = eval_jet(cs.xi[i], at, 1);
        f.eta[i] = e.value();
        f.xi[i] = x.value();
        for (int k = 0; k < n; ++k) {
            deta_raw(i, k) = e.partial({k});
            f.dxi(i, k) = x.partial({k});
        }
        for (int j = 0; j < n; ++j) {
            const Jet ph = eval_jet(cs.phi[static_cast<std::size_t>(i * n + j)], at, 1);
            f.phi(i, j) = ph.value();
            for (int k = 0; k < n; ++k) f.dphi[k](i, j) = ph.partial({k});
        }
    }
    // deta(d_i, d_j) = 1/2 (d_i eta_j - d_j eta_i)
    f.deta = 0.5 * (deta_raw.transpose() - deta_raw);
    f.g = metric_values(cs.g, p);
    return f;
}

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

StructureResiduals structure_residuals(const ContactFrame& f, int m)
{
    const int n = static_cast<int>(f.eta.size());
    StructureResiduals r;
    r.eta_xi = std::abs(f.eta.dot(f.xi) - 1.0);
    r.eta_metric = (f.g * f.xi - f.eta).cwiseAbs().maxCoeff();
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    r.phi_squared = max_abs(f.phi * f.phi - (-id + f.xi * f.eta.transpose()));
    // g(X, phi Y) for X = d_i, Y = d_j is (g phi)(i, j)
    r.deta_phi = max_abs(f.deta - f.g * f.phi);
    r.xi_in_kernel = (f.deta.transpose() * f.xi).cwiseAbs().maxCoeff();
    Eigen::MatrixXd bordered = Eigen::MatrixXd::Zero(n + 1, n + 1);
    bordered.topLeftCorner(n, n) = f.deta;
    bordered.topRightCorner(n, 1) = f.eta;
    bordered.bottomLeftCorner(1, n) = -f.eta.transpose();
    const double detg = f.g.determinant();
    r.contact_volume = detg > 0.0 ? std::sqrt(std::abs(bordered.determinant()) / detg) : 0.0;
    (void)m;
    return r;
}

constexpr double kMinContactVolume = 1e-6;

}  // namespace

StructureReport verify_structure(const ContactStructure& cs, std::span<const Point> points, double tol)
{
    check_shape(cs);
    StructureReport rep;
    rep.worst.contact_volume = std::numeric_limits<double>::infinity();
    for (std::size_t idx = 0; idx < points.size(); ++idx) {
        const StructureResiduals r = structure_residuals(contact_frame(cs, points[idx]), cs.m());
        rep.worst.eta_xi = std::max(rep.worst.eta_xi, r.eta_xi);
        rep.worst.eta_metric = std::max(rep.worst.eta_metric, r.eta_metric);
        rep.worst.phi_squared = std::max(rep.worst.phi_squared, r.phi_squared);
        rep.worst.deta_phi = std::max(rep.worst.deta_phi, r.deta_phi);
        rep.worst.xi_in_kernel = std::max(rep.worst.xi_in_kernel, r.xi_in_kernel);
        rep.worst.contact_volume = std::min(rep.worst.contact_volume, r.contact_volume);
        if (rep.ok) {
            const char* bad = nullptr;
            if (r.eta_xi > tol) bad = "eta(xi) = 1";
            else if (r.eta_metric > tol) bad = "eta(X) = g(xi, X)";
            else if (r.phi_squared > tol) bad = "phi^2 = -I + eta (x) xi";
            else if (r.deta_phi > tol) bad = "deta(X,Y) = g(X, phi Y)";
            else if (r.xi_in_kernel > tol) bad = "deta(xi, .) = 0";
            else if (r.contact_volume < kMinContactVolume) bad = "eta ^ (deta)^m != 0";
            if (bad) {
                rep.ok = false;
                rep.violation = bad;
                rep.witness = idx;
            }
        }
        rep.points.push_back(r);
    }
    if (points.empty()) rep.worst.contact_volume = 0.0;
    return rep;
}

void require_structure(const ContactStructure& cs, std::span<const Point> points, double tol)
{
    const StructureReport rep = verify_structure(cs, points, tol);
    if (rep.ok) return;
    const Point& p = points[*rep.witness];
    std::string where;
    for (int i = 0; i < p.size(); ++i) where += (i ? ", " : "") + format_number(p[i]);
    throw StructureError(cs.label + ": identity " + rep.violation + " fails at point (" + where + ")");
}

namespace {

Eigen::MatrixXd h_matrix(const ContactFrame& f)
{
    const int n = static_cast<int>(f.xi.size());
    Eigen::MatrixXd lie = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) lie += f.xi[k] * f.dphi[k];
    lie += f.phi * f.dxi - f.dxi * f.phi;
    return 0.5 * lie;
}

HTensor h_tensor(const ContactFrame& f)
{
    const int n = static_cast<int>(f.xi.size());
    HTensor out;
    out.matrix = h_matrix(f);
    out.h = from_matrix(out.matrix, {Variance::up, Variance::down});
    const Eigen::MatrixXd gh = f.g * out.matrix;
    out.self_adjoint = max_abs(gh - gh.transpose());
    out.trace = std::abs(out.matrix.trace());
    out.anticommute = max_abs(out.matrix * f.phi + f.phi * out.matrix);
    out.norm_squared = (out.matrix * out.matrix).trace();
    (void)n;
    return out;
}

/// Curvature values needed by the contact checks at one point.
struct PointGeometry {
    ContactFrame frame;
    TensorValue riem13;
    TensorValue riem04;
    Eigen::MatrixXd ricci;
    Eigen::MatrixXd q;
    double scalar = 0.0;
    TensorValue weyl13;  // empty below dimension 4
};

PointGeometry point_geometry(const ContactStructure& cs, const Point& p)
{
    PointGeometry pg;
    pg.frame = contact_frame(cs, p);
    const GeometryJets j = geometry_jets(cs.g, p, 2);
    pg.riem13 = values(j.riemann13);
    pg.riem04 = values(j.riemann04);
    pg.ricci = to_matrix(values(j.ricci));
    pg.q = to_matrix(values(j.ricci_operator));
    pg.scalar = j.scalar.value();
    if (cs.dim() >= 4) pg.weyl13 = values(j.weyl13);
    return pg;
}

/// T(a, c*n + d) = a-component of T(d_c, d_d) xi for a (1,3) curvature-type tensor.
Eigen::MatrixXd along_xi(const TensorValue& t13, const Eigen::VectorXd& xi)
{
    const int n = static_cast<int>(xi.size());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (xi[b] == 0.0) continue;
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) out(a, c * n + d) += t13({a, b, c, d}) * xi[b];
        }
    return out;
}

/// out(a, c) = a-component of T(d_c, xi) xi.
Eigen::MatrixXd along_xi_xi(const Eigen::MatrixXd& txi, const Eigen::VectorXd& xi)
{
    const int n = static_cast<int>(xi.size());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) out.col(c) += txi.col(c * n + d) * xi[d];
    return out;
}

/// eta(Y) S X - eta(X) S Y flattened like along_xi; S = I gives the Sasakian model.
Eigen::MatrixXd nullity_term(const Eigen::MatrixXd& s, const Eigen::VectorXd& eta)
{
    const int n = static_cast<int>(eta.size());
    Eigen::MatrixXd out(n, n * n);
    for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) out.col(c * n + d) = eta[d] * s.col(c) - eta[c] * s.col(d);
    return out;
}

double k_contact_residual(const PointGeometry& pg)
{
    const ContactFrame& f = pg.frame;
    const int n = static_cast<int>(f.xi.size());
    const Eigen::MatrixXd lhs = along_xi_xi(along_xi(pg.riem13, f.xi), f.xi);
    return max_abs(lhs - (Eigen::MatrixXd::Identity(n, n) - f.xi * f.eta.transpose()));
}

double sasakian_residual(const PointGeometry& pg)
{
    const ContactFrame& f = pg.frame;
    const int n = static_cast<int>(f.xi.size());
    return max_abs(along_xi(pg.riem13, f.xi) - nullity_term(Eigen::MatrixXd::Identity(n, n), f.eta));
}

struct EtaEinsteinPoint {
    double a = 0.0;
    double b = 0.0;
    double residual = 0.0;
};

EtaEinsteinPoint eta_einstein_point(const PointGeometry& pg, int m)
{
    const ContactFrame& f = pg.frame;
    const double ric_xi = f.xi.dot(pg.ricci * f.xi);
    EtaEinsteinPoint e;
    e.a = (pg.scalar - ric_xi) / (2.0 * m);
    e.b = ric_xi - e.a;
    const Eigen::MatrixXd diff = pg.ricci - e.a * f.g - e.b * f.eta * f.eta.transpose();
    e.residual = diff.norm() / (1.0 + pg.ricci.norm());
    return e;
}

double riemann_scale(const PointGeometry& pg) { return 1.0 + norm(pg.riem04); }

}  // namespace

HTensor compute_h(const ContactStructure& cs, const Point& p) { return h_tensor(contact_frame(cs, p)); }

NablaXiCheck check_nabla_xi(const ContactStructure& cs, const Point& p)
{
    const ContactFrame f = contact_frame(cs, p);
    const int n = cs.dim();
    const TensorValue gamma = values(christoffel(cs.g, p, 0));
    // nabla(i, j) = i-component of nabla_{d_j} xi
    Eigen::MatrixXd nabla = f.dxi;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) nabla(i, j) += gamma({i, j, k}) * f.xi[k];
    const Eigen::MatrixXd h = h_matrix(f);
    NablaXiCheck out;
    out.nabla_xi = max_abs(nabla + f.phi + f.phi * h);
    const Eigen::MatrixXd ric = to_matrix(ricci_scalar(cs.g, p).ricci);
    out.ricci_xi_xi_value = f.xi.dot(ric * f.xi);
    out.h_norm_squared = (h * h).trace();
    out.ricci_xi_xi = std::abs(out.ricci_xi_xi_value - (2.0 * cs.m() - out.h_norm_squared));
    return out;
}

Verdict is_K_contact(const ContactStructure& cs, std::span<const Point> points, double tol)
{
    Verdict v;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double r = k_contact_residual(point_geometry(cs, points[i]));
        v.absorb(r, r < tol, i);
    }
    return v;
}

Verdict is_sasakian(const ContactStructure& cs, std::span<const Point> points, double tol)
{
    Verdict v;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const PointGeometry pg = point_geometry(cs, points[i]);
        const double r = std::max(sasakian_residual(pg), k_contact_residual(pg));
        v.absorb(r, r < tol, i);
    }
    return v;
}

namespace {

constexpr double kHVanishes = 1e-9;

}  // namespace

KMuFit fit_k_mu(const ContactStructure& cs, std::span<const Point> points, double tol)
{
    const int n = cs.dim();
    const int m = cs.m();
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    struct Sample {
        Eigen::MatrixXd t, a, b;
        PointGeometry pg;
        Eigen::MatrixXd h;
    };
    std::vector<Sample> samples;
    samples.reserve(points.size());
    KMuFit fit;
    for (const Point& p : points) {
        Sample s;
        s.pg = point_geometry(cs, p);
        s.h = h_matrix(s.pg.frame);
        s.t = along_xi(s.pg.riem13, s.pg.frame.xi);
        s.a = nullity_term(id, s.pg.frame.eta);
        s.b = nullity_term(s.h, s.pg.frame.eta);
        fit.max_h_norm = std::max(fit.max_h_norm, s.h.norm());
        samples.push_back(std::move(s));
    }
    if (samples.empty()) return fit;
    const bool with_mu = fit.max_h_norm >= kHVanishes;
    Eigen::Matrix2d normal = Eigen::Matrix2d::Zero();
    Eigen::Vector2d rhs = Eigen::Vector2d::Zero();
    for (const Sample& s : samples) {
        normal(0, 0) += s.a.squaredNorm();
        rhs[0] += (s.a.array() * s.t.array()).sum();
        if (with_mu) {
            normal(0, 1) += (s.a.array() * s.b.array()).sum();
            normal(1, 1) += s.b.squaredNorm();
            rhs[1] += (s.b.array() * s.t.array()).sum();
        }
    }
    if (with_mu) {
        normal(1, 0) = normal(0, 1);
        const Eigen::Vector2d sol = normal.ldlt().solve(rhs);
        fit.k = sol[0];
        fit.mu = sol[1];
    } else {
        fit.k = rhs[0] / normal(0, 0);
    }
    const double mu = fit.mu.value_or(0.0);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double r = max_abs(samples[i].t - fit.k * samples[i].a - mu * samples[i].b);
        if (!fit.witness || r > fit.residual) {
            fit.residual = r;
            fit.witness = i;
        }
    }
    fit.holds = fit.residual < tol;
    if (fit.holds && fit.k < 1.0 - tol) {
        double worst = 0.0;
        for (const Sample& s : samples) {
            const ContactFrame& f = s.pg.frame;
            // g(hX, Y) for X = d_i, Y = d_j is (g h)(j, i)
            const Eigen::MatrixXd ghT = (f.g * s.h).transpose();
            const Eigen::MatrixXd model = (2.0 * m - 2.0 - m * mu) * f.g + (2.0 * m - 2.0 + mu) * ghT +
                                          (m * (2.0 * fit.k + mu) - 2.0 * m + 2.0) * f.eta * f.eta.transpose();
            worst = std::max(worst, max_abs(s.pg.ricci - model));
        }
        fit.ricci_residual = worst;
        KMuScalarCheck sc;
        sc.engine = samples.front().pg.scalar;
        sc.printed = 2.0 * m - 2.0 + fit.k - m * mu;
        sc.traced = 2.0 * m * sc.printed;
        const double band = tol * (1.0 + std::abs(sc.engine));
        const bool p_ok = std::abs(sc.engine - sc.printed) < band;
        const bool t_ok = std::abs(sc.engine - sc.traced) < band;
        sc.matches = p_ok && t_ok ? "both" : p_ok ? "printed" : t_ok ? "traced" : "neither";
        fit.scalar = sc;
    }
    return fit;
}

EtaEinsteinFit eta_einstein_fit(const ContactStructure& cs, std::span<const Point> points, double tol)
{
    const int m = cs.m();
    EtaEinsteinFit fit;
    std::vector<PointGeometry> geoms;
    geoms.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        geoms.push_back(point_geometry(cs, points[i]));
        const EtaEinsteinPoint e = eta_einstein_point(geoms.back(), m);
        fit.a.push_back(e.a);
        fit.b.push_back(e.b);
        fit.verdict.absorb(e.residual, e.residual < tol, i);
    }
    if (!fit.a.empty()) {
        const auto [amin, amax] = std::minmax_element(fit.a.begin(), fit.a.end());
        const auto [bmin, bmax] = std::minmax_element(fit.b.begin(), fit.b.end());
        fit.a_spread = *amax - *amin;
        fit.b_spread = *bmax - *bmin;
        fit.verdict.constants = {{"a", fit.a.front()}, {"b", fit.b.front()}};
    }
    bool k_contact = !geoms.empty();
    for (const PointGeometry& pg : geoms) k_contact = k_contact && k_contact_residual(pg) < 1e-6;
    if (k_contact) {
        double tr = 0.0, reeb = 0.0;
        for (std::size_t i = 0; i < geoms.size(); ++i) {
            tr = std::max(tr, std::abs(geoms[i].scalar - (2.0 * m + 1.0) * fit.a[i] - fit.b[i]));
            reeb = std::max(reeb, std::abs(fit.a[i] + fit.b[i] - 2.0 * m));
        }
        fit.trace_residual = tr;
        fit.reeb_residual = reeb;
    }
    return fit;
}

namespace {

void require_weyl_dimension(const ContactStructure& cs, int min_dim)
{
    if (cs.dim() < min_dim)
        throw DimensionError(cs.label + ": Weyl-based contact checks need dimension >= " + std::to_string(min_dim) +
                             ", got " + std::to_string(cs.dim()));
}

WeylReebDouble weyl_reeb_double(const ContactStructure& cs, const PointGeometry& pg)
{
    const ContactFrame& f = pg.frame;
    const int n = cs.dim();
    const double m2 = 2.0 * cs.m();
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd xe = f.xi * f.eta.transpose();
    WeylReebDouble out;
    out.engine = along_xi_xi(along_xi(pg.weyl13, f.xi), f.xi);
    out.formula = (pg.scalar - m2) / (m2 * (m2 - 1.0)) * (id - xe) - (pg.q - m2 * xe) / (m2 - 1.0);
    out.difference = max_abs(out.engine - out.formula);
    out.engine_norm = out.engine.norm();
    const double rr = pg.scalar / m2;
    out.q_formula_residual = max_abs(pg.q - (rr - 1.0) * id - (m2 + 1.0 - rr) * xe);
    out.riemann_norm = norm(pg.riem04);
    return out;
}

Tri combine(Tri acc, bool v, bool first)
{
    const Tri t = v ? Tri::yes : Tri::no;
    if (first) return t;
    return acc == t ? acc : Tri::mixed;
}

}  // namespace

WeylReebDouble weyl_reeb_double(const ContactStructure& cs, const Point& p)
{
    require_weyl_dimension(cs, 5);
    return weyl_reeb_double(cs, point_geometry(cs, p));
}

const char* to_string(Tri t)
{
    switch (t) {
    case Tri::yes: return "true";
    case Tri::no: return "false";
    case Tri::mixed: return "mixed";
    }
    return "mixed";
}

Proposition11Report proposition_1_1_verify(const ContactStructure& cs, std::span<const Point> points, double tol)
{
    require_weyl_dimension(cs, 5);
    Proposition11Report rep;
    rep.label = cs.label;
    std::vector<PointGeometry> geoms;
    geoms.reserve(points.size());
    rep.k_contact = !points.empty();
    for (const Point& p : points) {
        geoms.push_back(point_geometry(cs, p));
        rep.k_contact_residual = std::max(rep.k_contact_residual, k_contact_residual(geoms.back()));
    }
    rep.k_contact = rep.k_contact && rep.k_contact_residual < tol;
    if (!rep.k_contact)
        throw StructureError(cs.label + ": structure is not K-contact (residual " +
                             format_number(rep.k_contact_residual) + ")");
    bool all_xy_vanish = true, all_sasakian = true;
    for (std::size_t i = 0; i < geoms.size(); ++i) {
        const PointGeometry& pg = geoms[i];
        const double scale = riemann_scale(pg);
        Proposition11Point pt;
        pt.weyl_xi_xi = weyl_reeb_double(cs, pg).engine_norm / scale;
        pt.eta_einstein = eta_einstein_point(pg, cs.m()).residual;
        pt.weyl_xy_xi = along_xi(pg.weyl13, pg.frame.xi).norm() / scale;
        pt.sasakian = sasakian_residual(pg);
        pt.weyl_vanishes = pt.weyl_xi_xi < tol;
        pt.is_eta_einstein = pt.eta_einstein < tol;
        pt.agree = pt.weyl_vanishes == pt.is_eta_einstein;
        rep.weyl_vanishes = combine(rep.weyl_vanishes, pt.weyl_vanishes, i == 0);
        rep.eta_einstein = combine(rep.eta_einstein, pt.is_eta_einstein, i == 0);
        rep.equivalence = combine(rep.equivalence, pt.agree, i == 0);
        all_xy_vanish = all_xy_vanish && pt.weyl_xy_xi < tol;
        all_sasakian = all_sasakian && pt.sasakian < tol;
        rep.points.push_back(pt);
    }
    if (all_xy_vanish && !geoms.empty()) rep.sasakian_when_weyl_xy_xi_vanishes = all_sasakian;
    return rep;
}

Theorem12Report theorem_1_2_reduction(const ContactStructure& cs, std::span<const Point> points, const Tolerances& tol)
{
    const int n = cs.dim();
    const int m = cs.m();
    const double m2 = 2.0 * m;
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    Theorem12Report rep;
    rep.label = cs.label;
    rep.weyl_vacuous = n == 3;
    rep.eta_einstein = !points.empty();
    rep.weyl_xy_xi_vanishes = !points.empty();
    std::vector<PointGeometry> geoms;
    std::vector<EtaEinsteinPoint> fits;
    for (const Point& p : points) {
        geoms.push_back(point_geometry(cs, p));
        const PointGeometry& pg = geoms.back();
        fits.push_back(eta_einstein_point(pg, m));
        rep.eta_einstein = rep.eta_einstein && fits.back().residual < tol.theorem;
        if (!rep.weyl_vacuous)
            rep.weyl_xy_xi_vanishes =
                rep.weyl_xy_xi_vanishes && along_xi(pg.weyl13, pg.frame.xi).norm() / riemann_scale(pg) < tol.theorem;
        rep.k.push_back((fits.back().a + fits.back().b) / m2);
    }
    rep.hypotheses_hold = rep.eta_einstein && rep.weyl_xy_xi_vanishes;
    if (!rep.eta_einstein) rep.hypothesis_failure = "metric is not eta-Einstein";
    else if (!rep.weyl_xy_xi_vanishes) rep.hypothesis_failure = "W(X,Y)xi does not vanish";
    if (geoms.empty()) return rep;

    const double count = static_cast<double>(rep.k.size());
    rep.k_mean = std::accumulate(rep.k.begin(), rep.k.end(), 0.0) / count;
    for (double k : rep.k) rep.k_variance += (k - rep.k_mean) * (k - rep.k_mean);
    rep.k_variance /= count;
    for (std::size_t i = 0; i < geoms.size(); ++i) {
        const PointGeometry& pg = geoms[i];
        const Eigen::MatrixXd lhs = along_xi(pg.riem13, pg.frame.xi);
        rep.reduced_nullity_residual =
            std::max(rep.reduced_nullity_residual, max_abs(lhs - rep.k[i] * nullity_term(id, pg.frame.eta)));
    }
    if (!rep.hypotheses_hold) return rep;

    if (std::abs(rep.k_mean - 1.0) < tol.theorem) {
        rep.branch = "sasakian";
        double worst = 0.0;
        for (const PointGeometry& pg : geoms) worst = std::max(worst, sasakian_residual(pg));
        rep.sasakian_residual = worst;
        return rep;
    }
    rep.branch = "non-sasakian";
    double forced = 0.0, a_off = 0.0, mh = 0.0;
    int rank = 0;
    for (std::size_t i = 0; i < geoms.size(); ++i) {
        const ContactFrame& f = geoms[i].frame;
        const double a = fits[i].a;
        const Eigen::MatrixXd h = h_matrix(f);
        const Eigen::MatrixXd ghT = (f.g * h).transpose();
        const Eigen::MatrixXd rel =
            (a - m2 + 2.0) * f.g + (m2 - 2.0 - a) * f.eta * f.eta.transpose() - 2.0 * (m - 1.0) * ghT;
        forced = std::max(forced, max_abs(rel));
        a_off = std::max(a_off, std::abs(a - 2.0 * (m - 1.0)));
        mh = std::max(mh, (m - 1.0) * h.norm());
        const Eigen::MatrixXd& ric = geoms[i].ricci;
        const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(ric).singularValues();
        const double cut = tol.theorem * (1.0 + ric.norm());
        rank = std::max(rank, static_cast<int>((sv.array() > cut).count()));
    }
    rep.forced_relation_residual = forced;
    rep.a_minus_forced = a_off;
    rep.m_minus_one_h = mh;
    rep.ricci_rank = rank;
    if (n == 3) {
        if (std::abs(rep.k_mean) < tol.theorem) rep.model = "flat";
        else rep.model = rep.k_mean > 0.0 ? "SU(2)" : "SL(2,R)";
    }
    return rep;
}

ContactInvariants contact_invariants(const ContactStructure& cs, std::span<const Point> points)
{
    if (points.empty()) throw std::invalid_argument("contact_invariants needs at least one point");
    ContactInvariants inv;
    inv.h = compute_h(cs, points.front());
    inv.k_contact = is_K_contact(cs, points);
    inv.sasakian = is_sasakian(cs, points);
    const EtaEinsteinFit ee = eta_einstein_fit(cs, points);
    if (ee.verdict.holds) inv.eta_einstein = std::make_pair(ee.a.front(), ee.b.front());
    KMuFit km = fit_k_mu(cs, points);
    if (km.holds) inv.k_mu = std::move(km);
    return inv;
}

}  // namespace curvlab
