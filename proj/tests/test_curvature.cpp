#include <doctest.h>

#include <cmath>

#include "curvlab/classifier.hpp"
#include "curvlab/curvature.hpp"
#include "curvlab/error.hpp"
#include "support.hpp"

using namespace testing;

namespace {

Point pt(std::initializer_list<double> xs)
{
    Point p(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) p[i++] = x;
    return p;
}

// Gamma^k_ij from central differences of the metric values.
TensorValue fd_christoffel(const MetricField& m, const Point& p, double h)
{
    const int n = m.dim();
    std::vector<Eigen::MatrixXd> dg(n);
    for (int c = 0; c < n; ++c) {
        Point a = p, b = p;
        a[c] += h;
        b[c] -= h;
        dg[c] = (metric_values(m, a) - metric_values(m, b)) / (2 * h);
    }
    const Eigen::MatrixXd ginv = metric_values(m, p).inverse();
    TensorValue gamma(n, {Variance::up, Variance::down, Variance::down});
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0;
                for (int l = 0; l < n; ++l) s += ginv(k, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
                gamma({k, i, j}) = 0.5 * s;
            }
    return gamma;
}

// riemann13 from central differences of the engine's Christoffel values.
TensorValue fd_riemann(const MetricField& m, const Point& p, double h)
{
    const int n = m.dim();
    std::vector<TensorValue> dgamma;
    for (int c = 0; c < n; ++c) {
        Point a = p, b = p;
        a[c] += h;
        b[c] -= h;
        dgamma.push_back((values(christoffel(m, a, 0)) - values(christoffel(m, b, 0))) * (1 / (2 * h)));
    }
    const TensorValue G = values(christoffel(m, p, 0));
    TensorValue r(n, {Variance::up, Variance::down, Variance::down, Variance::down});
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    double s = dgamma[c]({a, d, b}) - dgamma[d]({a, c, b});
                    for (int e = 0; e < n; ++e) s += G({a, c, e}) * G({e, d, b}) - G({a, d, e}) * G({e, c, b});
                    r({a, b, c, d}) = s;
                }
    return r;
}

// Weyl tensor from the Kulkarni-Nomizu decomposition, written independently of the engine.
TensorValue kn_weyl(const TensorValue& r04, const TensorValue& ric, double scalar, const TensorValue& g)
{
    const int n = g.dim();
    const auto kn = [&](const TensorValue& h, const TensorValue& k, int a, int b, int c, int d) {
        return h({a, c}) * k({b, d}) + h({b, d}) * k({a, c}) - h({a, d}) * k({b, c}) - h({b, c}) * k({a, d});
    };
    TensorValue w(n, lower_slots(4));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                    w({a, b, c, d}) = r04({a, b, c, d}) - kn(ric, g, a, b, c, d) / (n - 2) +
                                      scalar * kn(g, g, a, b, c, d) / (2.0 * (n - 1) * (n - 2));
    return w;
}

// Omega^2 g with Omega^2 = exp(2 phi).
MetricField conformal(const MetricField& m, const std::string& phi)
{
    const int n = m.dim();
    const ScalarExpr factor = ScalarExpr::unary(ScalarExpr::Op::exp,
                                                ScalarExpr::constant(2.0) * parse_expr(phi, m.coords()));
    std::vector<ScalarExpr> comps;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) comps.push_back(factor * m.component(i, j));
    return MetricField(m.label() + "_conformal", m.coords(), comps, m.signature(), m.domain());
}

}  // namespace

TEST_CASE("flat Cartesian charts have vanishing Christoffel symbols and curvature")
{
    const MetricField& m = entry("euclidean_4").chart;
    for (const Point& p : sample_points(m, 0, 5)) {
        CHECK(max_abs(values(christoffel(m, p, 2))) == 0.0);
        CHECK(norm(riemann(m, p).riem04) == 0.0);
        const RicciValues r = ricci_scalar(m, p);
        CHECK(norm(r.ricci) == 0.0);
        CHECK(r.scalar == 0.0);
    }
}

TEST_CASE("2-sphere Christoffel symbols match the textbook closed form")
{
    const MetricField m = sphere2();
    for (const Point& p : sample_points(m, 4, 10)) {
        const TensorValue G = values(christoffel(m, p, 0));
        const double th = p[0];
        CHECK(G({0, 1, 1}) == doctest::Approx(-std::sin(th) * std::cos(th)));
        CHECK(G({1, 0, 1}) == doctest::Approx(std::cos(th) / std::sin(th)));
        CHECK(G({1, 1, 0}) == doctest::Approx(std::cos(th) / std::sin(th)));
        CHECK(G({0, 0, 0}) == 0.0);
        CHECK(G({1, 1, 1}) == 0.0);
    }
}

TEST_CASE("FRW Christoffel symbols with f = t and eps = -1")
{
    const MetricField m = make_metric("frw_t", {"t", "x", "y", "z"},
                                      {{0, 0, "-1"}, {1, 1, "t^2"}, {2, 2, "t^2"}, {3, 3, "t^2"}}, {-1, 1, 1, 1},
                                      {{0.5, 2.0}, {-1, 1}, {-1, 1}, {-1, 1}});
    const double t = 1.7;
    const TensorValue G = values(christoffel(m, pt({t, 0.1, 0.2, 0.3}), 0));
    for (int i = 1; i < 4; ++i) {
        CHECK(G({0, i, i}) == doctest::Approx(t));        // f fdot
        CHECK(G({i, 0, i}) == doctest::Approx(1.0 / t));  // fdot / f
    }
    CHECK(G({0, 0, 0}) == 0.0);
}

TEST_CASE("Christoffel symbols agree with finite differences of the metric")
{
    for (const char* name : {"perturbed_4", "pp_wave_4", "frw_s3", "sasakian_r5", "kmu_solvable"}) {
        CAPTURE(name);
        const MetricField& m = entry(name).chart;
        for (const Point& p : sample_points(m, 6, 5)) {
            const TensorValue fd = fd_christoffel(m, p, 1e-3);
            const TensorValue jet = values(christoffel(m, p, 0));
            CHECK(norm(fd - jet) < 1e-5 * (1 + norm(jet)));
        }
    }
}

TEST_CASE("Riemann tensor agrees with finite differences of the Christoffel symbols")
{
    for (const char* name : {"perturbed_4", "pp_wave_4", "warped_s2xs2", "contact_perturbed"}) {
        CAPTURE(name);
        const MetricField& m = entry(name).chart;
        for (const Point& p : sample_points(m, 7, 3)) {
            const TensorValue fd = fd_riemann(m, p, 1e-3);
            const TensorValue jet = riemann(m, p).riem13;
            CHECK(norm(fd - jet) < 1e-5 * (1 + norm(jet)));
        }
    }
}

TEST_CASE("unit S^4 has the constant-curvature Riemann tensor, Ric = 3g and r = 12")
{
    const MetricField& m = entry("sphere_4").chart;
    for (const Point& p : sample_points(m, 0, 20)) {
        const TensorValue g = from_matrix(metric_values(m, p), lower_slots(2));
        CHECK(norm(riemann(m, p).riem04 - constant_curvature_tensor(g, 1.0)) < 1e-12);
        const RicciValues r = ricci_scalar(m, p);
        CHECK(norm(r.ricci - 3.0 * g) < 1e-12);
        CHECK(r.scalar == doctest::Approx(12.0));
    }
}

TEST_CASE("FRW: R(x,U)U = -(fddot/f) x and Ric(U,U) = -(n-1) fddot/f")
{
    const MetricField& m = entry("frw_s3").chart;  // f = 1 + t^2
    for (const Point& p : sample_points(m, 1, 20)) {
        const double t = p[0], ratio = 2.0 / (1 + t * t);
        const TensorValue r13 = riemann(m, p).riem13;
        for (int a = 0; a < 4; ++a)
            for (int i = 1; i < 4; ++i) CHECK(r13({a, 0, i, 0}) == doctest::Approx(a == i ? -ratio : 0.0));
        CHECK(ricci_scalar(m, p).ricci({0, 0}) == doctest::Approx(-3 * ratio));
    }
}

TEST_CASE("algebraic Riemann symmetries on every catalog metric")
{
    for (const CatalogEntry& e : catalog_entries()) {
        CAPTURE(e.name);
        const int n = e.chart.dim();
        double worst = 0;
        for (const Point& p : entry_points(e, 0, 50)) {
            const TensorValue R = riemann(e.chart, p).riem04;
            const double scale = 1 + norm(R);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    for (int c = 0; c < n; ++c)
                        for (int d = 0; d < n; ++d) {
                            worst = std::max(worst, std::abs(R({a, b, c, d}) + R({b, a, c, d})) / scale);
                            worst = std::max(worst, std::abs(R({a, b, c, d}) + R({a, b, d, c})) / scale);
                            worst = std::max(worst, std::abs(R({a, b, c, d}) - R({c, d, a, b})) / scale);
                            worst = std::max(
                                worst, std::abs(R({a, b, c, d}) + R({a, c, d, b}) + R({a, d, b, c})) / scale);
                        }
        }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("metric compatibility and the second Bianchi identity on every catalog metric")
{
    for (const CatalogEntry& e : catalog_entries()) {
        CAPTURE(e.name);
        const int n = e.chart.dim();
        for (const Point& p : entry_points(e, 0, 5)) {
            const GeometryJets j = geometry_jets(e.chart, p, 3);
            const TensorValue ng = values(covariant_derivative(j.g, j.christoffel));
            CHECK(max_abs(ng) < 1e-9 * (1 + max_abs(values(j.g))));

            // div Ric = 1/2 dr
            const TensorValue dric = values(covariant_derivative(j.ricci, j.christoffel));
            const TensorValue ginv = values(j.ginv);
            const TensorValue dR = values(covariant_derivative(j.riemann04, j.christoffel));
            const double scale = 1 + norm(dR);
            for (int c = 0; c < n; ++c) {
                double div = 0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) div += ginv({a, b}) * dric({a, b, c});
                CHECK(std::abs(div - 0.5 * j.scalar.partial({c})) < 1e-8 * scale);
            }
            // nabla_e R_abcd + nabla_c R_abde + nabla_d R_abec = 0, derivative slot first
            double worst = 0;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    for (int c = 0; c < n; ++c)
                        for (int d = 0; d < n; ++d)
                            for (int f = 0; f < n; ++f)
                                worst = std::max(worst, std::abs(dR.at(std::array{f, a, b, c, d}) +
                                                                 dR.at(std::array{c, a, b, d, f}) +
                                                                 dR.at(std::array{d, a, b, f, c})));
            CHECK(worst < 1e-8 * scale);
        }
    }
}

TEST_CASE("Weyl tensor matches an independent Kulkarni-Nomizu decomposition and is trace-free")
{
    for (const CatalogEntry& e : catalog_entries()) {
        const int n = e.chart.dim();
        if (n < 4) continue;
        CAPTURE(e.name);
        for (const Point& p : entry_points(e, 2, 10)) {
            const GeometryJets j = geometry_jets(e.chart, p, 2);
            const TensorValue w = values(j.weyl04);
            const TensorValue oracle =
                kn_weyl(values(j.riemann04), values(j.ricci), j.scalar.value(), values(j.g));
            CHECK(norm(w - oracle) < 1e-9 * (1 + norm(values(j.riemann04))));
            const TensorValue w13 = values(j.weyl13);
            for (int b = 0; b < n; ++b)
                for (int d = 0; d < n; ++d) {
                    double tr = 0;
                    for (int a = 0; a < n; ++a) tr += w13({a, b, a, d});
                    CHECK(std::abs(tr) < 1e-9 * (1 + norm(w)));
                }
        }
    }
}

TEST_CASE("Weyl vanishes for constant curvature and conformally flat FRW, not for the S2xS2 warped product")
{
    for (const char* name : {"sphere_4", "hyperbolic_4", "frw_s3", "frw_flat"}) {
        CAPTURE(name);
        const MetricField& m = entry(name).chart;
        for (const Point& p : sample_points(m, 0, 10)) CHECK(norm(weyl(m, p).weyl04) < 1e-10);
    }
    const MetricField& m = entry("warped_s2xs2").chart;
    for (const Point& p : sample_points(m, 0, 10)) {
        const TensorValue w = weyl(m, p).weyl04;
        CHECK(norm(w) > 1e-3);
        // W(x, U, U, y) with U = d/dt (coordinate 0)
        for (int x = 1; x < 5; ++x)
            for (int y = 1; y < 5; ++y) CHECK(std::abs(w({x, 0, 0, y})) < 1e-10 * (1 + norm(w)));
    }
}

TEST_CASE("Weyl, div Weyl and Bach reject dimension 3")
{
    const MetricField& m = entry("sphere_3").chart;
    const Point p = sample_points(m, 0, 1).front();
    CHECK_THROWS_AS(weyl(m, p), DimensionError);
    CHECK_THROWS_AS(bach(m, p), DimensionError);
    CHECK_THROWS_AS(div_weyl(m, p), DimensionError);
    CHECK(geometry_jets(m, p, 2).weyl04.size() == 0);
}

TEST_CASE("scaling the metric by 4 leaves Weyl13 invariant and scales Riem04 by 4")
{
    for (const char* name : {"perturbed_4", "warped_s2xs2"}) {
        CAPTURE(name);
        const MetricField& m = entry(name).chart;
        const MetricField m4 = m.scaled(4.0);
        for (const Point& p : sample_points(m, 8, 10)) {
            const WeylValues w = weyl(m, p), w4 = weyl(m4, p);
            CHECK(norm(w4.weyl13 - w.weyl13) < 1e-10 * (1 + norm(w.weyl13)));
            const TensorValue r = riemann(m, p).riem04, r4 = riemann(m4, p).riem04;
            CHECK(norm(r4 - 4.0 * r) < 1e-10 * (1 + norm(r4)));
            CHECK(ricci_scalar(m4, p).scalar == doctest::Approx(ricci_scalar(m, p).scalar / 4.0));
        }
    }
}

// R^cd W_cabd, computed here from the engine's Ricci, inverse metric and Weyl values.
TensorValue ricci_weyl_term(const GeometryJets& j)
{
    const int n = j.g.dim();
    const TensorValue ginv = values(j.ginv), ric = values(j.ricci), w = values(j.weyl04);
    Eigen::MatrixXd rup = to_matrix(ginv) * to_matrix(ric) * to_matrix(ginv);
    TensorValue t(n, lower_slots(2));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) t({a, b}) += rup(c, d) * w({c, a, b, d});
    return t;
}

TEST_CASE("conformal change: Weyl13 is invariant and the covariant Bach combination has weight -2")
{
    // The library normalizes the double-divergence term by 1/(n-1). Splitting B into
    // D/(n-1) + T/(n-2) and recombining as D/(n-3) + T/(n-2) gives the conformally covariant tensor,
    // which in dimension 4 scales as Omega^-2; this checks D and T independently.
    const char* phi = "0.3*x - 0.2*y^2 + 0.1*z*w";
    const MetricField& m = entry("perturbed_4").chart;
    const MetricField mc = conformal(m, phi);
    const ScalarExpr phi_expr = parse_expr(phi, m.coords());
    const auto covariant = [](const MetricField& g, const Point& p) {
        const GeometryJets j = geometry_jets(g, p, 4);
        const TensorValue t = ricci_weyl_term(j);
        const TensorValue d = (bach(j) - t * 0.5) * 3.0;
        return d + t * 0.5;
    };
    for (const Point& p : sample_points(m, 12, 5)) {
        const WeylValues w = weyl(m, p), wc = weyl(mc, p);
        CHECK(norm(wc.weyl13 - w.weyl13) < 1e-9 * (1 + norm(w.weyl13)));
        const double omega2 = std::exp(2 * eval(phi_expr, std::vector<double>(p.data(), p.data() + 4)));
        const TensorValue b = covariant(m, p), bc = covariant(mc, p);
        CHECK(norm(bc * omega2 - b) < 1e-8 * (1 + norm(b)));
        CHECK(norm(b) > 1e-4);
    }
}

TEST_CASE("Bach tensor is symmetric and trace-free in dimension 4")
{
    for (const char* name : {"perturbed_4", "pp_wave_4", "warped_s2xr"}) {
        CAPTURE(name);
        const MetricField& m = entry(name).chart;
        for (const Point& p : sample_points(m, 3, 5)) {
            const GeometryJets j = geometry_jets(m, p, 4);
            const TensorValue b = bach(j);
            const Eigen::MatrixXd B = to_matrix(b);
            const double scale = 1 + B.norm();
            CHECK((B - B.transpose()).norm() < 1e-8 * scale);
            CHECK(std::abs((to_matrix(values(j.ginv)) * B).trace()) < 1e-8 * scale);
        }
    }
}

TEST_CASE("divergence of Weyl and Bach on the reference metrics")
{
    const auto max_over = [](const char* name, auto&& f) {
        double worst = 0, least = 1e300;
        const MetricField& m = entry(name).chart;
        for (const Point& p : sample_points(m, 0, 10)) {
            const double v = f(m, p);
            worst = std::max(worst, v);
            least = std::min(least, v);
        }
        return std::pair{worst, least};
    };
    const auto divw = [](const MetricField& m, const Point& p) { return norm(div_weyl(m, p)); };
    const auto bachn = [](const MetricField& m, const Point& p) { return norm(bach(m, p)); };
    CHECK(max_over("sphere_4", divw).first < 1e-10);
    CHECK(max_over("frw_s3", divw).first < 1e-10);
    CHECK(max_over("warped_s2xs2", divw).first < 1e-9);
    CHECK(max_over("warped_s2xr", divw).second > 1e-4);
    CHECK(max_over("sphere_4", bachn).first < 1e-10);
    CHECK(max_over("frw_flat", bachn).first < 1e-9);
    CHECK(max_over("warped_s2xs2", bachn).first < 1e-7);
}

TEST_CASE("curvature packet levels")
{
    const MetricField& m = entry("warped_s2xr").chart;
    const Point p = sample_points(m, 0, 1).front();
    const CurvaturePacket a = curvature_packet(m, p);
    CHECK_FALSE(a.div_weyl.has_value());
    CHECK_FALSE(a.bach.has_value());
    const CurvaturePacket c = curvature_packet(m, p, PacketLevel::bach);
    REQUIRE(c.div_weyl.has_value());
    REQUIRE(c.bach.has_value());
    CHECK(norm(*c.bach - bach(m, p)) < 1e-12 * (1 + norm(*c.bach)));
    CHECK(norm(c.riem04 - riemann(m, p).riem04) == 0.0);
    CHECK(c.scalar == doctest::Approx(ricci_scalar(m, p).scalar));
}
