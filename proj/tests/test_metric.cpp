#include <doctest.h>

#include <cmath>

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

MetricField frw_t_flat()
{
    return make_metric("frw_t", {"t", "x", "y", "z"}, {{0, 0, "-1"}, {1, 1, "t^2"}, {2, 2, "t^2"}, {3, 3, "t^2"}},
                       {-1, 1, 1, 1}, {{0.5, 2.0}, {-1, 1}, {-1, 1}, {-1, 1}});
}

}  // namespace

TEST_CASE("Euclidean metric jets are the identity with vanishing derivatives")
{
    const MetricField& m = entry("euclidean_4").chart;
    for (const Point& p : sample_points(m, 1, 5)) {
        const JetTensor g = metric_jets(m, p, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                const Jet& c = g({i, j});
                CHECK(c.value() == (i == j ? 1.0 : 0.0));
                for (std::size_t k = 1; k < c.coefficients().size(); ++k) CHECK(c.coefficients()[k] == 0.0);
            }
    }
}

TEST_CASE("FRW chart with f = t has g_xx = t^2 and its t-derivatives")
{
    const MetricField m = frw_t_flat();
    const Point p = pt({1.3, 0.1, -0.2, 0.4});
    const JetTensor g = metric_jets(m, p, 2);
    CHECK(g({1, 1}).value() == doctest::Approx(1.69));
    CHECK(g({1, 1}).partial({0}) == doctest::Approx(2.6));
    CHECK(g({1, 1}).partial({0, 0}) == doctest::Approx(2.0));
    CHECK(g({1, 1}).partial({1}) == doctest::Approx(0.0));
    CHECK(g({0, 0}).value() == -1.0);
}

TEST_CASE("round S^4 chart matches the hand-written sin^2 factors")
{
    const MetricField& m = entry("sphere_4").chart;
    for (const Point& p : sample_points(m, 2, 10)) {
        const double s1 = std::sin(p[0]), s2 = std::sin(p[1]), s3 = std::sin(p[2]);
        const Eigen::MatrixXd g = metric_values(m, p);
        Eigen::Vector4d expected(1.0, s1 * s1, s1 * s1 * s2 * s2, s1 * s1 * s2 * s2 * s3 * s3);
        CHECK((g - Eigen::MatrixXd(expected.asDiagonal())).norm() < 1e-15);
        // d/dchi of g_thth = 2 sin cos
        const JetTensor gj = metric_jets(m, p, 1);
        CHECK(gj({1, 1}).partial({0}) == doctest::Approx(2 * s1 * std::cos(p[0])));
    }
}

TEST_CASE("inverse metric of a diagonal metric is the reciprocal diagonal")
{
    const MetricField m = make_metric("diag", {"x", "y"}, {{0, 0, "2 + x^2"}, {1, 1, "exp(y)"}}, {1, 1},
                                      {{-1, 1}, {-1, 1}});
    const Point p = pt({0.4, -0.3});
    const JetTensor ginv = inverse_metric_jets(metric_jets(m, p, 3));
    CHECK(ginv({0, 0}).value() == doctest::Approx(1.0 / 2.16));
    CHECK(ginv({1, 1}).value() == doctest::Approx(std::exp(0.3)));
    CHECK(ginv({0, 1}).value() == 0.0);
    // d/dx (2 + x^2)^-1 = -2x / (2 + x^2)^2, d^2/dy^2 exp(-y) = exp(-y)
    CHECK(ginv({0, 0}).partial({0}) == doctest::Approx(-0.8 / (2.16 * 2.16)));
    CHECK(ginv({1, 1}).partial({1, 1}) == doctest::Approx(std::exp(0.3)));
}

TEST_CASE("Minkowski inverse is itself")
{
    const MetricField& m = entry("minkowski_4").chart;
    const Point p = sample_points(m, 0, 1).front();
    const TensorValue ginv = values(inverse_metric_jets(metric_jets(m, p, 2)));
    CHECK((to_matrix(ginv) - metric_values(m, p)).norm() == 0.0);
}

TEST_CASE("FRW inverse is diag(-1, f^-2, ...) with the product-rule t-derivatives")
{
    const MetricField m = frw_t_flat();
    const double t = 0.9;
    const JetTensor ginv = inverse_metric_jets(metric_jets(m, pt({t, 0, 0, 0}), 3));
    CHECK(ginv({0, 0}).value() == doctest::Approx(-1.0));
    for (int i = 1; i < 4; ++i) {
        CHECK(ginv({i, i}).value() == doctest::Approx(1 / (t * t)));
        CHECK(ginv({i, i}).partial({0}) == doctest::Approx(-2 / (t * t * t)));
        CHECK(ginv({i, i}).partial({0, 0}) == doctest::Approx(6 / (t * t * t * t)));
        CHECK(ginv({i, i}).partial({0, 0, 0}) == doctest::Approx(-24 / std::pow(t, 5)));
    }
}

TEST_CASE("g times its inverse is the identity as jets on every catalog chart")
{
    for (const CatalogEntry& e : catalog_entries()) {
        CAPTURE(e.name);
        const int n = e.chart.dim();
        for (const Point& p : entry_points(e, 4, 3)) {
            const JetTensor g = metric_jets(e.chart, p, 4);
            const JetTensor ginv = inverse_metric_jets(g);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    Jet acc(g[0].basis(), 4);
                    for (int k = 0; k < n; ++k) acc.add_product(g({i, k}), ginv({k, j}));
                    acc -= (i == j ? 1.0 : 0.0);
                    for (double c : acc.coefficients()) CHECK(std::abs(c) < 1e-9);
                }
        }
    }
}

TEST_CASE("raising then lowering an index is the identity")
{
    const MetricField& m = entry("frw_s3").chart;
    for (const Point& p : sample_points(m, 9, 5)) {
        const RicciValues r = ricci_scalar(m, p);
        const JetTensor gj = metric_jets(m, p, 0);
        const TensorValue g = values(gj), ginv = values(inverse_metric_jets(gj));
        const TensorValue back = lower_index(raise_index(r.ricci, 0, ginv), 0, g);
        CHECK(norm(back - r.ricci) < 1e-12 * (1 + norm(r.ricci)));
    }
}

TEST_CASE("raising Ric of the unit 4-sphere gives 3 times the identity")
{
    const MetricField& m = entry("sphere_4").chart;
    for (const Point& p : sample_points(m, 3, 5)) {
        const RicciValues r = ricci_scalar(m, p);
        const JetTensor gj = metric_jets(m, p, 0);
        const TensorValue q = raise_index(r.ricci, 0, values(inverse_metric_jets(gj)));
        CHECK((to_matrix(q) - 3.0 * Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-12);
        CHECK((to_matrix(r.ricci_operator) - 3.0 * Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-12);
    }
}

TEST_CASE("raising a timelike covector on Minkowski flips its time component")
{
    const MetricField& m = entry("minkowski_4").chart;
    const JetTensor gj = metric_jets(m, sample_points(m, 0, 1).front(), 0);
    Eigen::VectorXd w(4);
    w << 2.0, 0.5, -0.25, 0.0;
    const TensorValue up = raise_index(from_vector(w, Variance::down), 0, values(inverse_metric_jets(gj)));
    const Eigen::VectorXd v = to_vector(up);
    CHECK(v[0] == -2.0);
    CHECK(v.tail(3) == w.tail(3));
}

TEST_CASE("degenerate metrics are rejected at evaluation")
{
    const MetricField m = make_metric("deg", {"x", "y"}, {{0, 0, "1"}, {1, 1, "x"}}, {1, 1}, {{-1, 1}, {-1, 1}});
    CHECK_THROWS_AS(metric_jets(m, pt({0.0, 0.2}), 2), DegenerateMetricError);
    CHECK_NOTHROW(metric_jets(m, pt({0.5, 0.2}), 2));
    CHECK_THROWS_AS(metric_jets(m.with_degeneracy_threshold(0.6), pt({0.5, 0.2}), 2), DegenerateMetricError);
}

TEST_CASE("signature check counts negative eigenvalues")
{
    const Point p = sample_points(entry("minkowski_4").chart, 0, 1).front();
    CHECK(signature_matches(entry("minkowski_4").chart, p));
    const MetricField wrong = make_metric("wrong", {"t", "x"}, {{0, 0, "1"}, {1, 1, "1"}}, {-1, 1}, {{-1, 1}, {-1, 1}});
    CHECK_FALSE(signature_matches(wrong, pt({0.0, 0.0})));
    for (const CatalogEntry& e : catalog_entries())
        for (const Point& q : entry_points(e, 0, 5)) CHECK(signature_matches(e.chart, q));
}

TEST_CASE("scaled metric multiplies every component")
{
    const MetricField& m = entry("sphere_4").chart;
    const Point p = sample_points(m, 0, 1).front();
    CHECK((metric_values(m.scaled(4.0), p) - 4.0 * metric_values(m, p)).norm() < 1e-14);
}
