#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "curvlab/contact.hpp"
#include "curvlab/curvature.hpp"
#include "curvlab/error.hpp"
#include "support.hpp"

using namespace testing;

namespace {

const ContactStructure& cs(const char* name) { return *entry(name).contact(); }

std::vector<Point> pts(const char* name, int count = 20, std::uint64_t seed = 0)
{
    return entry_points(entry(name), seed, count);
}

const char* kSasakian[] = {"sasakian_r3", "sasakian_r5", "nil3", "sasakian_s3", "contact_perturbed"};
const char* kNonKContact[] = {"contact_flat3", "kmu_solvable"};

}  // namespace

TEST_CASE("every catalog contact structure satisfies the defining identities")
{
    for (const char* name : kSasakian) {
        CAPTURE(name);
        const StructureReport r = verify_structure(cs(name), pts(name));
        CHECK(r.ok);
        CHECK(r.worst.eta_xi < 1e-12);
        CHECK(r.worst.phi_squared < 1e-12);
        CHECK(r.worst.deta_phi < 1e-12);
        CHECK(r.worst.xi_in_kernel < 1e-12);
        CHECK(r.worst.contact_volume > 1e-3);
    }
    for (const char* name : kNonKContact) CHECK(verify_structure(cs(name), pts(name)).ok);
}

TEST_CASE("doubling eta breaks the structure and names the identity")
{
    ContactStructure bad = cs("sasakian_r3");
    for (ScalarExpr& e : bad.eta) e = ScalarExpr::binary(ScalarExpr::Op::mul, ScalarExpr::constant(2.0), e);
    const std::vector<Point> p = pts("sasakian_r3", 5);
    const StructureReport r = verify_structure(bad, p);
    CHECK_FALSE(r.ok);
    CHECK(r.worst.eta_xi == doctest::Approx(1.0));
    CHECK(r.witness == std::optional<std::size_t>(0));
    CHECK(r.violation.find("eta") != std::string::npos);
    CHECK_THROWS_AS(require_structure(bad, p), StructureError);
}

TEST_CASE("shape checks")
{
    ContactStructure even = cs("sasakian_r3");
    even.g = entry("euclidean_4").chart;
    CHECK_THROWS_AS(check_shape(even), StructureError);
    ContactStructure short_eta = cs("sasakian_r3");
    short_eta.eta.pop_back();
    CHECK_THROWS_AS(check_shape(short_eta), StructureError);
}

TEST_CASE("h vanishes on Sasakian structures and has eigenvalues 0, +-1 when k = 0")
{
    for (const char* name : kSasakian)
        for (const Point& p : pts(name, 5)) CHECK(compute_h(cs(name), p).norm_squared < 1e-20);
    for (const char* name : kNonKContact) {
        CAPTURE(name);
        for (const Point& p : pts(name, 10)) {
            const HTensor h = compute_h(cs(name), p);
            CHECK(h.self_adjoint < 1e-12);
            CHECK(std::abs(h.trace) < 1e-12);
            CHECK(h.anticommute < 1e-12);
            // k = 0: eigenvalues of h are 0 on xi and +-sqrt(1 - k) = +-1 on the contact distribution
            Eigen::VectorXd ev = h.matrix.eigenvalues().real();
            std::sort(ev.data(), ev.data() + ev.size());
            CHECK(ev[0] == doctest::Approx(-1.0));
            CHECK(std::abs(ev[1]) < 1e-10);
            CHECK(ev[2] == doctest::Approx(1.0));
            CHECK(h.norm_squared == doctest::Approx(2.0));
        }
    }
}

TEST_CASE("nabla xi = -phi - phi h and Ric(xi, xi) = 2m - |h|^2")
{
    for (const char* name : {"sasakian_r3", "sasakian_r5", "nil3", "sasakian_s3", "contact_perturbed",
                             "contact_flat3", "kmu_solvable"}) {
        CAPTURE(name);
        const int m = cs(name).m();
        for (const Point& p : pts(name, 10)) {
            const NablaXiCheck c = check_nabla_xi(cs(name), p);
            CHECK(c.nabla_xi < 1e-10);
            CHECK(c.ricci_xi_xi < 1e-10);
            CHECK(c.ricci_xi_xi_value == doctest::Approx(2.0 * m - c.h_norm_squared));
        }
    }
    // flat chart: Ric(xi, xi) is 0 from an independent engine evaluation
    for (const Point& p : pts("contact_flat3", 5))
        CHECK(norm(ricci_scalar(cs("contact_flat3").g, p).ricci) < 1e-12);
}

TEST_CASE("the Hopf chart is the round unit sphere")
{
    const MetricField& g = cs("sasakian_s3").g;
    for (const Point& p : pts("sasakian_s3", 10)) {
        const TensorValue oracle = constant_curvature_tensor(values(metric_jets(g, p, 0)), 1.0);
        CHECK(norm(riemann(g, p).riem04 - oracle) < 1e-10);
    }
}

TEST_CASE("K-contact and Sasakian verdicts")
{
    for (const char* name : kSasakian) {
        CAPTURE(name);
        CHECK(is_K_contact(cs(name), pts(name)).holds);
        CHECK(is_sasakian(cs(name), pts(name)).holds);
    }
    for (const char* name : kNonKContact) {
        CAPTURE(name);
        const Verdict k = is_K_contact(cs(name), pts(name));
        CHECK_FALSE(k.holds);
        CHECK(k.witness == std::optional<std::size_t>(0));
        CHECK_FALSE(is_sasakian(cs(name), pts(name)).holds);
    }
}

TEST_CASE("(k, mu) fits")
{
    const KMuFit s = fit_k_mu(cs("sasakian_r5"), pts("sasakian_r5"));
    CHECK(s.holds);
    CHECK(s.k == doctest::Approx(1.0));
    CHECK_FALSE(s.mu.has_value());
    CHECK_FALSE(s.ricci_residual.has_value());

    const KMuFit flat = fit_k_mu(cs("contact_flat3"), pts("contact_flat3"));
    CHECK(flat.holds);
    CHECK(std::abs(flat.k) < 1e-10);
    REQUIRE(flat.mu.has_value());
    CHECK(std::abs(*flat.mu) < 1e-10);
    REQUIRE(flat.scalar.has_value());
    CHECK(flat.scalar->matches == "both");

    const KMuFit solv = fit_k_mu(cs("kmu_solvable"), pts("kmu_solvable"));
    CHECK(solv.holds);
    CHECK(std::abs(solv.k) < 1e-10);
    REQUIRE(solv.mu.has_value());
    CHECK(*solv.mu == doctest::Approx(4.0));
    REQUIRE(solv.ricci_residual.has_value());
    CHECK(*solv.ricci_residual < 1e-8);
    REQUIRE(solv.scalar.has_value());
    CHECK(solv.scalar->engine == doctest::Approx(-8.0));
    CHECK(solv.scalar->traced == doctest::Approx(-8.0));
    CHECK(solv.scalar->printed == doctest::Approx(-4.0));
    CHECK(solv.scalar->matches == "traced");

    CHECK(fit_k_mu(cs("contact_perturbed"), pts("contact_perturbed")).holds);
}

TEST_CASE("eta-Einstein constants")
{
    const EtaEinsteinFit r5 = eta_einstein_fit(cs("sasakian_r5"), pts("sasakian_r5"));
    REQUIRE(r5.verdict.holds);
    for (std::size_t i = 0; i < r5.a.size(); ++i) {
        CHECK(r5.a[i] == doctest::Approx(-2.0));
        CHECK(std::abs(r5.a[i] + r5.b[i] - 4.0) < 1e-9);
    }
    CHECK(r5.a_spread < 1e-10);
    REQUIRE(r5.trace_residual.has_value());
    CHECK(*r5.trace_residual < 1e-10);
    CHECK(*r5.reeb_residual < 1e-10);

    const EtaEinsteinFit s3 = eta_einstein_fit(cs("sasakian_s3"), pts("sasakian_s3"));
    REQUIRE(s3.verdict.holds);
    for (std::size_t i = 0; i < s3.b.size(); ++i) {
        CHECK(std::abs(s3.b[i]) < 1e-9);
        CHECK(s3.a[i] == doctest::Approx(2.0));
    }
    CHECK_FALSE(eta_einstein_fit(cs("contact_perturbed"), pts("contact_perturbed")).verdict.holds);
    CHECK_FALSE(eta_einstein_fit(cs("kmu_solvable"), pts("kmu_solvable")).verdict.holds);
}

TEST_CASE("Weyl along the Reeb field: closed form against the engine")
{
    for (const char* name : {"sasakian_r5", "contact_perturbed"}) {
        CAPTURE(name);
        for (const Point& p : pts(name, 10)) {
            const WeylReebDouble w = weyl_reeb_double(cs(name), p);
            CHECK(w.difference < 1e-10 * (1 + w.riemann_norm));
        }
    }
    for (const Point& p : pts("sasakian_r5", 5)) {
        const WeylReebDouble w = weyl_reeb_double(cs("sasakian_r5"), p);
        CHECK(w.engine_norm < 1e-10);
        CHECK(w.q_formula_residual < 1e-10);
    }
    bool nonzero = false;
    for (const Point& p : pts("contact_perturbed", 5))
        nonzero = nonzero || weyl_reeb_double(cs("contact_perturbed"), p).engine_norm > 1e-3;
    CHECK(nonzero);
    CHECK_THROWS_AS(weyl_reeb_double(cs("sasakian_r3"), pts("sasakian_r3", 1)[0]), DimensionError);
}

TEST_CASE("W(., xi)xi = 0 iff eta-Einstein on K-contact structures")
{
    const Proposition11Report yes = proposition_1_1_verify(cs("sasakian_r5"), pts("sasakian_r5"));
    CHECK(yes.k_contact);
    CHECK(yes.weyl_vanishes == Tri::yes);
    CHECK(yes.eta_einstein == Tri::yes);
    CHECK(yes.equivalence == Tri::yes);
    REQUIRE(yes.sasakian_when_weyl_xy_xi_vanishes.has_value());
    CHECK(*yes.sasakian_when_weyl_xy_xi_vanishes);

    const Proposition11Report no = proposition_1_1_verify(cs("contact_perturbed"), pts("contact_perturbed"));
    CHECK(no.weyl_vanishes == Tri::no);
    CHECK(no.eta_einstein == Tri::no);
    CHECK(no.equivalence == Tri::yes);
    for (const Proposition11Point& q : no.points) CHECK(q.agree);

    CHECK_THROWS_AS(proposition_1_1_verify(cs("sasakian_r3"), pts("sasakian_r3", 2)), DimensionError);
    CHECK(std::string(to_string(Tri::mixed)) == "mixed");
}

TEST_CASE("reduction to (k, mu)-spaces")
{
    const Theorem12Report r5 = theorem_1_2_reduction(cs("sasakian_r5"), pts("sasakian_r5"));
    CHECK(r5.hypotheses_hold);
    CHECK(r5.branch == "sasakian");
    CHECK(r5.k_mean == doctest::Approx(1.0));
    CHECK(r5.k_variance < 1e-10);
    CHECK(r5.reduced_nullity_residual < 1e-8);
    REQUIRE(r5.sasakian_residual.has_value());
    CHECK(*r5.sasakian_residual < 1e-8);

    const Theorem12Report s3 = theorem_1_2_reduction(cs("sasakian_s3"), pts("sasakian_s3"));
    CHECK(s3.weyl_vacuous);
    CHECK(s3.hypotheses_hold);
    CHECK(s3.branch == "sasakian");

    const Theorem12Report flat = theorem_1_2_reduction(cs("contact_flat3"), pts("contact_flat3"));
    CHECK(flat.hypotheses_hold);
    CHECK(flat.branch == "non-sasakian");
    CHECK(std::abs(flat.k_mean) < 1e-10);
    CHECK(flat.k_variance < 1e-10);
    REQUIRE(flat.ricci_rank.has_value());
    CHECK(*flat.ricci_rank == 0);
    CHECK(flat.model == "flat");
    REQUIRE(flat.forced_relation_residual.has_value());
    CHECK(*flat.forced_relation_residual < 1e-8);

    for (const char* name : {"contact_perturbed", "kmu_solvable"}) {
        CAPTURE(name);
        const Theorem12Report r = theorem_1_2_reduction(cs(name), pts(name));
        CHECK_FALSE(r.hypotheses_hold);
        CHECK_FALSE(r.eta_einstein);
        CHECK(r.branch.empty());
        CHECK_FALSE(r.hypothesis_failure.empty());
    }
}

TEST_CASE("contact invariants bundle")
{
    const ContactInvariants inv = contact_invariants(cs("nil3"), pts("nil3", 5));
    CHECK(inv.k_contact.holds);
    CHECK(inv.sasakian.holds);
    REQUIRE(inv.eta_einstein.has_value());
    CHECK(inv.eta_einstein->first == doctest::Approx(-2.0));
    CHECK(inv.eta_einstein->second == doctest::Approx(4.0));
}
