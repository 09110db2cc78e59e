#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "curvlab/classifier.hpp"

namespace curvlab {

/// Contact Riemannian structure (phi, xi, eta, g) on an open chart of dimension 2m+1.
/// `phi` is row-major with phi[i*n + j] = phi^i_j. The Reeb field is stored explicitly and
/// checked against eta and g rather than solved for.
struct ContactStructure {
    MetricField g;
    std::vector<ScalarExpr> eta;
    std::vector<ScalarExpr> xi;
    std::vector<ScalarExpr> phi;
    std::string label;

    int dim() const noexcept { return g.dim(); }
    int m() const noexcept { return (g.dim() - 1) / 2; }
};

/// Throws StructureError on even or < 3 dimension, component counts not matching the metric,
/// or an indefinite metric.
void check_shape(const ContactStructure& cs);

/// Values and first derivatives of the structure tensors at one point.
/// dxi(i,k) = d_k xi^i, dphi[k](i,j) = d_k phi^i_j. deta uses the convention
/// deta(X,Y) = 1/2 (X eta(Y) - Y eta(X) - eta([X,Y])).
struct ContactFrame {
    Eigen::VectorXd eta;
    Eigen::VectorXd xi;
    Eigen::MatrixXd phi;
    Eigen::MatrixXd g;
    Eigen::MatrixXd deta;
    Eigen::MatrixXd dxi;
    std::vector<Eigen::MatrixXd> dphi;
};
ContactFrame contact_frame(const ContactStructure& cs, const Point& p);

/// Absolute residuals of the defining identities at one point.
struct StructureResiduals {
    double eta_xi = 0.0;          // |eta(xi) - 1|
    double eta_metric = 0.0;      // eta(X) = g(xi, X)
    double phi_squared = 0.0;     // phi^2 = -I + eta (x) xi
    double deta_phi = 0.0;        // deta(X,Y) = g(X, phi Y)
    double xi_in_kernel = 0.0;    // deta(xi, .) = 0
    double contact_volume = 0.0;  // |eta ^ (deta)^m| relative to the metric volume
};

struct StructureReport {
    std::vector<StructureResiduals> points;
    StructureResiduals worst;      // componentwise max; contact_volume holds the minimum
    bool ok = true;
    std::string violation;         // empty when ok
    std::optional<std::size_t> witness;
};

/// Never throws for failing identities; see require_structure.
StructureReport verify_structure(const ContactStructure& cs, std::span<const Point> points,
                                 double tol = 1e-9);
/// Throws StructureError naming the violated identity and point.
void require_structure(const ContactStructure& cs, std::span<const Point> points, double tol = 1e-9);

/// h = 1/2 L_xi phi together with the residuals of its algebraic properties.
struct HTensor {
    TensorValue h;  // h^i_j
    Eigen::MatrixXd matrix;
    double self_adjoint = 0.0;   // max |g(hX,Y) - g(X,hY)|
    double trace = 0.0;
    double anticommute = 0.0;    // max |h phi + phi h|
    double norm_squared = 0.0;   // |h|^2 = tr(h^2)
};
HTensor compute_h(const ContactStructure& cs, const Point& p);

/// nabla_X xi + phi X + phi h X over the coordinate frame, and Ric(xi,xi) against 2m - |h|^2.
struct NablaXiCheck {
    double nabla_xi = 0.0;
    double ricci_xi_xi = 0.0;
    double ricci_xi_xi_value = 0.0;
    double h_norm_squared = 0.0;
};
NablaXiCheck check_nabla_xi(const ContactStructure& cs, const Point& p);

/// R(X,xi)xi = X - eta(X)xi and R(X,Y)xi = eta(Y)X - eta(X)Y over coordinate frames.
Verdict is_K_contact(const ContactStructure& cs, std::span<const Point> points, double tol = 1e-6);
Verdict is_sasakian(const ContactStructure& cs, std::span<const Point> points, double tol = 1e-6);

/// Scalar curvature from the trace of the (k,mu) Ricci formula compared with the engine.
struct KMuScalarCheck {
    double engine = 0.0;
    double printed = 0.0;  // 2m - 2 + k - m mu
    double traced = 0.0;   // 2m (2m - 2 + k - m mu)
    std::string matches;   // "printed", "traced", "both" or "neither"
};

struct KMuFit {
    bool holds = false;
    double k = 0.0;
    std::optional<double> mu;  // empty when h vanishes and mu is unidentifiable
    double residual = 0.0;
    std::optional<std::size_t> witness;
    double max_h_norm = 0.0;
    /// Present when the fit holds with k < 1.
    std::optional<double> ricci_residual;
    std::optional<KMuScalarCheck> scalar;
};
KMuFit fit_k_mu(const ContactStructure& cs, std::span<const Point> points, double tol = 1e-6);

struct EtaEinsteinFit {
    Verdict verdict;
    std::vector<double> a;
    std::vector<double> b;
    double a_spread = 0.0;  // max - min over points
    double b_spread = 0.0;
    /// Present for K-contact structures: r = (2m+1)a + b and a + b = 2m.
    std::optional<double> trace_residual;
    std::optional<double> reeb_residual;
};
EtaEinsteinFit eta_einstein_fit(const ContactStructure& cs, std::span<const Point> points, double tol = 1e-7);

/// W(X,xi)xi from the Weyl engine and from the K-contact closed form, as (1,1) matrices
/// with column c the image of d_c.
struct WeylReebDouble {
    Eigen::MatrixXd engine;
    Eigen::MatrixXd formula;
    double difference = 0.0;
    double engine_norm = 0.0;
    /// |Q - (r/2m - 1) I - (2m + 1 - r/2m) xi (x) eta|
    double q_formula_residual = 0.0;
    double riemann_norm = 0.0;
};
/// Throws DimensionError below dimension 5.
WeylReebDouble weyl_reeb_double(const ContactStructure& cs, const Point& p);

enum class Tri { yes, no, mixed };
const char* to_string(Tri t);

struct Proposition11Point {
    double weyl_xi_xi = 0.0;      // |W(.,xi)xi| / (1 + |R|)
    double eta_einstein = 0.0;    // |Ric - a g - b eta (x) eta| / (1 + |Ric|)
    double weyl_xy_xi = 0.0;      // |W(.,.)xi| / (1 + |R|)
    double sasakian = 0.0;
    bool weyl_vanishes = false;
    bool is_eta_einstein = false;
    bool agree = false;
};

struct Proposition11Report {
    std::string label;
    bool k_contact = false;
    double k_contact_residual = 0.0;
    std::vector<Proposition11Point> points;
    Tri weyl_vanishes = Tri::mixed;
    Tri eta_einstein = Tri::mixed;
    Tri equivalence = Tri::mixed;  // yes when the two predicates agree at every point
    /// W(X,Y)xi = 0 at every point implies Sasakian; yes/no when the hypothesis holds, empty otherwise.
    std::optional<bool> sasakian_when_weyl_xy_xi_vanishes;
};
/// Throws StructureError when the structure is not K-contact, DimensionError below dimension 5.
Proposition11Report proposition_1_1_verify(const ContactStructure& cs, std::span<const Point> points,
                                           double tol = 1e-6);

struct Theorem12Report {
    std::string label;
    bool eta_einstein = false;
    bool weyl_xy_xi_vanishes = false;  // vacuous in dimension 3
    bool weyl_vacuous = false;
    bool hypotheses_hold = false;
    std::string hypothesis_failure;
    std::vector<double> k;               // (a + b) / 2m per point
    double k_mean = 0.0;
    double k_variance = 0.0;
    double reduced_nullity_residual = 0.0;  // R(X,Y)xi - k (eta(Y)X - eta(X)Y)
    std::string branch;                  // "sasakian", "non-sasakian" or "" when hypotheses fail
    std::optional<double> sasakian_residual;
    /// k < 1 branch
    std::optional<double> forced_relation_residual;  // (a-2m+2)g + (2m-2-a) eta eta - 2(m-1) g h
    std::optional<double> a_minus_forced;             // a - 2(m-1)
    std::optional<double> m_minus_one_h;              // |(m-1) h|
    std::optional<int> ricci_rank;
    std::string model;                   // "flat", "SU(2)", "SL(2,R)" for the 3-dimensional branch
};
Theorem12Report theorem_1_2_reduction(const ContactStructure& cs, std::span<const Point> points,
                                      const Tolerances& tol = {});

struct ContactInvariants {
    HTensor h;
    Verdict k_contact;
    Verdict sasakian;
    std::optional<std::pair<double, double>> eta_einstein;  // (a, b) at the first point
    std::optional<KMuFit> k_mu;
};
ContactInvariants contact_invariants(const ContactStructure& cs, std::span<const Point> points);

}  // namespace curvlab
