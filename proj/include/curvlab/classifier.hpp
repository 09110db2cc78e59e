#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "curvlab/curvature.hpp"

namespace curvlab {

/// Aggregated outcome of a predicate over a point set. `witness` is the index of the
/// point with the largest residual (the first failing point when the verdict is false).
struct Verdict {
    bool holds = true;
    double max_residual = 0.0;
    std::optional<std::size_t> witness;
    std::vector<std::pair<std::string, double>> constants;

    void absorb(double residual, bool ok, std::size_t point_index);
};

enum class CausalCharacter { spacelike, timelike, null };
const char* to_string(CausalCharacter c);

/// Ric = a g + b u (x) u. For a non-null direction u is normalized so that
/// |g^{-1}(u,u)| = 1 and b absorbs the scale; for a null direction u is scaled so
/// that |b| = 1. U = g^{-1} u. has_direction is false when b = 0 (Einstein).
struct QuasiEinsteinFit {
    bool verdict = false;
    double a = 0.0;
    double b = 0.0;
    bool has_direction = false;
    Eigen::VectorXd u;  // covector
    Eigen::VectorXd U;  // vector
    int epsilon_U = 0;  // +1, -1, or 0 for the null branch
    double residual = 0.0;
    double rank_residual = 0.0;  // second singular value of Ric - a g
};

QuasiEinsteinFit quasi_einstein_fit(const Eigen::MatrixXd& g, const Eigen::MatrixXd& ricci, double tol = 1e-7);
QuasiEinsteinFit quasi_einstein_fit(const MetricField& m, const Point& p, double tol = 1e-7);

/// Pointwise residuals from precomputed jets, each relative to the size of the curvature:
/// Ricci for Einstein, Riemann for the rest (squared for Bach). Harmonic Weyl needs metric
/// jets of order 3, Bach order 4.
double einstein_residual(const GeometryJets& j);
double constant_curvature_residual(const GeometryJets& j);
double conformal_flatness_residual(const GeometryJets& j);
double harmonic_weyl_residual(const GeometryJets& j);
double bach_residual(const GeometryJets& j);

Verdict is_einstein(const MetricField& m, std::span<const Point> points, double tol = 1e-7);

/// ||W(., ., V)|| with V in the third (Z) slot of W(X,Y)Z.
double weakly_cf_check(const TensorValue& weyl13, const Eigen::VectorXd& v);
double weakly_cf_check(const MetricField& m, const Point& p, const Eigen::VectorXd& v);

struct KernelVector {
    Eigen::VectorXd v;
    double norm_sq = 0.0;  // g(V, V)
    CausalCharacter kind = CausalCharacter::null;
};

struct WeylKernel {
    std::vector<KernelVector> basis;
    Eigen::MatrixXd basis_matrix;  // n x k, orthonormal columns (Euclidean)
    Eigen::VectorXd singular_values;
    bool contains_non_null = false;
    int dimension() const noexcept { return static_cast<int>(basis.size()); }
};

/// Kernel of V -> W(., ., V), from the SVD of the flattened n^3 x n matrix.
WeylKernel weakly_cf_kernel(const TensorValue& weyl13, const Eigen::MatrixXd& g, double tol = 1e-8);
WeylKernel weakly_cf_kernel(const MetricField& m, const Point& p, double tol = 1e-8);

struct EardleyReport {
    std::size_t points = 0;
    std::size_t non_null_kernel_points = 0;
    std::size_t null_only_kernel_points = 0;
    double max_weyl_with_non_null_kernel = 0.0;
    double max_weyl_with_null_kernel = 0.0;
    std::vector<std::size_t> violations;
    bool consistent() const noexcept { return violations.empty(); }
};

/// Four dimensions only: a Weyl tensor annihilating a non-null vector must vanish.
EardleyReport eardley_check(const MetricField& m, std::span<const Point> points, double tol = 1e-6);

Verdict harmonic_weyl_check(const MetricField& m, std::span<const Point> points, double tol = 1e-7);
Verdict constant_curvature_check(const MetricField& m, std::span<const Point> points, double tol = 1e-7);
Verdict conformally_flat_check(const MetricField& m, std::span<const Point> points, double tol = 1e-8);
Verdict bach_flat_check(const MetricField& m, std::span<const Point> points, double tol = 1e-7);

/// R_abcd = c (g_ac g_bd - g_ad g_bc).
TensorValue constant_curvature_tensor(const TensorValue& g, double c);

}  // namespace curvlab
