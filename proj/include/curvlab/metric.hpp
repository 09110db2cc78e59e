#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "curvlab/expr.hpp"
#include "curvlab/tensor.hpp"

namespace curvlab {

using Point = Eigen::VectorXd;

/// Open interval (lo, hi).
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double x) const noexcept { return lo < x && x < hi; }
    double width() const noexcept { return hi - lo; }
};

inline constexpr double kDefaultDegeneracyThreshold = 1e-10;

/// A semi-Riemannian metric on a single coordinate chart: a symmetric matrix of
/// component expressions over an open domain box.
class MetricField {
public:
    MetricField() = default;
    /// `components` is n*n row-major and must be symmetric entry by entry.
    MetricField(std::string label, std::vector<std::string> coords, std::vector<ScalarExpr> components,
                std::vector<int> signature, std::vector<Interval> domain);

    int dim() const noexcept { return static_cast<int>(coords_.size()); }
    const std::string& label() const noexcept { return label_; }
    const std::vector<std::string>& coords() const noexcept { return coords_; }
    const ScalarExpr& component(int i, int j) const { return components_[static_cast<std::size_t>(i * dim() + j)]; }
    const std::vector<int>& signature() const noexcept { return signature_; }
    const std::vector<Interval>& domain() const noexcept { return domain_; }
    double degeneracy_threshold() const noexcept { return degeneracy_threshold_; }

    bool contains(const Point& p) const;
    bool riemannian() const;

    MetricField with_label(std::string label) const;
    MetricField with_degeneracy_threshold(double eps) const;
    /// c * g for a constant c > 0.
    MetricField scaled(double c) const;

private:
    std::string label_;
    std::vector<std::string> coords_;
    std::vector<ScalarExpr> components_;
    std::vector<int> signature_;
    std::vector<Interval> domain_;
    double degeneracy_threshold_ = kDefaultDegeneracyThreshold;
};

/// Build the n*n component list from (i, j, expr) entries; unset entries are 0 and
/// every entry is mirrored.
struct ComponentEntry {
    int i;
    int j;
    ScalarExpr expr;
};
std::vector<ScalarExpr> symmetric_components(int n, const std::vector<ComponentEntry>& entries);

/// g_ij and all partials up to `order` at p; exactly symmetric in (i, j).
/// Throws DegenerateMetricError when |det g| <= the metric's threshold.
JetTensor metric_jets(const MetricField& m, const Point& p, int order);

/// g^ij with derivatives, from the Neumann series of (g0 + N)^{-1} with nilpotent N.
JetTensor inverse_metric_jets(const JetTensor& g);

Eigen::MatrixXd metric_values(const MetricField& m, const Point& p);

Eigen::MatrixXd to_matrix(const TensorValue& t);
TensorValue from_matrix(const Eigen::MatrixXd& m, std::vector<Variance> variance);
Eigen::VectorXd to_vector(const TensorValue& t);
TensorValue from_vector(const Eigen::VectorXd& v, Variance variance);

/// Count of negative eigenvalues equals the count of -1 entries in the signature.
bool signature_matches(const MetricField& m, const Point& p);

}  // namespace curvlab
