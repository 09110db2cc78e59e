#pragma once

#include <functional>
#include <optional>

#include "curvlab/metric.hpp"

namespace curvlab {

/// Tolerance ladder: algebraic identities, once-differentiated identities, theorem-level assertions.
struct Tolerances {
    double structural = 1e-9;
    double derived = 1e-8;
    double theorem = 1e-6;
};

/// Every curvature quantity at one point, carried as jets. With metric jets of order k,
/// the Christoffel symbols have order k-1 and the curvature tensors order k-2.
///
/// Conventions: R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z;
/// riemann13(a,b,c,d) is the a-component of R(d_c, d_d) d_b; riemann04 lowers a;
/// ricci(b,d) = riemann13(a,b,a,d). The unit sphere has riemann04 = g_ac g_bd - g_ad g_bc.
struct GeometryJets {
    int metric_order = 0;
    JetTensor g;
    JetTensor ginv;
    JetTensor christoffel;  // christoffel(k,i,j) = Gamma^k_ij
    JetTensor riemann13;
    JetTensor riemann04;
    JetTensor ricci;
    JetTensor ricci_operator;  // Q^a_b
    Jet scalar;
    JetTensor weyl13;  // empty when dim < 4
    JetTensor weyl04;
};

GeometryJets geometry_jets(const MetricField& m, const Point& p, int metric_order);

/// Gamma^k_ij from metric jets; order one less than the metric's.
JetTensor christoffel_from_metric(const JetTensor& g, const JetTensor& ginv);
/// Gamma with `jet_extra` derivative orders carried along (0..2).
JetTensor christoffel(const MetricField& m, const Point& p, int jet_extra);

struct RiemannValues {
    TensorValue riem13;
    TensorValue riem04;
};
RiemannValues riemann(const MetricField& m, const Point& p);

struct RicciValues {
    TensorValue ricci;
    double scalar = 0.0;
    TensorValue ricci_operator;
};
RicciValues ricci_scalar(const MetricField& m, const Point& p);

struct WeylValues {
    TensorValue weyl13;
    TensorValue weyl04;
};
/// Throws DimensionError for dim <= 3.
WeylValues weyl(const MetricField& m, const Point& p);

/// Weyl tensor assembled from Riemann, Ricci, Q, r and g (works for jets and values).
template <class Scalar>
Tensor<Scalar> weyl_from_parts(const Tensor<Scalar>& riem13, const Tensor<Scalar>& ricci,
                               const Tensor<Scalar>& ricci_operator, const Scalar& scalar, const Tensor<Scalar>& g);

/// Levi-Civita covariant derivative of a jet-valued tensor field; the new derivative
/// slot is slot 0. The result has order min(field order - 1, christoffel order).
JetTensor covariant_derivative(const JetTensor& field, const JetTensor& christoffel);

/// A tensor field that can produce its own jets at a point.
using JetTensorField = std::function<JetTensor(const Point&, int order)>;
TensorValue covariant_derivative(const JetTensorField& field, const MetricField& m, const Point& p);

/// (div W)_abd = nabla^c W_cabd.
TensorValue div_weyl(const MetricField& m, const Point& p);
TensorValue div_weyl(const GeometryJets& jets);

/// B_ab = 1/(n-1) nabla^c nabla^d W_cabd + 1/(n-2) R^cd W_cabd.
TensorValue bach(const MetricField& m, const Point& p);
TensorValue bach(const GeometryJets& jets);

enum class PacketLevel { curvature, divergence, bach };

struct CurvaturePacket {
    Point point;
    JetTensor christoffel;  // value plus up to two derivative orders
    TensorValue g;
    TensorValue ginv;
    TensorValue riem13;
    TensorValue riem04;
    TensorValue ricci;
    double scalar = 0.0;
    TensorValue ricci_operator;
    TensorValue weyl13;  // empty when dim < 4
    TensorValue weyl04;
    std::optional<TensorValue> div_weyl;
    std::optional<TensorValue> bach;
};

CurvaturePacket curvature_packet(const MetricField& m, const Point& p, PacketLevel level = PacketLevel::curvature);

}  // namespace curvlab
