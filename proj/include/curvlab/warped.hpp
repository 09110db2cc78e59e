#pragma once

#include <span>
#include <string>
#include <vector>

#include "curvlab/classifier.hpp"

namespace curvlab {

/// eps dt^2 + f(t)^2 g_F over t_domain x (fiber domain). `f` is an expression in the
/// single variable t (variable 0). The assembled chart has coordinates (t, fiber...),
/// so the lift U of d/dt is coordinate direction 0.
struct WarpedProductSpec {
    int epsilon = 1;
    ScalarExpr f;
    Interval t_domain;
    MetricField fiber;
    std::string label;
    std::string t_name = "t";
};

/// Throws StructureError on eps not +-1, indefinite fiber, or f <= 0 at a sampled t.
void validate(const WarpedProductSpec& spec);
MetricField assemble_metric(const WarpedProductSpec& spec);

/// f, f', f'' at t.
struct WarpingJet {
    double f = 0.0;
    double df = 0.0;
    double ddf = 0.0;
};
WarpingJet warping_at(const WarpedProductSpec& spec, double t);
Point fiber_point(const Point& p);

/// Closed-form curvature of the warped product, blocks indexed over fiber coordinates
/// (fiber index i is chart index i+1).
///   x_U_U(i,j): d_i-component of R(d_j, U)U          = -(f''/f) delta
///   x_U_y(i,j): U-component of R(d_i, U)d_j          = eps (f''/f) g_ij
///   fiber_block(a,b,c,d) = g(R(d_c,d_d)d_b, d_a)       = f^2 FR_abcd - eps (f'/f)^2 (g_db g_ca - g_cb g_da)
/// R(x,y)U vanishes identically. `full04` is the whole Riemann tensor assembled from
/// these blocks and the algebraic symmetries.
struct ClosedFormRiemann {
    TensorValue x_U_U;
    TensorValue x_U_y;
    TensorValue fiber_block;
    TensorValue full04;
};
ClosedFormRiemann closed_form_riemann(const WarpedProductSpec& spec, const Point& p);

/// Ric(U,U) = -(n-1) f''/f, Ric(U,x) = 0,
/// Ric(x,y) = FRic(x,y) - eps [f''/f + (n-2)(f'/f)^2] g(x,y),
/// r = Fr/f^2 - eps (n-1) [2 f''/f + (n-2)(f'/f)^2].
struct ClosedFormRicci {
    TensorValue ricci;  // full chart
    double scalar = 0.0;
};
ClosedFormRicci closed_form_ricci_scalar(const WarpedProductSpec& spec, const Point& p);

/// Largest relative block mismatch between closed forms and the generic engine.
struct WarpedComparison {
    double riemann = 0.0;
    double ricci = 0.0;
    double scalar = 0.0;
    double x_y_U = 0.0;  // max |R(x,y)U| from the engine
};
WarpedComparison compare_with_engine(const WarpedProductSpec& spec, const Point& p);

/// -(eps/(n-2)) FRic0 over fiber indices, FRic0 the trace-free fiber Ricci tensor.
TensorValue electric_weyl(const WarpedProductSpec& spec, const Point& p);
/// g(W(d_i, U)U, d_j) = W_j0i0 from the generic engine, over fiber indices.
TensorValue engine_electric_weyl(const TensorValue& weyl04);

/// max |g(W(x,y)z, U)| over fiber coordinate directions.
double mixed_weyl_check(const WarpedProductSpec& spec, const Point& p);

/// Max residual of g(W(x,y)z,w) = g(FW(x,y)z,w) - 1/((n-2)(n-3)) [g(y,w)FRic0(x,z) - g(x,w)FRic0(y,z)
/// + g(x,z)FRic0(y,w) - g(y,z)FRic0(x,w)], relative to 1 + ||W||. The fiber Weyl term is dropped for n = 4.
double fiber_weyl_relation(const WarpedProductSpec& spec, const Point& p);

/// Pointwise ||FRic - (Fr/(n-1)) g_F|| / (1 + ||FRic||).
double fiber_einstein_residual(const WarpedProductSpec& spec, const Point& p);

struct Theorem11Point {
    double fiber_einstein = 0.0;   // condition (i)
    double electric_weyl = 0.0;    // condition (ii), ||W(x,U,U,y)||
    double div_weyl = 0.0;         // condition (iii)
    double mixed_weyl = 0.0;       // g(W(x,y,z),U)
    double weyl_along_U = 0.0;     // ||W(.,.,U)||
    double weyl_norm = 0.0;
    double bach_norm = 0.0;
    double riemann_norm = 0.0;
    QuasiEinsteinFit quasi_einstein;
    double U_fiber_part = 0.0;     // |U_fiber| / |U| when the fit has a direction
    bool conditions[3] = {false, false, false};
    bool conditions_agree = false;
    bool weakly_cf_along_U = false;
    bool quasi_einstein_along_t = false;
    bool bach_flat = false;
};

struct Theorem11Report {
    std::string label;
    std::vector<Theorem11Point> points;
    Verdict condition[3];
    Verdict weakly_cf_along_U;
    Verdict quasi_einstein_along_t;
    Verdict bach_flat;
    bool conditions_agree = true;
    /// conditions true at every point => conclusions hold at every point
    bool conclusions_follow = true;
    double max_weyl_norm = 0.0;
};

Theorem11Report theorem_1_1_verify(const WarpedProductSpec& spec, std::span<const Point> points,
                                   const Tolerances& tol = {});

}  // namespace curvlab
