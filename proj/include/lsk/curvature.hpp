#pragma once

#include "lsk/families.hpp"
#include "lsk/minkowski.hpp"
#include "lsk/support.hpp"

namespace lsk {

/// Symmetric 2x2 matrix (1/2)[[y u_xx - u_y, y u_xy], [y u_xy, y u_yy - u_y]].
struct AMatrix {
    double a11 = 0, a12 = 0, a22 = 0;

    double det() const { return a11 * a22 - a12 * a12; }
    double trace() const { return a11 + a22; }
    bool positive_semidefinite(double tol = 0.0) const {
        return a11 >= -tol && a22 >= -tol && det() >= -tol;
    }
    bool positive_definite() const { return a11 > 0 && det() > 0; }
    AMatrix inverse() const;
};

/// F(u) = (y u_xx - u_y)(y u_yy - u_y) - y^2 u_xy^2 = -4/K at Gamma(x,y).
double F_operator(const ParabolicSupportFn& u, double x, double y);

AMatrix a_matrix(const ParabolicSupportFn& u, double x, double y);

/// Point Gamma(x,y) on the surface: the unique solution of
/// <Gamma, zeta> = u, <Gamma, zeta_x> = u_x, <Gamma, zeta_y> = u_y,
/// solved through the Minkowski Gram matrix of the frame {zeta, zeta_x, zeta_y}.
/// Throws SingularSystem for y <= 0 (the frame degenerates on the boundary).
Vec3 inverse_gauss_map(const ParabolicSupportFn& u, double x, double y);

struct CurvatureReport {
    Vec3 gamma;
    AMatrix A;
    double F_value = 0;
    double K = 0;
    AMatrix shape_operator; // representative matrix A^{-1} in {zeta_x, zeta_y}
};

/// K = -4/F at Gamma(x,y). Throws FlatOrDegenerate when F <= tol.
CurvatureReport curvature_from_support(const ParabolicSupportFn& u, double x,
                                       double y, double tol = 1e-12);

struct FundamentalForms {
    double E = 0, F = 0, G = 0; // first form
    double e = 0, f = 0, g = 0; // second form, future-normal convention
    double K = 0;               // -(eg - f^2)/(EG - F^2)
    Vec3 normal;                // future unit normal
};

/// First and second fundamental forms of an immersion chart at (u,v), with
/// II = -<D^2 X, N> for the future unit normal N. Uses analytic derivatives
/// when the chart provides them. Throws DegenerateMetric when EG - F^2 <= tol.
FundamentalForms fundamental_forms(const ImmersionChart& chart, double u,
                                   double v, double tol = 1e-14);

} // namespace lsk
