#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "lsk/minkowski.hpp"
#include "lsk/support.hpp"

namespace lsk {

// ---------------------------------------------------------------------------
// Explicit surfaces
// ---------------------------------------------------------------------------

struct Hyperboloid {};

struct Semitrough {};

struct Glide {
    double lambda = 1.0;
};

struct ParabolicInvariant {
    double eps = 0.5; // eps = 0 is the hyperboloid
};

struct HolderBarrier {
    double eps = 1.0;
    double alpha = 0.5; // in (0,1)
    double beta = 0.5;  // in (0,1)
    double gamma = 0.25; // in (0,1), must satisfy gamma < 1 - alpha
    double M = 4.0;

    void validate() const;
};

struct CuspComparison {
    double eps = 1.0;
};

using ExplicitSurface = std::variant<Hyperboloid, Semitrough, Glide,
                                     ParabolicInvariant, HolderBarrier,
                                     CuspComparison>;

std::string family_name(const ExplicitSurface& s);
ExplicitSurface parse_family(const std::string& name, double lambda, double eps,
                             double alpha, double beta, double gamma, double M);

// ---------------------------------------------------------------------------
// Parametrizations
// ---------------------------------------------------------------------------

/// X(t,s) = (t - coth t, sinh s / sinh t, cosh s / sinh t), t > 0.
Vec3 eval_semitrough(double t, double s);

/// X^lambda(t,s); lambda = 0 reduces to the semitrough.
Vec3 eval_glide(double lambda, double t, double s);

/// Immersion chart with optional analytic derivatives. When jac/hess are
/// absent, consumers fall back to central differences of eval/jac. Charts
/// whose first form suffers catastrophic cancellation in <jac, jac> (near-null
/// tangents) also provide closed-form metric/Christoffel callbacks.
struct ImmersionChart {
    std::function<Vec3(double, double)> eval;
    std::function<std::array<Vec3, 2>(double, double)> jac;  // X_u, X_v
    std::function<std::array<Vec3, 3>(double, double)> hess; // X_uu, X_uv, X_vv
    // optional stable first form {E, F, G}
    std::function<std::array<double, 3>(double, double)> metric;
    // optional stable Christoffel symbols
    // {G^1_11, G^1_12, G^1_22, G^2_11, G^2_12, G^2_22}
    std::function<std::array<double, 6>(double, double)> christoffels;
    // optional exact first-form square E du^2 + 2F du dv + G dv^2
    std::function<double(double, double, double, double)> speed2;
    double u_min = -1e18, u_max = 1e18;
    double v_min = -1e18, v_max = 1e18;
    std::string name;

    bool in_domain(double u, double v) const {
        return u > u_min && u < u_max && v > v_min && v < v_max;
    }
    std::array<Vec3, 2> jacobian(double u, double v) const;
    std::array<Vec3, 3> hessian(double u, double v) const;
    std::array<double, 3> first_form(double u, double v) const;
};

/// Analytic chart of each family. Hyperboloid and CuspComparison are graph /
/// profile charts; Semitrough and Glide use (t,s); the support-defined
/// families use the inverse-Gauss-map chart over the half-plane (the
/// HolderBarrier chart is restricted to x > 0, where u is C^2).
ImmersionChart make_chart(const ExplicitSurface& s);

// ---------------------------------------------------------------------------
// Support functions of the families
// ---------------------------------------------------------------------------

/// Parabolic null support function of Sigma_lambda in the xi chart (point at
/// infinity pi/2): -2 lambda |x| log|x| for x < 0, 0 at x = 0, +inf for x > 0.
ExtReal glide_support_closed_form(double lambda, double x);

/// u(x,y) = f(y) with f' = -2 sqrt(1 + eps^2 y^2); eps = 0 gives u = -2y.
double parabolic_family_u(double eps, double x, double y);
double parabolic_family_f1(double eps, double y); // f'
double parabolic_family_f2(double eps, double y); // f''
double parabolic_family_f3(double eps, double y); // f'''

struct HolderDerivs {
    double u, ux, uy, uxx, uxy, uyy;
};

/// Value and analytic derivatives of u = -M y^beta + eps |x|^{2-alpha}(1+y)^{-gamma}.
/// u_xx (and the full record) is undefined on the axis x = 0: throws
/// DerivativeUndefined there. One-sided first derivatives at x = 0 vanish.
HolderDerivs holder_barrier_u(const HolderBarrier& p, double x, double y);

/// Elliptic null support function of a family, in closed form.
NullSupportFn family_support(const ExplicitSurface& s);

/// Parabolic support data of the support-defined families (zeta chart).
ParabolicSupportFn family_parabolic_support(const ExplicitSurface& s);

// ---------------------------------------------------------------------------
// Cusp comparison profile (Lorentzian-cylindrical coordinates)
// ---------------------------------------------------------------------------

double cusp_profile_rho(double eps, double alpha);
/// rho^2 - (drho/dalpha)^2, the squared speed of the profile curve.
double cusp_profile_speed2(double eps, double alpha);

// ---------------------------------------------------------------------------
// Graph heights
// ---------------------------------------------------------------------------

struct GraphHeightOptions {
    double accuracy = 1e-10;
    double window = 60.0; // parameter bracketing window half-width
};

/// Height z with (x,y,z) on the surface. Closed form for the hyperboloid,
/// bisection on the profile parameter for the parametrized families, and a
/// support-plane envelope (Gamma-reconstruction) for the support-defined
/// ones. Throws ChartExhausted when the bracketing window fails.
double graph_height(const ExplicitSurface& s, double x, double y,
                    const GraphHeightOptions& opts = {});

} // namespace lsk
