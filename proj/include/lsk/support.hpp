#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lsk/extreal.hpp"
#include "lsk/minkowski.hpp"

namespace lsk {

// ---------------------------------------------------------------------------
// Half-plane charts of the null planes x+z=2 (and its rotations)
// ---------------------------------------------------------------------------

/// Chart of the null plane x+z = 2, omitting the direction at infinity pi:
/// zeta(x,y) = (1 - x^2 - y^2, 2x, 1 + x^2 + y^2), y >= 0.
Vec3 zeta(double x, double y);
Vec3 zeta_x(double x, double y);
Vec3 zeta_y(double x, double y);

/// Chart with point at infinity pi/2: xi(x,y) = (2x, -1+x^2+y^2, 1+x^2+y^2).
Vec3 xi(double x, double y);

/// Chart with point at infinity -pi/2: xi_hat = reflection_y applied to xi.
Vec3 xi_hat(double x, double y);

enum class ChartKind { zeta, xi, xi_hat };

/// Boundary correspondence of a chart: the null direction of chart(x, 0).
/// For zeta, theta = 2 atan(x); for xi, theta = -pi/2 + 2 atan(x); for xi_hat,
/// theta = pi/2 - 2 atan(x). Inverses map theta to the boundary coordinate.
double chart_boundary_theta(ChartKind kind, double x);
double chart_boundary_x(ChartKind kind, double theta);
/// Direction omitted by the chart (value "at infinity").
double chart_infinity_theta(ChartKind kind);
Vec3 chart_point(ChartKind kind, double x, double y);

/// Chart with an arbitrary point at infinity, realized by conjugating zeta
/// with a z-axis rotation; rotated_zeta(pi, .) is zeta itself and
/// rotated_zeta(pi/2, .) is xi.
Vec3 rotated_zeta(double theta_at_infinity, double x, double y);

// ---------------------------------------------------------------------------
// Null support functions on the circle
// ---------------------------------------------------------------------------

/// Extended-real support data on S^1: theta -> sup_p <p, theta_vec>.
/// Either a closed form or a sampled grid (which is lsc-regularized and
/// checked finite at >= 3 directions on construction).
class NullSupportFn {
public:
    enum class Provenance { closed_form, sampled };

    /// min_finite is 3 per the duality hypotheses; envelope-only callers
    /// (two-plane wedges) may relax it to 2.
    static NullSupportFn closed_form(std::string tag,
                                     std::function<ExtReal(double)> fn,
                                     int probe = 4096, int min_finite = 3);
    /// Sampled values at grid angles; a sample strictly above both finite
    /// neighbours (an isolated spike, which cannot be a liminf) is lowered to
    /// the neighbour interpolant plus grid slack; isolated low values are lsc
    /// and kept. Evaluation is nearest-sample.
    static NullSupportFn from_samples(std::vector<double> theta,
                                      std::vector<ExtReal> value,
                                      int min_finite = 3);

    ExtReal operator()(double theta) const;

    Provenance provenance() const { return provenance_; }
    const std::string& tag() const { return tag_; }
    const std::vector<double>& grid_theta() const { return grid_theta_; }
    const std::vector<ExtReal>& grid_value() const { return grid_value_; }
    int probe_size() const { return probe_; }

    /// Number of finite values over the declared probe grid.
    int finite_count() const;

private:
    NullSupportFn() = default;

    Provenance provenance_ = Provenance::closed_form;
    std::string tag_;
    std::function<ExtReal(double)> fn_;
    std::vector<double> grid_theta_;
    std::vector<ExtReal> grid_value_;
    int probe_ = 4096;
};

/// Null support plane of the surface in the direction theta. Throws
/// DomainError when phi(theta) = +inf (no support plane there).
NullPlane support_plane(const NullSupportFn& phi, double theta);

/// sup over the listed points of <p, theta_vec>; a lower bound for the null
/// support function of any surface containing the samples.
double null_support_from_points(const std::vector<Vec3>& points, double theta);

/// Build the sampled support function of a point cloud on a uniform grid.
NullSupportFn sampled_support(const std::vector<Vec3>& points, int grid = 4096);

// ---------------------------------------------------------------------------
// Parabolic support functions on the closed upper half-plane
// ---------------------------------------------------------------------------

/// Parabolic support data u(x,y) on {y >= 0} with a point at infinity,
/// optionally carrying analytic derivatives. Missing derivatives fall back to
/// central differences with step h = 1e-5 * max(1, y).
struct ParabolicSupportFn {
    std::function<ExtReal(double, double)> u;
    ChartKind chart = ChartKind::zeta;
    std::string tag;

    // optional analytic derivatives: {u_x, u_y} and {u_xx, u_xy, u_yy}
    std::function<std::array<double, 2>(double, double)> grad;
    std::function<std::array<double, 3>(double, double)> hess;

    ExtReal operator()(double x, double y) const { return u(x, y); }
    std::array<double, 2> gradient(double x, double y) const;
    std::array<double, 3> hessian(double x, double y) const;
    bool has_analytic_derivatives() const { return grad && hess; }
};

// ---------------------------------------------------------------------------
// Conversions and envelope operations
// ---------------------------------------------------------------------------

/// phi(theta) from a parabolic null support value: phi = psi(x)/(1+x^2) with
/// x the boundary coordinate of theta. Throws DomainError at the chart's
/// direction at infinity (use value_at_infinity there).
ExtReal parabolic_to_elliptic(const std::function<ExtReal(double)>& psi,
                              ChartKind kind, double theta);

/// psi(x) from an elliptic null support function: psi = (1+x^2) phi(theta(x)).
ExtReal elliptic_to_parabolic(const std::function<ExtReal(double)>& phi,
                              ChartKind kind, double x);

/// Interior conversion of dehomogenizations: s_ell at the disc point that the
/// chart point projects to equals u(x,y)/(1+x^2+y^2).
ExtReal parabolic_to_elliptic_interior(const ParabolicSupportFn& u, double x,
                                       double y);

struct ValueAtInfinity {
    ExtReal estimate;                  // upper estimate of the liminf
    std::vector<double> shell_radius;  // schedule actually used
    std::vector<ExtReal> shell_min;    // min over angular samples per shell
};

struct RadiusSchedule {
    double r0 = 1.0;
    double growth = 2.0;
    int shells = 24;
    int angular_samples = 181;
    int tail_window = 6; // shells entering the liminf estimate
};

/// Numerical liminf at infinity of u(x,y)/(1 + x^2 + y^2): min over angular
/// samples per expanding shell, estimate = inf over the tail shells. The
/// estimate is one-sided (an upper bound for the true liminf).
ValueAtInfinity value_at_infinity(const ParabolicSupportFn& u,
                                  const RadiusSchedule& sched = {});

/// Coefficients (c0, c1, c2) of the parabolic null support polynomial of a
/// point p = (a,b,c): f_p(x) = (a-c) + 2b x - (a+c) x^2.
std::array<double, 3> point_support_poly(const Vec3& p);

struct DodHeight {
    double z;        // lower-envelope height (a lower bound)
    double arg_theta; // maximizing direction on the probe grid
};

/// Height of the boundary of the domain of dependence over (x,y): the sup
/// over theta of x cos(theta) + y sin(theta) - phi(theta), taken over the
/// probe grid. Throws Unbounded when phi is finite at < 2 probe directions.
DodHeight dod_boundary_height(const NullSupportFn& phi, double x, double y);

/// Translation law: phi'(theta) = phi(theta) + <w, theta_vec>.
NullSupportFn translate_support(const NullSupportFn& phi, const Vec3& w);
/// Parabolic translation law: u'(x,y) = u(x,y) + <w, chart(x,y)>.
ParabolicSupportFn translate_support(const ParabolicSupportFn& u, const Vec3& w);

/// Homothety law for Sigma' = (1/lambda) Sigma: all values divided by lambda.
NullSupportFn scale_support(const NullSupportFn& phi, double lambda);
ParabolicSupportFn scale_support(const ParabolicSupportFn& u, double lambda);

// ---------------------------------------------------------------------------
// CSV import/export (columns: theta,value,is_infinite)
// ---------------------------------------------------------------------------

std::string support_to_csv(const NullSupportFn& phi, int grid = 0);
NullSupportFn support_from_csv(const std::string& csv);

} // namespace lsk
