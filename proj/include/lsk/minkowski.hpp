#pragma once

#include <array>
#include <cmath>
#include <optional>

#include "lsk/errors.hpp"

namespace lsk {

/// Point/vector of R^{2,1}. The bilinear form is xx' + yy' - zz';
/// z is the time coordinate.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    friend Vec3 operator*(double s, const Vec3& v) { return v * s; }

    double euclid_norm2() const { return x * x + y * y + z * z; }
};

/// Minkowski bilinear form.
inline double inner(const Vec3& u, const Vec3& v) {
    return u.x * v.x + u.y * v.y - u.z * v.z;
}

/// Euclidean distance, used only for tolerances and bracketing.
inline double euclid_dist(const Vec3& u, const Vec3& v) {
    return std::sqrt((u - v).euclid_norm2());
}

enum class CausalKind { spacelike, null, timelike, zero };

struct CausalClass {
    CausalKind kind;
    bool future = false; // meaningful for causal (null/timelike/zero) vectors
};

/// Sign of inner(v,v) with a relative zero threshold against the Euclidean
/// square norm, so analytically null vectors classify stably.
CausalClass classify(const Vec3& v, double rel_tol = 1e-14);

/// Null direction theta on R/2piZ with the associated vector
/// (cos theta, sin theta, 1).
struct NullDirection {
    double theta = 0.0;

    Vec3 vec() const { return {std::cos(theta), std::sin(theta), 1.0}; }
};

/// Normalize an angle to (-pi, pi].
double normalize_angle(double theta);

/// Distance in R/2piZ.
double angle_dist(double a, double b);

inline Vec3 theta_vec(double theta) {
    return {std::cos(theta), std::sin(theta), 1.0};
}

struct Mat3 {
    // row-major
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    double operator()(int r, int c) const { return m[3 * r + c]; }
    double& operator()(int r, int c) { return m[3 * r + c]; }

    Vec3 apply(const Vec3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }
    Mat3 mul(const Mat3& o) const;
    Mat3 transpose() const;
    static Mat3 identity() { return {}; }
};

/// Affine isometry p -> L p + t of Minkowski space, stored as (matrix,
/// translation) so that composition needs no case analysis. The linear part
/// must satisfy L^T eta L = eta with eta = diag(1,1,-1).
struct Isometry {
    Mat3 L;
    Vec3 t;

    Vec3 apply(const Vec3& p) const { return L.apply(p) + t; }
    Isometry compose(const Isometry& o) const; // this ∘ o
    Isometry inverse() const;

    /// Max entrywise residual of L^T eta L - eta.
    double isometry_residual() const;
};

/// Lorentz boost of rapidity delta in the (x,z) plane.
Isometry boost(double delta);

/// Rotation about the z-axis by angle.
Isometry rotation_z(double angle);

/// Reflection in the plane y = 0, diag(1,-1,1).
Isometry reflection_y();

/// One-parameter linear parabolic group fixing (-1,0,1). Satisfies
/// L_t ∘ zeta(x,y) = zeta(x+t,y) for the half-plane chart zeta.
Isometry parabolic_isometry(double t);

/// Glide group A^lambda_s: hyperbolic rotation by s in the (y,z) plane
/// composed with translation by (lambda*s, 0, 0).
Isometry glide_isometry(double lambda, double s);

/// sqrt(inner(q-p, q-p)). Throws TimelikeSeparation if the separation is
/// timelike beyond tolerance; clamps tiny negative values to zero.
double extrinsic_distance(const Vec3& p, const Vec3& q, double tol = 1e-12);

/// Spacelike line {base + r dir}; dir is normalized to unit spacelike length
/// on construction.
struct SpacelikeLine {
    Vec3 base;
    Vec3 dir;

    SpacelikeLine(const Vec3& base_, const Vec3& dir_);
};

/// Null plane {p : inner(p, theta_vec) = level}.
struct NullPlane {
    NullDirection theta;
    double level = 0.0;
};

/// Adapted frame for a spacelike line: e0 unit tangent, e_plus/e_minus
/// future null with <e_plus, e_minus> = -1/2, both orthogonal to e0.
/// e_plus is the one with larger z-component (ties broken toward positive z).
struct NullFrame {
    Vec3 e_minus;
    Vec3 e_zero;
    Vec3 e_plus;

    /// Components (a, b, c) of w = a e_minus + b e_zero + c e_plus.
    std::array<double, 3> components(const Vec3& w) const;
};

NullFrame line_frame(const SpacelikeLine& L);

/// Timelike distance from p to the line: sqrt(a c) of the components of
/// p - (projection onto L) in the adapted null frame. Throws
/// NotTimelikeSeparated when p is spacelike-separated from every point of L.
double timelike_dist_to_line(const Vec3& p, const SpacelikeLine& L);

} // namespace lsk
