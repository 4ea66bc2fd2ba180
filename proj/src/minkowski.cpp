#include "lsk/minkowski.hpp"

#include <algorithm>

namespace lsk {

CausalClass classify(const Vec3& v, double rel_tol) {
    const double q = inner(v, v);
    const double scale = v.euclid_norm2();
    if (scale == 0.0) return {CausalKind::zero, true};
    CausalClass c{};
    if (std::abs(q) <= rel_tol * scale)
        c.kind = CausalKind::null;
    else if (q > 0.0)
        c.kind = CausalKind::spacelike;
    else
        c.kind = CausalKind::timelike;
    c.future = v.z >= 0.0;
    return c;
}

double normalize_angle(double theta) {
    const double two_pi = 2.0 * M_PI;
    double t = std::fmod(theta, two_pi);
    if (t <= -M_PI) t += two_pi;
    if (t > M_PI) t -= two_pi;
    return t;
}

double angle_dist(double a, double b) {
    return std::abs(normalize_angle(a - b));
}

Mat3 Mat3::mul(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
            r(i, j) = s;
        }
    return r;
}

Mat3 Mat3::transpose() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
    return r;
}

Isometry Isometry::compose(const Isometry& o) const {
    return {L.mul(o.L), L.apply(o.t) + t};
}

Isometry Isometry::inverse() const {
    // L^{-1} = eta L^T eta for Lorentz matrices.
    static const Mat3 eta{{1, 0, 0, 0, 1, 0, 0, 0, -1}};
    Mat3 Linv = eta.mul(L.transpose()).mul(eta);
    return {Linv, -Linv.apply(t)};
}

double Isometry::isometry_residual() const {
    static const Mat3 eta{{1, 0, 0, 0, 1, 0, 0, 0, -1}};
    Mat3 g = L.transpose().mul(eta).mul(L);
    double r = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r = std::max(r, std::abs(g(i, j) - eta(i, j)));
    return r;
}

Isometry boost(double delta) {
    const double ch = std::cosh(delta), sh = std::sinh(delta);
    Isometry g;
    g.L = Mat3{{ch, 0, sh, 0, 1, 0, sh, 0, ch}};
    return g;
}

Isometry rotation_z(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    Isometry g;
    g.L = Mat3{{c, -s, 0, s, c, 0, 0, 0, 1}};
    return g;
}

Isometry reflection_y() {
    Isometry g;
    g.L = Mat3{{1, 0, 0, 0, -1, 0, 0, 0, 1}};
    return g;
}

Isometry parabolic_isometry(double t) {
    // Fixes (-1,0,1), sends (1,0,1) -> (1-t^2, 2t, 1+t^2) and
    // (0,1,0) -> (-t,1,t); the latter is forced by L^T eta L = eta and the
    // equivariance with the zeta chart.
    const double h = 0.5 * t * t;
    Isometry g;
    g.L = Mat3{{1 - h, -t, -h, t, 1, t, h, t, 1 + h}};
    return g;
}

Isometry glide_isometry(double lambda, double s) {
    const double ch = std::cosh(s), sh = std::sinh(s);
    Isometry g;
    g.L = Mat3{{1, 0, 0, 0, ch, sh, 0, sh, ch}};
    g.t = {lambda * s, 0, 0};
    return g;
}

double extrinsic_distance(const Vec3& p, const Vec3& q, double tol) {
    const Vec3 d = q - p;
    const double q2 = inner(d, d);
    if (q2 < -tol * std::max(1.0, d.euclid_norm2()))
        throw TimelikeSeparation("extrinsic_distance: timelike separation");
    return std::sqrt(std::max(0.0, q2));
}

SpacelikeLine::SpacelikeLine(const Vec3& base_, const Vec3& dir_) : base(base_) {
    const double n2 = inner(dir_, dir_);
    if (n2 <= 0.0) throw DomainError("SpacelikeLine: direction not spacelike");
    dir = dir_ / std::sqrt(n2);
}

NullFrame line_frame(const SpacelikeLine& L) {
    const Vec3 d = L.dir; // unit spacelike
    // Future timelike unit vector in d-perp: project (0,0,1) off d.
    Vec3 T{d.z * d.x, d.z * d.y, 1.0 + d.z * d.z};
    T = T / std::sqrt(-inner(T, T));
    // Unit spacelike vector completing {d, T}: Minkowski cross, w = eta (u x v).
    Vec3 S{d.y * T.z - d.z * T.y, d.z * T.x - d.x * T.z,
           -(d.x * T.y - d.y * T.x)};
    S = S / std::sqrt(inner(S, S));
    Vec3 np = (T + S) * 0.5;
    Vec3 nm = (T - S) * 0.5;
    if (np.z < nm.z) std::swap(np, nm);
    return NullFrame{nm, d, np};
}

std::array<double, 3> NullFrame::components(const Vec3& w) const {
    // <e_plus, e_minus> = -1/2, <e0,e0> = 1, null legs orthogonal to e0.
    const double a = -2.0 * inner(w, e_plus);
    const double c = -2.0 * inner(w, e_minus);
    const double b = inner(w, e_zero);
    return {a, b, c};
}

double timelike_dist_to_line(const Vec3& p, const SpacelikeLine& L) {
    const NullFrame f = line_frame(L);
    const auto [a, b, c] = f.components(p - L.base);
    const double ac = a * c;
    if (ac <= 0.0)
        throw NotTimelikeSeparated("timelike_dist_to_line: point not in the timelike future/past of the line");
    return std::sqrt(ac);
}

} // namespace lsk
