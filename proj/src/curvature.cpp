#include "lsk/curvature.hpp"

namespace lsk {

AMatrix AMatrix::inverse() const {
    const double d = det();
    if (d == 0) throw SingularSystem("AMatrix::inverse: singular");
    return {a22 / d, -a12 / d, a11 / d};
}

AMatrix a_matrix(const ParabolicSupportFn& u, double x, double y) {
    const auto g = u.gradient(x, y);
    const auto h = u.hessian(x, y);
    return {0.5 * (y * h[0] - g[1]), 0.5 * y * h[1], 0.5 * (y * h[2] - g[1])};
}

double F_operator(const ParabolicSupportFn& u, double x, double y) {
    if (!(y > 0)) throw DomainError("F_operator: y <= 0");
    const auto g = u.gradient(x, y);
    const auto h = u.hessian(x, y);
    return (y * h[0] - g[1]) * (y * h[2] - g[1]) - y * y * h[1] * h[1];
}

Vec3 inverse_gauss_map(const ParabolicSupportFn& u, double x, double y) {
    if (!(y > 0))
        throw SingularSystem("inverse_gauss_map: frame degenerates for y <= 0");
    const ExtReal uv = u(x, y);
    if (uv.is_infinite())
        throw DomainError("inverse_gauss_map: u infinite at the point");
    const auto g = u.gradient(x, y);
    // Gram matrix of {zeta, zeta_x, zeta_y} is [[-4y^2,0,-4y],[0,4,0],[-4y,0,0]];
    // writing Gamma = a zeta + b zeta_x + c zeta_y gives the closed solution:
    const double a = -g[1] / (4 * y);
    const double b = g[0] / 4;
    const double c = (y * g[1] - uv.value()) / (4 * y);
    return a * zeta(x, y) + b * zeta_x(x, y) + c * zeta_y(x, y);
}

CurvatureReport curvature_from_support(const ParabolicSupportFn& u, double x,
                                       double y, double tol) {
    CurvatureReport r;
    r.A = a_matrix(u, x, y);
    r.F_value = 4.0 * r.A.det();
    if (r.F_value <= tol)
        throw FlatOrDegenerate("curvature_from_support: F(u) <= tolerance");
    r.K = -4.0 / r.F_value;
    r.gamma = inverse_gauss_map(u, x, y);
    r.shape_operator = r.A.inverse();
    return r;
}

FundamentalForms fundamental_forms(const ImmersionChart& chart, double u,
                                   double v, double tol) {
    FundamentalForms ff;
    const auto J = chart.jacobian(u, v);
    const auto m = chart.first_form(u, v);
    ff.E = m[0];
    ff.F = m[1];
    ff.G = m[2];
    const double det1 = ff.E * ff.G - ff.F * ff.F;
    if (det1 <= tol)
        throw DegenerateMetric("fundamental_forms: EG - F^2 <= tolerance");
    // future unit normal via the Minkowski cross product eta (Xu x Xv)
    Vec3 n{J[0].y * J[1].z - J[0].z * J[1].y, J[0].z * J[1].x - J[0].x * J[1].z,
           -(J[0].x * J[1].y - J[0].y * J[1].x)};
    const double n2 = inner(n, n);
    if (n2 >= 0) throw DegenerateMetric("fundamental_forms: normal not timelike");
    n = n / std::sqrt(-n2);
    if (n.z < 0) n = -n;
    ff.normal = n;
    const auto H = chart.hessian(u, v);
    ff.e = -inner(H[0], n);
    ff.f = -inner(H[1], n);
    ff.g = -inner(H[2], n);
    ff.K = -(ff.e * ff.g - ff.f * ff.f) / det1;
    return ff;
}

} // namespace lsk
