#include "lsk/families.hpp"

#include <algorithm>
#include <cmath>

#include "lsk/numerics.hpp"

namespace lsk {

void HolderBarrier::validate() const {
    if (!(eps > 0) || !(alpha > 0 && alpha < 1) || !(beta > 0 && beta < 1) ||
        !(gamma > 0 && gamma < 1) || !(M > 0))
        throw DomainError("HolderBarrier: parameters out of range");
    if (!(gamma < 1 - alpha))
        throw DomainError("HolderBarrier: need gamma < 1 - alpha");
}

std::string family_name(const ExplicitSurface& s) {
    struct V {
        std::string operator()(const Hyperboloid&) const { return "hyperboloid"; }
        std::string operator()(const Semitrough&) const { return "semitrough"; }
        std::string operator()(const Glide&) const { return "glide"; }
        std::string operator()(const ParabolicInvariant&) const { return "parabolic"; }
        std::string operator()(const HolderBarrier&) const { return "holder-barrier"; }
        std::string operator()(const CuspComparison&) const { return "cusp-comparison"; }
    };
    return std::visit(V{}, s);
}

ExplicitSurface parse_family(const std::string& name, double lambda, double eps,
                             double alpha, double beta, double gamma, double M) {
    if (name == "hyperboloid") return Hyperboloid{};
    if (name == "semitrough") return Semitrough{};
    if (name == "glide") return Glide{lambda};
    if (name == "parabolic") {
        if (eps < 0) throw ConfigError("parabolic family: eps must be >= 0");
        return ParabolicInvariant{eps};
    }
    if (name == "holder-barrier") {
        HolderBarrier b{eps, alpha, beta, gamma, M};
        try {
            b.validate();
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
        return b;
    }
    if (name == "cusp-comparison") {
        if (!(eps > 0)) throw ConfigError("cusp-comparison: eps must be > 0");
        return CuspComparison{eps};
    }
    throw ConfigError("unknown family: " + name);
}

// ---------------------------------------------------------------------------
// Parametrizations
// ---------------------------------------------------------------------------

Vec3 eval_semitrough(double t, double s) {
    if (!(t > 0)) throw DomainError("eval_semitrough: t <= 0");
    const double sht = std::sinh(t);
    return {t - std::cosh(t) / sht, std::sinh(s) / sht, std::cosh(s) / sht};
}

Vec3 eval_glide(double lambda, double t, double s) {
    if (!(t > 0)) throw DomainError("eval_glide: t <= 0");
    const double c = std::sqrt(1 + lambda * lambda);
    const double sht = std::sinh(t);
    return {c * (t - std::cosh(t) / sht) + lambda * s, c * std::sinh(s) / sht,
            c * std::cosh(s) / sht};
}

std::array<Vec3, 2> ImmersionChart::jacobian(double u, double v) const {
    if (jac) return jac(u, v);
    const double h = 1e-6;
    return {(eval(u + h, v) - eval(u - h, v)) / (2 * h),
            (eval(u, v + h) - eval(u, v - h)) / (2 * h)};
}

std::array<double, 3> ImmersionChart::first_form(double u, double v) const {
    if (metric) return metric(u, v);
    const auto J = jacobian(u, v);
    return {inner(J[0], J[0]), inner(J[0], J[1]), inner(J[1], J[1])};
}

std::array<Vec3, 3> ImmersionChart::hessian(double u, double v) const {
    if (hess) return hess(u, v);
    const double h = 1e-5;
    if (jac) {
        auto jp = jac(u + h, v), jm = jac(u - h, v);
        auto kp = jac(u, v + h), km = jac(u, v - h);
        return {(jp[0] - jm[0]) / (2 * h),
                ((jp[1] - jm[1]) / (2 * h) + (kp[0] - km[0]) / (2 * h)) * 0.5,
                (kp[1] - km[1]) / (2 * h)};
    }
    const Vec3 c = eval(u, v);
    return {(eval(u + h, v) - 2 * c + eval(u - h, v)) / (h * h),
            (eval(u + h, v + h) - eval(u + h, v - h) - eval(u - h, v + h) +
             eval(u - h, v - h)) /
                (4 * h * h),
            (eval(u, v + h) - 2 * c + eval(u, v - h)) / (h * h)};
}

namespace {

ImmersionChart hyperboloid_chart() {
    ImmersionChart c;
    c.name = "hyperboloid-graph";
    c.eval = [](double x, double y) {
        return Vec3{x, y, std::sqrt(1 + x * x + y * y)};
    };
    c.jac = [](double x, double y) {
        const double w = std::sqrt(1 + x * x + y * y);
        return std::array<Vec3, 2>{Vec3{1, 0, x / w}, Vec3{0, 1, y / w}};
    };
    c.hess = [](double x, double y) {
        const double w = std::sqrt(1 + x * x + y * y);
        const double w3 = w * w * w;
        return std::array<Vec3, 3>{Vec3{0, 0, (1 + y * y) / w3},
                                   Vec3{0, 0, -x * y / w3},
                                   Vec3{0, 0, (1 + x * x) / w3}};
    };
    return c;
}

// Overflow-stable hyperbolic ratios: sinh(s)/sinh(t) and cosh(s)/sinh(t)
// written through exp(|s| - t), valid for every t > 0 and s. Geodesics with a
// large length budget need them: the raw sinh/cosh overflow near 710.
namespace stable {

double ratio_sinh(double s, double t) {
    if (s == 0) return 0;
    const double as = std::abs(s);
    const double num = -std::expm1(-2 * as);
    const double den = -std::expm1(-2 * t);
    return std::copysign(std::exp(as - t) * num / den, s);
}

double ratio_cosh(double s, double t) {
    const double as = std::abs(s);
    const double num = 1 + std::exp(-2 * as);
    const double den = -std::expm1(-2 * t);
    return std::exp(as - t) * num / den;
}

double coth(double t) { return 1.0 / std::tanh(t); }

double csch(double t) {
    // 2 e^{-t} / (1 - e^{-2t})
    return 2 * std::exp(-t) / -std::expm1(-2 * t);
}

} // namespace stable

ImmersionChart glide_chart(double lambda) {
    const double c0 = std::sqrt(1 + lambda * lambda);
    ImmersionChart c;
    c.name = lambda == 0 ? "semitrough" : "glide";
    c.u_min = 0;
    c.u_max = 1e8;
    c.v_min = -1e8;
    c.v_max = 1e8;
    c.eval = [c0, lambda](double t, double s) {
        if (!(t > 0)) throw DomainError("glide chart: t <= 0");
        return Vec3{c0 * (t - stable::coth(t)) + lambda * s,
                    c0 * stable::ratio_sinh(s, t), c0 * stable::ratio_cosh(s, t)};
    };
    c.jac = [c0, lambda](double t, double s) {
        const double cth = stable::coth(t);
        const double rs = stable::ratio_sinh(s, t), rc = stable::ratio_cosh(s, t);
        return std::array<Vec3, 2>{
            Vec3{c0 * cth * cth, -c0 * cth * rs, -c0 * cth * rc},
            Vec3{lambda, c0 * rc, c0 * rs}};
    };
    c.hess = [c0](double t, double s) {
        const double cth = stable::coth(t), csc = stable::csch(t);
        const double rs = stable::ratio_sinh(s, t), rc = stable::ratio_cosh(s, t);
        const double q = csc * csc + cth * cth; // (1 + cosh^2 t)/sinh^2 t
        return std::array<Vec3, 3>{Vec3{-2 * c0 * cth * csc * csc, c0 * rs * q,
                                        c0 * rc * q},
                                   Vec3{0, -c0 * cth * rc, -c0 * cth * rs},
                                   Vec3{0, c0 * rs, c0 * rc}};
    };
    // The first form depends on t only; <jac, jac> cancels catastrophically
    // for near-null tangents, so hand out the closed forms.
    c.metric = [c0, lambda](double t, double) {
        const double cth2 = std::pow(stable::coth(t), 2);
        const double csc2 = std::pow(stable::csch(t), 2);
        return std::array<double, 3>{c0 * c0 * cth2, lambda * c0 * cth2,
                                     lambda * lambda * cth2 + csc2};
    };
    c.christoffels = [c0, lambda](double t, double) {
        const double cth = stable::coth(t), csc = stable::csch(t);
        const double l2 = lambda * lambda;
        return std::array<double, 6>{
            l2 * cth - csc * csc / cth, // G^1_11
            lambda * c0 * cth,          // G^1_12
            l2 * cth + csc * csc / cth, // G^1_22
            -lambda * c0 * cth,         // G^2_11
            -c0 * c0 * cth,             // G^2_12
            -lambda * c0 * cth          // G^2_22
        };
    };
    // factored first form coth^2 (c du + lambda dv)^2 + csch^2 dv^2: exact
    // along the near-null escape directions
    c.speed2 = [c0, lambda](double t, double, double du, double dv) {
        const double a = stable::coth(t) * (c0 * du + lambda * dv);
        const double b = stable::csch(t) * dv;
        return a * a + b * b;
    };
    return c;
}

// Inverse-Gauss-map chart of a y-invariant parabolic support function
// u(x,y) = f(y): Gamma = a(y) zeta + c(y) zeta_y with a = -f'/4y,
// c = (y f' - f)/4y. Analytic up to second derivatives via f',f'',f'''.
ImmersionChart parabolic_gamma_chart(double eps) {
    ImmersionChart c;
    c.name = "parabolic-gamma";
    c.v_min = 0;
    c.v_max = 1e6;
    auto f = [eps](double y) { return parabolic_family_u(eps, 0, y); };
    auto f1 = [eps](double y) { return parabolic_family_f1(eps, y); };
    auto f2 = [eps](double y) { return parabolic_family_f2(eps, y); };
    auto f3 = [eps](double y) { return parabolic_family_f3(eps, y); };
    c.eval = [f, f1](double x, double y) {
        const double a = -f1(y) / (4 * y);
        const double cc = (y * f1(y) - f(y)) / (4 * y);
        const double q = x * x + y * y;
        return Vec3{a * (1 - q) - 2 * y * cc, 2 * a * x, a * (1 + q) + 2 * y * cc};
    };
    c.jac = [f, f1, f2](double x, double y) {
        const double a = -f1(y) / (4 * y);
        const double ap = -f2(y) / (4 * y) + f1(y) / (4 * y * y);
        const double cc = f1(y) / 4 - f(y) / (4 * y);
        const double cp = f2(y) / 4 - f1(y) / (4 * y) + f(y) / (4 * y * y);
        const double q = x * x + y * y;
        const double yc1 = cc + y * cp; // (y c)'
        Vec3 gx{-2 * a * x, 2 * a, 2 * a * x};
        Vec3 gy{ap * (1 - q) - 2 * a * y - 2 * yc1, 2 * ap * x,
                ap * (1 + q) + 2 * a * y + 2 * yc1};
        return std::array<Vec3, 2>{gx, gy};
    };
    c.hess = [f, f1, f2, f3](double x, double y) {
        const double a = -f1(y) / (4 * y);
        const double ap = -f2(y) / (4 * y) + f1(y) / (4 * y * y);
        const double app =
            -f3(y) / (4 * y) + f2(y) / (2 * y * y) - f1(y) / (2 * y * y * y);
        const double cp = f2(y) / 4 - f1(y) / (4 * y) + f(y) / (4 * y * y);
        const double cpp = f3(y) / 4 - f2(y) / (4 * y) + f1(y) / (2 * y * y) -
                           f(y) / (2 * y * y * y);
        const double q = x * x + y * y;
        const double yc2 = 2 * cp + y * cpp; // (y c)''
        Vec3 gxx{-2 * a, 0, 2 * a};
        Vec3 gxy{-2 * ap * x, 2 * ap, 2 * ap * x};
        Vec3 gyy{app * (1 - q) - 4 * ap * y - 2 * a - 2 * yc2, 2 * app * x,
                 app * (1 + q) + 4 * ap * y + 2 * a + 2 * yc2};
        return std::array<Vec3, 3>{gxx, gxy, gyy};
    };
    return c;
}

// Third partials of the barrier u, needed for the analytic hessian of its
// inverse-Gauss-map chart.
struct HolderThird {
    double uxxx, uxxy, uxyy, uyyy;
};

HolderThird holder_barrier_third(const HolderBarrier& p, double x, double y) {
    const double ax = std::abs(x), sx = x > 0 ? 1.0 : -1.0;
    const double e = p.eps, al = p.alpha, ga = p.gamma;
    const double P = e * std::pow(ax, 2 - al);
    HolderThird t;
    t.uxxx = -e * (2 - al) * (1 - al) * al * sx * std::pow(ax, -1 - al) *
             std::pow(1 + y, -ga);
    t.uxxy = -e * (2 - al) * (1 - al) * ga * std::pow(ax, -al) *
             std::pow(1 + y, -1 - ga);
    t.uxyy = e * (2 - al) * ga * (1 + ga) * sx * std::pow(ax, 1 - al) *
             std::pow(1 + y, -2 - ga);
    t.uyyy = -p.M * p.beta * (p.beta - 1) * (p.beta - 2) * std::pow(y, p.beta - 3) -
             P * ga * (1 + ga) * (2 + ga) * std::pow(1 + y, -3 - ga);
    return t;
}

// Inverse-Gauss-map chart of the Hoelder barrier on the half chart x > 0,
// where u is C^2. Gamma = a zeta + b zeta_x + c zeta_y.
ImmersionChart holder_gamma_chart(const HolderBarrier& p) {
    p.validate();
    ImmersionChart c;
    c.name = "holder-gamma";
    // u is not C^2 on the axis; stop a safe margin before the chart
    // parametrization degenerates there
    c.u_min = 1e-8;
    c.u_max = 1e6;
    c.v_min = 1e-8;
    c.v_max = 1e6;
    auto coeffs = [p](double x, double y) {
        const HolderDerivs d = holder_barrier_u(p, x, y);
        const double a = -d.uy / (4 * y);
        const double b = d.ux / 4;
        const double cc = (y * d.uy - d.u) / (4 * y);
        return std::array<double, 3>{a, b, cc};
    };
    c.eval = [coeffs](double x, double y) {
        auto [a, b, cc] = coeffs(x, y);
        return a * zeta(x, y) + b * zeta_x(x, y) + cc * zeta_y(x, y);
    };
    c.jac = [p](double x, double y) {
        const HolderDerivs d = holder_barrier_u(p, x, y);
        const double a = -d.uy / (4 * y);
        const double b = d.ux / 4;
        const double cc = (y * d.uy - d.u) / (4 * y);
        const double ax = -d.uxy / (4 * y);
        const double ay = -d.uyy / (4 * y) + d.uy / (4 * y * y);
        const double bx = d.uxx / 4;
        const double by = d.uxy / 4;
        const double cx = (y * d.uxy - d.ux) / (4 * y);
        const double cy = d.uyy / 4 - d.uy / (4 * y) + d.u / (4 * y * y);
        // zeta_xx = zeta_yy = zeta_y / y, zeta_xy = 0
        Vec3 gx = ax * zeta(x, y) + (a + bx) * zeta_x(x, y) +
                  (cx + b / y) * zeta_y(x, y);
        Vec3 gy = ay * zeta(x, y) + by * zeta_x(x, y) +
                  (a + cy + cc / y) * zeta_y(x, y);
        return std::array<Vec3, 2>{gx, gy};
    };
    c.hess = [p](double x, double y) {
        const HolderDerivs d = holder_barrier_u(p, x, y);
        const HolderThird t = holder_barrier_third(p, x, y);
        const double y2 = y * y, y3 = y2 * y;
        const double a = -d.uy / (4 * y);
        const double b = d.ux / 4;
        const double cc = d.uy / 4 - d.u / (4 * y);
        const double ax = -d.uxy / (4 * y);
        const double ay = -d.uyy / (4 * y) + d.uy / (4 * y2);
        const double bx = d.uxx / 4;
        const double by = d.uxy / 4;
        const double cx = d.uxy / 4 - d.ux / (4 * y);
        const double cy = d.uyy / 4 - d.uy / (4 * y) + d.u / (4 * y2);
        const double axx = -t.uxxy / (4 * y);
        const double axy = -t.uxyy / (4 * y) + d.uxy / (4 * y2);
        const double ayy = -t.uyyy / (4 * y) + d.uyy / (2 * y2) - d.uy / (2 * y3);
        const double bxx = t.uxxx / 4;
        const double bxy = t.uxxy / 4;
        const double byy = t.uxyy / 4;
        const double cxx = t.uxxy / 4 - d.uxx / (4 * y);
        const double cxy = t.uxyy / 4 - d.uxy / (4 * y) + d.ux / (4 * y2);
        const double cyy =
            t.uyyy / 4 - d.uyy / (4 * y) + d.uy / (2 * y2) - d.u / (2 * y3);
        const Vec3 Z = zeta(x, y), Zx = zeta_x(x, y), Zy = zeta_y(x, y);
        // differentiate Gamma_x, Gamma_y once more (zeta_xx = zeta_yy =
        // zeta_y/y, zeta_xy = 0)
        const Vec3 gxx = axx * Z + (2 * ax + bxx) * Zx +
                         (cxx + (a + 2 * bx) / y) * Zy;
        const Vec3 gxy = axy * Z + (ay + bxy) * Zx +
                         (ax + cxy + by / y - b / y2 + (cx + b / y) / y) * Zy;
        const double S = a + cy + cc / y;
        const double Sy = ay + cyy + cy / y - cc / y2;
        const Vec3 gyy = ayy * Z + byy * Zx + (ay + Sy + S / y) * Zy;
        return std::array<Vec3, 3>{gxx, gxy, gyy};
    };
    return c;
}

ImmersionChart cusp_chart(double eps) {
    ImmersionChart c;
    c.name = "cusp-comparison";
    c.u_min = -300;
    c.u_max = 300;
    c.eval = [eps](double alpha, double y) {
        const double rho = cusp_profile_rho(eps, alpha);
        return Vec3{rho * std::sinh(alpha), y, rho * std::cosh(alpha)};
    };
    c.jac = [eps](double alpha, double y) {
        (void)y;
        const double w = 1 + alpha * alpha;
        const double rho = eps / std::sqrt(w);
        const double rho1 = -eps * alpha / (w * std::sqrt(w));
        const double sh = std::sinh(alpha), ch = std::cosh(alpha);
        return std::array<Vec3, 2>{Vec3{rho1 * sh + rho * ch, 0, rho1 * ch + rho * sh},
                                   Vec3{0, 1, 0}};
    };
    c.hess = [eps](double alpha, double y) {
        (void)y;
        const double w = 1 + alpha * alpha;
        const double rho = eps / std::sqrt(w);
        const double rho1 = -eps * alpha / (w * std::sqrt(w));
        const double rho2 = eps * (2 * alpha * alpha - 1) / (w * w * std::sqrt(w));
        const double sh = std::sinh(alpha), ch = std::cosh(alpha);
        return std::array<Vec3, 3>{
            Vec3{rho2 * sh + 2 * rho1 * ch + rho * sh, 0,
                 rho2 * ch + 2 * rho1 * sh + rho * ch},
            Vec3{0, 0, 0}, Vec3{0, 0, 0}};
    };
    return c;
}

} // namespace

ImmersionChart make_chart(const ExplicitSurface& s) {
    struct V {
        ImmersionChart operator()(const Hyperboloid&) const {
            return hyperboloid_chart();
        }
        ImmersionChart operator()(const Semitrough&) const { return glide_chart(0.0); }
        ImmersionChart operator()(const Glide& g) const {
            return glide_chart(g.lambda);
        }
        ImmersionChart operator()(const ParabolicInvariant& p) const {
            return parabolic_gamma_chart(p.eps);
        }
        ImmersionChart operator()(const HolderBarrier& b) const {
            return holder_gamma_chart(b);
        }
        ImmersionChart operator()(const CuspComparison& cc) const {
            return cusp_chart(cc.eps);
        }
    };
    return std::visit(V{}, s);
}

// ---------------------------------------------------------------------------
// Support functions
// ---------------------------------------------------------------------------

ExtReal glide_support_closed_form(double lambda, double x) {
    if (x > 0) return ExtReal::infinity();
    if (x == 0) return 0.0;
    return -2.0 * lambda * std::abs(x) * std::log(std::abs(x));
}

double parabolic_family_u(double eps, double, double y) {
    if (y < 0) throw DomainError("parabolic_family_u: y < 0");
    if (eps < 0) throw DomainError("parabolic_family_u: eps < 0");
    if (eps == 0) return -2 * y;
    return -y * std::sqrt(1 + eps * eps * y * y) - std::asinh(eps * y) / eps;
}

double parabolic_family_f1(double eps, double y) {
    return -2 * std::sqrt(1 + eps * eps * y * y);
}

double parabolic_family_f2(double eps, double y) {
    return -2 * eps * eps * y / std::sqrt(1 + eps * eps * y * y);
}

double parabolic_family_f3(double eps, double y) {
    const double w = 1 + eps * eps * y * y;
    return -2 * eps * eps / (w * std::sqrt(w));
}

HolderDerivs holder_barrier_u(const HolderBarrier& p, double x, double y) {
    p.validate();
    if (y < 0) throw DomainError("holder_barrier_u: y < 0");
    if (x == 0)
        throw DerivativeUndefined("holder_barrier_u: u is not C^2 on the y-axis");
    const double ax = std::abs(x), sx = x > 0 ? 1.0 : -1.0;
    const double A = p.eps * std::pow(ax, 2 - p.alpha);
    const double Y = std::pow(1 + y, -p.gamma);
    HolderDerivs d;
    d.u = -p.M * std::pow(y, p.beta) + A * Y;
    d.ux = p.eps * (2 - p.alpha) * sx * std::pow(ax, 1 - p.alpha) * Y;
    d.uy = -p.M * p.beta * std::pow(y, p.beta - 1) -
           p.gamma * A * std::pow(1 + y, -1 - p.gamma);
    d.uxx = p.eps * (2 - p.alpha) * (1 - p.alpha) * std::pow(ax, -p.alpha) * Y;
    d.uxy = -p.eps * (2 - p.alpha) * p.gamma * sx * std::pow(ax, 1 - p.alpha) *
            std::pow(1 + y, -1 - p.gamma);
    d.uyy = p.M * p.beta * (1 - p.beta) * std::pow(y, p.beta - 2) +
            p.gamma * (1 + p.gamma) * A * std::pow(1 + y, -2 - p.gamma);
    return d;
}

NullSupportFn family_support(const ExplicitSurface& s) {
    struct V {
        NullSupportFn operator()(const Hyperboloid&) const {
            return NullSupportFn::closed_form("hyperboloid",
                                              [](double) { return ExtReal(0.0); });
        }
        NullSupportFn operator()(const Semitrough&) const {
            // zero on the closed arc through pi bounded by +-pi/2 (the arc of
            // the printed parametrization, which opens toward +x), +inf on
            // the complementary open arc
            return NullSupportFn::closed_form("semitrough", [](double th) {
                const double t = normalize_angle(th);
                return std::abs(t) >= M_PI_2 - 1e-15 ? ExtReal(0.0)
                                                     : ExtReal::infinity();
            });
        }
        NullSupportFn operator()(const Glide& g) const {
            const double lambda = g.lambda;
            return NullSupportFn::closed_form("glide", [lambda](double th) {
                const double t = normalize_angle(th);
                if (std::abs(t) < M_PI_2 - 1e-15) return ExtReal::infinity();
                if (angle_dist(t, M_PI_2) < 1e-15) return ExtReal(0.0);
                const double x = chart_boundary_x(ChartKind::xi, t);
                return glide_support_closed_form(lambda, x) / (1 + x * x);
            });
        }
        NullSupportFn operator()(const ParabolicInvariant& p) const {
            const double eps = p.eps;
            return NullSupportFn::closed_form("parabolic", [eps](double th) {
                return angle_dist(th, M_PI) < 1e-15 ? ExtReal(-eps) : ExtReal(0.0);
            });
        }
        NullSupportFn operator()(const HolderBarrier& b) const {
            const double eps = b.eps, alpha = b.alpha;
            return NullSupportFn::closed_form("holder-barrier", [eps, alpha](double th) {
                const double t = normalize_angle(th);
                if (angle_dist(t, M_PI) < 1e-15) return ExtReal(0.0);
                const double x = std::tan(0.5 * t);
                return ExtReal(eps * std::pow(std::abs(x), 2 - alpha) / (1 + x * x));
            });
        }
        NullSupportFn operator()(const CuspComparison&) const {
            // Wedge over the y-axis: finite (zero) only at 0 and pi.
            return NullSupportFn::closed_form(
                "cusp-comparison",
                [](double th) {
                    const double t = normalize_angle(th);
                    if (std::abs(t) < 1e-15 || angle_dist(t, M_PI) < 1e-15)
                        return ExtReal(0.0);
                    return ExtReal::infinity();
                },
                4096, 2);
        }
    };
    return std::visit(V{}, s);
}

ParabolicSupportFn family_parabolic_support(const ExplicitSurface& s) {
    struct V {
        ParabolicSupportFn operator()(const Hyperboloid&) const {
            return (*this)(ParabolicInvariant{0.0});
        }
        ParabolicSupportFn operator()(const ParabolicInvariant& p) const {
            ParabolicSupportFn f;
            f.tag = "parabolic";
            const double eps = p.eps;
            f.u = [eps](double, double y) {
                return ExtReal(parabolic_family_u(eps, 0, y));
            };
            f.grad = [eps](double, double y) {
                return std::array<double, 2>{0.0, parabolic_family_f1(eps, y)};
            };
            f.hess = [eps](double, double y) {
                return std::array<double, 3>{0.0, 0.0, parabolic_family_f2(eps, y)};
            };
            return f;
        }
        ParabolicSupportFn operator()(const HolderBarrier& b) const {
            b.validate();
            ParabolicSupportFn f;
            f.tag = "holder-barrier";
            const HolderBarrier p = b;
            f.u = [p](double x, double y) {
                if (x == 0)
                    return ExtReal(-p.M * std::pow(y, p.beta));
                const double A = p.eps * std::pow(std::abs(x), 2 - p.alpha);
                return ExtReal(-p.M * std::pow(y, p.beta) +
                               A * std::pow(1 + y, -p.gamma));
            };
            f.grad = [p](double x, double y) {
                const HolderDerivs d = holder_barrier_u(p, x, y);
                return std::array<double, 2>{d.ux, d.uy};
            };
            f.hess = [p](double x, double y) {
                const HolderDerivs d = holder_barrier_u(p, x, y);
                return std::array<double, 3>{d.uxx, d.uxy, d.uyy};
            };
            return f;
        }
        ParabolicSupportFn operator()(const Semitrough&) const {
            throw DomainError("family_parabolic_support: semitrough has no closed parabolic support form");
        }
        ParabolicSupportFn operator()(const Glide&) const {
            throw DomainError("family_parabolic_support: use glide_support_closed_form (xi chart)");
        }
        ParabolicSupportFn operator()(const CuspComparison&) const {
            throw DomainError("family_parabolic_support: cusp comparison is profile-defined");
        }
    };
    return std::visit(V{}, s);
}

double cusp_profile_rho(double eps, double alpha) {
    if (!(eps > 0)) throw DomainError("cusp_profile_rho: eps <= 0");
    return eps / std::sqrt(1 + alpha * alpha);
}

double cusp_profile_speed2(double eps, double alpha) {
    const double w = 1 + alpha * alpha;
    return eps * eps * (1.0 / w - alpha * alpha / (w * w * w));
}

// ---------------------------------------------------------------------------
// Graph heights
// ---------------------------------------------------------------------------

namespace {

double glide_height(double lambda, double x, double y,
                    const GraphHeightOptions& opts) {
    const double c = std::sqrt(1 + lambda * lambda);
    auto g = [&](double t) {
        const double s = std::asinh(y * std::sinh(t) / c);
        return c * (t - std::cosh(t) / std::sinh(t)) + lambda * s - x;
    };
    double lo = 1e-12, hi = 1.0;
    while (g(hi) < 0 && hi < opts.window) hi *= 2;
    if (g(hi) < 0) throw ChartExhausted("graph_height: parameter window exhausted");
    const double t = bisect(g, lo, hi, opts.accuracy);
    const double s = std::asinh(y * std::sinh(t) / c);
    return c * std::cosh(s) / std::sinh(t);
}

// Support-plane envelope over the zeta chart: the graph height of a convex
// entire surface with parabolic support u is
//   f(X,Y) = sup_{(x,y)} [X (1-x^2-y^2) + 2 x Y - u(x,y)] / (1+x^2+y^2),
// refined by nested grid search around the maximizer.
double envelope_height(const ParabolicSupportFn& u, double X, double Y,
                       double phi_pi) {
    auto val = [&](double x, double y) {
        const ExtReal uv = u(x, y);
        if (uv.is_infinite()) return -1e300;
        const double q = x * x + y * y;
        return (X * (1 - q) + 2 * x * Y - uv.value()) / (1 + q);
    };
    const double R = 8.0 * (1.0 + std::sqrt(X * X + Y * Y));
    double cx = 0, cy = R / 2, half_x = R, half_y = R / 2;
    double best = -1e300, bx = cx, by = cy;
    const int pts = 41;
    for (int level = 0; level < 10; ++level) {
        for (int i = 0; i < pts; ++i)
            for (int j = 0; j < pts; ++j) {
                const double x = cx - half_x + 2 * half_x * i / (pts - 1);
                const double y =
                    std::max(1e-12, cy - half_y + 2 * half_y * j / (pts - 1));
                const double v = val(x, y);
                if (v > best) {
                    best = v;
                    bx = x;
                    by = y;
                }
            }
        cx = bx;
        cy = by;
        half_x *= 2.5 / (pts - 1);
        half_y *= 2.5 / (pts - 1);
    }
    return std::max(best, -X - phi_pi);
}

} // namespace

double graph_height(const ExplicitSurface& s, double x, double y,
                    const GraphHeightOptions& opts) {
    struct V {
        double x, y;
        const GraphHeightOptions& opts;
        double operator()(const Hyperboloid&) const {
            return std::sqrt(1 + x * x + y * y);
        }
        double operator()(const Semitrough&) const {
            return glide_height(0.0, x, y, opts);
        }
        double operator()(const Glide& g) const {
            return glide_height(g.lambda, x, y, opts);
        }
        double operator()(const ParabolicInvariant& p) const {
            return envelope_height(family_parabolic_support(p), x, y, -p.eps);
        }
        double operator()(const HolderBarrier& b) const {
            return envelope_height(family_parabolic_support(b), x, y, 0.0);
        }
        double operator()(const CuspComparison& c) const {
            auto g = [&](double a) {
                return cusp_profile_rho(c.eps, a) * std::sinh(a) - x;
            };
            double hi = 1.0;
            while (g(hi) < 0 && hi < opts.window) hi *= 2;
            double lo = -1.0;
            while (g(lo) > 0 && lo > -opts.window) lo *= 2;
            if (g(hi) < 0 || g(lo) > 0)
                throw ChartExhausted("graph_height: cusp window exhausted");
            const double a = bisect(g, lo, hi, opts.accuracy);
            return cusp_profile_rho(c.eps, a) * std::cosh(a);
        }
    };
    return std::visit(V{x, y, opts}, s);
}

} // namespace lsk
