#include "lsk/support.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace lsk {

// ---------------------------------------------------------------------------
// Charts
// ---------------------------------------------------------------------------

Vec3 zeta(double x, double y) {
    if (y < 0) throw DomainError("zeta: y < 0");
    const double q = x * x + y * y;
    return {1 - q, 2 * x, 1 + q};
}

Vec3 zeta_x(double x, double) { return {-2 * x, 2, 2 * x}; }
Vec3 zeta_y(double, double y) { return {-2 * y, 0, 2 * y}; }

Vec3 xi(double x, double y) {
    if (y < 0) throw DomainError("xi: y < 0");
    const double q = x * x + y * y;
    return {2 * x, -1 + q, 1 + q};
}

Vec3 xi_hat(double x, double y) {
    if (y < 0) throw DomainError("xi_hat: y < 0");
    const double q = x * x + y * y;
    return {2 * x, 1 - q, 1 + q};
}

Vec3 chart_point(ChartKind kind, double x, double y) {
    switch (kind) {
        case ChartKind::zeta: return zeta(x, y);
        case ChartKind::xi: return xi(x, y);
        case ChartKind::xi_hat: return xi_hat(x, y);
    }
    throw DomainError("chart_point: bad kind");
}

Vec3 rotated_zeta(double theta_at_infinity, double x, double y) {
    return rotation_z(theta_at_infinity - M_PI).apply(zeta(x, y));
}

double chart_boundary_theta(ChartKind kind, double x) {
    switch (kind) {
        case ChartKind::zeta: return normalize_angle(2 * std::atan(x));
        case ChartKind::xi: return normalize_angle(2 * std::atan(x) - M_PI_2);
        case ChartKind::xi_hat: return normalize_angle(M_PI_2 - 2 * std::atan(x));
    }
    throw DomainError("chart_boundary_theta: bad kind");
}

double chart_infinity_theta(ChartKind kind) {
    switch (kind) {
        case ChartKind::zeta: return M_PI;
        case ChartKind::xi: return M_PI_2;
        case ChartKind::xi_hat: return -M_PI_2;
    }
    throw DomainError("chart_infinity_theta: bad kind");
}

double chart_boundary_x(ChartKind kind, double theta) {
    const double inf_theta = chart_infinity_theta(kind);
    if (angle_dist(theta, inf_theta) < 1e-15)
        throw DomainError("chart_boundary_x: theta is the direction at infinity");
    switch (kind) {
        case ChartKind::zeta: return std::tan(0.5 * normalize_angle(theta));
        case ChartKind::xi: return std::tan(0.5 * normalize_angle(theta + M_PI_2));
        case ChartKind::xi_hat: return std::tan(0.5 * normalize_angle(M_PI_2 - theta));
    }
    throw DomainError("chart_boundary_x: bad kind");
}

// ---------------------------------------------------------------------------
// NullSupportFn
// ---------------------------------------------------------------------------

NullSupportFn NullSupportFn::closed_form(std::string tag,
                                         std::function<ExtReal(double)> fn,
                                         int probe, int min_finite) {
    NullSupportFn s;
    s.provenance_ = Provenance::closed_form;
    s.tag_ = std::move(tag);
    s.fn_ = std::move(fn);
    s.probe_ = probe;
    if (s.finite_count() < min_finite)
        throw DomainError("NullSupportFn: too few finite probe directions");
    return s;
}

NullSupportFn NullSupportFn::from_samples(std::vector<double> theta,
                                          std::vector<ExtReal> value,
                                          int min_finite) {
    if (theta.size() != value.size() || theta.empty())
        throw EmptyInput("NullSupportFn::from_samples: bad grid");
    const std::size_t n = theta.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (auto& t : theta) t = normalize_angle(t);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return theta[a] < theta[b]; });

    NullSupportFn s;
    s.provenance_ = Provenance::sampled;
    s.grid_theta_.reserve(n);
    s.grid_value_.reserve(n);
    for (auto i : order) {
        s.grid_theta_.push_back(theta[i]);
        s.grid_value_.push_back(value[i]);
    }

    // lsc regularization on the grid: a value strictly above both finite
    // neighbors (an isolated spike, including +inf between finite data)
    // cannot be a liminf and is lowered to the neighbor interpolant plus
    // grid slack. +inf adjacent to an infinite arc is left alone -- the grid
    // cannot distinguish a closed finite arc endpoint from an open one.
    std::vector<ExtReal> reg = s.grid_value_;
    for (std::size_t i = 0; i < n; ++i) {
        const ExtReal& prev = s.grid_value_[(i + n - 1) % n];
        const ExtReal& next = s.grid_value_[(i + 1) % n];
        if (prev.is_finite() && next.is_finite()) {
            const double hi = std::max(prev.value(), next.value());
            const double atol = 1e-12 * std::max(1.0, std::abs(hi));
            if (ExtReal(hi + atol) < reg[i]) {
                const double lo = std::min(prev.value(), next.value());
                const double spread = 0.5 * (hi - lo);
                reg[i] = ExtReal(lo + spread + atol);
            }
        }
    }
    s.grid_value_ = std::move(reg);
    s.probe_ = static_cast<int>(n);
    if (s.finite_count() < min_finite)
        throw DomainError("NullSupportFn: too few finite samples");
    return s;
}

ExtReal NullSupportFn::operator()(double theta) const {
    if (provenance_ == Provenance::closed_form) return fn_(theta);
    const double t = normalize_angle(theta);
    auto it = std::lower_bound(grid_theta_.begin(), grid_theta_.end(), t);
    const std::size_t n = grid_theta_.size();
    std::size_t hi = (it == grid_theta_.end()) ? 0 : (it - grid_theta_.begin());
    std::size_t lo = (hi + n - 1) % n;
    const double dhi = angle_dist(grid_theta_[hi], t);
    const double dlo = angle_dist(grid_theta_[lo], t);
    return grid_value_[dhi <= dlo ? hi : lo];
}

int NullSupportFn::finite_count() const {
    int count = 0;
    if (provenance_ == Provenance::sampled) {
        for (const auto& v : grid_value_)
            if (v.is_finite()) ++count;
        return count;
    }
    for (int k = 0; k < probe_; ++k) {
        const double th = -M_PI + 2.0 * M_PI * k / probe_;
        if (fn_(th).is_finite()) ++count;
    }
    return count;
}

NullPlane support_plane(const NullSupportFn& phi, double theta) {
    const ExtReal v = phi(theta);
    if (v.is_infinite())
        throw DomainError("support_plane: no null support plane in this direction");
    return NullPlane{NullDirection{normalize_angle(theta)}, v.value()};
}

double null_support_from_points(const std::vector<Vec3>& points, double theta) {
    if (points.empty()) throw EmptyInput("null_support_from_points: empty");
    const Vec3 dir = theta_vec(theta);
    double best = inner(points.front(), dir);
    for (const auto& p : points) best = std::max(best, inner(p, dir));
    return best;
}

NullSupportFn sampled_support(const std::vector<Vec3>& points, int grid) {
    std::vector<double> theta(grid);
    std::vector<ExtReal> value(grid);
    for (int k = 0; k < grid; ++k) {
        theta[k] = -M_PI + 2.0 * M_PI * k / grid;
        value[k] = null_support_from_points(points, theta[k]);
    }
    return NullSupportFn::from_samples(std::move(theta), std::move(value));
}

// ---------------------------------------------------------------------------
// ParabolicSupportFn derivatives
// ---------------------------------------------------------------------------

namespace {

double finite_u(const ParabolicSupportFn& f, double x, double y) {
    const ExtReal v = f.u(x, y);
    if (v.is_infinite())
        throw DerivativeUndefined("ParabolicSupportFn: +inf in a difference stencil");
    return v.value();
}

} // namespace

std::array<double, 2> ParabolicSupportFn::gradient(double x, double y) const {
    if (grad) return grad(x, y);
    const double h = 1e-5 * std::max(1.0, y);
    return {(finite_u(*this, x + h, y) - finite_u(*this, x - h, y)) / (2 * h),
            (finite_u(*this, x, y + h) - finite_u(*this, x, y - h)) / (2 * h)};
}

std::array<double, 3> ParabolicSupportFn::hessian(double x, double y) const {
    if (hess) return hess(x, y);
    const double h = 1e-5 * std::max(1.0, y);
    const double uc = finite_u(*this, x, y);
    const double uxx =
        (finite_u(*this, x + h, y) - 2 * uc + finite_u(*this, x - h, y)) / (h * h);
    const double uyy =
        (finite_u(*this, x, y + h) - 2 * uc + finite_u(*this, x, y - h)) / (h * h);
    const double uxy = (finite_u(*this, x + h, y + h) - finite_u(*this, x + h, y - h) -
                        finite_u(*this, x - h, y + h) + finite_u(*this, x - h, y - h)) /
                       (4 * h * h);
    return {uxx, uxy, uyy};
}

// ---------------------------------------------------------------------------
// Conversions
// ---------------------------------------------------------------------------

ExtReal parabolic_to_elliptic(const std::function<ExtReal(double)>& psi,
                              ChartKind kind, double theta) {
    const double x = chart_boundary_x(kind, theta); // throws at infinity
    return psi(x) / (1.0 + x * x);
}

ExtReal elliptic_to_parabolic(const std::function<ExtReal(double)>& phi,
                              ChartKind kind, double x) {
    const double theta = chart_boundary_theta(kind, x);
    return phi(theta) * (1.0 + x * x);
}

ExtReal parabolic_to_elliptic_interior(const ParabolicSupportFn& u, double x,
                                       double y) {
    return u(x, y) / (1.0 + x * x + y * y);
}

ValueAtInfinity value_at_infinity(const ParabolicSupportFn& u,
                                  const RadiusSchedule& sched) {
    ValueAtInfinity out;
    out.estimate = ExtReal::infinity();
    double r = sched.r0;
    for (int k = 0; k < sched.shells; ++k, r *= sched.growth) {
        ExtReal m = ExtReal::infinity();
        for (int j = 0; j < sched.angular_samples; ++j) {
            const double w = M_PI * j / (sched.angular_samples - 1);
            const double x = r * std::cos(w);
            const double y = std::max(0.0, r * std::sin(w));
            m = ExtReal::min(m, u(x, y) / (1.0 + x * x + y * y));
        }
        out.shell_radius.push_back(r);
        out.shell_min.push_back(m);
    }
    const int tail = std::max(1, std::min(sched.tail_window, sched.shells));
    for (int k = sched.shells - tail; k < sched.shells; ++k)
        out.estimate = ExtReal::min(out.estimate, out.shell_min[k]);
    return out;
}

std::array<double, 3> point_support_poly(const Vec3& p) {
    return {p.x - p.z, 2.0 * p.y, -(p.x + p.z)};
}

DodHeight dod_boundary_height(const NullSupportFn& phi, double x, double y) {
    int finite = 0;
    bool have = false;
    DodHeight best{0.0, 0.0};
    auto consider = [&](double th, const ExtReal& v) {
        if (v.is_infinite()) return;
        ++finite;
        const double h = x * std::cos(th) + y * std::sin(th) - v.value();
        if (!have || h > best.z) {
            best = {h, th};
            have = true;
        }
    };
    if (phi.provenance() == NullSupportFn::Provenance::sampled) {
        for (std::size_t i = 0; i < phi.grid_theta().size(); ++i)
            consider(phi.grid_theta()[i], phi.grid_value()[i]);
    } else {
        const int n = phi.probe_size();
        for (int k = 0; k < n; ++k) {
            const double th = -M_PI + 2.0 * M_PI * k / n;
            consider(th, phi(th));
        }
    }
    if (finite < 2)
        throw Unbounded("dod_boundary_height: support finite at fewer than 2 probe directions");
    return best;
}

// ---------------------------------------------------------------------------
// Translation / scaling laws
// ---------------------------------------------------------------------------

NullSupportFn translate_support(const NullSupportFn& phi, const Vec3& w) {
    if (phi.provenance() == NullSupportFn::Provenance::sampled) {
        std::vector<double> theta = phi.grid_theta();
        std::vector<ExtReal> value = phi.grid_value();
        for (std::size_t i = 0; i < theta.size(); ++i)
            value[i] = value[i] + inner(w, theta_vec(theta[i]));
        return NullSupportFn::from_samples(std::move(theta), std::move(value));
    }
    NullSupportFn base = phi;
    return NullSupportFn::closed_form(
        phi.tag() + "+translate",
        [base, w](double th) { return base(th) + inner(w, theta_vec(th)); },
        phi.probe_size());
}

ParabolicSupportFn translate_support(const ParabolicSupportFn& f, const Vec3& w) {
    ParabolicSupportFn g;
    g.chart = f.chart;
    g.tag = f.tag + "+translate";
    const ChartKind kind = f.chart;
    g.u = [f, w, kind](double x, double y) {
        return f.u(x, y) + inner(w, chart_point(kind, x, y));
    };
    if (f.grad) {
        g.grad = [f, w, kind](double x, double y) {
            auto d = f.grad(x, y);
            Vec3 cx, cy;
            switch (kind) {
                case ChartKind::zeta: cx = zeta_x(x, y); cy = zeta_y(x, y); break;
                case ChartKind::xi: cx = {2, 2 * x, 2 * x}; cy = {0, 2 * y, 2 * y}; break;
                case ChartKind::xi_hat: cx = {2, -2 * x, 2 * x}; cy = {0, -2 * y, 2 * y}; break;
            }
            return std::array<double, 2>{d[0] + inner(w, cx), d[1] + inner(w, cy)};
        };
    }
    if (f.hess) {
        g.hess = [f, w, kind](double x, double y) {
            auto h = f.hess(x, y);
            Vec3 cc; // d2(chart)/dx2 = d2(chart)/dy2, constant; mixed term 0
            switch (kind) {
                case ChartKind::zeta: cc = {-2, 0, 2}; break;
                case ChartKind::xi: cc = {0, 2, 2}; break;
                case ChartKind::xi_hat: cc = {0, -2, 2}; break;
            }
            const double s = inner(w, cc);
            return std::array<double, 3>{h[0] + s, h[1], h[2] + s};
        };
    }
    return g;
}

NullSupportFn scale_support(const NullSupportFn& phi, double lambda) {
    if (!(lambda > 0)) throw DomainError("scale_support: lambda <= 0");
    if (phi.provenance() == NullSupportFn::Provenance::sampled) {
        std::vector<double> theta = phi.grid_theta();
        std::vector<ExtReal> value = phi.grid_value();
        for (auto& v : value) v = v / lambda;
        return NullSupportFn::from_samples(std::move(theta), std::move(value));
    }
    NullSupportFn base = phi;
    return NullSupportFn::closed_form(
        phi.tag() + "/scale",
        [base, lambda](double th) { return base(th) / lambda; }, phi.probe_size());
}

ParabolicSupportFn scale_support(const ParabolicSupportFn& f, double lambda) {
    if (!(lambda > 0)) throw DomainError("scale_support: lambda <= 0");
    ParabolicSupportFn g;
    g.chart = f.chart;
    g.tag = f.tag + "/scale";
    g.u = [f, lambda](double x, double y) { return f.u(x, y) / lambda; };
    if (f.grad)
        g.grad = [f, lambda](double x, double y) {
            auto d = f.grad(x, y);
            return std::array<double, 2>{d[0] / lambda, d[1] / lambda};
        };
    if (f.hess)
        g.hess = [f, lambda](double x, double y) {
            auto h = f.hess(x, y);
            return std::array<double, 3>{h[0] / lambda, h[1] / lambda, h[2] / lambda};
        };
    return g;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string support_to_csv(const NullSupportFn& phi, int grid) {
    std::ostringstream os;
    os << "# lsk support samples\n";
    os << "# bias: values are exact evaluations at their angles; sampled sups are lower bounds\n";
    os << "theta,value,is_infinite\n";
    auto row = [&](double th, const ExtReal& v) {
        os << fmt(th) << ',' << fmt(v.is_infinite() ? 0.0 : v.value()) << ','
           << (v.is_infinite() ? 1 : 0) << '\n';
    };
    if (phi.provenance() == NullSupportFn::Provenance::sampled && grid == 0) {
        for (std::size_t i = 0; i < phi.grid_theta().size(); ++i)
            row(phi.grid_theta()[i], phi.grid_value()[i]);
    } else {
        const int n = grid > 0 ? grid : phi.probe_size();
        for (int k = 0; k < n; ++k) {
            const double th = -M_PI + 2.0 * M_PI * k / n;
            row(th, phi(th));
        }
    }
    return os.str();
}

NullSupportFn support_from_csv(const std::string& csv) {
    std::istringstream is(csv);
    std::string line;
    std::vector<double> theta;
    std::vector<ExtReal> value;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("theta", 0) == 0) continue;
        double th = 0, v = 0;
        int isinf = 0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%d", &th, &v, &isinf) < 2)
            throw ConfigError("support_from_csv: bad row: " + line);
        theta.push_back(th);
        value.push_back(isinf ? ExtReal::infinity() : ExtReal(v));
    }
    return NullSupportFn::from_samples(std::move(theta), std::move(value));
}

} // namespace lsk
