#include "lsk/geodesics.hpp"

#include <algorithm>
#include <cmath>

#include "lsk/numerics.hpp"

namespace lsk {

namespace {

struct State {
    double u, v, du, dv;
};

struct Metric {
    double E, F, G;
};

Metric metric_at(const ImmersionChart& chart, double u, double v) {
    const auto m = chart.first_form(u, v);
    return {m[0], m[1], m[2]};
}

// Christoffel symbols from analytic (or differenced) chart derivatives:
// dgE/du = 2<Xuu,Xu>, etc.
struct Christoffel {
    double g111, g112, g122; // Gamma^1_{11}, Gamma^1_{12}, Gamma^1_{22}
    double g211, g212, g222;
};

Christoffel christoffel_at(const ImmersionChart& chart, double u, double v) {
    if (chart.christoffels) {
        const auto g = chart.christoffels(u, v);
        return {g[0], g[1], g[2], g[3], g[4], g[5]};
    }
    const auto J = chart.jacobian(u, v);
    const auto H = chart.hessian(u, v);
    const double E = inner(J[0], J[0]);
    const double F = inner(J[0], J[1]);
    const double G = inner(J[1], J[1]);
    const double Eu = 2 * inner(H[0], J[0]);
    const double Ev = 2 * inner(H[1], J[0]);
    const double Fu = inner(H[0], J[1]) + inner(J[0], H[1]);
    const double Fv = inner(H[1], J[1]) + inner(J[0], H[2]);
    const double Gu = 2 * inner(H[1], J[1]);
    const double Gv = 2 * inner(H[2], J[1]);
    const double det = E * G - F * F;
    if (det <= 0) throw DegenerateMetric("christoffel_at: EG - F^2 <= 0");
    const double i11 = G / det, i12 = -F / det, i22 = E / det;
    // lowered symbols
    const double c111 = 0.5 * Eu, c112 = 0.5 * Ev, c122 = Fv - 0.5 * Gu;
    const double c211 = Fu - 0.5 * Ev, c212 = 0.5 * Gu, c222 = 0.5 * Gv;
    Christoffel c;
    c.g111 = i11 * c111 + i12 * c211;
    c.g112 = i11 * c112 + i12 * c212;
    c.g122 = i11 * c122 + i12 * c222;
    c.g211 = i12 * c111 + i22 * c211;
    c.g212 = i12 * c112 + i22 * c212;
    c.g222 = i12 * c122 + i22 * c222;
    return c;
}

State rhs(const ImmersionChart& chart, const State& y) {
    const Christoffel c = christoffel_at(chart, y.u, y.v);
    State d;
    d.u = y.du;
    d.v = y.dv;
    d.du = -(c.g111 * y.du * y.du + 2 * c.g112 * y.du * y.dv +
             c.g122 * y.dv * y.dv);
    d.dv = -(c.g211 * y.du * y.du + 2 * c.g212 * y.du * y.dv +
             c.g222 * y.dv * y.dv);
    return d;
}

State axpy(const State& y, const State& d, double h) {
    return {y.u + h * d.u, y.v + h * d.v, y.du + h * d.du, y.dv + h * d.dv};
}

State rk4_step(const ImmersionChart& chart, const State& y, double h) {
    const State k1 = rhs(chart, y);
    const State k2 = rhs(chart, axpy(y, k1, 0.5 * h));
    const State k3 = rhs(chart, axpy(y, k2, 0.5 * h));
    const State k4 = rhs(chart, axpy(y, k3, h));
    return {y.u + h / 6 * (k1.u + 2 * k2.u + 2 * k3.u + k4.u),
            y.v + h / 6 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v),
            y.du + h / 6 * (k1.du + 2 * k2.du + 2 * k3.du + k4.du),
            y.dv + h / 6 * (k1.dv + 2 * k2.dv + 2 * k3.dv + k4.dv)};
}

double state_err(const State& a, const State& b) {
    auto sc = [](double x, double y) {
        return std::abs(x - y) / (1.0 + std::max(std::abs(x), std::abs(y)));
    };
    return std::max(std::max(sc(a.u, b.u), sc(a.v, b.v)),
                    std::max(sc(a.du, b.du), sc(a.dv, b.dv)));
}

} // namespace

double chart_speed(const ImmersionChart& chart, double u, double v, double du,
                   double dv) {
    if (chart.speed2) return std::sqrt(std::max(0.0, chart.speed2(u, v, du, dv)));
    const Metric m = metric_at(chart, u, v);
    const double q = m.E * du * du + 2 * m.F * du * dv + m.G * dv * dv;
    if (!chart.metric) {
        // jacobian-derived first forms carry roundoff of the summands; below
        // that floor the value is noise and is treated as zero
        const double mag = std::abs(m.E * du * du) +
                           std::abs(2 * m.F * du * dv) +
                           std::abs(m.G * dv * dv);
        if (q < 4e-16 * mag) return 0.0;
    }
    return std::sqrt(std::max(0.0, q));
}

GeodesicTrace integrate_geodesic_chart(const ImmersionChart& chart, double u0,
                                       double v0, double du0, double dv0,
                                       const IntegrateOptions& opts) {
    if (!chart.in_domain(u0, v0))
        throw ChartExhausted("integrate_geodesic: initial point outside the chart");
    State y{u0, v0, du0, dv0};
    if (opts.unit_speed) {
        const double sp = chart_speed(chart, u0, v0, du0, dv0);
        if (!(sp > 0)) throw DomainError("integrate_geodesic: velocity not spacelike");
        y.du /= sp;
        y.dv /= sp;
    }

    GeodesicTrace trace;
    auto record = [&](double tau, const State& s, double len) {
        const auto J = chart.jacobian(s.u, s.v);
        TraceSample ts;
        ts.tau = tau;
        ts.point = chart.eval(s.u, s.v);
        ts.velocity = J[0] * s.du + J[1] * s.dv;
        ts.length = len;
        ts.u = s.u;
        ts.v = s.v;
        ts.du = s.du;
        ts.dv = s.dv;
        trace.samples.push_back(ts);
    };

    double tau = 0, len = 0, h = opts.initial_step, prev_h = opts.initial_step;
    record(tau, y, len);
    const double start_radius = std::hypot(u0, v0);
    const Metric m0 = metric_at(chart, u0, v0);
    const double start_det = m0.E * m0.G - m0.F * m0.F;

    // A genuine finite-length end shows three signatures at once: summable
    // step lengths, diverging chart coordinates, and a collapsing chart
    // metric (the first form degenerates toward the null support plane).
    // A merely stiff chart region (e.g. a funnel end at a coordinate
    // singularity with a blowing-up metric) fails the last test.
    auto end_signature = [&](const State& s) {
        const double radius = std::hypot(s.u, s.v);
        if (radius <= 2 * start_radius + 1) return false;
        const Metric m = metric_at(chart, s.u, s.v);
        return m.E * m.G - m.F * m.F < start_det;
    };

    for (std::size_t step = 0; step < opts.max_steps; ++step) {
        if (len >= opts.max_length || tau >= opts.max_param) {
            trace.termination = Termination::budget_exhausted;
            break;
        }
        if (h < opts.min_step) {
            const double ratio = std::min(0.95, h / std::max(prev_h, 1e-300));
            trace.remaining_estimate = h / (1.0 - ratio);
            trace.termination = end_signature(y) ? Termination::length_converged
                                                 : Termination::chart_boundary;
            break;
        }
        State big, small;
        try {
            big = rk4_step(chart, y, h);
            const State half = rk4_step(chart, y, 0.5 * h);
            small = rk4_step(chart, half, 0.5 * h);
        } catch (const Error&) {
            h *= 0.5;
            continue;
        }
        if (!std::isfinite(small.u) || !std::isfinite(small.v) ||
            !std::isfinite(small.du) || !std::isfinite(small.dv)) {
            h *= 0.5;
            continue;
        }
        const double err = state_err(big, small);
        if (err > opts.tol) {
            h *= 0.5;
            continue;
        }
        if (!chart.in_domain(small.u, small.v)) {
            if (h > opts.min_step * 4) {
                h *= 0.5;
                continue;
            }
            trace.termination = Termination::chart_boundary;
            break;
        }
        const double sp_before = chart_speed(chart, y.u, y.v, y.du, y.dv);
        const double sp_after =
            chart_speed(chart, small.u, small.v, small.du, small.dv);
        y = small;
        tau += h;
        len += 0.5 * h * (sp_before + sp_after);
        record(tau, y, len);
        if (trace.samples.back().point.euclid_norm2() >
            opts.max_ambient * opts.max_ambient) {
            trace.termination = Termination::chart_boundary;
            break;
        }

        // remaining-length estimate from the geometric decay of increments
        const double ratio = h / std::max(prev_h, 1e-300);
        if (ratio < 0.999) {
            const double r = std::min(ratio, 0.95);
            const double remaining = sp_after * h * r / (1.0 - r);
            if (remaining < opts.finite_length_tol && end_signature(y)) {
                trace.remaining_estimate = remaining;
                trace.termination = Termination::length_converged;
                break;
            }
        }
        prev_h = h;
        if (err < opts.tol / 64 && h < opts.max_step) h *= 2;
    }
    trace.total_length = len;
    return trace;
}

std::array<double, 2> chart_locate(const ImmersionChart& chart, const Vec3& p,
                                   double window) {
    auto sq = [&](double u, double v) {
        const Vec3 q = chart.eval(u, v);
        const double dx = q.x - p.x, dy = q.y - p.y;
        return dx * dx + dy * dy;
    };
    const double ulo = std::max(chart.u_min + 1e-9, -window);
    const double uhi = std::min(chart.u_max - 1e-9, window);
    const double vlo = std::max(chart.v_min + 1e-9, -window);
    const double vhi = std::min(chart.v_max - 1e-9, window);
    double bu = 0, bv = 0, best = 1e300;
    const int n = 121;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double u = ulo + (uhi - ulo) * i / (n - 1);
            const double v = vlo + (vhi - vlo) * j / (n - 1);
            const double s = sq(u, v);
            if (s < best) {
                best = s;
                bu = u;
                bv = v;
            }
        }
    // Gauss-Newton on the horizontal residual
    for (int it = 0; it < 60; ++it) {
        const Vec3 q = chart.eval(bu, bv);
        const auto J = chart.jacobian(bu, bv);
        const double rx = q.x - p.x, ry = q.y - p.y;
        const double a = J[0].x, b = J[1].x, c = J[0].y, d = J[1].y;
        const double det = a * d - b * c;
        if (std::abs(det) < 1e-300) break;
        double du = (-d * rx + b * ry) / det;
        double dv = (c * rx - a * ry) / det;
        double scale = 1.0;
        while (!chart.in_domain(bu + scale * du, bv + scale * dv) && scale > 1e-6)
            scale *= 0.5;
        bu += scale * du;
        bv += scale * dv;
        if (std::hypot(du, dv) * scale < 1e-14 * (1 + std::hypot(bu, bv))) break;
    }
    if (sq(bu, bv) > 1e-12 * (1 + p.euclid_norm2()))
        throw ChartExhausted("chart_locate: point not reached in the search window");
    return {bu, bv};
}

GeodesicTrace integrate_geodesic(const ExplicitSurface& surface, const Vec3& p0,
                                 const Vec3& v0, const IntegrateOptions& opts) {
    const ImmersionChart chart = make_chart(surface);
    const auto [u0, w0] = chart_locate(chart, p0);
    const auto J = chart.jacobian(u0, w0);
    const Metric m = metric_at(chart, u0, w0); // first-form projection of v0
    const double b1 = inner(v0, J[0]), b2 = inner(v0, J[1]);
    const double det = m.E * m.G - m.F * m.F;
    if (det <= 0) throw DegenerateMetric("integrate_geodesic: degenerate metric");
    const double du = (m.G * b1 - m.F * b2) / det;
    const double dv = (-m.F * b1 + m.E * b2) / det;
    const Vec3 tangential = J[0] * du + J[1] * dv;
    const double resid = std::sqrt((v0 - tangential).euclid_norm2());
    if (resid > opts.tangent_tol * std::max(1.0, std::sqrt(v0.euclid_norm2())))
        throw NotTangent("integrate_geodesic: v0 is not tangent to the surface");
    return integrate_geodesic_chart(chart, u0, w0, du, dv, opts);
}

double curve_length(const ImmersionChart& chart,
                    const std::function<std::array<double, 2>(double)>& path,
                    double a, double b, double quad_tol,
                    const std::function<std::array<double, 2>(double)>& path_dot) {
    auto speed = [&](double t) {
        const auto p = path(t);
        double du, dv;
        if (path_dot) {
            const auto d = path_dot(t);
            du = d[0];
            dv = d[1];
        } else {
            const double h = 1e-6 * std::max(1.0, std::abs(t));
            const auto pp = path(t + h), pm = path(t - h);
            du = (pp[0] - pm[0]) / (2 * h);
            dv = (pp[1] - pm[1]) / (2 * h);
        }
        return chart_speed(chart, p[0], p[1], du, dv);
    };
    return adaptive_simpson(speed, a, b, quad_tol);
}

std::vector<TraceSample> thin_trace(const GeodesicTrace& trace, double min_dt) {
    std::vector<TraceSample> out;
    for (const auto& s : trace.samples) {
        if (out.empty() || s.tau - out.back().tau >= min_dt) out.push_back(s);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Asymptotics
// ---------------------------------------------------------------------------

namespace {

// I_u = {theta : <u, theta_vec> >= 0} as [beta - w, beta + w]
std::array<double, 2> velocity_interval(const Vec3& u) {
    const double R = std::hypot(u.x, u.y);
    if (!(R > std::abs(u.z)))
        throw DomainError("velocity_interval: velocity not spacelike");
    const double beta = std::atan2(u.y, u.x);
    const double w = std::acos(std::clamp(u.z / R, -1.0, 1.0));
    return {beta - w, beta + w};
}

} // namespace

AsymptoticReport asymptotic_direction(const GeodesicTrace& trace,
                                      const AsymptoticOptions& opts) {
    if (trace.samples.size() < 8)
        throw NotContracting("asymptotic_direction: trace too short");
    AsymptoticReport rep;

    double lo = 0, hi = 0;
    bool first = true;
    for (const auto& s : trace.samples) {
        auto iv = velocity_interval(s.velocity);
        if (first) {
            lo = iv[0];
            hi = iv[1];
            first = false;
        } else {
            // unwrap the new interval near the current midpoint
            const double mid = 0.5 * (lo + hi);
            double a = iv[0], b = iv[1];
            while (0.5 * (a + b) < mid - M_PI) {
                a += 2 * M_PI;
                b += 2 * M_PI;
            }
            while (0.5 * (a + b) > mid + M_PI) {
                a -= 2 * M_PI;
                b -= 2 * M_PI;
            }
            if (a < lo - opts.nest_slack || b > hi + opts.nest_slack)
                rep.nested = false;
            lo = std::max(lo, a);
            hi = std::min(hi, b);
            if (lo > hi) {
                const double m = 0.5 * (lo + hi);
                lo = hi = m;
            }
        }
        rep.interval_history.push_back({s.tau, lo, hi});
    }
    rep.final_width = hi - lo;
    if (rep.final_width > opts.width_tol)
        throw NotContracting("asymptotic_direction: interval did not contract");
    rep.theta_plus = normalize_angle(0.5 * (lo + hi));

    // support value along theta_plus, Aitken-extrapolated over the tail
    const Vec3 dir = theta_vec(rep.theta_plus);
    std::vector<double> tail;
    const std::size_t n = trace.samples.size();
    const std::size_t k0 = n > static_cast<std::size_t>(opts.tail)
                               ? n - static_cast<std::size_t>(opts.tail)
                               : 0;
    for (std::size_t k = k0; k < n; ++k)
        tail.push_back(inner(trace.samples[k].point, dir));
    rep.support_value = aitken_limit(tail);

    for (double off : {-1.0, -0.5, 0.5, 1.0, M_PI}) {
        const double th = normalize_angle(rep.theta_plus + off);
        rep.probe_values[th] = inner(trace.samples.back().point, theta_vec(th));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

ConcavityReport phi_concavity_check(const GeodesicTrace& trace, const Vec3& v,
                                    double tol) {
    const CausalClass c = classify(v);
    if (c.kind == CausalKind::spacelike || !c.future)
        throw DomainError("phi_concavity_check: v must be future causal");
    const auto samples = thin_trace(trace);
    ConcavityReport rep;
    if (samples.size() < 3) return rep;
    for (const auto& s : samples)
        rep.scale = std::max(rep.scale, std::abs(inner(s.point, v)));
    double prev_slope = 0;
    bool have = false;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const double dt = samples[i].tau - samples[i - 1].tau;
        const double slope =
            (inner(samples[i].point, v) - inner(samples[i - 1].point, v)) / dt;
        if (have) {
            const double inc = slope - prev_slope;
            if (inc > rep.max_violation) rep.max_violation = inc;
            if (inc > tol * rep.scale) ++rep.violations;
        }
        prev_slope = slope;
        have = true;
    }
    rep.ok = rep.violations == 0;
    return rep;
}

MonotonicityReport dext_monotonicity_check(const GeodesicTrace& trace,
                                           double tol) {
    const auto samples = thin_trace(trace);
    MonotonicityReport rep;
    rep.min_slope = 1e300;
    if (samples.size() < 2) {
        rep.min_slope = 1;
        return rep;
    }
    const Vec3 p = samples.front().point;
    double prev = 0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const double d = extrinsic_distance(p, samples[i].point);
        const double slope = (d - prev) / (samples[i].tau - samples[i - 1].tau);
        rep.min_slope = std::min(rep.min_slope, slope);
        if (slope < 1.0 - tol) ++rep.violations;
        prev = d;
    }
    rep.ok = rep.violations == 0;
    return rep;
}

DecayReport timelike_decay_check(const GeodesicTrace& trace,
                                 const SpacelikeLine& L, int tail) {
    DecayReport rep;
    if (!trace.finite_length_candidate())
        throw PreconditionFailed(
            "timelike_decay_check: trace is not a finite-length candidate");
    const double T = trace.samples.back().tau + trace.remaining_estimate;
    const std::size_t n = trace.samples.size();
    const std::size_t k0 =
        n > static_cast<std::size_t>(tail) ? n - static_cast<std::size_t>(tail) : 0;
    double prev = 1e300;
    for (std::size_t k = k0; k < n; ++k) {
        const auto& s = trace.samples[k];
        double d;
        try {
            d = timelike_dist_to_line(s.point, L);
        } catch (const NotTimelikeSeparated&) {
            continue;
        }
        const double rem = std::max(T - s.tau, 1e-15);
        rep.bound_constant = std::max(rep.bound_constant, d / std::sqrt(rem));
        // sqrt(a c) loses ~half the digits of the ambient coordinates near
        // the plane; allow that floor in the monotonicity check
        if (d > prev * 1.02 + 1e-10) rep.decreasing = false;
        prev = d;
        rep.final_dist = d;
        ++rep.used;
    }
    if (rep.used == 0)
        throw PreconditionFailed("timelike_decay_check: no tail point is timelike-separated from L");
    return rep;
}

} // namespace lsk
