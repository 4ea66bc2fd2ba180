#include "lsk/verify.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "lsk/criteria.hpp"
#include "lsk/curvature.hpp"
#include "lsk/families.hpp"
#include "lsk/geodesics.hpp"
#include "lsk/numerics.hpp"
#include "lsk/support.hpp"

namespace lsk::verify {

namespace {

using clock_t_ = std::chrono::steady_clock;

double seconds_since(clock_t_::time_point t0) {
    return std::chrono::duration<double>(clock_t_::now() - t0).count();
}

std::vector<double> log_space(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a * std::pow(b / a, double(i) / (n - 1));
    return v;
}

std::vector<double> lin_space(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

} // namespace

// 1. |K + 1| <= 1e-6 on the glide charts with analytic derivatives.
CheckResult check_glide_curvature() {
    const auto t0 = clock_t_::now();
    CheckResult r;
    r.index = 1;
    r.name = "glide curvature K = -1";
    r.tolerance = 1e-6;
    double worst = 0;
    for (double lambda : {0.0, 0.5, 1.0, 2.0}) {
        const ImmersionChart chart = make_chart(Glide{lambda});
        for (double t : log_space(0.2, 3.0, 50))
            for (double s : lin_space(-2.0, 2.0, 50)) {
                const FundamentalForms ff = fundamental_forms(chart, t, s);
                worst = std::max(worst, std::abs(ff.K + 1.0));
            }
    }
    r.measured = worst;
    r.pass = worst <= r.tolerance;
    r.runtime_s = seconds_since(t0);
    return r;
}

// 2. F(u) = 4 and K = -1 for the parabolic-invariant family.
CheckResult check_parabolic_identity() {
    const auto t0 = clock_t_::now();
    CheckResult r;
    r.index = 2;
    r.name = "parabolic family F(u) = 4, K = -1";
    r.tolerance = 1e-8;
    double worst = 0;
    for (double eps : {0.0, 0.5, 2.0}) {
        const ParabolicSupportFn u = family_parabolic_support(ParabolicInvariant{eps});
        for (double x : lin_space(-5.0, 5.0, 40))
            for (double y : lin_space(0.1, 10.0, 40)) {
                worst = std::max(worst, std::abs(F_operator(u, x, y) - 4.0));
                const CurvatureReport rep = curvature_from_support(u, x, y);
                worst = std::max(worst, std::abs(rep.K + 1.0));
            }
    }
    r.measured = worst;
    r.pass = worst <= r.tolerance;
    r.runtime_s = seconds_since(t0);
    return r;
}

// 3. Length of the glide escape curve against its antiderivative.
CheckResult check_finite_length() {
    const auto t0 = clock_t_::now();
    CheckResult r;
    r.index = 3;
    r.name = "glide escape-curve length";
    const double lambda = 1.0;
    const double c = std::sqrt(1 + lambda * lambda);
    const ImmersionChart chart = make_chart(Glide{lambda});
    auto path = [&](double tau) {
        return std::array<double, 2>{lambda * tau, -c * tau};
    };
    auto dot = [&](double) { return std::array<double, 2>{lambda, -c}; };
    auto antider = [&](double tau) {
        return (c / lambda) * std::log(std::tanh(0.5 * lambda * tau));
    };
    double worst = 0;
    for (double tau : {2.0, 5.0, 10.0, 20.0, 50.0}) {
        const double len = curve_length(chart, path, 1.0, tau, 1e-10, dot);
        worst = std::max(worst, std::abs(len - (antider(tau) - antider(1.0))));
    }
    r.tolerance = 1e-6;
    r.measured = worst;
    const double total = curve_length(chart, path, 1.0, 50.0, 1e-10, dot);
    const double closed = c * std::log(1.0 / std::tanh(0.5)); // sqrt2 ln coth(1/2)
    const double total_err = std::abs(total - closed);
    r.pass = worst <= 1e-6 && total_err <= 1e-3;
    std::ostringstream os;
    os << "checkpoint err " << worst << ", total " << total << " vs " << closed;
    r.detail = os.str();
    r.runtime_s = seconds_since(t0);
    return r;
}

namespace {

GeodesicTrace glide_escape_trace(double lambda) {
    const double c = std::sqrt(1 + lambda * lambda);
    const ImmersionChart chart = make_chart(Glide{lambda});
    IntegrateOptions opts;
    opts.max_length = 50;
    opts.max_param = 50;
    opts.tol = 1e-11;
    opts.min_step = 1e-13;
    // initial data of the finite-length escape curve at tau = 1
    if (lambda > 0)
        return integrate_geodesic_chart(chart, lambda, -c, lambda, -c, opts);
    // reflected curve for lambda < 0 (incomplete at +pi/2)
    return integrate_geodesic_chart(chart, -lambda, c, -lambda, c, opts);
}

} // namespace

// 4. Asymptotic direction and support value of the finite-length trace.
CheckResult check_asymptotic_direction() {
    const auto t0 = clock_t_::now();
    CheckResult r;
    r.index = 4;
    r.name = "asymptotic null direction of the incomplete trace";
    r.tolerance = 1e-2;
    double worst_theta = 0, worst_support = 0;
    bool converged = true;
    for (double lambda : {1.0, -1.0}) {
        const GeodesicTrace trace = glide_escape_trace(lambda);
        if (!trace.finite_length_candidate()) {
            converged = false;
            continue;
        }
        const AsymptoticReport rep = asymptotic_direction(trace);
        const double expected = lambda > 0 ? -M_PI_2 : M_PI_2;
        worst_theta = std::max(worst_theta, angle_dist(rep.theta_plus, expected));
        worst_support = std::max(worst_support, std::abs(rep.support_value));
    }
    r.measured = worst_theta;
    r.pass = converged && worst_theta <= 1e-2 && worst_support <= 1e-3;
    std::ostringstream os;
    os << "theta err " << worst_theta << ", support err " << worst_support
       << (converged ? "" : ", trace did not converge");
    r.detail = os.str();
    r.runtime_s = seconds_since(t0);
    return r;
}

// 5. Sampled sup over X^lambda against the closed-form support profile,
// plus the equivariance identity of the closed form.
CheckResult check_glide_support() {
    const auto t0 = clock_t_::now();
    CheckResult r;
    r.index = 5;
    r.name = "glide support profile and equivariance";
    r.tolerance = 0.02;
    const double lambda = 1.0;
    const auto ts = log_space(1e-4, 12.0, 400);
    const auto ss = lin_space(-20.0, 20.0, 400);

    auto value = [&](double t, double s, double x) {
        return inner(eval_glide(lambda, t, s), xi(x, 0.0));
    };
    auto golden_s = [&](double t, double x) {
        // <X(t, .), xi(x,0)> is strictly concave in s
        double a = ss.front(), b = ss.back();
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
        double f1 = value(t, c1, x), f2 = value(t, c2, x);
        for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
            if (f1 < f2) {
                a = c1;
                c1 = c2;
                f1 = f2;
                c2 = a + gr * (b - a);
                f2 = value(t, c2, x);
            } else {
                b = c2;
                c2 = c1;
                f2 = f1;
                c1 = b - gr * (b - a);
                f1 = value(t, c1, x);
            }
        }
        return value(t, 0.5 * (a + b), x);
    };

    const auto xs = lin_space(-1.0, -0.05, 25);
    double profile_scale = 0;
    std::vector<double> exact(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        exact[i] = glide_support_closed_form(lambda, xs[i]).value();
        profile_scale = std::max(profile_scale, std::abs(exact[i]));
    }
    double worst_rel = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double best = -1e300;
        for (double t : ts) best = std::max(best, golden_s(t, xs[i]));
        const double denom = std::max(std::abs(exact[i]), 0.01 * profile_scale);
        worst_rel = std::max(worst_rel, std::abs(best - exact[i]) / denom);
    }

    // equivariance of the closed form
    double worst_eqv = 0;
    for (double s : lin_space(-2.0, 2.0, 9))
        for (double x : lin_space(-3.0, -0.01, 40)) {
            const double lhs =
                glide_support_closed_form(lambda, std::exp(s) * x).value();
            const double rhs =
                std::exp(s) *
                (glide_support_closed_form(lambda, x).value() + 2 * lambda * s * x);
            worst_eqv = std::max(worst_eqv, std::abs(lhs - rhs));
        }

    r.measured = worst_rel;
    r.pass = worst_rel <= 0.02 && worst_eqv <= 1e-10;
    std::ostringstream os;
    os << "profile rel err " << worst_rel << ", equivariance err " << worst_eqv;
    r.detail = os.str();
    r.runtime_s = seconds_since(t0);
    return r;
}

// 6. Hoelder barrier: M search with F(u) >= 4/C, exact psi, value at infinity.
CheckResult check_holder_barrier() {
    const auto t0 = clock_t_::now();
    CheckResult r;
    r.index = 6;
    r.name = "Hoelder barrier subsolution";
    r.tolerance = 1e-3;
    const double alpha = 0.5, beta = 0.5, gamma = beta * (1 - alpha), eps = 1.0;
    const double C = 1.0;
    const auto xs = log_space(1e-3, 10.0, 40);
    const auto ys = log_space(1e-3, 50.0, 60);
    double found_M = -1, minF = 0;
    for (double M = 1.0; M <= std::pow(2.0, 20); M *= 2) {
        HolderBarrier b{eps, alpha, beta, gamma, M};
        const ParabolicSupportFn u = family_parabolic_support(b);
        double lo = 1e300;
        for (double ax : xs)
            for (double sx : {1.0, -1.0})
                for (double y : ys) lo = std::min(lo, F_operator(u, sx * ax, y));
        if (lo >= 4.0 / C) {
            found_M = M;
            minF = lo;
            break;
        }
    }
    bool psi_exact = true;
    if (found_M > 0) {
        HolderBarrier b{eps, alpha, beta, gamma, found_M};
        const ParabolicSupportFn u = family_parabolic_support(b);
        for (double x : lin_space(-8.0, 8.0, 33))
            if (u(x, 0.0).value() != eps * std::pow(std::abs(x), 2 - alpha))
                psi_exact = false;
        const ValueAtInfinity vai = value_at_infinity(u);
        r.measured = std::abs(vai.estimate.value());
        r.pass = psi_exact && r.measured <= 1e-3;
        std::ostringstream os;
        os << "M = " << found_M << ", min F = " << minF << ", u(inf) est "
           << vai.estimate.value();
        r.detail = os.str();
    } else {
        r.pass = false;
        r.detail = "no M <= 2^20 with F >= 4/C";
    }
    r.runtime_s = seconds_since(t0);
    return r;
}

// 7. Criterion classification table on the closed-form support functions.
CheckResult check_criterion_table() {
    const auto t0 = clock_t_::now();
    CheckResult r;
    r.index = 7;
    r.name = "criterion classification table";
    const ProbeSpec probe{}; // depth 40
    bool ok = true;
    std::ostringstream os;

    const NullSupportFn semitrough = family_support(Semitrough{});
    for (double th0 : {M_PI_2, -M_PI_2})
        if (!check_comp(semitrough, th0, 1.0, probe).holds) {
            ok = false;
            os << "comp(semitrough," << th0 << ") failed; ";
        }
    const NullSupportFn zero = family_support(Hyperboloid{});
    for (double th0 : {0.0, 1.0, -2.5, M_PI})
        if (!check_comp(zero, th0, 1.0, probe).holds) {
            ok = false;
            os << "comp(zero) failed; ";
        }
    const NullSupportFn parab = family_support(ParabolicInvariant{0.5});
    if (!check_inc(parab, M_PI, 0.25, 0.5, probe).holds) {
        ok = false;
        os << "inc(parabolic) failed; ";
    }
    const NullSupportFn glide1 = family_support(Glide{1.0});
    if (!check_inc_prime(glide1, -M_PI_2, 1.0, probe).holds) {
        ok = false;
        os << "inc-prime(glide) failed; ";
    }
    for (double M : {1.0, 4.0})
        if (check_comp(glide1, -M_PI_2, M, probe).holds) {
            ok = false;
            os << "comp(glide,M=" << M << ") unexpectedly holds; ";
        }
    r.pass = ok;
    r.detail = os.str();
    r.runtime_s = seconds_since(t0);
    return r;
}

// 8. NOT(Comp) <=> no disjoint null line on randomized piecewise supports.
namespace {

struct RandomSupport {
    NullSupportFn phi;
    double theta0;
};

RandomSupport random_piecewise_support(std::mt19937_64& rng, int archetype) {
    std::uniform_real_distribution<double> ang(-M_PI, M_PI);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double theta0 = ang(rng);
    const double phi0 = -1.0 + 2.0 * unit(rng);
    if (archetype == 0) {
        // Lipschitz arc around theta0: Comp holds
        const double a = 0.3 + 0.9 * unit(rng), b = 0.3 + 0.9 * unit(rng);
        const double sl = -3.0 + 6.0 * unit(rng), sr = -3.0 + 6.0 * unit(rng);
        auto fn = [=](double th) {
            const double d = normalize_angle(th - theta0);
            if (d >= -a && d <= b)
                return ExtReal(phi0 + (d >= 0 ? sr * d : sl * d));
            return ExtReal::infinity();
        };
        return {NullSupportFn::closed_form("rand-lipschitz", fn), theta0};
    }
    if (archetype == 1) {
        // isolated finite point: Comp fails
        const double gap = 0.15 + 0.3 * unit(rng);
        auto fn = [=](double th) {
            const double d = normalize_angle(th - theta0);
            if (std::abs(d) < 1e-12) return ExtReal(phi0);
            if (angle_dist(th, theta0 + M_PI) < 0.8) return ExtReal(0.0);
            (void)gap;
            return ExtReal::infinity();
        };
        return {NullSupportFn::closed_form("rand-isolated", fn), theta0};
    }
    // steep (sqrt) one-sided endpoint: Comp fails
    const double cpow = 0.5 + 1.5 * unit(rng);
    const double b = 0.4 + 0.8 * unit(rng);
    auto fn = [=](double th) {
        const double d = normalize_angle(th - theta0);
        if (d >= 0 && d <= b) return ExtReal(phi0 + cpow * std::sqrt(d));
        return ExtReal::infinity();
    };
    return {NullSupportFn::closed_form("rand-steep", fn), theta0};
}

} // namespace

CheckResult check_null_line_equivalence() {
    const auto t0 = clock_t_::now();
    CheckResult r;
    r.index = 8;
    r.name = "null-line criterion equivalence";
    std::mt19937_64 rng(424242);
    const auto Ms = default_M_schedule();
    const auto ms = default_m_schedule();
    int mismatches = 0;
    for (int i = 0; i < 20; ++i) {
        const RandomSupport rs = random_piecewise_support(rng, i % 3);
        const bool comp = comp_holds_any(rs.phi, rs.theta0, Ms);
        const bool disjoint = disjoint_line_exists(rs.phi, rs.theta0, ms);
        if (comp != disjoint) ++mismatches;
    }
    r.measured = mismatches;
    r.pass = mismatches == 0;
    std::ostringstream os;
    os << mismatches << " mismatches of 20";
    r.detail = os.str();
    r.runtime_s = seconds_since(t0);
    return r;
}

// 9. Geodesic diagnostics across the families.
CheckResult check_geodesic_diagnostics() {
    const auto t0 = clock_t_::now();
    CheckResult r;
    r.index = 9;
    r.name = "geodesic diagnostics";
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    struct Config {
        ExplicitSurface surface;
        double u0, u1, v0, v1;
    };
    const std::vector<Config> configs = {
        {Hyperboloid{}, -1.5, 1.5, -1.5, 1.5},
        {Semitrough{}, 0.5, 2.5, -1.5, 1.5},
        {Glide{0.7}, 0.5, 2.5, -1.5, 1.5},
        {Glide{-1.3}, 0.5, 2.5, -1.5, 1.5},
        {ParabolicInvariant{0.5}, -1.0, 1.0, 0.5, 2.0},
        {ParabolicInvariant{2.0}, -1.0, 1.0, 0.5, 2.0},
        {HolderBarrier{1.0, 0.5, 0.5, 0.25, 8.0}, 0.5, 2.0, 0.5, 2.0},
        {CuspComparison{1.0}, -1.0, 1.0, -1.0, 1.0},
    };

    double worst_speed = 0, worst_len_drift = 0;
    int concavity_bad = 0, dext_bad = 0;
    for (int k = 0; k < 50; ++k) {
        const Config& cfg = configs[k % configs.size()];
        const ImmersionChart chart = make_chart(cfg.surface);
        const double u0 = cfg.u0 + (cfg.u1 - cfg.u0) * unit(rng);
        const double v0 = cfg.v0 + (cfg.v1 - cfg.v0) * unit(rng);
        const double ang = 2 * M_PI * unit(rng);
        IntegrateOptions opts;
        opts.max_length = 3.0;
        const GeodesicTrace trace = integrate_geodesic_chart(
            chart, u0, v0, std::cos(ang), std::sin(ang), opts);
        if (trace.samples.size() < 10) continue;

        for (const auto& s : trace.samples)
            worst_speed = std::max(
                worst_speed,
                std::abs(chart_speed(chart, s.u, s.v, s.du, s.dv) - 1.0));

        if (!phi_concavity_check(trace, Vec3{0, 0, 1}).ok) ++concavity_bad;
        if (!phi_concavity_check(trace, theta_vec(0.3)).ok) ++concavity_bad;
        if (!dext_monotonicity_check(trace).ok) ++dext_bad;

        IntegrateOptions fine = opts;
        fine.tol = opts.tol / 16;
        fine.initial_step = opts.initial_step / 2;
        const GeodesicTrace trace2 = integrate_geodesic_chart(
            chart, u0, v0, std::cos(ang), std::sin(ang), fine);
        const double tau_common =
            0.9 * std::min(trace.samples.back().tau, trace2.samples.back().tau);
        auto len_at = [](const GeodesicTrace& tr, double tau) {
            for (std::size_t i = 1; i < tr.samples.size(); ++i)
                if (tr.samples[i].tau >= tau) {
                    const auto& a = tr.samples[i - 1];
                    const auto& b = tr.samples[i];
                    const double w = (tau - a.tau) / (b.tau - a.tau);
                    return a.length + w * (b.length - a.length);
                }
            return tr.samples.back().length;
        };
        worst_len_drift = std::max(
            worst_len_drift,
            std::abs(len_at(trace, tau_common) - len_at(trace2, tau_common)));
    }
    r.measured = worst_speed;
    r.tolerance = 1e-6;
    r.pass = worst_speed <= 1e-6 && concavity_bad == 0 && dext_bad == 0 &&
             worst_len_drift < 1e-7;
    std::ostringstream os;
    os << "speed drift " << worst_speed << ", concavity fails " << concavity_bad
       << ", dext fails " << dext_bad << ", halving drift " << worst_len_drift;
    r.detail = os.str();
    r.runtime_s = seconds_since(t0);
    return r;
}

// 10. Strip bound on the translated-semitrough configuration, h = 1.
CheckResult check_strip_bound() {
    const auto t0 = clock_t_::now();
    CheckResult r;
    r.index = 10;
    r.name = "strip bound (translated semitrough)";
    const double h = 1.0;
    bool ok = true;
    double worst_lo = 1e300, worst_hi = 0;
    for (double rr : lin_space(3.0, 8.0, 21)) {
        const double d = rr - std::log(h / 2);
        // t0 with t0 - coth(t0) + 1 = d; the semitrough through (0, h, h)
        auto x_of_t = [](double t) { return t - std::cosh(t) / std::sinh(t); };
        const double tt0 = bisect([&](double t) { return x_of_t(t) + 1 - d; },
                                  1e-6, d + 10);
        const double eps =
            -h + std::sqrt(h * h + 1.0 / std::pow(std::sinh(tt0), 2));
        auto barrier = [&](double x, double y) {
            return graph_height(Semitrough{}, x + d - 1, y) - eps;
        };
        // configuration sanity: the barrier passes through (0, +-h, h)
        if (std::abs(barrier(0.0, h) - h) > 1e-8) ok = false;
        const double z1 = barrier(rr, 0.0);
        const double lo = h * std::exp(-2 * rr) / 4, hi = h * std::exp(-2 * rr);
        worst_lo = std::min(worst_lo, z1 / lo);
        worst_hi = std::max(worst_hi, z1 / hi);
        if (!(z1 >= lo && z1 <= hi)) ok = false;
    }
    r.pass = ok;
    r.measured = worst_lo;
    r.tolerance = 1.0;
    std::ostringstream os;
    os << "min z1/(he^{-2r}/4) = " << worst_lo << ", max z1/(he^{-2r}) = "
       << worst_hi;
    r.detail = os.str();
    r.runtime_s = seconds_since(t0);
    return r;
}

std::vector<CheckResult> run_acceptance(const std::vector<int>& only) {
    using Fn = CheckResult (*)();
    const std::vector<Fn> checks = {
        check_glide_curvature,     check_parabolic_identity,
        check_finite_length,       check_asymptotic_direction,
        check_glide_support,       check_holder_barrier,
        check_criterion_table,     check_null_line_equivalence,
        check_geodesic_diagnostics, check_strip_bound};
    std::vector<CheckResult> out;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const int idx = static_cast<int>(i) + 1;
        if (!only.empty() &&
            std::find(only.begin(), only.end(), idx) == only.end())
            continue;
        out.push_back(checks[i]());
    }
    return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

std::string results_json(const std::vector<CheckResult>& results) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : results)
        j.push_back({{"index", r.index},
                     {"name", r.name},
                     {"pass", r.pass},
                     {"measured", r.measured},
                     {"tolerance", r.tolerance},
                     {"runtime_s", r.runtime_s},
                     {"detail", r.detail}});
    return j.dump(2);
}

} // namespace lsk::verify
