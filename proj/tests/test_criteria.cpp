#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lsk/criteria.hpp"
#include "lsk/numerics.hpp"

using namespace lsk;

namespace {

NullSupportFn sqrt_cusp_phi() {
    // phi(theta) = |theta|^{1/2} near 0, finite everywhere
    return NullSupportFn::closed_form("sqrt-cusp", [](double th) {
        return ExtReal(std::sqrt(angle_dist(th, 0.0)));
    });
}

} // namespace

TEST_CASE("check_comp") {
    // semitrough at the arc endpoint, M = 1: holds via the inside sequence
    const NullSupportFn st = family_support(Semitrough{});
    const CriterionVerdict v1 = check_comp(st, M_PI_2, 1.0);
    CHECK(v1.holds);
    CHECK(replay(v1, st));

    // phi = |theta|^{1/2}: power growth beats any linear bound near 0
    const NullSupportFn sq = sqrt_cusp_phi();
    for (double M : {0.5, 1.0, 8.0}) CHECK_FALSE(check_comp(sq, 0.0, M).holds);

    // phi == 0: holds for every theta0 and M
    const NullSupportFn zero = family_support(Hyperboloid{});
    for (double th0 : {0.0, 1.7, -2.4}) CHECK(check_comp(zero, th0, 0.3).holds);

    // infinite base direction is an error (vacuously complete there);
    // the semitrough's infinite arc contains theta = 0
    CHECK_THROWS_AS((void)check_comp(st, 0.0, 1.0), InfiniteBase);
}

TEST_CASE("check_comp_prime") {
    const NullSupportFn zero = family_support(Hyperboloid{});
    CHECK(check_comp_prime(zero, 0.3, 0.7, +1).holds);

    // phi = (lambda/8) |theta| log(-log|theta|): holds with factor-2 slack
    const double lambda = 1.0;
    const NullSupportFn half = NullSupportFn::closed_form("half-loglog", [=](double th) {
        const double r = angle_dist(th, 0.0);
        if (r < 1e-300) return ExtReal(0.0);
        if (r >= std::exp(-1.0)) return ExtReal(0.0);
        return ExtReal(lambda / 8 * r * std::log(-std::log(r)));
    });
    CHECK(check_comp_prime(half, 0.0, lambda, +1).holds);
    CHECK(check_comp_prime(half, 0.0, lambda, -1).holds);

    // glide support: ~ 2 lambda r |log r| growth beats the loglog comparator
    const NullSupportFn glide1 = family_support(Glide{1.0});
    CHECK_FALSE(check_comp_prime(glide1, -M_PI_2, 1.0, -1).holds);
    // (the +1 side is +inf, which also fails the comparator)
    CHECK_FALSE(check_comp_prime(glide1, -M_PI_2, 1.0, +1).holds);

    CHECK_THROWS_AS((void)check_comp_prime(zero, 0.0, 0.7, 0), DomainError);
    CHECK_THROWS_AS((void)check_comp_prime(zero, 0.0, -1.0, 1), DomainError);
}

TEST_CASE("check_inc") {
    // parabolic family: two-sided jump at pi
    const NullSupportFn parab = family_support(ParabolicInvariant{0.5});
    const CriterionVerdict v = check_inc(parab, M_PI, 0.25, 0.5);
    CHECK(v.holds);
    CHECK(replay(v, parab));

    // phi == 0 fails for every (eps, alpha)
    const NullSupportFn zero = family_support(Hyperboloid{});
    CHECK_FALSE(check_inc(zero, 0.0, 0.5, 0.5).holds);
    CHECK_FALSE(check_inc(zero, 1.0, 0.01, 0.9).holds);

    // |theta|^{1/2} with alpha = 0.7: r^{1/2} > 0.5 r^{0.7} for r < 32 --
    // holds on the whole probe (oracle: the scalar inequality)
    const NullSupportFn sq = sqrt_cusp_phi();
    const CriterionVerdict vs = check_inc(sq, 0.0, 0.5, 0.7);
    CHECK(vs.holds);
    CHECK(vs.witness_radius > 0.05);

    CHECK_THROWS_AS((void)check_inc(zero, 0.0, -1.0, 0.5), DomainError);
    CHECK_THROWS_AS((void)check_inc(zero, 0.0, 0.5, 1.5), DomainError);
}

TEST_CASE("check_inc_prime") {
    // glide phi_1 at -pi/2 with eps = 1: +inf side toward (-pi/2, pi/2)
    const NullSupportFn glide1 = family_support(Glide{1.0});
    const CriterionVerdict v = check_inc_prime(glide1, -M_PI_2, 1.0);
    CHECK(v.holds);
    CHECK(v.witness_side == +1);
    CHECK(replay(v, glide1));

    // semitrough at pi/2: the finite side is identically 0, clause (b) fails
    const NullSupportFn st = family_support(Semitrough{});
    CHECK_FALSE(check_inc_prime(st, M_PI_2, 0.5).holds);

    // phi == 0: clause (a) fails (no infinite side)
    const NullSupportFn zero = family_support(Hyperboloid{});
    CHECK_FALSE(check_inc_prime(zero, 0.0, 0.5).holds);
}

TEST_CASE("null line criterion on the cone") {
    // phi == 0: the apex ray's line (m = 0) meets the cone boundary; every
    // other slope is disjoint. Oracle: f_p(x) = m x + q x^2 <= 0 forces m = 0.
    const NullSupportFn zero = family_support(Hyperboloid{});
    const CriterionVerdict v0 = null_line_disjoint(zero, 0.0, 0.0);
    CHECK_FALSE(v0.holds); // meets
    for (double m : {0.5, -0.5, 2.0, -8.0})
        CHECK(null_line_disjoint(zero, 0.0, m).holds);

    // equivalence with Comp for the cone (Comp holds)
    CHECK(comp_holds_any(zero, 0.0, default_M_schedule()));
    CHECK(disjoint_line_exists(zero, 0.0, default_m_schedule()));
}

TEST_CASE("null line criterion on the wedge") {
    // finite only at {0, pi}: boundary of the domain of dependence is the
    // wedge z = |x|, whose face {z = x >= 0} lies inside the support plane:
    // every null line meets it. Comp fails; no disjoint line.
    const NullSupportFn wedge = family_support(CuspComparison{1.0});
    for (double m : {0.0, 1.0, -1.0, 4.0})
        CHECK_FALSE(null_line_disjoint(wedge, 0.0, m).holds);
    CHECK_FALSE(comp_holds_any(wedge, 0.0, default_M_schedule()));
    CHECK_FALSE(disjoint_line_exists(wedge, 0.0, default_m_schedule()));
}

TEST_CASE("null line criterion on a sampled cantor-like support") {
    // 0 on a coarse cantor-ish probe set around 0, +inf off it; theta0 = 0 is
    // approached by finite (zero) values: Comp holds, so a disjoint line must
    // exist; verdicts are consistent with the dod-envelope oracle.
    auto cantorish = [](double th) {
        const double r = angle_dist(th, 0.0);
        if (r < 1e-14) return ExtReal(0.0);
        // points r = 3^{-k} and 2*3^{-k}
        for (int k = 0; k < 60; ++k) {
            const double p = std::pow(3.0, -k);
            if (std::abs(r - p) < 1e-13 || std::abs(r - 2 * p) < 1e-13)
                return ExtReal(0.0);
        }
        return ExtReal::infinity();
    };
    // probe radii 0.1 * 2^{-k} never hit the cantor points; evaluate on the
    // cantor points instead through a custom probe match: use the closed-form
    // support with a grid that contains the cantor points
    // the uniform probe grid cannot certify finiteness of a measure-zero
    // contact set; disable the construction check (documented gap)
    const NullSupportFn phi =
        NullSupportFn::closed_form("cantorish", cantorish, 4096, 0);
    // Comp via an explicit sequence: theta_i = 3^{-k} has phi = 0 < M r
    // (the generic evaluator cannot see measure-zero points; this is the
    // documented probe-relative behaviour). The null-line side still gives
    // the right geometry: the line bundle f_p <= psi is blocked only at the
    // sampled zeros.
    const CriterionVerdict v = null_line_disjoint(phi, 0.0, 3.0);
    // oracle: dod heights of the wedge-like envelope over the sampled zeros:
    // psi = 0 on the sample set, so f_p(x) = 3x + qx^2 > 0 = psi on one side
    // of 0 for any q > -inf at x small: the line is disjoint.
    CHECK(v.holds);
}

TEST_CASE("comparison principle check") {
    // vertically lifted hyperboloid above the glide surface
    const ExplicitSurface upper = Hyperboloid{};
    const ExplicitSurface lower = Glide{1.0};
    // compare within a region where the plain hyperboloid is already above
    // the glide graph (curvature ordering: both are -1, C = 1)
    const Rect dom{-0.6, 0.2, -0.4, 0.4};
    bool above = true;
    for (double x = dom.x0; x <= dom.x1; x += 0.1)
        for (double y = dom.y0; y <= dom.y1; y += 0.1)
            if (graph_height(upper, x, y) <= graph_height(lower, x, y))
                above = false;
    if (above) {
        const ComparisonReport rep = comparison_check(upper, lower, dom, 17);
        CHECK(rep.ok);
        CHECK(rep.interior_min_gap > 0);
    }

    // identical surfaces: boundary ordering is not strict
    CHECK_THROWS_AS((void)comparison_check(upper, upper, dom, 9),
                    BoundaryOrderViolated);
}

TEST_CASE("strip bound on a lifted hyperboloid") {
    // f = sqrt(1+x^2+y^2) + c with f >= h on the strip boundary: the bound
    // holds with a large margin (oracle: explicit heights)
    const double h = 1.0;
    auto f = [](double x, double y) { return std::sqrt(1 + x * x + y * y); };
    std::vector<double> rs;
    for (double r = 3; r <= 8; r += 0.5) rs.push_back(r);
    const StripBoundReport rep = strip_bound_check(f, h, rs, 10.0);
    CHECK(rep.ok);
    CHECK(rep.min_ratio > 100.0);

    // a surface violating the boundary hypothesis
    auto low = [](double x, double y) { return 0.1 * std::hypot(x, y); };
    CHECK_THROWS_AS((void)strip_bound_check(low, h, rs, 10.0),
                    PreconditionFailed);
}

TEST_CASE("long segment construction") {
    const SpacelikeLine L({0, 0, 0}, {1, 0, 0}); // x-axis
    const double h = 1.0;
    // delta = h e^{-2r}/4 gives segment length r
    for (double r : {7.0, 9.0, 12.0}) {
        const double delta = h * std::exp(-2 * r) / 4;
        const Vec3 p{0.5, 0, 0};
        const Vec3 q{0.5, 0, delta};
        auto far_below = [](double, double) { return -10.0; };
        const LongSegment seg = long_segment(p, q, L, h, delta, far_below);
        CHECK(seg.length == doctest::Approx(r).epsilon(1e-12));
        // h = 1: endpoints on the hyperbolic cylinder z^2 - x^2 = 1 in the
        // frame adapted to L (here: z-coordinate h above the axis)
        CHECK(seg.a.z == doctest::Approx(1.0));
        CHECK(seg.b.z == doctest::Approx(1.0));
        CHECK(seg.contained);
    }

    // containment against a translated semitrough: the segment over the
    // x-axis at height 1 must clear the barrier through (0, +-1, 1)
    const double r = 8.0, d = r + std::log(2.0);
    auto x_of_t = [](double t) { return t - std::cosh(t) / std::sinh(t); };
    const double tt0 =
        bisect([&](double t) { return x_of_t(t) + 1 - d; }, 1e-6, d + 10);
    const double eps = -1 + std::sqrt(1 + 1.0 / std::pow(std::sinh(tt0), 2));
    auto barrier = [&](double x, double y) {
        return graph_height(Semitrough{}, x + d - 1, y) - eps;
    };
    const double zq = barrier(r, 0.0); // ~ h e^{-2r}/2 by the strip analysis
    REQUIRE(zq <= std::exp(-2 * r));
    const double delta = zq * (1 + 1e-9);
    const Vec3 p{r, 0, 0}, q{r, 0, zq};
    const LongSegment seg = long_segment(p, q, L, 1.0, delta, barrier);
    CHECK(seg.contained);
    CHECK(seg.min_margin >= 0);

    // delta >= eps(h) rejected
    CHECK_THROWS_AS((void)long_segment(p, q, L, 1.0, 0.5, barrier),
                    DeltaTooLarge);
}

TEST_CASE("lipschitz projection") {
    auto hyp = [](double x, double y) { return std::sqrt(1 + x * x + y * y); };
    auto hyp_up = [&](double x, double y) { return hyp(x, y) + 1.0; };

    // upper = lower: identity, ratio 1
    std::vector<Vec3> pts;
    for (double x = -0.6; x <= 0.6; x += 0.3)
        pts.push_back({x, 0.2, hyp(x, 0.2)});
    const ProjectionReport same = lipschitz_projection(hyp, hyp, pts);
    CHECK(same.ok);
    CHECK(same.max_ratio == doctest::Approx(1.0).epsilon(1e-9));

    // hyperboloid + 1 projected down to the hyperboloid
    std::vector<Vec3> up_pts;
    for (double x = -0.8; x <= 0.8; x += 0.2)
        up_pts.push_back({x, -0.1, hyp_up(x, -0.1)});
    const ProjectionReport rep = lipschitz_projection(hyp_up, hyp, up_pts);
    CHECK(rep.ok);
    CHECK(rep.max_ratio <= 1.0 + 1e-3);
    for (const auto& q : rep.projected)
        CHECK(q.z == doctest::Approx(hyp(q.x, q.y)).epsilon(1e-6));

    // glide pair: the surface under its own vertical translate
    auto glide_h = [](double x, double y) {
        return graph_height(Glide{1.0}, x, y);
    };
    auto glide_up = [&](double x, double y) { return glide_h(x, y) + 0.5; };
    std::vector<Vec3> gp;
    for (double x = -0.4; x <= 0.4; x += 0.2)
        gp.push_back({x, 0.1, glide_up(x, 0.1)});
    const ProjectionReport grep = lipschitz_projection(glide_up, glide_h, gp);
    CHECK(grep.ok);

    // a point below the lower surface is rejected
    CHECK_THROWS_AS(
        (void)lipschitz_projection(hyp_up, hyp, {Vec3{0, 0, 0}}), NotInFuture);
}

TEST_CASE("verdict replay is bit-exact") {
    const NullSupportFn zero = family_support(Hyperboloid{});
    const CriterionVerdict nl = null_line_disjoint(zero, 0.0, 2.0);
    CHECK(nl.holds);
    CHECK(replay(nl, zero));
    const NullSupportFn glide1 = family_support(Glide{1.0});
    const CriterionVerdict a = check_comp(glide1, -M_PI_2, 1.0);
    CHECK(replay(a, glide1));
    const CriterionVerdict b = check_inc_prime(glide1, -M_PI_2, 1.0);
    CHECK(replay(b, glide1));
    const NullSupportFn parab = family_support(ParabolicInvariant{0.5});
    CHECK(replay(check_inc(parab, M_PI, 0.25, 0.5), parab));
    CHECK_FALSE(replay(b, parab)); // wrong support data does not replay
}

TEST_CASE("verdict JSON record") {
    const NullSupportFn zero = family_support(Hyperboloid{});
    const CriterionVerdict v = check_comp(zero, 0.3, 1.0);
    const std::string js = verdict_to_json(v);
    CHECK(js.find("\"condition\": \"comp\"") != std::string::npos);
    CHECK(js.find("\"holds\": true") != std::string::npos);
    CHECK(js.find("\"probe\"") != std::string::npos);
}

TEST_CASE("classification table") {
    const NullSupportFn st = family_support(Semitrough{});
    const NullSupportFn parab = family_support(ParabolicInvariant{0.5});
    const NullSupportFn glide1 = family_support(Glide{1.0});
    CHECK(check_comp(st, M_PI_2, 1.0).holds);
    CHECK(check_comp(st, -M_PI_2, 1.0).holds);
    CHECK(check_inc(parab, M_PI, 0.25, 0.5).holds);
    CHECK(check_inc_prime(glide1, -M_PI_2, 1.0).holds);
    CHECK_FALSE(check_comp(glide1, -M_PI_2, 1.0).holds);
}
