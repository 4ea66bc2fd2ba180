#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lsk/families.hpp"
#include "lsk/numerics.hpp"

using namespace lsk;

TEST_CASE("semitrough parametrization") {
    // frozen oracle: high-precision evaluation of the printed formula
    const Vec3 p = eval_semitrough(1.0, 0.0);
    CHECK(p.x == doctest::Approx(-0.31303528549933130).epsilon(1e-14));
    CHECK(p.y == 0.0);
    CHECK(p.z == doctest::Approx(0.85091812823932156).epsilon(1e-14));

    // z^2 - y^2 = 1/sinh^2(t)
    const Vec3 q = eval_semitrough(0.7, 1.2);
    CHECK(q.z * q.z - q.y * q.y ==
          doctest::Approx(1.0 / std::pow(std::sinh(0.7), 2)).epsilon(1e-12));

    // invariance under the hyperbolic rotation in (y,z)
    const Isometry M = glide_isometry(0.0, 0.9);
    CHECK(euclid_dist(M.apply(eval_semitrough(0.7, 1.2)),
                      eval_semitrough(0.7, 2.1)) < 1e-12);

    CHECK_THROWS_AS((void)eval_semitrough(0.0, 1.0), DomainError);
    CHECK_THROWS_AS((void)eval_semitrough(-1.0, 1.0), DomainError);
}

TEST_CASE("glide parametrization and first form") {
    // lambda = 0 reduces to the semitrough
    for (double t : {0.3, 1.0, 2.5})
        for (double s : {-1.0, 0.0, 2.0})
            CHECK(euclid_dist(eval_glide(0.0, t, s), eval_semitrough(t, s)) <
                  1e-14);

    const double lambda = 1.0, t = 0.9;
    const ImmersionChart chart = make_chart(Glide{lambda});
    const auto J = chart.jacobian(t, 0.2);
    const double E = inner(J[0], J[0]), F = inner(J[0], J[1]),
                 G = inner(J[1], J[1]);
    const double c2 = 1 + lambda * lambda, cth = 1.0 / std::tanh(t);
    CHECK(E == doctest::Approx(c2 * cth * cth).epsilon(1e-12));
    CHECK(F == doctest::Approx(lambda * std::sqrt(c2) * cth * cth).epsilon(1e-12));
    CHECK(G == doctest::Approx(lambda * lambda * cth * cth +
                               1.0 / std::pow(std::sinh(t), 2))
                   .epsilon(1e-12));
    CHECK(E * G - F * F ==
          doctest::Approx(c2 * cth * cth / std::pow(std::sinh(t), 2))
              .epsilon(1e-12));
}

TEST_CASE("glide group invariance of the embedding") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(0.2, 2.0);
    std::uniform_real_distribution<double> ds(-2.0, 2.0);
    for (int i = 0; i < 40; ++i) {
        const double lambda = ds(rng), t = d(rng), s = ds(rng), s0 = ds(rng);
        const Vec3 a = glide_isometry(lambda, s0).apply(eval_glide(lambda, t, s));
        const Vec3 b = eval_glide(lambda, t, s + s0);
        CHECK(euclid_dist(a, b) < 1e-10);
    }
}

TEST_CASE("reflection law Sigma_{-lambda} = R(Sigma_lambda)") {
    const Isometry R = reflection_y();
    for (double lambda : {0.5, 1.0, 2.0})
        for (double t : {0.3, 1.1})
            for (double s : {-0.7, 0.4})
                CHECK(euclid_dist(eval_glide(-lambda, t, s),
                                  R.apply(eval_glide(lambda, t, -s))) < 1e-12);
}

TEST_CASE("glide support closed form") {
    CHECK(glide_support_closed_form(1.0, 0.0).value() == 0.0);
    CHECK(glide_support_closed_form(1.0, -1.0).value() == 0.0);
    CHECK(glide_support_closed_form(1.0, 0.5).is_infinite());
    for (double lambda : {0.5, 1.0, 3.0})
        for (double s : {-1.0, 0.3, 1.2}) {
            const double x = -std::exp(s);
            CHECK(glide_support_closed_form(lambda, x).value() ==
                  doctest::Approx(-2 * lambda * s * std::exp(s)).epsilon(1e-13));
        }
}

TEST_CASE("glide support equivariance identity") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ds(-2.0, 2.0);
    std::uniform_real_distribution<double> dx(-4.0, -0.01);
    for (int i = 0; i < 60; ++i) {
        const double lambda = 1.7, s = ds(rng), x = dx(rng);
        const double lhs = glide_support_closed_form(lambda, std::exp(s) * x).value();
        const double rhs =
            std::exp(s) *
            (glide_support_closed_form(lambda, x).value() + 2 * lambda * s * x);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("parabolic family") {
    // eps = 0 is the hyperboloid support
    for (double y : {0.0, 0.5, 3.0}) CHECK(parabolic_family_u(0.0, 0.7, y) == -2 * y);

    // closed form vs quadrature of g(y) = -2 sqrt(1 + eps^2 y^2)
    const double eps = 0.5;
    const double byquad = adaptive_simpson(
        [&](double t) { return -2 * std::sqrt(1 + eps * eps * t * t); }, 0.0, 2.0,
        1e-13);
    CHECK(parabolic_family_u(eps, 0.0, 2.0) ==
          doctest::Approx(byquad).epsilon(1e-10));

    // psi(x) = u(x, 0) = 0
    for (double x : {-3.0, 0.0, 2.0}) CHECK(parabolic_family_u(eps, x, 0.0) == 0.0);

    CHECK_THROWS_AS((void)parabolic_family_u(eps, 0.0, -1.0), DomainError);

    // derivative ladder is consistent (finite differences)
    for (double y : {0.3, 1.0, 4.0}) {
        const double h = 1e-6;
        CHECK(central_diff([&](double t) { return parabolic_family_u(eps, 0, t); },
                           y, h) ==
              doctest::Approx(parabolic_family_f1(eps, y)).epsilon(1e-7));
        CHECK(central_diff([&](double t) { return parabolic_family_f1(eps, t); },
                           y, h) ==
              doctest::Approx(parabolic_family_f2(eps, y)).epsilon(1e-7));
        CHECK(central_diff([&](double t) { return parabolic_family_f2(eps, t); },
                           y, h) ==
              doctest::Approx(parabolic_family_f3(eps, y)).epsilon(1e-7));
    }
}

TEST_CASE("holder barrier derivatives") {
    HolderBarrier p{1.0, 0.5, 0.5, 0.2, 4.0};
    // u_y on the axis (one-sided limit of the formula)
    for (double y : {0.5, 1.0, 3.0}) {
        const HolderDerivs d = holder_barrier_u(p, 1e-12, y);
        CHECK(d.uy == doctest::Approx(-p.M * p.beta * std::pow(y, p.beta - 1))
                          .epsilon(1e-6));
    }
    CHECK_THROWS_AS((void)holder_barrier_u(p, 0.0, 1.0), DerivativeUndefined);

    // finite-difference gradient check at (0.7, 1.3), h = 1e-5
    const double x = 0.7, y = 1.3, h = 1e-5;
    const HolderDerivs d = holder_barrier_u(p, x, y);
    auto u = [&](double a, double b) { return holder_barrier_u(p, a, b).u; };
    CHECK(d.ux == doctest::Approx((u(x + h, y) - u(x - h, y)) / (2 * h)).epsilon(1e-6));
    CHECK(d.uy == doctest::Approx((u(x, y + h) - u(x, y - h)) / (2 * h)).epsilon(1e-6));
    CHECK(d.uxx ==
          doctest::Approx((u(x + h, y) - 2 * u(x, y) + u(x - h, y)) / (h * h))
              .epsilon(1e-4));
    CHECK(d.uyy ==
          doctest::Approx((u(x, y + h) - 2 * u(x, y) + u(x, y - h)) / (h * h))
              .epsilon(1e-4));
    CHECK(d.uxy == doctest::Approx((u(x + h, y + h) - u(x + h, y - h) -
                                    u(x - h, y + h) + u(x - h, y - h)) /
                                   (4 * h * h))
                       .epsilon(1e-4));

    // parameter validation
    CHECK_THROWS_AS(HolderBarrier(1.0, 0.5, 0.5, 0.6, 4.0).validate(), DomainError);
    CHECK_THROWS_AS(HolderBarrier(1.0, 1.5, 0.5, 0.2, 4.0).validate(), DomainError);
}

TEST_CASE("cusp comparison profile") {
    const double eps = 0.8;
    CHECK(cusp_profile_rho(eps, 0.0) == eps);
    CHECK(cusp_profile_speed2(eps, 0.0) == doctest::Approx(eps * eps));
    // spacelike for all alpha, and > eps^2/(2 alpha^2) for alpha >= 2
    for (double a = -6; a <= 6; a += 0.25) CHECK(cusp_profile_speed2(eps, a) > 0);
    for (double a = 2; a <= 40; a *= 1.5)
        CHECK(cusp_profile_speed2(eps, a) > eps * eps / (2 * a * a));

    // cumulative profile length diverges logarithmically: the decade
    // increment approaches eps log 10 (speed ~ eps/alpha), staying above the
    // (eps/sqrt2) log A bound implied by speed^2 > eps^2/(2 alpha^2)
    auto len_to = [&](double A) {
        return adaptive_simpson(
            [&](double a) { return std::sqrt(cusp_profile_speed2(eps, a)); }, 1.0,
            A, 1e-11);
    };
    const double l3 = len_to(1e3), l4 = len_to(1e4);
    CHECK(l4 - l3 == doctest::Approx(eps * std::log(10.0)).epsilon(1e-3));
    CHECK(l4 - l3 > eps / std::sqrt(2.0) * std::log(10.0));
    CHECK(l4 > l3 + 0.5 * eps); // divergence with the window
}

TEST_CASE("graph heights") {
    CHECK(graph_height(Hyperboloid{}, 0, 0) == 1.0);
    CHECK(graph_height(Hyperboloid{}, 3, 4) == doctest::Approx(std::sqrt(26.0)));

    // semitrough at (t - coth t, 0) for t = 1 -> 1/sinh(1) (parametric oracle)
    const Vec3 p = eval_semitrough(1.0, 0.0);
    CHECK(graph_height(Semitrough{}, p.x, p.y) ==
          doctest::Approx(p.z).epsilon(1e-9));

    // glide heights agree with the parametric evaluation at random points
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> dt(0.2, 2.5), ds(-2.0, 2.0);
    for (int i = 0; i < 25; ++i) {
        const double lambda = 1.3, t = dt(rng), s = ds(rng);
        const Vec3 q = eval_glide(lambda, t, s);
        CHECK(graph_height(Glide{lambda}, q.x, q.y) ==
              doctest::Approx(q.z).epsilon(1e-8));
    }

    // support-envelope route reproduces the hyperboloid graph
    for (double x : {-1.0, 0.0, 0.8})
        CHECK(graph_height(ParabolicInvariant{0.0}, x, 0.4) ==
              doctest::Approx(std::sqrt(1 + x * x + 0.16)).epsilon(1e-6));

    // cusp comparison is a y-invariant graph through its profile
    const double a0 = 0.7, e0 = 1.0;
    const double px = cusp_profile_rho(e0, a0) * std::sinh(a0);
    CHECK(graph_height(CuspComparison{e0}, px, 5.0) ==
          doctest::Approx(cusp_profile_rho(e0, a0) * std::cosh(a0)).epsilon(1e-9));
}

TEST_CASE("family charts are immersions") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> un(0.0, 1.0);
    const std::vector<ExplicitSurface> surfaces = {
        Hyperboloid{},      Semitrough{},          Glide{1.0},
        ParabolicInvariant{0.7}, HolderBarrier{1.0, 0.5, 0.5, 0.25, 8.0},
        CuspComparison{1.0}};
    for (const auto& s : surfaces) {
        const ImmersionChart chart = make_chart(s);
        for (int i = 0; i < 10; ++i) {
            const double u = 0.3 + 1.5 * un(rng);
            const double v = 0.3 + 1.5 * un(rng);
            const auto J = chart.jacobian(u, v);
            const double E = inner(J[0], J[0]), F = inner(J[0], J[1]),
                         G = inner(J[1], J[1]);
            CHECK(E * G - F * F > 1e-10); // rank 2, spacelike
        }
    }
}

TEST_CASE("analytic chart derivatives match finite differences") {
    // gradient check of jac/hess for the closed-form charts
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> un(0.4, 1.6);
    const std::vector<ExplicitSurface> surfaces = {
        Hyperboloid{}, Glide{0.8}, ParabolicInvariant{0.6}, CuspComparison{1.2},
        HolderBarrier{1.0, 0.5, 0.5, 0.25, 8.0}};
    for (const auto& s : surfaces) {
        const ImmersionChart chart = make_chart(s);
        for (int i = 0; i < 25; ++i) {
            const double u = un(rng), v = un(rng), h = 1e-5;
            const auto J = chart.jac(u, v);
            const Vec3 fdu = (chart.eval(u + h, v) - chart.eval(u - h, v)) / (2 * h);
            const Vec3 fdv = (chart.eval(u, v + h) - chart.eval(u, v - h)) / (2 * h);
            CHECK(euclid_dist(J[0], fdu) < 1e-5 * (1 + std::sqrt(J[0].euclid_norm2())));
            CHECK(euclid_dist(J[1], fdv) < 1e-5 * (1 + std::sqrt(J[1].euclid_norm2())));
            const auto H = chart.hess(u, v);
            const auto Jp = chart.jac(u + h, v), Jm = chart.jac(u - h, v);
            const auto Kp = chart.jac(u, v + h), Km = chart.jac(u, v - h);
            CHECK(euclid_dist(H[0], (Jp[0] - Jm[0]) / (2 * h)) < 1e-5 * (1 + std::sqrt(H[0].euclid_norm2())));
            CHECK(euclid_dist(H[1], (Kp[0] - Km[0]) / (2 * h)) < 1e-5 * (1 + std::sqrt(H[1].euclid_norm2())));
            CHECK(euclid_dist(H[2], (Kp[1] - Km[1]) / (2 * h)) < 1e-5 * (1 + std::sqrt(H[2].euclid_norm2())));
        }
    }
}

TEST_CASE("sampled semitrough support converges to the closed form") {
    const NullSupportFn closed = family_support(Semitrough{});
    std::vector<Vec3> pts;
    for (double t = 1e-3; t < 12; t *= 1.1)
        for (double s = -16; s <= 16; s += 0.05) pts.push_back(eval_semitrough(t, s));
    // on the zero arc (through pi): approaches 0 from below
    for (double th : {1.7, M_PI, -2.8, M_PI_2 * 1.02}) {
        REQUIRE(closed(th).value() == 0.0);
        const double v = null_support_from_points(pts, th);
        CHECK(v <= 1e-12);
        CHECK(v > -0.2);
    }
    // on the infinite arc: diverges positively as the window grows
    std::vector<Vec3> small_pts, big_pts;
    for (double t = 0.05; t < 4; t *= 1.2)
        for (double s = -4; s <= 4; s += 0.1) small_pts.push_back(eval_semitrough(t, s));
    for (double t = 0.05; t < 12; t *= 1.2)
        for (double s = -12; s <= 12; s += 0.1) big_pts.push_back(eval_semitrough(t, s));
    for (double th : {0.0, 1.2}) {
        REQUIRE(closed(th).is_infinite());
        const double out_small = null_support_from_points(small_pts, th);
        const double out_big = null_support_from_points(big_pts, th);
        CHECK(out_big > out_small + 1.0);
        CHECK(out_big > 3.0);
    }
}

TEST_CASE("family parsing") {
    CHECK(family_name(parse_family("glide", 2.0, 0, 0, 0, 0, 0)) == "glide");
    CHECK(family_name(parse_family("hyperboloid", 0, 0, 0, 0, 0, 0)) ==
          "hyperboloid");
    CHECK_THROWS_AS((void)parse_family("nonsense", 0, 0, 0, 0, 0, 0), ConfigError);
    // gamma >= 1 - alpha rejected before any computation
    CHECK_THROWS_AS((void)parse_family("holder-barrier", 0, 1.0, 0.5, 0.5, 0.6, 4.0),
                    ConfigError);
}
