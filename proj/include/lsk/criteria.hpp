#pragma once

#include <map>
#include <string>
#include <vector>

#include "lsk/families.hpp"
#include "lsk/support.hpp"

namespace lsk {

enum class Condition { Comp, CompPrime, Inc, IncPrime, NullLineDisjoint };

std::string condition_name(Condition c);

/// Geometric probe toward theta0: radii r0 * ratio^k, k = 0..depth-1.
struct ProbeSpec {
    double r0 = 0.1;
    double ratio = 0.5;
    int depth = 40;
    int deep_window = 4; // depths from the bottom that must stay valid

    double radius(int k) const;
};

struct WitnessPoint {
    double theta = 0;
    double radius = 0;
    bool infinite = false;
    double value = 0;     // phi(theta) when finite
    double comparator = 0; // bound it was tested against
    bool valid = false;
};

/// A verdict certified relative to its probe grid; `witness` re-evaluates to
/// `holds` when replayed against the stored support data.
struct CriterionVerdict {
    Condition condition = Condition::Comp;
    double theta0 = 0;
    std::map<std::string, double> params;
    bool holds = false;
    std::vector<WitnessPoint> witness;
    double witness_radius = 0; // largest validated radius (CompPrime/Inc/IncPrime)
    int witness_side = 0;      // +-1 one-sided witnesses; 0 two-sided
    ProbeSpec probe;
};

std::string verdict_to_json(const CriterionVerdict& v);

/// Re-evaluate a verdict's witness against phi; true when it reproduces
/// `holds`.
bool replay(const CriterionVerdict& v, const NullSupportFn& phi);

/// Sequentially sublinear condition: a probe sequence theta_i -> theta0 with
/// phi(theta_i) < phi(theta0) + M |theta_i - theta0| that persists to the
/// deepest probe levels (either side). Throws InfiniteBase when
/// phi(theta0) = +inf.
CriterionVerdict check_comp(const NullSupportFn& phi, double theta0, double M,
                            const ProbeSpec& probe = {});

/// Subloglogarithmic condition on one side:
/// phi <= phi(theta0) + (lambda/4) r log(-log r), probed log-spaced down to
/// 1e-8 (and capped below 1/e where the comparator is defined).
CriterionVerdict check_comp_prime(const NullSupportFn& phi, double theta0,
                                  double lambda, int side,
                                  const ProbeSpec& probe = {});

/// Power growth condition: phi - phi(theta0) > eps r^alpha two-sided.
CriterionVerdict check_inc(const NullSupportFn& phi, double theta0, double eps,
                           double alpha, const ProbeSpec& probe = {});

/// One-sided superlogarithmic condition: +inf on one side and
/// phi >= phi(theta0) + eps r |log r| on the other; both orientations tried.
CriterionVerdict check_inc_prime(const NullSupportFn& phi, double theta0,
                                 double eps, const ProbeSpec& probe = {});

/// Null line of slope m in the support plane at theta0, tested against the
/// boundary of the domain of dependence: the line MEETS the boundary exactly
/// when some point on it (quadratic coefficient pushed through -2^k, k <=
/// q_depth) has point support polynomial <= psi on the whole probe grid;
/// the verdict holds when the line is disjoint.
CriterionVerdict null_line_disjoint(const NullSupportFn& phi, double theta0,
                                    double m, int q_depth = 40,
                                    const ProbeSpec& probe = {});

/// Comp with M searched over a doubling schedule (shared probe grid).
bool comp_holds_any(const NullSupportFn& phi, double theta0,
                    const std::vector<double>& M_schedule,
                    const ProbeSpec& probe = {});

/// Existence of a disjoint null line with slope searched over +-2^j.
bool disjoint_line_exists(const NullSupportFn& phi, double theta0,
                          const std::vector<double>& m_schedule,
                          int q_depth = 40, const ProbeSpec& probe = {});

std::vector<double> default_M_schedule(); // 2^-3 .. 2^13
std::vector<double> default_m_schedule(); // 0, +-2^-3 .. +-2^13

// ---------------------------------------------------------------------------
// Comparison machinery
// ---------------------------------------------------------------------------

struct Rect {
    double x0, x1, y0, y1;
};

struct ComparisonReport {
    double boundary_min_gap = 0;
    double interior_min_gap = 0;
    bool ok = false;
};

/// Verifies f_lower < f_upper on the interior grid given strict ordering on
/// the sampled boundary (the curvature ordering K_- <= -C <= K_+ <= 0 is the
/// caller's assertion from family metadata). Throws BoundaryOrderViolated.
ComparisonReport comparison_check(const ExplicitSurface& upper,
                                  const ExplicitSurface& lower, const Rect& dom,
                                  int grid = 32);

struct StripBoundReport {
    std::vector<double> r;
    std::vector<double> height;
    std::vector<double> lower_bound; // h e^{-2r} / 4
    bool ok = false;
    double min_ratio = 0; // min height / lower_bound
};

/// Graph-height functor for strip/segment checks.
using HeightFn = std::function<double(double, double)>;

/// Checks f >= h on the sampled boundary of [0, x_max] x (-h, h) (throws
/// PreconditionFailed otherwise), then the bound f(r,0) >= h e^{-2r}/4 on the
/// given r samples.
StripBoundReport strip_bound_check(const HeightFn& f, double h,
                                   const std::vector<double>& r_samples,
                                   double x_max, int boundary_samples = 200);

struct LongSegment {
    Vec3 a, b;     // endpoints
    double length = 0;
    double min_margin = 0; // min (z - surface height) over segment samples
    bool contained = false;
};

/// Spacelike segment parallel to L at timelike distance h, bisected by the
/// ray p -> q, of length log(h/(4 delta))/2; containment is verified against
/// the surface graph heights on segment samples. Throws DeltaTooLarge when
/// delta >= eps_threshold.
LongSegment long_segment(const Vec3& p, const Vec3& q, const SpacelikeLine& L,
                         double h, double delta, const HeightFn& surface_height,
                         int samples = 1000,
                         double eps_threshold = -1 /* default h e^{-6}/4 */);

struct ProjectionReport {
    std::vector<Vec3> projected;
    double max_ratio = 0; // pairwise path-length ratio lower/upper
    bool ok = false;
};

/// Flows points on the upper surface down the vertical-translate foliation of
/// the upper graph until hitting the lower one, and reports path-length
/// contraction ratios on consecutive sample pairs. Throws NotInFuture when a
/// point is below the lower graph.
ProjectionReport lipschitz_projection(const HeightFn& upper, const HeightFn& lower,
                                      const std::vector<Vec3>& points,
                                      double ratio_tol = 1e-3);

} // namespace lsk
