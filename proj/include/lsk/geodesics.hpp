#pragma once

#include <map>
#include <vector>

#include "lsk/curvature.hpp"
#include "lsk/families.hpp"
#include "lsk/minkowski.hpp"

namespace lsk {

enum class Termination { budget_exhausted, chart_boundary, length_converged };

struct TraceSample {
    double tau = 0;      // integration parameter (arclength for unit speed)
    Vec3 point;          // ambient position
    Vec3 velocity;       // ambient velocity
    double length = 0;   // cumulative length, non-decreasing
    double u = 0, v = 0; // chart coordinates
    double du = 0, dv = 0;
};

struct GeodesicTrace {
    std::vector<TraceSample> samples;
    Termination termination = Termination::budget_exhausted;
    double remaining_estimate = 0; // geometric-series bound past the last step
    double total_length = 0;

    bool finite_length_candidate() const {
        return termination == Termination::length_converged;
    }
};

struct IntegrateOptions {
    double max_length = 1e3;
    double max_param = 1e4;
    double initial_step = 1e-2;
    double max_step = 1e2;
    double tol = 1e-11;         // per-step error control
    double min_step = 1e-12;
    double finite_length_tol = 1e-6; // remaining-length threshold
    // ambient-size cap: past it the Minkowski cancellations in the extrinsic
    // diagnostics eat all digits (terminates as chart_boundary)
    double max_ambient = 1e9;
    std::size_t max_steps = 2'000'000;
    bool unit_speed = true;     // normalize the initial velocity
    double tangent_tol = 1e-6;  // residual allowed when projecting v0
};

/// Integrate the geodesic with initial data (u0,v0,du0,dv0) in the chart.
GeodesicTrace integrate_geodesic_chart(const ImmersionChart& chart, double u0,
                                       double v0, double du0, double dv0,
                                       const IntegrateOptions& opts = {});

/// Ambient entry point: p0 is snapped onto the surface (vertical projection
/// via chart inversion), v0 is projected onto the tangent plane; throws
/// NotTangent when the projection residual exceeds opts.tangent_tol, and
/// DomainError when the projected velocity is not spacelike.
GeodesicTrace integrate_geodesic(const ExplicitSurface& surface, const Vec3& p0,
                                 const Vec3& v0,
                                 const IntegrateOptions& opts = {});

/// Invert a chart for the horizontal coordinates of p (coarse scan plus
/// Gauss-Newton); window is the half-width of the initial search box.
std::array<double, 2> chart_locate(const ImmersionChart& chart, const Vec3& p,
                                   double window = 20.0);

/// Length of the parameter path tau -> (u,v), tau in [a,b], by adaptive
/// quadrature of the first-form speed. Supply path_dot when available: the
/// central-difference fallback carries ~1e-10 relative derivative noise,
/// which matters only for nearly-null tails.
double curve_length(const ImmersionChart& chart,
                    const std::function<std::array<double, 2>(double)>& path,
                    double a, double b, double quad_tol = 1e-10,
                    const std::function<std::array<double, 2>(double)>& path_dot =
                        nullptr);

/// First-form speed of an ambient velocity given chart jacobian data.
double chart_speed(const ImmersionChart& chart, double u, double v, double du,
                   double dv);

struct AsymptoticReport {
    double theta_plus = 0;
    double final_width = 0;
    double support_value = 0;          // Aitken-extrapolated <gamma, theta_+>
    std::vector<std::array<double, 3>> interval_history; // tau, lo, hi
    std::map<double, double> probe_values; // theta -> last <gamma, theta_vec>
    bool nested = true;
};

struct AsymptoticOptions {
    double width_tol = 5e-2;   // final interval width for convergence
    double nest_slack = 1e-6;  // allowed nesting violation
    int tail = 40;             // samples entering the support extrapolation
};

/// Nested-interval extraction of the asymptotic null direction of a
/// finite-length candidate trace. Throws NotContracting when the interval
/// endpoints fail to converge over the tail.
AsymptoticReport asymptotic_direction(const GeodesicTrace& trace,
                                      const AsymptoticOptions& opts = {});

struct ConcavityReport {
    double max_violation = 0; // most positive slope increase
    std::size_t violations = 0;
    double scale = 1;
    bool ok = true;
};

/// Slope-monotonicity check of Phi_v(tau) = <gamma(tau), v> along the trace;
/// v must be future causal (precondition; throws DomainError otherwise).
ConcavityReport phi_concavity_check(const GeodesicTrace& trace, const Vec3& v,
                                    double tol = 1e-6);

struct MonotonicityReport {
    double min_slope = 0;
    std::size_t violations = 0;
    bool ok = true;
};

/// Forward slopes of the extrinsic distance from the trace base point;
/// requires a unit-speed trace.
MonotonicityReport dext_monotonicity_check(const GeodesicTrace& trace,
                                           double tol = 1e-4);

struct DecayReport {
    double bound_constant = 0; // max dist / sqrt(T - tau) over the tail
    double final_dist = 0;
    bool decreasing = true;
    std::size_t used = 0;
};

/// Fit of the timelike distance to L against C sqrt(T - tau) over the tail of
/// a finite-length candidate trace.
DecayReport timelike_decay_check(const GeodesicTrace& trace,
                                 const SpacelikeLine& L, int tail = 60);

/// Thinned view of a trace for difference-based diagnostics (merges steps
/// shorter than min_dt).
std::vector<TraceSample> thin_trace(const GeodesicTrace& trace,
                                    double min_dt = 1e-6);

} // namespace lsk
