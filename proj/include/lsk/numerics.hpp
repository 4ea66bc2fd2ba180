#pragma once

#include <cmath>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

#include "lsk/errors.hpp"

namespace lsk {

/// Bisection on [lo, hi]; f(lo) and f(hi) must have opposite signs.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol = 1e-14, int max_iter = 200);

/// Adaptive Simpson quadrature of f over [a, b].
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-12, int max_depth = 26);

/// Aitken delta-squared extrapolation of the tail of a sequence. Returns the
/// last accelerated value, or the last raw value when acceleration degenerates.
double aitken_limit(const std::vector<double>& seq);

/// Central-difference first derivative.
inline double central_diff(const std::function<double(double)>& f, double x,
                           double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Thread cap for grid sweeps: LSK_THREADS if set, else hardware concurrency.
unsigned thread_cap();

/// Chunked parallel loop over [0, n) with deterministic output: fn(i) must be
/// pure and write only to slot i of caller-owned storage.
void parallel_rows(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace lsk
