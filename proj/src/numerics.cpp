#include "lsk/numerics.hpp"

#include <algorithm>

namespace lsk {

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol, int max_iter) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw DomainError("bisect: endpoints do not bracket a root");
    for (int i = 0; i < max_iter && hi - lo > xtol * std::max(1.0, std::abs(lo)); ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_rec(const std::function<double(double)>& f, double a, double fa,
                   double b, double fb, double m, double fm, double whole,
                   double tol, int depth, double global_scale) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    // roundoff floor relative to the whole integral: refining below it only
    // chases noise
    const double floor_tol =
        4e-16 * (global_scale + std::abs(left) + std::abs(right));
    if (depth <= 0 || std::abs(delta) <= 15.0 * std::max(tol, floor_tol))
        return left + right + delta / 15.0;
    return simpson_rec(f, a, fa, m, fm, lm, flm, left, tol * 0.5, depth - 1,
                       global_scale) +
           simpson_rec(f, m, fm, b, fb, rm, frm, right, tol * 0.5, depth - 1,
                       global_scale);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = simpson(a, fa, b, fb, fm);
    return simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth,
                       std::abs(whole));
}

double aitken_limit(const std::vector<double>& seq) {
    if (seq.empty()) throw EmptyInput("aitken_limit: empty sequence");
    double best = seq.back();
    for (std::size_t i = 2; i < seq.size(); ++i) {
        const double d1 = seq[i] - seq[i - 1];
        const double d2 = seq[i] - 2.0 * seq[i - 1] + seq[i - 2];
        if (std::abs(d2) > 1e-300) {
            const double acc = seq[i] - d1 * d1 / d2;
            if (std::isfinite(acc)) best = acc;
        } else {
            best = seq[i];
        }
    }
    return best;
}

unsigned thread_cap() {
    if (const char* env = std::getenv("LSK_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<unsigned>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

void parallel_rows(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const unsigned workers = std::min<std::size_t>(thread_cap(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace lsk
