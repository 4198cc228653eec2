#pragma once

// Small independent solvers used to cross-check closed forms in tests.
// Deliberately naive: bisection, dense grid scans, brute-force Monte Carlo.
// They share no code with the library functions they check.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

// Root of f on [lo, hi]; requires a sign change.
inline double bisect(const std::function<double(double)>& f, double lo,
                     double hi, double tol = 1e-13) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) throw std::runtime_error("bisect: no sign change");
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

// Argmax of f over a dense uniform grid on [lo, hi].
inline double grid_argmax(const std::function<double(double)>& f, double lo,
                          double hi, int n = 200001) {
    double best_x = lo, best = f(lo);
    for (int k = 1; k < n; ++k) {
        const double x = lo + (hi - lo) * k / (n - 1);
        const double v = f(x);
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    return best_x;
}

inline double mean(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

inline double sample_variance(const std::vector<double>& xs) {
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

}  // namespace oracle
