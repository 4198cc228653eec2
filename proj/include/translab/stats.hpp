#pragma once

// Statistics helpers: moments, least squares, normal Q-Q fit, bootstrap
// standard errors. Everything is deterministic given its seed argument.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "translab/normal.hpp"
#include "translab/rng.hpp"

namespace translab {

inline double mean(const std::vector<double>& xs) {
    if (xs.empty()) throw std::invalid_argument("mean: empty sample");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

// Unbiased sample variance (n-1 denominator), two-pass for accuracy.
inline double sample_variance(const std::vector<double>& xs) {
    if (xs.size() < 2) throw std::invalid_argument("sample_variance: n < 2");
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

inline double standard_error_of_mean(const std::vector<double>& xs) {
    return std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
}

struct LinearFit {
    double slope;
    double intercept;
    double r2;  // squared Pearson correlation of y with x
};

inline LinearFit linear_fit(const std::vector<double>& xs,
                            const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("linear_fit: need two equal-length samples");
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sx += xs[k];
        sy += ys[k];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double dx = xs[k] - mx, dy = ys[k] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw std::invalid_argument("linear_fit: degenerate x");
    const double slope = sxy / sxx;
    const double r2 = (syy == 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
    return {slope, my - slope * mx, r2};
}

// Normal Q-Q diagnostics: ordered sample against standard normal quantiles
// at plotting positions (k+0.5)/n. Slope and intercept estimate the sample's
// scale and location; r2 measures linearity (1 = perfectly normal).
struct QqFit {
    double r2;
    double slope;
    double intercept;
};

inline QqFit qq_normal_fit(std::vector<double> sample) {
    if (sample.size() < 8)
        throw std::invalid_argument("qq_normal_fit: sample too small");
    std::sort(sample.begin(), sample.end());
    std::vector<double> theo(sample.size());
    const double n = static_cast<double>(sample.size());
    for (std::size_t k = 0; k < sample.size(); ++k)
        theo[k] = norm_quantile((static_cast<double>(k) + 0.5) / n);
    const LinearFit f = linear_fit(theo, sample);
    return {f.r2, f.slope, f.intercept};
}

// Bootstrap standard error of the sample variance: resample paths with
// replacement n_resamples times and take the standard deviation of the
// resampled variances. Resampling indices come from the counter generator,
// so the answer is a pure function of (sample, n_resamples, seed).
inline double bootstrap_se_of_variance(const std::vector<double>& xs,
                                       int n_resamples, std::uint64_t seed) {
    if (xs.size() < 2 || n_resamples < 2)
        throw std::invalid_argument("bootstrap_se_of_variance: too small");
    const std::size_t n = xs.size();
    std::vector<double> vars;
    vars.reserve(n_resamples);
    std::vector<double> draw(n);
    for (int r = 0; r < n_resamples; ++r) {
        for (std::size_t k = 0; k < n; ++k) {
            const std::uint64_t w = counter_word(seed, r, k, 0);
            draw[k] = xs[w % n];
        }
        vars.push_back(sample_variance(draw));
    }
    return std::sqrt(sample_variance(vars));
}

}  // namespace translab
