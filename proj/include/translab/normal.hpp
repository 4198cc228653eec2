#pragma once

// Standard normal CDF, density, and quantile.
//
// The CDF goes through std::erfc (machine precision). The quantile is
// Acklam's rational approximation refined with one Halley step, which takes
// it to ~1e-15 relative error over (0,1); coefficients below are Acklam's
// published values.

#include <cmath>
#include <limits>
#include <stdexcept>

namespace translab {

inline double norm_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014326779;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

inline double norm_cdf(double x) {
    static const double inv_sqrt2 = 0.7071067811865475244;
    return 0.5 * std::erfc(-x * inv_sqrt2);
}

// log Phi(x), stable far into the left tail where norm_cdf underflows
// (erfc runs out near x = -37; the asymptotic branch takes over before that).
inline double log_norm_cdf(double x) {
    if (x > -26.0) return std::log(norm_cdf(x));
    // Asymptotic expansion of Mills' ratio for large negative x.
    const double x2 = x * x;
    const double series =
        1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
    return -0.5 * x2 - 0.5 * std::log(2.0 * M_PI) - std::log(-x) + std::log(series);
}

// Inverse of norm_cdf. Domain (0,1); returns +-infinity at the endpoints.
inline double norm_quantile(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("norm_quantile: p outside [0,1]");
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();

    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    static const double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // One Halley step against the exact CDF.
    const double e = norm_cdf(x) - p;
    const double u = e / norm_pdf(x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

}  // namespace translab
