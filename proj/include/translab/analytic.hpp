#pragma once

// Closed-form quantities of the autonomy model.
//
// At a pinned information level I the autonomy process is a geometric
// Brownian motion with drift mu(I) = mu0 - beta*I - gamma*I^2, so moments,
// the log-normal terminal law, and first-passage statistics against the
// disengagement boundary all have exact expressions. Everything here is
// deterministic and cheap; the simulator and validation suite test
// themselves against these forms.

#include <cmath>
#include <optional>
#include <stdexcept>

#include "translab/normal.hpp"
#include "translab/params.hpp"

namespace translab {

enum class DriftRegime { sustaining, depleting };

struct DriftValue {
    double value;
    DriftRegime regime;  // depleting when value < sigma_a^2 / 2
};

inline DriftValue drift(double i, const ModelParams& p) {
    if (!(i >= 0.0)) throw std::invalid_argument("drift: I must be >= 0");
    const double v = p.mu0 - p.beta * i - p.gamma * i * i;
    const DriftRegime r = (v < 0.5 * p.sigma_a * p.sigma_a)
                              ? DriftRegime::depleting
                              : DriftRegime::sustaining;
    return {v, r};
}

// Unique positive root of mu(I) = 0: above it the drift itself is negative.
inline double critical_threshold(const ModelParams& p) {
    return (-p.beta + std::sqrt(p.beta * p.beta + 4.0 * p.gamma * p.mu0)) /
           (2.0 * p.gamma);
}

inline double disengagement_boundary(double wm_items, const ModelParams& p) {
    if (!(wm_items >= 0.0))
        throw std::invalid_argument("disengagement_boundary: wm must be >= 0");
    const double b = p.b0 - p.beta_wm * wm_items;
    if (!(b > 0.0))
        throw std::invalid_argument(
            "disengagement_boundary: b0 - beta_wm*wm is not positive");
    return b;
}

inline double mean_autonomy(double t, double i, const ModelParams& p) {
    if (!(t >= 0.0)) throw std::invalid_argument("mean_autonomy: t must be >= 0");
    return p.a0 * std::exp(drift(i, p).value * t);
}

inline double variance_autonomy(double t, double i, const ModelParams& p) {
    if (!(t >= 0.0))
        throw std::invalid_argument("variance_autonomy: t must be >= 0");
    const double mu = drift(i, p).value;
    return p.a0 * p.a0 * std::exp(2.0 * mu * t) *
           std::expm1(p.sigma_a * p.sigma_a * t);
}

// Parameters of the log-normal law of A_t: ln A_t ~ N(location, scale^2).
struct LogNormalLaw {
    double location;
    double scale;
};

inline LogNormalLaw log_autonomy_params(double t, double i, const ModelParams& p) {
    if (!(t >= 0.0))
        throw std::invalid_argument("log_autonomy_params: t must be >= 0");
    const double mu = drift(i, p).value;
    return {std::log(p.a0) + (mu - 0.5 * p.sigma_a * p.sigma_a) * t,
            p.sigma_a * std::sqrt(t)};
}

// Expected first time A crosses the boundary, which is finite exactly in the
// depleting regime (log-drift nu = mu - sigma_a^2/2 < 0) and infinite
// otherwise. An empty optional means "never in expectation".
class HittingTime {
  public:
    static HittingTime finite(double t) { return HittingTime(t); }
    static HittingTime unbounded() { return HittingTime(); }
    bool is_finite() const { return value_.has_value(); }
    double value() const {
        if (!value_) throw std::logic_error("HittingTime: unbounded");
        return *value_;
    }

  private:
    HittingTime() = default;
    explicit HittingTime(double t) : value_(t) {}
    std::optional<double> value_;
};

inline HittingTime expected_hitting_time(double a_start, double i,
                                         double wm_items, const ModelParams& p) {
    const double b = disengagement_boundary(wm_items, p);
    if (!(a_start > b))
        throw std::invalid_argument(
            "expected_hitting_time: a_start must exceed the boundary");
    const double mu = drift(i, p).value;
    const double decay = 0.5 * p.sigma_a * p.sigma_a - mu;  // -nu
    if (!(decay > 0.0)) return HittingTime::unbounded();
    return HittingTime::finite(std::log(a_start / b) / decay);
}

// P(tau <= t): probability the boundary is crossed by time t, from the
// reflection form for arithmetic Brownian motion applied to ln A.
inline double hitting_probability(double a_start, double i, double wm_items,
                                  double t, const ModelParams& p) {
    const double b = disengagement_boundary(wm_items, p);
    if (!(a_start > b))
        throw std::invalid_argument(
            "hitting_probability: a_start must exceed the boundary");
    if (!(t >= 0.0))
        throw std::invalid_argument("hitting_probability: t must be >= 0");
    if (t == 0.0) return 0.0;

    const double nu = drift(i, p).value - 0.5 * p.sigma_a * p.sigma_a;
    const double gap = std::log(b / a_start);  // < 0
    if (p.sigma_a == 0.0) {
        // Deterministic log path: crossing happens iff the drift points down
        // and has had enough time.
        return (nu < 0.0 && t >= gap / nu) ? 1.0 : 0.0;
    }
    const double sq = p.sigma_a * std::sqrt(t);
    const double term1 = norm_cdf((gap - nu * t) / sq);
    // Reflection weight exp(2*nu*gap/sigma^2) can be huge when nu < 0; pair
    // it with the tiny tail CDF in log space.
    const double log_weight = 2.0 * nu * gap / (p.sigma_a * p.sigma_a);
    const double term2 = std::exp(log_weight + log_norm_cdf((gap + nu * t) / sq));
    const double prob = term1 + term2;
    return prob < 0.0 ? 0.0 : (prob > 1.0 ? 1.0 : prob);
}

// Flow quality of assistance: rises with information, collapses under
// overload. Unique interior maximum at 1/sqrt(2*beta_q).
inline double quality(double i, const ModelParams& p) {
    if (!(i >= 0.0)) throw std::invalid_argument("quality: I must be >= 0");
    return p.q_max * i * std::exp(-p.beta_q * i * i);
}

inline double quality_peak_information(const ModelParams& p) {
    return 1.0 / std::sqrt(2.0 * p.beta_q);
}

// Quadratic penalty for autonomy lost relative to the starting level.
inline double autonomy_cost(double a, const ModelParams& p) {
    if (!(a >= 0.0)) throw std::invalid_argument("autonomy_cost: A must be >= 0");
    const double d = p.a0 - a;
    return p.kappa * d * d;
}

inline double instantaneous_reward(double a, double i, double u,
                                   const ModelParams& p) {
    if (!(u >= 0.0 && u <= p.u_max))
        throw std::invalid_argument("instantaneous_reward: u outside [0, u_max]");
    return quality(i, p) - autonomy_cost(a, p) - p.c * u;
}

}  // namespace translab
