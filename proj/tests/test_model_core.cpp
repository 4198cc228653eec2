// Closed-form layer: drift, thresholds, moments, first-passage laws, reward
// terms. Frozen values below were computed independently (bisection, grid
// scans, direct evaluation of the formulas in extended scripts), not copied
// out of the implementation.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "translab/analytic.hpp"
#include "translab/normal.hpp"
#include "translab/params.hpp"

using namespace translab;

namespace {
const ModelParams P = preset("paper-2025");
}

TEST_CASE("preset paper-2025 matches the published calibration") {
    CHECK(P.mu0 == 0.10);
    CHECK(P.beta == 0.05);
    CHECK(P.gamma == 0.01);
    CHECK(P.sigma_a == 0.20);
    CHECK(P.a0 == 1.0);
    CHECK(P.alpha0 == 0.5);
    CHECK(P.sigma_i == 0.1);
    CHECK(P.i_max == 5.0);
    CHECK(P.rho == -0.3);
    CHECK(P.q_max == 10.0);
    CHECK(P.beta_q == 0.04);
    CHECK(P.kappa == 2.0);
    CHECK(P.c == 0.5);
    CHECK(P.delta == 0.05);
    CHECK(P.b0 == 0.9);
    CHECK(P.beta_wm == 0.1);
    CHECK(P.wm == 4.0);
    CHECK(P.horizon == 10.0);
    CHECK(P.u_max == 1.0);
    CHECK(P.i0 == 0.0);
    CHECK_NOTHROW(P.validate());
    CHECK_THROWS_AS(preset("nonsense"), std::invalid_argument);
}

TEST_CASE("parameter validation rejects out-of-domain values") {
    auto bad = [](auto&& tweak) {
        ModelParams q;
        tweak(q);
        CHECK_THROWS_AS(q.validate(), std::invalid_argument);
    };
    bad([](ModelParams& q) { q.gamma = 0.0; });
    bad([](ModelParams& q) { q.mu0 = -0.1; });
    bad([](ModelParams& q) { q.sigma_a = -0.2; });
    bad([](ModelParams& q) { q.rho = 0.1; });
    bad([](ModelParams& q) { q.rho = -1.5; });
    bad([](ModelParams& q) { q.wm = 9.0; });      // boundary hits zero
    bad([](ModelParams& q) { q.b0 = 2.0; });      // boundary above a0
    bad([](ModelParams& q) { q.i0 = 6.0; });      // above i_max
    bad([](ModelParams& q) { q.horizon = 0.0; });
    bad([](ModelParams& q) { q.u_max = -1.0; });
    bad([](ModelParams& q) { q.q_max = std::nan(""); });

    ModelParams degenerate;
    degenerate.sigma_a = 0.0;
    degenerate.sigma_i = 0.0;
    CHECK_NOTHROW(degenerate.validate());
}

TEST_CASE("drift: values, regime tag, monotonicity") {
    const double expected[6] = {0.10, 0.04, -0.04, -0.14, -0.26, -0.40};
    for (int i = 0; i <= 5; ++i)
        CHECK_THAT(drift(i, P).value,
                   Catch::Matchers::WithinAbs(expected[i], 1e-15));

    CHECK(drift(0.0, P).regime == DriftRegime::sustaining);
    CHECK(drift(1.0, P).regime == DriftRegime::sustaining);
    CHECK(drift(2.0, P).regime == DriftRegime::depleting);
    CHECK(drift(4.0, P).regime == DriftRegime::depleting);
    // regime boundary is mu(I) = sigma_a^2/2 = 0.02, between 1.27 and 1.28
    CHECK(drift(1.27, P).regime == DriftRegime::sustaining);
    CHECK(drift(1.28, P).regime == DriftRegime::depleting);

    CHECK_THROWS_AS(drift(-0.5, P), std::invalid_argument);

    // strictly decreasing in I for any valid parameter set
    ModelParams q = P;
    q.beta = 0.013;
    q.gamma = 0.21;
    double prev = drift(0.0, q).value;
    for (double i = 0.05; i <= 5.0; i += 0.05) {
        const double cur = drift(i, q).value;
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("critical threshold is the positive root of the drift") {
    const double istar = critical_threshold(P);
    CHECK_THAT(istar, Catch::Matchers::WithinAbs(1.5311288741492748, 1e-14));
    CHECK(std::abs(drift(istar, P).value) < 1e-12);
    CHECK(drift(istar - 1e-6, P).value > 0.0);
    CHECK(drift(istar + 1e-6, P).value < 0.0);

    // cross-check against bisection on several parameter sets
    for (double g : {0.002, 0.01, 0.3, 2.0}) {
        for (double b : {0.01, 0.05, 0.7}) {
            ModelParams q = P;
            q.gamma = g;
            q.beta = b;
            const double root = oracle::bisect(
                [&](double i) { return drift(i, q).value; }, 0.0, 100.0);
            CHECK_THAT(critical_threshold(q),
                       Catch::Matchers::WithinAbs(root, 1e-9));
        }
    }
}

TEST_CASE("disengagement boundary") {
    const double expected[5] = {0.70, 0.60, 0.50, 0.40, 0.30};
    for (int wm = 2; wm <= 6; ++wm)
        CHECK_THAT(disengagement_boundary(wm, P),
                   Catch::Matchers::WithinAbs(expected[wm - 2], 1e-12));
    CHECK_THROWS_AS(disengagement_boundary(9.0, P), std::invalid_argument);
    CHECK_THROWS_AS(disengagement_boundary(-1.0, P), std::invalid_argument);
}

TEST_CASE("autonomy moments under pinned information") {
    CHECK_THAT(mean_autonomy(0.0, 3.0, P), Catch::Matchers::WithinAbs(1.0, 0.0));
    CHECK_THAT(mean_autonomy(10.0, 0.0, P),
               Catch::Matchers::WithinAbs(2.7182818284590451, 1e-13));
    CHECK_THAT(mean_autonomy(10.0, 4.0, P),
               Catch::Matchers::WithinAbs(0.074273578214333877, 1e-15));

    CHECK_THAT(variance_autonomy(1.0, 1.0, P),
               Catch::Matchers::WithinAbs(0.04420978390441712, 1e-15));
    CHECK(variance_autonomy(0.0, 1.0, P) == 0.0);
    ModelParams q = P;
    q.sigma_a = 0.0;
    CHECK(variance_autonomy(7.3, 2.0, q) == 0.0);

    CHECK_THROWS_AS(mean_autonomy(-1.0, 0.0, P), std::invalid_argument);
    CHECK_THROWS_AS(variance_autonomy(-1.0, 0.0, P), std::invalid_argument);
}

TEST_CASE("log-autonomy law") {
    const auto law0 = log_autonomy_params(0.0, 2.0, P);
    CHECK(law0.location == 0.0);  // ln a0 with a0 = 1
    CHECK(law0.scale == 0.0);

    const auto law = log_autonomy_params(10.0, 2.0, P);
    CHECK_THAT(law.location, Catch::Matchers::WithinAbs(-0.6, 1e-14));
    CHECK_THAT(law.scale,
               Catch::Matchers::WithinAbs(0.63245553203367599, 1e-14));

    // moments reconstructed from the log-normal law agree with the moment
    // formulas
    for (double i : {0.0, 1.5, 4.0}) {
        for (double t : {0.5, 3.0, 10.0}) {
            const auto l = log_autonomy_params(t, i, P);
            const double m = std::exp(l.location + 0.5 * l.scale * l.scale);
            const double v = (std::exp(l.scale * l.scale) - 1.0) * m * m;
            CHECK_THAT(mean_autonomy(t, i, P),
                       Catch::Matchers::WithinRel(m, 1e-12));
            CHECK_THAT(variance_autonomy(t, i, P),
                       Catch::Matchers::WithinRel(v, 1e-10));
        }
    }
}

TEST_CASE("expected hitting time: finite exactly in the depleting regime") {
    // I = 4, WM = 2..6
    const double expected[5] = {1.2738390854954726, 1.8243772277356809,
                                2.4755256448569471, 3.2724668995505537,
                                4.2999028725926287};
    for (int wm = 2; wm <= 6; ++wm) {
        const auto ht = expected_hitting_time(1.0, 4.0, wm, P);
        REQUIRE(ht.is_finite());
        CHECK_THAT(ht.value(),
                   Catch::Matchers::WithinAbs(expected[wm - 2], 1e-12));
    }

    CHECK_FALSE(expected_hitting_time(1.0, 0.0, 4.0, P).is_finite());
    CHECK_FALSE(expected_hitting_time(1.0, 1.0, 4.0, P).is_finite());
    CHECK_THROWS_AS(expected_hitting_time(0.5, 4.0, 4.0, P).is_finite(),
                    std::invalid_argument);
    CHECK_THROWS_AS(expected_hitting_time(0.4, 4.0, 4.0, P).is_finite(),
                    std::invalid_argument);

    // exactly at the regime boundary mu = sigma_a^2/2 the mean is unbounded
    ModelParams q = P;
    q.sigma_a = std::sqrt(2.0 * drift(1.0, q).value);
    CHECK_FALSE(expected_hitting_time(1.0, 1.0, 4.0, q).is_finite());

    // oracle: under zero volatility the crossing time is deterministic and
    // the formula must reduce to ln(a0/B)/(-mu)
    ModelParams det = P;
    det.sigma_a = 0.0;
    const auto ht = expected_hitting_time(1.0, 4.0, 4.0, det);
    REQUIRE(ht.is_finite());
    CHECK_THAT(ht.value(),
               Catch::Matchers::WithinRel(std::log(2.0) / 0.26, 1e-13));
}

TEST_CASE("hitting probability: reflection formula") {
    CHECK(hitting_probability(1.0, 4.0, 4.0, 0.0, P) == 0.0);
    CHECK_THAT(hitting_probability(1.0, 4.0, 4.0, 10.0, P),
               Catch::Matchers::WithinAbs(0.99984045167982527, 1e-12));
    // long-horizon limit in the depleting regime is certain absorption
    CHECK_THAT(hitting_probability(1.0, 4.0, 4.0, 1000.0, P),
               Catch::Matchers::WithinAbs(1.0, 1e-12));

    // nondecreasing in t, bounded in [0,1]
    double prev = 0.0;
    for (double t = 0.0; t <= 30.0; t += 0.25) {
        const double pr = hitting_probability(1.0, 3.0, 4.0, t, P);
        CHECK(pr >= prev - 1e-15);
        CHECK(pr >= 0.0);
        CHECK(pr <= 1.0);
        prev = pr;
    }

    // sustaining regime still crosses with positive probability, but not
    // almost surely: P(tau < inf) = (B/a0)^(2|nu|/sigma^2) < 1
    const double nu = drift(0.0, P).value - 0.02;  // +0.08
    const double limit = std::pow(0.5, 2.0 * nu / 0.04);
    const double p_long = hitting_probability(1.0, 0.0, 4.0, 4000.0, P);
    CHECK_THAT(p_long, Catch::Matchers::WithinAbs(limit, 1e-9));

    // degenerate volatility: step function at the deterministic crossing time
    ModelParams det = P;
    det.sigma_a = 0.0;
    const double t_cross = std::log(2.0) / 0.26;
    CHECK(hitting_probability(1.0, 4.0, 4.0, t_cross * 0.99, det) == 0.0);
    CHECK(hitting_probability(1.0, 4.0, 4.0, t_cross * 1.01, det) == 1.0);
    CHECK(hitting_probability(1.0, 0.0, 4.0, 50.0, det) == 0.0);

    CHECK_THROWS_AS(hitting_probability(0.3, 4.0, 4.0, 1.0, P),
                    std::invalid_argument);
    CHECK_THROWS_AS(hitting_probability(1.0, 4.0, 4.0, -1.0, P),
                    std::invalid_argument);
}

TEST_CASE("quality curve") {
    CHECK(quality(0.0, P) == 0.0);
    CHECK_THAT(quality(2.0, P),
               Catch::Matchers::WithinAbs(17.042875779324227, 1e-12));

    const double peak = quality_peak_information(P);
    CHECK_THAT(peak, Catch::Matchers::WithinAbs(3.5355339059327378, 1e-14));
    const double scanned = oracle::grid_argmax(
        [&](double i) { return quality(i, P); }, 0.0, P.i_max);
    CHECK_THAT(peak, Catch::Matchers::WithinAbs(scanned, 5e-5));

    // inverted U: strictly increasing before the peak, decreasing after
    for (double i = 0.1; i + 0.1 < peak; i += 0.1)
        CHECK(quality(i, P) < quality(i + 0.1, P));
    for (double i = peak; i + 0.1 <= P.i_max; i += 0.1)
        CHECK(quality(i, P) > quality(i + 0.1, P));

    CHECK_THROWS_AS(quality(-1.0, P), std::invalid_argument);
}

TEST_CASE("autonomy cost and instantaneous reward") {
    CHECK(autonomy_cost(1.0, P) == 0.0);
    CHECK_THAT(autonomy_cost(0.5, P), Catch::Matchers::WithinAbs(0.5, 1e-15));
    CHECK_THAT(autonomy_cost(1.5, P), Catch::Matchers::WithinAbs(0.5, 1e-15));

    CHECK_THAT(instantaneous_reward(1.0, 2.0, 1.0, P),
               Catch::Matchers::WithinAbs(17.042875779324227 - 0.5, 1e-12));
    CHECK(instantaneous_reward(1.0, 0.0, 0.0, P) == 0.0);
    CHECK_THROWS_AS(instantaneous_reward(1.0, 2.0, -0.1, P),
                    std::invalid_argument);
    CHECK_THROWS_AS(instantaneous_reward(1.0, 2.0, 1.5, P),
                    std::invalid_argument);
}

TEST_CASE("normal helpers") {
    CHECK(norm_cdf(0.0) == 0.5);
    CHECK_THAT(norm_cdf(1.9599639845400545),
               Catch::Matchers::WithinAbs(0.975, 1e-12));
    CHECK_THAT(norm_quantile(0.975),
               Catch::Matchers::WithinAbs(1.9599639845400545, 1e-12));

    // Round trip is well conditioned until Phi(x) saturates toward 1 (the
    // spacing of doubles near 1 floors the achievable accuracy above ~5.6).
    for (double x = -8.0; x <= 5.5; x += 0.173)
        CHECK_THAT(norm_quantile(norm_cdf(x)),
                   Catch::Matchers::WithinAbs(x, 1e-9));

    // log CDF agrees with the direct computation where both are stable
    for (double x = -25.0; x <= 2.0; x += 0.37)
        CHECK_THAT(log_norm_cdf(x),
                   Catch::Matchers::WithinRel(std::log(norm_cdf(x)), 1e-9));
    // continuous across the asymptotic switchover, decreasing far past the
    // erfc underflow point
    CHECK_THAT(log_norm_cdf(-26.0 - 1e-9),
               Catch::Matchers::WithinRel(log_norm_cdf(-26.0 + 1e-9), 1e-9));
    CHECK(std::isfinite(log_norm_cdf(-60.0)));
    CHECK(log_norm_cdf(-60.0) < log_norm_cdf(-40.0));

    CHECK_THROWS_AS(norm_quantile(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(norm_quantile(1.1), std::invalid_argument);
}
