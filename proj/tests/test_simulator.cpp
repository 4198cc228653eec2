// Path simulator: exactness under pinned information, correlation wiring,
// absorption statistics against first-passage closed forms (including a
// Brownian-bridge-corrected Monte Carlo oracle that monitors crossings in
// continuous time), determinism across worker counts, and the policy
// contract.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "translab/analytic.hpp"
#include "translab/simulate.hpp"

using namespace translab;

namespace {
const ModelParams P = preset("paper-2025");

ModelParams with_horizon(double t) {
    ModelParams q = P;
    q.horizon = t;
    return q;
}
}  // namespace

TEST_CASE("degenerate volatility gives the deterministic exponential path",
          "[simulate]") {
    ModelParams q = P;
    q.sigma_a = 0.0;
    q.sigma_i = 0.0;
    SimConfig cfg;
    cfg.dt = 0.1;
    cfg.boundary_enabled = true;

    const Path path = simulate_path(Policy::no_transparency(), q, cfg);
    REQUIRE_FALSE(path.absorption.has_value());
    REQUIRE(path.points.size() == 101);
    for (const auto& pt : path.points) {
        CHECK_THAT(pt.a, Catch::Matchers::WithinRel(std::exp(0.1 * pt.t), 1e-12));
        CHECK(pt.i == 0.0);
        CHECK(pt.u == 0.0);
    }
    CHECK(path.points.front().t == 0.0);
    CHECK(path.points.back().t == q.horizon);
}

TEST_CASE("deterministic absorption time is recovered exactly", "[simulate]") {
    // sigma = 0, pinned I = 4: ln A falls linearly, crossing ln B at
    // ln(2)/0.26; the in-step interpolation is exact for linear log paths.
    ModelParams q = P;
    q.sigma_a = 0.0;
    SimConfig cfg;
    cfg.dt = 0.01;
    const Path path = simulate_path(Policy::constant_information(4.0), q, cfg);
    REQUIRE(path.absorption.has_value());
    CHECK_THAT(path.absorption->tau,
               Catch::Matchers::WithinAbs(std::log(2.0) / 0.26, 1e-10));
    // frozen at the boundary from the crossing on
    for (const auto& pt : path.points)
        if (pt.t > path.absorption->tau) {
            CHECK(pt.a == q.boundary());
            CHECK(pt.u == 0.0);
        }
    CHECK(path.summary.a_final == q.boundary());
    CHECK(path.summary.tau.has_value());
}

TEST_CASE("pinned-information stepping is exact in distribution", "[simulate]") {
    // dt = 2.5 would be hopeless for a naive scheme; the log-space update is
    // exact, so moments at the horizon match the closed forms at Monte Carlo
    // accuracy even with four steps.
    SimConfig cfg;
    cfg.dt = 2.5;
    cfg.n_paths = 200000;
    cfg.master_seed = 7;
    cfg.boundary_enabled = false;
    const auto ens = simulate_ensemble(Policy::constant_information(1.0), P, cfg);

    const double m_exact = mean_autonomy(10.0, 1.0, P);
    const double v_exact = variance_autonomy(10.0, 1.0, P);
    const double se_mean = std::sqrt(v_exact / cfg.n_paths);
    CHECK_THAT(ens.mean_a.back(),
               Catch::Matchers::WithinAbs(m_exact, 4.0 * se_mean));
    CHECK_THAT(ens.var_a.back(), Catch::Matchers::WithinRel(v_exact, 0.05));

    // one-step exact sampler agrees with the ensemble's terminal law
    std::vector<double> direct(10000);
    for (int q = 0; q < 10000; ++q)
        direct[q] = exact_constant_i_sample(10.0, 1.0,
                                            counter_normal(99, q, 0, 0), P);
    CHECK_THAT(oracle::mean(direct),
               Catch::Matchers::WithinAbs(m_exact, 4.0 * std::sqrt(v_exact / 1e4)));
}

TEST_CASE("increment correlation matches rho", "[simulate]") {
    ModelParams q = with_horizon(0.01);
    q.i0 = 2.5;  // keep the clamp far away
    SimConfig cfg;
    cfg.dt = 0.01;
    cfg.n_paths = 1000000;
    cfg.master_seed = 11;
    cfg.boundary_enabled = false;
    const auto ens = simulate_ensemble(Policy::no_transparency(), q, cfg);

    std::vector<double> dx(ens.summaries.size()), di(ens.summaries.size());
    for (std::size_t k = 0; k < ens.summaries.size(); ++k) {
        dx[k] = std::log(ens.summaries[k].a_final);
        di[k] = ens.summaries[k].i_final - q.i0;
    }
    const double mx = oracle::mean(dx), mi = oracle::mean(di);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t k = 0; k < dx.size(); ++k) {
        sxy += (dx[k] - mx) * (di[k] - mi);
        sxx += (dx[k] - mx) * (dx[k] - mx);
        syy += (di[k] - mi) * (di[k] - mi);
    }
    const double corr = sxy / std::sqrt(sxx * syy);
    CHECK_THAT(corr, Catch::Matchers::WithinAbs(P.rho, 0.005));
}

TEST_CASE("absorption statistics at (I=4, WM=4) match first-passage theory",
          "[simulate]") {
    SimConfig cfg;
    cfg.dt = 0.01;
    cfg.n_paths = 5000;
    cfg.master_seed = 42;
    const auto ens = simulate_ensemble(Policy::constant_information(4.0), P, cfg);

    REQUIRE(ens.absorption_times.size() > 4900);
    const double m = oracle::mean(ens.absorption_times);
    const double sd = std::sqrt(oracle::sample_variance(ens.absorption_times));

    // inverse-Gaussian law of the crossing: mean 2.4755, sd 1.1243
    CHECK_THAT(m, Catch::Matchers::WithinAbs(2.49, 0.10));
    CHECK(sd > 0.95);
    CHECK(sd < 1.30);

    const double p_hit = hitting_probability(1.0, 4.0, 4.0, 10.0, P);
    CHECK_THAT(ens.absorption_fraction, Catch::Matchers::WithinAbs(p_hit, 0.004));

    for (double tau : ens.absorption_times) {
        CHECK(tau > 0.0);
        CHECK(tau <= P.horizon);
    }
}

// Continuous-monitoring crossing probability estimated from discretely
// sampled paths: within a step that stays above the boundary, a Brownian
// bridge crosses with probability exp(-2 d0 d1 / (sigma^2 h)). Averaging the
// per-path survival products gives an unbiased estimate (the pinned-I log
// walk itself is exact), which makes a genuine oracle for the reflection
// formula.
static void check_bridge_oracle(double i_level, double n_paths) {
    const double t_end = 10.0;
    SimConfig cfg;
    cfg.dt = 0.05;
    cfg.n_paths = static_cast<std::int64_t>(n_paths);
    cfg.master_seed = 1234;
    cfg.boundary_enabled = false;
    const auto ens = simulate_ensemble(Policy::constant_information(i_level), P,
                                       cfg, 0, /*keep_matrix=*/true);

    const double lb = std::log(P.boundary());
    const double sig2 = P.sigma_a * P.sigma_a;
    std::vector<double> cross_prob;
    cross_prob.reserve(cfg.n_paths);
    for (std::int64_t q = 0; q < cfg.n_paths; ++q) {
        double survive = 1.0;
        for (std::size_t k = 0; k + 1 < ens.times.size(); ++k) {
            const double d0 = std::log(ens.a_at(q, k)) - lb;
            const double d1 = std::log(ens.a_at(q, k + 1)) - lb;
            const double h = ens.times[k + 1] - ens.times[k];
            if (d0 <= 0.0 || d1 <= 0.0) {
                survive = 0.0;
                break;
            }
            survive *= 1.0 - std::exp(-2.0 * d0 * d1 / (sig2 * h));
        }
        cross_prob.push_back(1.0 - survive);
    }
    const double est = oracle::mean(cross_prob);
    const double se = std::sqrt(oracle::sample_variance(cross_prob) /
                                static_cast<double>(cross_prob.size()));
    const double exact = hitting_probability(1.0, i_level, 4.0, t_end, P);
    INFO("I=" << i_level << " bridge=" << est << " exact=" << exact
              << " se=" << se);
    CHECK_THAT(est, Catch::Matchers::WithinAbs(exact, 3.0 * se + 1e-6));
}

TEST_CASE("bridge-corrected crossing oracle confirms the reflection formula",
          "[simulate][oracle]") {
    check_bridge_oracle(2.5, 20000);  // P ~ 0.83, the informative regime
    check_bridge_oracle(4.0, 5000);   // P ~ 0.9998
}

TEST_CASE("discrete-monitoring bias shrinks with the step size", "[simulate]") {
    // Absorption times are biased upward because crossings inside a step go
    // unseen; the bias scales like sqrt(dt), so quartering dt should halve
    // it, well outside the Monte Carlo noise at this sample size.
    const ModelParams q = with_horizon(30.0);
    const double exact = expected_hitting_time(1.0, 4.0, 4.0, q).value();

    auto mean_tau = [&](double dt) {
        SimConfig cfg;
        cfg.dt = dt;
        cfg.n_paths = 20000;
        cfg.master_seed = 5;
        cfg.record_stride = 1000000;  // keep memory flat
        const auto ens =
            simulate_ensemble(Policy::constant_information(4.0), q, cfg);
        REQUIRE(ens.absorption_fraction == 1.0);
        return oracle::mean(ens.absorption_times);
    };

    const double bias_coarse = mean_tau(0.08) - exact;
    const double bias_fine = mean_tau(0.02) - exact;
    const double se_diff = 1.13 * std::sqrt(2.0 / 20000.0);
    CHECK(bias_coarse > 0.0);
    CHECK(bias_fine > 0.0);
    CHECK(bias_fine < bias_coarse - 2.0 * se_diff);
}

TEST_CASE("ensembles are deterministic and worker-count independent",
          "[simulate]") {
    SimConfig cfg;
    cfg.dt = 0.05;
    cfg.n_paths = 700;
    cfg.master_seed = 99;
    const Policy pol = Policy::max_transparency();

    const auto r1 = simulate_ensemble(pol, P, cfg, 1);
    const auto r4 = simulate_ensemble(pol, P, cfg, 4);
    const auto r1b = simulate_ensemble(pol, P, cfg, 1);

    REQUIRE(r1.mean_a.size() == r4.mean_a.size());
    for (std::size_t k = 0; k < r1.mean_a.size(); ++k) {
        CHECK(r1.mean_a[k] == r4.mean_a[k]);
        CHECK(r1.var_a[k] == r4.var_a[k]);
        CHECK(r1.mean_i[k] == r4.mean_i[k]);
        CHECK(r1.mean_a[k] == r1b.mean_a[k]);
    }
    REQUIRE(r1.absorption_times.size() == r4.absorption_times.size());
    for (std::size_t k = 0; k < r1.absorption_times.size(); ++k)
        CHECK(r1.absorption_times[k] == r4.absorption_times[k]);
    for (std::size_t k = 0; k < r1.summaries.size(); ++k) {
        CHECK(r1.summaries[k].a_final == r4.summaries[k].a_final);
        CHECK(r1.summaries[k].discounted_reward ==
              r4.summaries[k].discounted_reward);
    }
}

TEST_CASE("ensemble rows equal standalone paths; streams shift cleanly",
          "[simulate]") {
    SimConfig cfg;
    cfg.dt = 0.01;
    cfg.n_paths = 3;
    cfg.master_seed = 31337;
    cfg.record_stride = 10;
    const Policy pol = Policy::max_transparency();
    const auto ens = simulate_ensemble(pol, P, cfg, 0, /*keep_matrix=*/true);
    REQUIRE(ens.times.size() == 101);

    for (std::int64_t q = 0; q < 3; ++q) {
        const Path path = simulate_path(pol, P, cfg, q);
        REQUIRE(path.points.size() == ens.times.size());
        for (std::size_t k = 0; k < path.points.size(); ++k) {
            CHECK(path.points[k].t == ens.times[k]);
            CHECK(path.points[k].a == ens.a_at(q, k));
        }
        CHECK(path.summary.a_final == ens.summaries[q].a_final);
    }

    // a split ensemble with shifted stream base reproduces the tail block
    SimConfig tail = cfg;
    tail.n_paths = 1;
    tail.stream_base = 2;
    const auto t_ens = simulate_ensemble(pol, P, tail);
    CHECK(t_ens.summaries[0].a_final == ens.summaries[2].a_final);
}

TEST_CASE("information stays inside [0, i_max] and the cap binds under "
          "maximal transparency",
          "[simulate]") {
    SimConfig cfg;
    cfg.dt = 0.01;
    cfg.master_seed = 3;
    cfg.boundary_enabled = false;
    const Path path = simulate_path(Policy::max_transparency(), P, cfg, 17);
    double i_peak = 0.0;
    for (const auto& pt : path.points) {
        CHECK(pt.i >= 0.0);
        CHECK(pt.i <= P.i_max);
        CHECK(pt.u == P.u_max);
        i_peak = std::max(i_peak, pt.i);
    }
    // alpha0 u_max t reaches the cap only near the horizon; noise decides
    CHECK(i_peak > 4.0);
}

TEST_CASE("policy contract violations surface as errors", "[simulate]") {
    SimConfig cfg;
    cfg.dt = 0.1;
    const Policy too_big = Policy::from_rate(
        PolicyKind::optimal, [](double, double, double) { return 2.0; });
    CHECK_THROWS_AS(simulate_path(too_big, P, cfg), PolicyContractViolation);

    const Policy nan_rate = Policy::from_rate(
        PolicyKind::optimal,
        [](double, double, double) { return std::nan(""); });
    CHECK_THROWS_AS(simulate_path(nan_rate, P, cfg), PolicyContractViolation);

    const Policy negative = Policy::from_rate(
        PolicyKind::optimal, [](double, double, double) { return -0.25; });
    CHECK_THROWS_AS(simulate_path(negative, P, cfg), PolicyContractViolation);
}

TEST_CASE("config validation", "[simulate]") {
    SimConfig cfg;
    cfg.dt = 0.0;
    CHECK_THROWS_AS(cfg.validate(P), std::invalid_argument);
    cfg.dt = 11.0;
    CHECK_THROWS_AS(cfg.validate(P), std::invalid_argument);
    cfg.dt = 0.01;
    cfg.n_paths = 0;
    CHECK_THROWS_AS(cfg.validate(P), std::invalid_argument);
    cfg.n_paths = 10;
    cfg.record_stride = 0;
    CHECK_THROWS_AS(cfg.validate(P), std::invalid_argument);
    cfg.record_stride = 1;
    CHECK_NOTHROW(cfg.validate(P));

    // pinned level above the cap is rejected at run time
    CHECK_THROWS_AS(simulate_path(Policy::constant_information(6.0), P, cfg),
                    std::invalid_argument);
}

TEST_CASE("ensemble bookkeeping invariants", "[simulate]") {
    SimConfig cfg;
    cfg.dt = 0.02;
    cfg.n_paths = 400;
    cfg.master_seed = 8;
    const auto ens = simulate_ensemble(Policy::constant_information(3.0), P, cfg);

    CHECK(ens.times.front() == 0.0);
    CHECK(ens.times.back() == P.horizon);
    CHECK(ens.n_paths == 400);
    CHECK(ens.summaries.size() == 400);
    CHECK(ens.absorption_fraction ==
          static_cast<double>(ens.absorption_times.size()) / 400.0);
    for (double v : ens.var_a) CHECK(v >= 0.0);
    CHECK(ens.mean_a.front() == P.a0);

    std::size_t absorbed = 0;
    for (const auto& s : ens.summaries)
        if (s.tau.has_value()) {
            ++absorbed;
            CHECK(s.a_final == P.boundary());
            CHECK(*s.tau <= P.horizon);
        }
    CHECK(absorbed == ens.absorption_times.size());
}
