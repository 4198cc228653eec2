#pragma once

// Policy evaluation and the three-arm comparison (optimal vs maximal vs no
// transparency). Every arm runs under the same master seed, so the arms see
// common random numbers and their orderings are not washed out by sampling
// noise.
//
// The quality metric needs a convention because paths can disengage early:
// this lab reports engaged quality per unit of horizon,
//   (1/T) * integral_0^min(tau,T) Q(I_s) ds,
// i.e. a disengaged path contributes zero quality for the remainder. The
// identifier below travels with every report.

#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "translab/hjb.hpp"
#include "translab/policy.hpp"
#include "translab/simulate.hpp"
#include "translab/stats.hpp"

namespace translab {

// Builds an arm by kind. `optimal` requires a solution solved under the same
// parameters; anything else about the stored calibration differing from `p`
// means the control field answers a different problem, so it is rejected.
inline Policy make_policy(PolicyKind kind, const ModelParams& p,
                          double i_pin = 0.0,
                          std::shared_ptr<const HjbSolution> solution = nullptr) {
    switch (kind) {
        case PolicyKind::no_transparency: return Policy::no_transparency();
        case PolicyKind::max_transparency: return Policy::max_transparency();
        case PolicyKind::constant_information:
            if (!(i_pin >= 0.0 && i_pin <= p.i_max))
                throw std::invalid_argument(
                    "make_policy: pinned level outside [0, i_max]");
            return Policy::constant_information(i_pin);
        case PolicyKind::optimal: {
            if (!solution)
                throw std::invalid_argument(
                    "make_policy: optimal kind needs a solved grid");
            for (const auto& f : param_fields()) {
                if (solution->params.*f.member != p.*f.member) {
                    std::ostringstream os;
                    os << "make_policy: solution grid is incompatible (field '"
                       << f.name << "': solved with "
                       << solution->params.*f.member << ", requested "
                       << p.*f.member << ")";
                    throw std::invalid_argument(os.str());
                }
            }
            return extracted_policy(std::move(solution));
        }
    }
    throw std::invalid_argument("make_policy: unknown kind");
}

struct PolicyReport {
    std::string policy;
    std::string quality_metric = kQualityMetricId;
    std::int64_t n_paths = 0;
    std::uint64_t seed = 0;
    double mean_final_autonomy = 0.0;  // absorbed paths frozen at B
    double disengagement_probability = 0.0;
    double mean_quality = 0.0;
    double mean_discounted_reward = 0.0;
    double se_discounted_reward = 0.0;
};

inline PolicyReport evaluate_policy(const Policy& pol, const ModelParams& p,
                                    const SimConfig& cfg, int workers = 0) {
    const EnsembleResult ens = simulate_ensemble(pol, p, cfg, workers);
    PolicyReport rep;
    rep.policy = to_string(pol.kind());
    rep.n_paths = cfg.n_paths;
    rep.seed = cfg.master_seed;

    std::vector<double> rewards;
    rewards.reserve(ens.summaries.size());
    double sum_a = 0.0, sum_q = 0.0;
    for (const PathSummary& s : ens.summaries) {
        sum_a += s.a_final;
        sum_q += s.quality_score;
        rewards.push_back(s.discounted_reward);
    }
    const double n = static_cast<double>(ens.summaries.size());
    rep.mean_final_autonomy = sum_a / n;
    rep.mean_quality = sum_q / n;
    rep.disengagement_probability = ens.absorption_fraction;
    rep.mean_discounted_reward = mean(rewards);
    rep.se_discounted_reward = standard_error_of_mean(rewards);
    return rep;
}

struct ComparisonReport {
    PolicyReport optimal;
    PolicyReport max_transparency;
    PolicyReport no_transparency;
    // mean autonomy trajectories per arm, for plotting
    std::vector<double> times;
    std::vector<double> mean_a_optimal;
    std::vector<double> mean_a_max;
    std::vector<double> mean_a_none;
    // the orderings the model predicts
    bool autonomy_ordering_ok = false;       // none > optimal > max
    bool disengagement_ordering_ok = false;  // max > optimal > none
    bool reward_ok = false;  // optimal >= each alternative - 3 SE(diff)
    bool all_ok() const {
        return autonomy_ordering_ok && disengagement_ordering_ok && reward_ok;
    }
};

inline ComparisonReport compare_policies(
    const ModelParams& p, const SimConfig& cfg,
    std::shared_ptr<const HjbSolution> solution, int workers = 0) {
    const Policy arms[3] = {
        make_policy(PolicyKind::optimal, p, 0.0, std::move(solution)),
        make_policy(PolicyKind::max_transparency, p),
        make_policy(PolicyKind::no_transparency, p)};

    ComparisonReport rep;
    std::vector<double> reward_opt, reward_max, reward_none;
    for (int arm = 0; arm < 3; ++arm) {
        const EnsembleResult ens = simulate_ensemble(arms[arm], p, cfg, workers);
        PolicyReport pr;
        std::vector<double> rewards;
        rewards.reserve(ens.summaries.size());
        double sum_a = 0.0, sum_q = 0.0;
        for (const PathSummary& s : ens.summaries) {
            sum_a += s.a_final;
            sum_q += s.quality_score;
            rewards.push_back(s.discounted_reward);
        }
        const double n = static_cast<double>(ens.summaries.size());
        pr.policy = to_string(arms[arm].kind());
        pr.n_paths = cfg.n_paths;
        pr.seed = cfg.master_seed;
        pr.mean_final_autonomy = sum_a / n;
        pr.mean_quality = sum_q / n;
        pr.disengagement_probability = ens.absorption_fraction;
        pr.mean_discounted_reward = mean(rewards);
        pr.se_discounted_reward = standard_error_of_mean(rewards);
        switch (arm) {
            case 0:
                rep.optimal = pr;
                rep.times = ens.times;
                rep.mean_a_optimal = ens.mean_a;
                reward_opt = std::move(rewards);
                break;
            case 1:
                rep.max_transparency = pr;
                rep.mean_a_max = ens.mean_a;
                reward_max = std::move(rewards);
                break;
            case 2:
                rep.no_transparency = pr;
                rep.mean_a_none = ens.mean_a;
                reward_none = std::move(rewards);
                break;
        }
    }

    rep.autonomy_ordering_ok =
        rep.no_transparency.mean_final_autonomy >
            rep.optimal.mean_final_autonomy &&
        rep.optimal.mean_final_autonomy > rep.max_transparency.mean_final_autonomy;
    rep.disengagement_ordering_ok =
        rep.max_transparency.disengagement_probability >
            rep.optimal.disengagement_probability &&
        rep.optimal.disengagement_probability >
            rep.no_transparency.disengagement_probability;

    // paired comparison: same seed means path-by-path differences, so the SE
    // of the mean difference is the right yardstick
    auto diff_se = [](const std::vector<double>& a, const std::vector<double>& b) {
        std::vector<double> d(a.size());
        for (std::size_t k = 0; k < a.size(); ++k) d[k] = a[k] - b[k];
        return standard_error_of_mean(d);
    };
    const double lead_max = rep.optimal.mean_discounted_reward -
                            rep.max_transparency.mean_discounted_reward;
    const double lead_none = rep.optimal.mean_discounted_reward -
                             rep.no_transparency.mean_discounted_reward;
    rep.reward_ok = lead_max >= -3.0 * diff_se(reward_opt, reward_max) &&
                    lead_none >= -3.0 * diff_se(reward_opt, reward_none);
    return rep;
}

}  // namespace translab
