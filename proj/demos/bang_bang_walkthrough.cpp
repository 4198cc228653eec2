// Solves the control problem on a small grid and shows the two things the
// optimal policy does: switch hard between full disclosure and silence, and
// beat both fixed arms on discounted reward.

#include <cstdio>
#include <memory>

#include "translab/hjb.hpp"
#include "translab/params.hpp"
#include "translab/policy_lab.hpp"
#include "translab/simulate.hpp"

using namespace translab;

int main() {
    const ModelParams p = preset("paper-2025");
    GridSpec g;
    g.n_a = 100;
    g.n_i = 50;
    g.n_t = 101;
    auto sol = std::make_shared<const HjbSolution>(solve_hjb(p, g));

    std::printf("value at the start state V(%.0f, %.0f, 0) = %.2f\n", p.a0,
                p.i0, value_at(*sol, p.a0, p.i0, 0.0));
    std::printf("substep %.2e, %lld substeps total\n\n", sol->dt_used,
                static_cast<long long>(sol->total_substeps));

    std::printf("switching threshold at t = %.1f (disclose below, stop above):\n",
                0.5 * p.horizon);
    const ThresholdCurve tc = threshold_curve(*sol, 0.5 * p.horizon);
    std::printf("%8s %8s\n", "a", "i*");
    for (double a = 0.7; a <= 2.3; a += 0.4) {
        // nearest tabulated autonomy row
        std::size_t best = 0;
        for (std::size_t j = 1; j < tc.a.size(); ++j)
            if (std::abs(tc.a[j] - a) < std::abs(tc.a[best] - a)) best = j;
        std::printf("%8.2f %8.3f\n", tc.a[best], tc.i_star[best]);
    }

    SimConfig cfg;
    cfg.n_paths = 500;
    cfg.master_seed = 11;
    cfg.record_stride = 1 << 20;
    const ComparisonReport rep = compare_policies(p, cfg, sol);
    std::printf("\nthree arms at N = %lld (same seeds per arm):\n",
                static_cast<long long>(cfg.n_paths));
    std::printf("%10s %10s %12s %10s\n", "policy", "final A", "disengaged",
                "reward");
    for (const PolicyReport* r :
         {&rep.optimal, &rep.max_transparency, &rep.no_transparency})
        std::printf("%10s %10.3f %12.3f %10.2f\n", r->policy.c_str(),
                    r->mean_final_autonomy, r->disengagement_probability,
                    r->mean_discounted_reward);
    std::printf("\norderings hold: autonomy %s, disengagement %s, reward %s\n",
                rep.autonomy_ordering_ok ? "yes" : "no",
                rep.disengagement_ordering_ok ? "yes" : "no",
                rep.reward_ok ? "yes" : "no");
    return 0;
}
