#pragma once

// Monte Carlo engine for the coupled autonomy/information dynamics.
//
// Autonomy follows dA = mu(I) A dt + sigma_a A dW; it is stepped in log
// space, which makes the update exact whenever I is pinned and removes any
// positivity worry. Information follows dI = alpha0 u dt + sigma_i dZ with
// corr(dW, dZ) = rho, clamped to [0, i_max]. Crossing the disengagement
// boundary absorbs the path; the crossing time is interpolated log-linearly
// inside the offending step and the path is frozen at the boundary value
// from then on.
//
// Determinism: all draws come from the counter generator keyed by
// (master_seed, stream_base + path index, step, call), and ensemble
// reductions run over fixed 256-path blocks merged in block order, so
// results are bit-identical for any worker count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "translab/analytic.hpp"
#include "translab/params.hpp"
#include "translab/policy.hpp"
#include "translab/rng.hpp"

namespace translab {

struct SimConfig {
    double dt = 0.01;
    std::int64_t n_paths = 5000;
    std::uint64_t master_seed = 42;
    std::uint64_t stream_base = 0;  // first path-stream index
    std::int64_t record_stride = 1; // record every k-th step
    bool boundary_enabled = true;

    void validate(const ModelParams& p) const {
        if (!(dt > 0.0)) throw std::invalid_argument("SimConfig: dt must be > 0");
        if (!(dt <= p.horizon))
            throw std::invalid_argument("SimConfig: dt exceeds the horizon");
        if (n_paths < 1) throw std::invalid_argument("SimConfig: n_paths < 1");
        if (record_stride < 1)
            throw std::invalid_argument("SimConfig: record_stride < 1");
    }
};

struct PathPoint {
    double t, a, i, u;
};

struct Absorption {
    double tau;         // interpolated crossing time
    std::int64_t step;  // index of the step during which it happened
};

struct PathSummary {
    std::optional<double> tau;
    double a_final;            // at the horizon; boundary value if absorbed
    double i_final;            // frozen at its absorption-time value
    double discounted_reward;  // int_0^{min(tau,T)} e^{-delta s} r ds
    double quality_score;      // (1/T) int_0^{min(tau,T)} Q(I_s) ds
};

struct Path {
    std::vector<PathPoint> points;
    std::optional<Absorption> absorption;
    PathSummary summary;
};

namespace detail {

inline std::int64_t full_steps(double horizon, double dt, double* last_len) {
    const std::int64_t n = static_cast<std::int64_t>(horizon / dt + 1e-9);
    const double rem = horizon - static_cast<double>(n) * dt;
    if (rem > 1e-9 * horizon) {
        *last_len = rem;
        return n + 1;
    }
    *last_len = dt;
    return n;
}

inline std::int64_t recorded_count(std::int64_t n_steps, std::int64_t stride) {
    return 1 + (n_steps + stride - 1) / stride;  // t=0, strides, horizon
}

// Steps one path, invoking sink(slot, t, a, i, u) at every recorded sample.
// Recorded slots are step indices 0, stride, 2*stride, ..., plus the final
// step; after absorption the remaining slots repeat the frozen state.
template <class Sink>
PathSummary run_path(const Policy& pol, const ModelParams& p,
                     const SimConfig& cfg, std::int64_t path_index,
                     Sink&& sink) {
    const bool pinned = pol.pins_information();
    if (pinned && !(pol.pinned_level() <= p.i_max))
        throw std::invalid_argument("pinned information level exceeds i_max");

    double last_len = 0.0;
    const std::int64_t n_steps = full_steps(p.horizon, cfg.dt, &last_len);
    const PathStream stream(cfg.master_seed, cfg.stream_base + path_index);

    const double b = p.boundary();
    const double log_b = std::log(b);
    const double rho_c = std::sqrt(1.0 - p.rho * p.rho);
    const double half_var = 0.5 * p.sigma_a * p.sigma_a;

    double x = std::log(p.a0);
    double a = p.a0;
    double i = pinned ? pol.pinned_level() : p.i0;
    double disc = 0.0;
    double q_int = 0.0;
    PathSummary s{};

    std::int64_t slot = 0;
    auto record = [&](double t, double u) { sink(slot++, t, a, i, u); };
    record(0.0, pol.rate(a, i, 0.0, p));

    bool absorbed = false;
    for (std::int64_t k = 0; k < n_steps; ++k) {
        const double t = static_cast<double>(k) * cfg.dt;
        const double h = (k == n_steps - 1) ? last_len : cfg.dt;
        const double t_next =
            (k == n_steps - 1) ? p.horizon : static_cast<double>(k + 1) * cfg.dt;

        const double u = pol.rate(a, i, t, p);
        const double mu = drift(i, p).value;
        const double z_a = stream.normal(k, 0);
        const double sq = std::sqrt(h);
        const double x_next = x + (mu - half_var) * h + p.sigma_a * sq * z_a;

        double i_next = i;
        if (!pinned) {
            const double z_i = p.rho * z_a + rho_c * stream.normal(k, 1);
            i_next = std::clamp(i + p.alpha0 * u * h + p.sigma_i * sq * z_i,
                                0.0, p.i_max);
        }

        double h_eff = h;
        const bool crossed = cfg.boundary_enabled && x_next <= log_b;
        if (crossed) h_eff = h * (x - log_b) / (x - x_next);

        const double r = instantaneous_reward(a, i, u, p);
        disc += std::exp(-p.delta * t) * r * h_eff;
        q_int += quality(i, p) * h_eff;

        if (crossed) {
            s.tau = t + h_eff;
            sink.absorb(t + h_eff, k);
            a = b;
            x = log_b;
            absorbed = true;
            // remaining recorded slots show the frozen state
            for (std::int64_t j = k + 1; j < n_steps; ++j) {
                if (j % cfg.record_stride == 0)
                    record(static_cast<double>(j) * cfg.dt, 0.0);
            }
            record(p.horizon, 0.0);
            break;
        }

        x = x_next;
        a = std::exp(x);
        i = i_next;
        if (k + 1 < n_steps) {
            if ((k + 1) % cfg.record_stride == 0)
                record(t_next, pol.rate(a, i, t_next, p));
        } else {
            record(p.horizon, pol.rate(a, i, p.horizon, p));
        }
    }

    s.a_final = absorbed ? b : a;
    s.i_final = i;
    s.discounted_reward = disc;
    s.quality_score = q_int / p.horizon;
    return s;
}

struct NullSink {
    void operator()(std::int64_t, double, double, double, double) {}
    void absorb(double, std::int64_t) {}
};

}  // namespace detail

// One full path with its recorded samples.
inline Path simulate_path(const Policy& pol, const ModelParams& p,
                          const SimConfig& cfg, std::int64_t path_index = 0) {
    p.validate();
    cfg.validate(p);
    Path out;
    struct Collect {
        Path* path;
        void operator()(std::int64_t, double t, double a, double i, double u) {
            path->points.push_back({t, a, i, u});
        }
        void absorb(double tau, std::int64_t step) {
            path->absorption = Absorption{tau, step};
        }
    } sink{&out};
    out.summary = detail::run_path(pol, p, cfg, path_index, sink);
    return out;
}

struct EnsembleResult {
    std::vector<double> times;   // recorded sample times
    std::vector<double> mean_a;  // absorbed paths frozen at the boundary
    std::vector<double> var_a;   // unbiased, same freezing convention
    std::vector<double> mean_i;
    double absorption_fraction = 0.0;
    std::vector<double> absorption_times;  // in path order
    std::vector<PathSummary> summaries;    // one per path
    std::vector<double> a_matrix;  // row-major [path][time] if kept, else empty
    std::int64_t n_paths = 0;
    std::uint64_t master_seed = 0;

    double a_at(std::int64_t path, std::size_t time_idx) const {
        return a_matrix[static_cast<std::size_t>(path) * times.size() + time_idx];
    }
};

// Simulates cfg.n_paths paths and reduces them. `workers` sizes the OpenMP
// team (0 = library default); any value yields bit-identical results.
inline EnsembleResult simulate_ensemble(const Policy& pol, const ModelParams& p,
                                        const SimConfig& cfg, int workers = 0,
                                        bool keep_matrix = false) {
    p.validate();
    cfg.validate(p);

    double last_len = 0.0;
    const std::int64_t n_steps = detail::full_steps(p.horizon, cfg.dt, &last_len);
    const std::int64_t n_rec = detail::recorded_count(n_steps, cfg.record_stride);
    const std::int64_t n = cfg.n_paths;

    constexpr std::int64_t kBlock = 256;
    const std::int64_t n_blocks = (n + kBlock - 1) / kBlock;

    struct BlockAccum {
        std::vector<double> sum_a, sumsq_a, sum_i;
        std::vector<double> taus;  // in path order within the block
    };
    std::vector<BlockAccum> blocks(static_cast<std::size_t>(n_blocks));

    EnsembleResult out;
    out.times.resize(static_cast<std::size_t>(n_rec));
    out.summaries.resize(static_cast<std::size_t>(n));
    out.n_paths = n;
    out.master_seed = cfg.master_seed;
    if (keep_matrix)
        out.a_matrix.resize(static_cast<std::size_t>(n) *
                            static_cast<std::size_t>(n_rec));

    struct Accum {
        BlockAccum* blk;
        double* row;        // matrix row or nullptr
        double* times;      // filled once, identical for every path
        bool fill_times;
        double* tau_out;
        void operator()(std::int64_t slot, double t, double a, double i,
                        double) {
            blk->sum_a[slot] += a;
            blk->sumsq_a[slot] += a * a;
            blk->sum_i[slot] += i;
            if (row) row[slot] = a;
            if (fill_times) times[slot] = t;
        }
        void absorb(double tau, std::int64_t) { *tau_out = tau; }
    };

#ifdef _OPENMP
    const int team = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(team)
#else
    (void)workers;
#endif
    for (std::int64_t bidx = 0; bidx < n_blocks; ++bidx) {
        BlockAccum& blk = blocks[static_cast<std::size_t>(bidx)];
        blk.sum_a.assign(static_cast<std::size_t>(n_rec), 0.0);
        blk.sumsq_a.assign(static_cast<std::size_t>(n_rec), 0.0);
        blk.sum_i.assign(static_cast<std::size_t>(n_rec), 0.0);
        const std::int64_t lo = bidx * kBlock;
        const std::int64_t hi = std::min(n, lo + kBlock);
        for (std::int64_t q = lo; q < hi; ++q) {
            double tau = -1.0;
            Accum sink{&blk,
                       keep_matrix ? out.a_matrix.data() +
                                         static_cast<std::size_t>(q) *
                                             static_cast<std::size_t>(n_rec)
                                   : nullptr,
                       out.times.data(), q == 0, &tau};
            out.summaries[static_cast<std::size_t>(q)] =
                detail::run_path(pol, p, cfg, q, sink);
            if (tau >= 0.0) blk.taus.push_back(tau);
        }
    }

    // ordered merge: block 0, block 1, ... regardless of thread schedule
    std::vector<double> sum_a(static_cast<std::size_t>(n_rec), 0.0);
    std::vector<double> sumsq_a(static_cast<std::size_t>(n_rec), 0.0);
    std::vector<double> sum_i(static_cast<std::size_t>(n_rec), 0.0);
    for (const BlockAccum& blk : blocks) {
        for (std::int64_t k = 0; k < n_rec; ++k) {
            sum_a[k] += blk.sum_a[k];
            sumsq_a[k] += blk.sumsq_a[k];
            sum_i[k] += blk.sum_i[k];
        }
        out.absorption_times.insert(out.absorption_times.end(),
                                    blk.taus.begin(), blk.taus.end());
    }

    const double dn = static_cast<double>(n);
    out.mean_a.resize(static_cast<std::size_t>(n_rec));
    out.var_a.resize(static_cast<std::size_t>(n_rec));
    out.mean_i.resize(static_cast<std::size_t>(n_rec));
    for (std::int64_t k = 0; k < n_rec; ++k) {
        const double m = sum_a[k] / dn;
        out.mean_a[k] = m;
        out.mean_i[k] = sum_i[k] / dn;
        out.var_a[k] =
            n > 1 ? std::max(0.0, (sumsq_a[k] - dn * m * m) / (dn - 1.0)) : 0.0;
    }
    out.absorption_fraction =
        static_cast<double>(out.absorption_times.size()) / dn;
    return out;
}

// Exact draw of A_t under pinned information: one log-normal sample built
// from a standard normal z. This is the oracle the Euler scheme is tested
// against.
inline double exact_constant_i_sample(double t, double i, double z,
                                      const ModelParams& p) {
    const auto law = log_autonomy_params(t, i, p);
    return std::exp(law.location + law.scale * z);
}

}  // namespace translab
