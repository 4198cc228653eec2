#pragma once

// Finite-difference solver for the dynamic-programming equation of the
// transparency control problem.
//
//   max_u { V_t + mu(I) A V_A + alpha0 u V_I + (sigma_a^2/2) A^2 V_AA
//           + (sigma_i^2/2) V_II + rho sigma_a sigma_i A V_AI
//           - delta V + r(A, I, u) } = 0
//
// on [B, a_max] x [0, i_max] x [0, T] with V = 0 on the absorbing row A = B
// and terminal value identically zero. The control is bang-bang; at every
// node both candidates are evaluated through the discretized generator
// (which reduces to the sign of alpha0 V_I - c, V_I taken as the same
// forward difference the transport term uses), ties resolving to u = 0.
//
// Scheme: explicit Euler backward in time, first-order upwinding of drift
// terms by their per-node sign, central second differences for diffusion,
// and the cross term as a central A-difference of the I-derivative field.
// At the outer edges second derivatives use a zero-curvature ghost
// (linear extrapolation) and first derivatives fall back to one-sided
// second-order stencils, which keeps every edge weight inside the explicit
// stability budget. The integration step is 0.9x the von Neumann bound
// computed from the worst grid node unless an explicit dt is supplied.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "translab/analytic.hpp"
#include "translab/params.hpp"
#include "translab/policy.hpp"

namespace translab {

struct HjbNumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridSpec {
    double a_max = 3.0;
    int n_a = 200;
    int n_i = 100;
    int n_t = 201;   // stored time slices, both endpoints included
    double dt = 0.0; // integration substep; 0 selects 0.9x the stability bound

    void validate(const ModelParams& p) const {
        if (!(a_max >= 2.5))
            throw std::invalid_argument("GridSpec: a_max must be >= 2.5");
        if (!(a_max > p.a0))
            throw std::invalid_argument("GridSpec: a_max must exceed a0");
        if (n_a < 8 || n_i < 8)
            throw std::invalid_argument("GridSpec: need at least 8 nodes per axis");
        if (n_t < 2) throw std::invalid_argument("GridSpec: n_t must be >= 2");
        if (!(dt >= 0.0) || !std::isfinite(dt))
            throw std::invalid_argument("GridSpec: bad dt");
    }
};

struct HjbSolution {
    ModelParams params;
    GridSpec grid;
    double a_min = 0.0;   // absorbing boundary B
    double dt_used = 0.0; // integration substep actually taken
    std::int64_t total_substeps = 0;
    std::vector<double> value;         // [t][a][i], t ascending
    std::vector<std::uint8_t> control; // same layout, 1 means u = u_max

    std::size_t idx(int m, int j, int k) const {
        return (static_cast<std::size_t>(m) * grid.n_a +
                static_cast<std::size_t>(j)) *
                   grid.n_i +
               static_cast<std::size_t>(k);
    }
    double a_of(int j) const { return a_min + j * da(); }
    double i_of(int k) const { return k * di(); }
    double t_of(int m) const { return m * dt_slice(); }
    double da() const { return (grid.a_max - a_min) / (grid.n_a - 1); }
    double di() const { return params.i_max / (grid.n_i - 1); }
    double dt_slice() const { return params.horizon / (grid.n_t - 1); }
};

namespace detail {

// Explicit stability bound: reciprocal of the worst-node outflow rate. Edge
// stencils carry up to 1.5x (one-sided first derivatives) and 2.25x (nested
// one-sided cross) the interior weights, hence the factors.
inline double stability_dt(const ModelParams& p, double a_min, double a_max,
                           double da, double di) {
    const double mu_hi =
        std::max(std::abs(drift(0.0, p).value), std::abs(drift(p.i_max, p).value));
    double rate = p.sigma_a * p.sigma_a * a_max * a_max / (da * da);
    rate += p.sigma_i * p.sigma_i / (di * di);
    rate += 1.5 * mu_hi * a_max / da;
    rate += 1.5 * p.alpha0 * p.u_max / di;
    rate += 2.25 * std::abs(p.rho) * p.sigma_a * p.sigma_i * a_max / (da * di);
    rate += p.delta;
    (void)a_min;
    return 1.0 / rate;
}

}  // namespace detail

inline HjbSolution solve_hjb(const ModelParams& p, const GridSpec& g) {
    p.validate();
    g.validate(p);

    HjbSolution sol;
    sol.params = p;
    sol.grid = g;
    sol.a_min = p.boundary();

    const int na = g.n_a, ni = g.n_i, nt = g.n_t;
    const double da = (g.a_max - sol.a_min) / (na - 1);
    const double di = p.i_max / (ni - 1);
    const double dt_slice = p.horizon / (nt - 1);

    const double dt_bound = detail::stability_dt(p, sol.a_min, g.a_max, da, di);
    double dt_target = 0.9 * dt_bound;
    if (g.dt > 0.0) {
        if (g.dt > dt_bound) {
            std::ostringstream os;
            os << "solve_hjb: dt = " << g.dt
               << " violates the explicit stability bound " << dt_bound
               << " for this grid";
            throw std::invalid_argument(os.str());
        }
        dt_target = g.dt;
    }
    const int n_sub =
        std::max(1, static_cast<int>(std::ceil(dt_slice / dt_target - 1e-12)));
    const double dt = dt_slice / n_sub;
    sol.dt_used = dt;
    sol.total_substeps = static_cast<std::int64_t>(n_sub) * (nt - 1);

    const std::size_t plane = static_cast<std::size_t>(na) * ni;
    sol.value.assign(static_cast<std::size_t>(nt) * plane, 0.0);
    sol.control.assign(static_cast<std::size_t>(nt) * plane, 0);

    // precomputed per-node data
    std::vector<double> a(na), i_lvl(ni), mu(ni), r0(plane);
    for (int j = 0; j < na; ++j) a[j] = sol.a_min + j * da;
    for (int k = 0; k < ni; ++k) {
        i_lvl[k] = k * di;
        mu[k] = drift(i_lvl[k], p).value;
    }
    for (int j = 0; j < na; ++j)
        for (int k = 0; k < ni; ++k)
            r0[j * ni + k] = quality(i_lvl[k], p) - autonomy_cost(a[j], p);

    const double inv_da = 1.0 / da, inv_2da = 0.5 / da, inv_da2 = 1.0 / (da * da);
    const double inv_di = 1.0 / di, inv_2di = 0.5 / di, inv_di2 = 1.0 / (di * di);
    const double half_sa2 = 0.5 * p.sigma_a * p.sigma_a;
    const double half_si2 = 0.5 * p.sigma_i * p.sigma_i;
    const double cross_c = p.rho * p.sigma_a * p.sigma_i;

    std::vector<double> cur(plane, 0.0), nxt(plane, 0.0), w(plane, 0.0);

    // d/dI of the current slice: central inside, one-sided second order at
    // the edges
    auto fill_didv = [&](const std::vector<double>& v) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int j = 0; j < na; ++j) {
            const double* row = v.data() + static_cast<std::size_t>(j) * ni;
            double* wr = w.data() + static_cast<std::size_t>(j) * ni;
            wr[0] = (-3.0 * row[0] + 4.0 * row[1] - row[2]) * inv_2di;
            for (int k = 1; k < ni - 1; ++k)
                wr[k] = (row[k + 1] - row[k - 1]) * inv_2di;
            wr[ni - 1] =
                (3.0 * row[ni - 1] - 4.0 * row[ni - 2] + row[ni - 3]) * inv_2di;
        }
    };

    // one backward substep: reads cur (value at the later time), writes nxt
    auto substep = [&]() {
        fill_didv(cur);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int j = 1; j < na; ++j) {
            const bool top = (j == na - 1);
            const double aj = a[j];
            const double diff_a = top ? 0.0 : half_sa2 * aj * aj * inv_da2;
            const double cross_j = cross_c * aj;
            const double* vm = cur.data() + static_cast<std::size_t>(j - 1) * ni;
            const double* v0 = cur.data() + static_cast<std::size_t>(j) * ni;
            const double* vp = top ? nullptr
                                   : cur.data() + static_cast<std::size_t>(j + 1) * ni;
            const double* vmm =
                top ? cur.data() + static_cast<std::size_t>(j - 2) * ni : nullptr;
            const double* wm = w.data() + static_cast<std::size_t>(j - 1) * ni;
            const double* w0 = w.data() + static_cast<std::size_t>(j) * ni;
            const double* wp = top ? nullptr
                                   : w.data() + static_cast<std::size_t>(j + 1) * ni;
            const double* wmm =
                top ? w.data() + static_cast<std::size_t>(j - 2) * ni : nullptr;
            const double* rr = r0.data() + static_cast<std::size_t>(j) * ni;
            double* out = nxt.data() + static_cast<std::size_t>(j) * ni;

            for (int k = 0; k < ni; ++k) {
                const double vc = v0[k];
                const double mu_a = mu[k] * aj;

                double v_a_up, v_aa, v_ai;  // v_aa is the raw 3-point second difference
                if (!top) {
                    v_a_up = mu_a >= 0.0 ? (vp[k] - vc) * inv_da
                                         : (vc - vm[k]) * inv_da;
                    v_aa = vp[k] - 2.0 * vc + vm[k];
                    v_ai = (wp[k] - wm[k]) * inv_2da;
                } else {
                    v_a_up = mu_a >= 0.0
                                 ? (3.0 * vc - 4.0 * vm[k] + vmm[k]) * inv_2da
                                 : (vc - vm[k]) * inv_da;
                    v_aa = 0.0;  // zero-curvature ghost
                    v_ai = (3.0 * w0[k] - 4.0 * wm[k] + wmm[k]) * inv_2da;
                }

                double v_ii, v_i_fwd;
                if (k == 0) {
                    v_ii = 0.0;
                    v_i_fwd = (v0[1] - vc) * inv_di;
                } else if (k == ni - 1) {
                    v_ii = 0.0;
                    v_i_fwd = 0.0;  // no information to gain past the cap
                } else {
                    v_ii = (v0[k + 1] - 2.0 * vc + v0[k - 1]) * inv_di2;
                    v_i_fwd = (v0[k + 1] - vc) * inv_di;
                }

                const double gain = p.alpha0 * v_i_fwd - p.c;
                const double controlled = gain > 0.0 ? p.u_max * gain : 0.0;

                out[k] = vc + dt * (mu_a * v_a_up + diff_a * v_aa +
                                    half_si2 * v_ii + cross_j * v_ai -
                                    p.delta * vc + rr[k] + controlled);
            }
        }
        // absorbing row
        std::memset(nxt.data(), 0, sizeof(double) * ni);
        cur.swap(nxt);
    };

    // control decision from a stored slice, same discrete rule as the sweep
    auto decide = [&](const std::vector<double>& v, std::uint8_t* out_u) {
        for (int j = 0; j < na; ++j) {
            const double* row = v.data() + static_cast<std::size_t>(j) * ni;
            for (int k = 0; k < ni; ++k) {
                double v_i_fwd = 0.0;
                if (k < ni - 1) v_i_fwd = (row[k + 1] - row[k]) * inv_di;
                out_u[j * ni + k] =
                    (j > 0 && p.alpha0 * v_i_fwd - p.c > 0.0) ? 1 : 0;
            }
        }
    };

    // terminal slice: value zero everywhere, control all off
    decide(cur, sol.control.data() + static_cast<std::size_t>(nt - 1) * plane);

    for (int m = nt - 2; m >= 0; --m) {
        for (int s = 0; s < n_sub; ++s) substep();
        double* slice = sol.value.data() + static_cast<std::size_t>(m) * plane;
        std::memcpy(slice, cur.data(), plane * sizeof(double));
        for (std::size_t q = 0; q < plane; ++q) {
            if (!std::isfinite(slice[q])) {
                const int j = static_cast<int>(q) / ni;
                const int k = static_cast<int>(q) % ni;
                std::ostringstream os;
                os << "solve_hjb: non-finite value at t=" << m * dt_slice
                   << " A=" << a[j] << " I=" << i_lvl[k]
                   << " (explicit step dt=" << dt << ")";
                throw HjbNumericError(os.str());
            }
        }
        decide(cur, sol.control.data() + static_cast<std::size_t>(m) * plane);
    }
    return sol;
}

namespace detail {

inline void locate(double x, double lo, double step, int n, int* idx,
                   double* frac) {
    double pos = (x - lo) / step;
    if (pos <= 0.0) {
        *idx = 0;
        *frac = 0.0;
        return;
    }
    if (pos >= n - 1) {
        *idx = n - 2;
        *frac = 1.0;
        return;
    }
    *idx = static_cast<int>(pos);
    *frac = pos - *idx;
}

inline void check_range(const HjbSolution& s, double a, double i, double t) {
    const double eps_a = 1e-9 * (s.grid.a_max - s.a_min);
    const double eps_i = 1e-9 * s.params.i_max;
    const double eps_t = 1e-9 * s.params.horizon;
    if (a < s.a_min - eps_a || a > s.grid.a_max + eps_a || i < -eps_i ||
        i > s.params.i_max + eps_i || t < -eps_t ||
        t > s.params.horizon + eps_t) {
        std::ostringstream os;
        os << "query (A=" << a << ", I=" << i << ", t=" << t
           << ") outside the solution grid [" << s.a_min << "," << s.grid.a_max
           << "]x[0," << s.params.i_max << "]x[0," << s.params.horizon << "]";
        throw std::out_of_range(os.str());
    }
}

}  // namespace detail

// Trilinear interpolation of the value function.
inline double value_at(const HjbSolution& s, double a, double i, double t) {
    detail::check_range(s, a, i, t);
    int m, j, k;
    double ft, fa, fi;
    detail::locate(t, 0.0, s.dt_slice(), s.grid.n_t, &m, &ft);
    detail::locate(a, s.a_min, s.da(), s.grid.n_a, &j, &fa);
    detail::locate(i, 0.0, s.di(), s.grid.n_i, &k, &fi);
    double acc = 0.0;
    for (int dm = 0; dm <= 1; ++dm)
        for (int dj = 0; dj <= 1; ++dj)
            for (int dk = 0; dk <= 1; ++dk) {
                const double wgt = (dm ? ft : 1.0 - ft) * (dj ? fa : 1.0 - fa) *
                                   (dk ? fi : 1.0 - fi);
                if (wgt != 0.0)
                    acc += wgt * s.value[s.idx(m + dm, j + dj, k + dk)];
            }
    return acc;
}

// Control at the nearest grid node (the stored bang-bang decision).
inline double optimal_control_at(const HjbSolution& s, double a, double i,
                                 double t) {
    detail::check_range(s, a, i, t);
    int m, j, k;
    double ft, fa, fi;
    detail::locate(t, 0.0, s.dt_slice(), s.grid.n_t, &m, &ft);
    detail::locate(a, s.a_min, s.da(), s.grid.n_a, &j, &fa);
    detail::locate(i, 0.0, s.di(), s.grid.n_i, &k, &fi);
    if (ft > 0.5) ++m;
    if (fa > 0.5) ++j;
    if (fi > 0.5) ++k;
    return s.control[s.idx(m, j, k)] ? s.params.u_max : 0.0;
}

// Rate function for the simulator. States outside the grid are clamped to
// the nearest face: above a_max the decision at a_max applies, below B the
// path is absorbed anyway.
inline Policy extracted_policy(std::shared_ptr<const HjbSolution> s) {
    if (!s) throw std::invalid_argument("extracted_policy: null solution");
    return Policy::from_rate(
        PolicyKind::optimal, [s](double a, double i, double t) {
            const double ac = std::clamp(a, s->a_min, s->grid.a_max);
            const double ic = std::clamp(i, 0.0, s->params.i_max);
            const double tc = std::clamp(t, 0.0, s->params.horizon);
            return optimal_control_at(*s, ac, ic, tc);
        });
}

// Switching surface at one stored slice: for every autonomy row the smallest
// grid level of I whose control is off; i_max if the whole row is on.
struct ThresholdCurve {
    double t = 0.0;
    std::vector<double> a;
    std::vector<double> i_star;
};

inline ThresholdCurve threshold_curve(const HjbSolution& s, double t) {
    detail::check_range(s, s.a_min, 0.0, t);
    int m;
    double ft;
    detail::locate(t, 0.0, s.dt_slice(), s.grid.n_t, &m, &ft);
    if (ft > 0.5) ++m;
    ThresholdCurve out;
    out.t = s.t_of(m);
    out.a.reserve(s.grid.n_a - 1);
    out.i_star.reserve(s.grid.n_a - 1);
    for (int j = 1; j < s.grid.n_a; ++j) {  // skip the absorbing row
        int k_off = s.grid.n_i;
        for (int k = 0; k < s.grid.n_i; ++k) {
            if (!s.control[s.idx(m, j, k)]) {
                k_off = k;
                break;
            }
        }
        out.a.push_back(s.a_of(j));
        out.i_star.push_back(k_off == s.grid.n_i ? s.params.i_max
                                                 : s.i_of(k_off));
    }
    return out;
}

// ---- binary round trip ----------------------------------------------------

namespace detail {
inline constexpr char kMagic[8] = {'T', 'L', 'H', 'J', 'B', '0', '0', '1'};

template <class T>
void put(std::ofstream& f, const T& v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
void get(std::ifstream& f, T* v) {
    f.read(reinterpret_cast<char*>(v), sizeof(T));
}
}  // namespace detail

// Versioned little-endian dump of a solution (value + control + metadata).
inline void save_solution(const HjbSolution& s, const std::string& path) {
    static_assert(sizeof(double) == 8);
    if constexpr (std::endian::native != std::endian::little)
        throw std::runtime_error("save_solution: big-endian host unsupported");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("save_solution: cannot open " + path);
    f.write(detail::kMagic, sizeof(detail::kMagic));
    for (const auto& fld : param_fields()) detail::put(f, s.params.*fld.member);
    detail::put(f, s.a_min);
    detail::put(f, s.grid.a_max);
    detail::put(f, static_cast<std::int64_t>(s.grid.n_a));
    detail::put(f, static_cast<std::int64_t>(s.grid.n_i));
    detail::put(f, static_cast<std::int64_t>(s.grid.n_t));
    detail::put(f, s.dt_used);
    detail::put(f, s.total_substeps);
    f.write(reinterpret_cast<const char*>(s.value.data()),
            static_cast<std::streamsize>(s.value.size() * sizeof(double)));
    f.write(reinterpret_cast<const char*>(s.control.data()),
            static_cast<std::streamsize>(s.control.size()));
    if (!f) throw std::runtime_error("save_solution: write failed: " + path);
}

inline HjbSolution load_solution(const std::string& path) {
    if constexpr (std::endian::native != std::endian::little)
        throw std::runtime_error("load_solution: big-endian host unsupported");
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("load_solution: cannot open " + path);
    char magic[8];
    f.read(magic, 8);
    if (!f || std::memcmp(magic, detail::kMagic, 8) != 0)
        throw std::runtime_error("load_solution: " + path +
                                 " is not a solution dump (bad magic)");
    HjbSolution s;
    for (const auto& fld : param_fields()) detail::get(f, &(s.params.*fld.member));
    std::int64_t n_a = 0, n_i = 0, n_t = 0;
    detail::get(f, &s.a_min);
    detail::get(f, &s.grid.a_max);
    detail::get(f, &n_a);
    detail::get(f, &n_i);
    detail::get(f, &n_t);
    detail::get(f, &s.dt_used);
    detail::get(f, &s.total_substeps);
    if (!f || n_a < 8 || n_i < 8 || n_t < 2 || n_a > 100000 || n_i > 100000 ||
        n_t > 1000000)
        throw std::runtime_error("load_solution: corrupt header in " + path);
    s.grid.n_a = static_cast<int>(n_a);
    s.grid.n_i = static_cast<int>(n_i);
    s.grid.n_t = static_cast<int>(n_t);
    s.grid.dt = s.dt_used;
    const std::size_t plane =
        static_cast<std::size_t>(s.grid.n_a) * s.grid.n_i;
    s.value.resize(static_cast<std::size_t>(s.grid.n_t) * plane);
    s.control.resize(s.value.size());
    f.read(reinterpret_cast<char*>(s.value.data()),
           static_cast<std::streamsize>(s.value.size() * sizeof(double)));
    f.read(reinterpret_cast<char*>(s.control.data()),
           static_cast<std::streamsize>(s.control.size()));
    if (!f) throw std::runtime_error("load_solution: truncated file " + path);
    s.params.validate();
    return s;
}

// Refinement diagnostic: solve at the base grid and at doubled (A, I)
// resolution, compare interpolated values at probe states.
struct RefinementProbe {
    double a, i, t;
    double base, refined, rel_delta;
};

inline std::vector<RefinementProbe> refinement_check(
    const ModelParams& p, const GridSpec& base_grid,
    const std::vector<std::array<double, 3>>& probes) {
    const HjbSolution base = solve_hjb(p, base_grid);
    GridSpec fine = base_grid;
    fine.n_a *= 2;
    fine.n_i *= 2;
    fine.dt = 0.0;
    const HjbSolution refined = solve_hjb(p, fine);
    std::vector<RefinementProbe> out;
    out.reserve(probes.size());
    for (const auto& q : probes) {
        RefinementProbe r{q[0], q[1], q[2], 0.0, 0.0, 0.0};
        r.base = value_at(base, q[0], q[1], q[2]);
        r.refined = value_at(refined, q[0], q[1], q[2]);
        const double denom = std::max(std::abs(r.refined), 1e-12);
        r.rel_delta = std::abs(r.refined - r.base) / denom;
        out.push_back(r);
    }
    return out;
}

}  // namespace translab
