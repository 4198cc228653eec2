#pragma once

// Model parameters and named presets.
//
// One struct carries every scalar the model needs: drift and volatility of
// the autonomy process, the information dynamics, reward shape, discounting,
// and the working-memory-dependent disengagement boundary. Defaults equal
// the "paper-2025" preset so a default-constructed ModelParams is already
// usable.

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace translab {

inline constexpr const char* kArtifactVersion = "1.0.0";

// Conventions every output artifact is stamped with. The terminal payoff of
// the control problem is fixed to zero (the reference account leaves it
// open), and decision quality is scored as engaged quality per unit horizon:
// (1/T) int_0^{min(tau,T)} Q(I_s) ds.
inline constexpr const char* kTerminalConvention = "terminal-value-zero";
inline constexpr const char* kQualityMetricId = "engaged-quality-per-horizon/v1";

struct ModelParams {
    double mu0     = 0.10;   // baseline autonomy drift at I = 0
    double beta    = 0.05;   // linear information load on drift
    double gamma   = 0.01;   // quadratic information load on drift
    double sigma_a = 0.20;   // autonomy volatility
    double a0      = 1.0;    // initial autonomy
    double alpha0  = 0.5;    // information gain per unit control
    double sigma_i = 0.1;    // information volatility
    double i_max   = 5.0;    // information cap
    double rho     = -0.3;   // corr(autonomy noise, information noise)
    double q_max   = 10.0;   // quality scale
    double beta_q  = 0.04;   // quality overload coefficient
    double kappa   = 2.0;    // autonomy-cost scale
    double c       = 0.5;    // flow cost per unit of control
    double delta   = 0.05;   // discount rate
    double b0      = 0.9;    // disengagement boundary at WM = 0
    double beta_wm = 0.1;    // boundary shift per working-memory item
    double wm      = 4.0;    // working-memory load (items)
    double horizon = 10.0;   // task horizon T
    double u_max   = 1.0;    // maximum control rate
    double i0      = 0.0;    // initial information level

    // Absorbing boundary implied by the working-memory load.
    double boundary() const { return b0 - beta_wm * wm; }

    void validate() const;
};

// Field table used by config parsing and run manifests. Order is the
// serialization order and must stay stable.
struct ParamField {
    const char* name;
    double ModelParams::*member;
};

inline const std::vector<ParamField>& param_fields() {
    static const std::vector<ParamField> fields = {
        {"mu0", &ModelParams::mu0},
        {"beta", &ModelParams::beta},
        {"gamma", &ModelParams::gamma},
        {"sigma_a", &ModelParams::sigma_a},
        {"a0", &ModelParams::a0},
        {"alpha0", &ModelParams::alpha0},
        {"sigma_i", &ModelParams::sigma_i},
        {"i_max", &ModelParams::i_max},
        {"rho", &ModelParams::rho},
        {"q_max", &ModelParams::q_max},
        {"beta_q", &ModelParams::beta_q},
        {"kappa", &ModelParams::kappa},
        {"c", &ModelParams::c},
        {"delta", &ModelParams::delta},
        {"b0", &ModelParams::b0},
        {"beta_wm", &ModelParams::beta_wm},
        {"wm", &ModelParams::wm},
        {"horizon", &ModelParams::horizon},
        {"u_max", &ModelParams::u_max},
        {"i0", &ModelParams::i0},
    };
    return fields;
}

inline void ModelParams::validate() const {
    auto fail = [](const std::string& what) {
        throw std::invalid_argument("ModelParams: " + what);
    };
    auto positive = [&](const char* name, double v) {
        if (!(v > 0.0)) fail(std::string(name) + " must be strictly positive");
    };
    for (const auto& f : param_fields()) {
        if (!std::isfinite(this->*f.member))
            fail(std::string(f.name) + " is not finite");
    }
    positive("mu0", mu0);
    positive("beta", beta);
    positive("gamma", gamma);
    positive("a0", a0);
    positive("alpha0", alpha0);
    positive("i_max", i_max);
    positive("q_max", q_max);
    positive("beta_q", beta_q);
    positive("kappa", kappa);
    positive("c", c);
    positive("b0", b0);
    positive("beta_wm", beta_wm);
    positive("horizon", horizon);
    positive("u_max", u_max);
    // Volatilities may be zero: the degenerate deterministic mode is useful
    // for tests and for isolating drift effects.
    if (!(sigma_a >= 0.0)) fail("sigma_a must be >= 0");
    if (!(sigma_i >= 0.0)) fail("sigma_i must be >= 0");
    if (!(delta >= 0.0)) fail("delta must be >= 0");
    if (!(rho >= -1.0 && rho <= 0.0)) fail("rho must lie in [-1, 0]");
    if (!(wm >= 0.0)) fail("wm must be >= 0");
    if (!(i0 >= 0.0 && i0 <= i_max)) fail("i0 must lie in [0, i_max]");
    const double b = boundary();
    if (!(b > 0.0)) {
        std::ostringstream os;
        os << "boundary b0 - beta_wm*wm = " << b << " must be strictly positive";
        fail(os.str());
    }
    if (!(b < a0)) fail("boundary must lie strictly below a0");
}

// Named parameter sets. "paper-2025" is the calibration used throughout the
// reference tables; it is also the struct's default state.
inline ModelParams preset(const std::string& name) {
    if (name == "paper-2025") return ModelParams{};
    throw std::invalid_argument("unknown preset: '" + name +
                                "' (available: paper-2025)");
}

}  // namespace translab
