#pragma once

// Transparency policies: the rule mapping state (A, I, t) to a control rate
// u in [0, u_max]. Three built-in arms (no transparency, maximal
// transparency, exogenously pinned information) plus arbitrary rate
// functions, which is how the solved optimal control plugs in.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include "translab/params.hpp"

namespace translab {

enum class PolicyKind {
    no_transparency,       // u = 0 throughout
    max_transparency,      // u = u_max throughout
    constant_information,  // I pinned exogenously, u = 0
    optimal,               // rate function extracted from a solved value grid
};

inline const char* to_string(PolicyKind k) {
    switch (k) {
        case PolicyKind::no_transparency: return "none";
        case PolicyKind::max_transparency: return "max";
        case PolicyKind::constant_information: return "constant";
        case PolicyKind::optimal: return "optimal";
    }
    return "?";
}

// Thrown when a rate function returns something outside [0, u_max]; the
// simulator refuses to clamp silently.
struct PolicyContractViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Policy {
  public:
    using RateFn = std::function<double(double a, double i, double t)>;

    static Policy no_transparency() {
        return Policy(PolicyKind::no_transparency, 0.0, nullptr);
    }
    static Policy max_transparency() {
        return Policy(PolicyKind::max_transparency, 0.0, nullptr);
    }
    // Pins I at the given level for the whole run: the information SDE is
    // switched off entirely (no drift, no noise, no control cost). This is
    // the probe used by every moment and first-passage study.
    static Policy constant_information(double i_pin) {
        if (!(i_pin >= 0.0))
            throw std::invalid_argument("constant_information: level < 0");
        return Policy(PolicyKind::constant_information, i_pin, nullptr);
    }
    static Policy from_rate(PolicyKind kind, RateFn fn) {
        if (!fn) throw std::invalid_argument("Policy: null rate function");
        return Policy(kind, 0.0, std::move(fn));
    }

    PolicyKind kind() const { return kind_; }
    bool pins_information() const {
        return kind_ == PolicyKind::constant_information;
    }
    double pinned_level() const {
        if (!pins_information())
            throw std::logic_error("Policy: not a pinned-information policy");
        return i_pin_;
    }

    double rate(double a, double i, double t, const ModelParams& p) const {
        double u = 0.0;
        switch (kind_) {
            case PolicyKind::no_transparency:
            case PolicyKind::constant_information: u = 0.0; break;
            case PolicyKind::max_transparency: u = p.u_max; break;
            case PolicyKind::optimal: u = fn_(a, i, t); break;
        }
        if (!(std::isfinite(u) && u >= 0.0 && u <= p.u_max)) {
            throw PolicyContractViolation(
                "policy returned u = " + std::to_string(u) + " outside [0, " +
                std::to_string(p.u_max) + "] at (A=" + std::to_string(a) +
                ", I=" + std::to_string(i) + ", t=" + std::to_string(t) + ")");
        }
        return u;
    }

  private:
    Policy(PolicyKind k, double pin, RateFn fn)
        : kind_(k), i_pin_(pin), fn_(std::move(fn)) {}
    PolicyKind kind_;
    double i_pin_;
    RateFn fn_;
};

}  // namespace translab
