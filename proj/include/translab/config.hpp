#pragma once

// Flat key=value run configuration. Model parameters use their bare field
// names (mu0, beta, ...); simulation and grid settings carry a "sim." or
// "grid." prefix since both own a key named dt. Unknown keys are errors,
// never warnings: a typoed key must not silently fall back to a default.

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "translab/hjb.hpp"
#include "translab/params.hpp"
#include "translab/simulate.hpp"

namespace translab {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string preset_name = "paper-2025";
    ModelParams params = preset("paper-2025");
    SimConfig sim;
    GridSpec grid;
    bool params_touched = false;  // guards the preset-before-overrides rule
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double x;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': not a number: '" + v + "'");
    }
    if (pos != v.size())
        throw ConfigError("key '" + key + "': trailing characters in '" + v + "'");
    return x;
}

inline std::int64_t parse_int(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    std::int64_t x;
    try {
        x = std::stoll(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': not an integer: '" + v + "'");
    }
    if (pos != v.size())
        throw ConfigError("key '" + key + "': trailing characters in '" + v + "'");
    return x;
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    std::uint64_t x;
    try {
        x = std::stoull(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': not an unsigned integer: '" + v + "'");
    }
    if (pos != v.size() || (!v.empty() && v[0] == '-'))
        throw ConfigError("key '" + key + "': not an unsigned integer: '" + v + "'");
    return x;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("key '" + key + "': expected true/false, got '" + v + "'");
}

}  // namespace detail

// Applies a single key=value pair. Throws ConfigError on unknown keys, bad
// values, or a preset appearing after parameter overrides (the preset would
// silently clobber them).
inline void apply_kv(RunConfig& cfg, const std::string& key,
                     const std::string& value) {
    using detail::parse_bool;
    using detail::parse_double;
    using detail::parse_int;
    using detail::parse_uint;

    if (key == "preset") {
        if (cfg.params_touched)
            throw ConfigError("preset must come before parameter overrides");
        try {
            cfg.params = preset(value);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        cfg.preset_name = value;
        return;
    }
    for (const auto& f : param_fields()) {
        if (key == f.name) {
            cfg.params.*(f.member) = parse_double(key, value);
            cfg.params_touched = true;
            return;
        }
    }
    if (key == "sim.dt") { cfg.sim.dt = parse_double(key, value); return; }
    if (key == "sim.n_paths") { cfg.sim.n_paths = parse_int(key, value); return; }
    if (key == "sim.master_seed") { cfg.sim.master_seed = parse_uint(key, value); return; }
    if (key == "sim.stream_base") { cfg.sim.stream_base = parse_uint(key, value); return; }
    if (key == "sim.record_stride") { cfg.sim.record_stride = parse_int(key, value); return; }
    if (key == "sim.boundary_enabled") { cfg.sim.boundary_enabled = parse_bool(key, value); return; }
    if (key == "grid.a_max") { cfg.grid.a_max = parse_double(key, value); return; }
    if (key == "grid.n_a") { cfg.grid.n_a = static_cast<int>(parse_int(key, value)); return; }
    if (key == "grid.n_i") { cfg.grid.n_i = static_cast<int>(parse_int(key, value)); return; }
    if (key == "grid.n_t") { cfg.grid.n_t = static_cast<int>(parse_int(key, value)); return; }
    if (key == "grid.dt") { cfg.grid.dt = parse_double(key, value); return; }
    throw ConfigError("unknown configuration key: '" + key + "'");
}

// Parses lines of "key = value". '#' starts a comment; blank lines are
// skipped. Later keys override earlier ones (except the preset-order rule).
inline void apply_config_lines(RunConfig& cfg,
                               const std::vector<std::string>& lines) {
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        std::string s = lines[ln];
        const std::size_t hash = s.find('#');
        if (hash != std::string::npos) s.erase(hash);
        s = detail::trim(s);
        if (s.empty()) continue;
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(ln + 1) +
                              ": expected key=value, got '" + s + "'");
        const std::string key = detail::trim(s.substr(0, eq));
        const std::string value = detail::trim(s.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(ln + 1) + ": empty key");
        try {
            apply_kv(cfg, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(ln + 1) + ": " + e.what());
        }
    }
}

inline void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(f, line)) lines.push_back(line);
    apply_config_lines(cfg, lines);
}

}  // namespace translab
