#pragma once

// Deterministic file emission: CSV with 17-significant-digit numerics and
// JSON manifests. Reruns with the same configuration must produce the same
// bytes, so nothing here records time, host, or worker count.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "translab/params.hpp"
#include "translab/rng.hpp"

namespace translab::io {

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Provenance stamped at the top of every CSV and into every manifest.
// dt and n_paths are 0 when the run has no simulation component.
struct RunStamp {
    std::string preset;
    std::uint64_t seed = 0;
    double dt = 0.0;
    std::int64_t n_paths = 0;
};

inline std::vector<std::string> stamp_lines(const RunStamp& s) {
    std::vector<std::string> out;
    out.push_back(std::string("# artifact_version: ") + kArtifactVersion);
    out.push_back("# preset: " + s.preset);
    out.push_back("# seed: " + std::to_string(s.seed));
    out.push_back("# dt: " + format_double(s.dt));
    out.push_back("# n_paths: " + std::to_string(s.n_paths));
    out.push_back(std::string("# terminal_convention: ") + kTerminalConvention);
    out.push_back(std::string("# quality_metric: ") + kQualityMetricId);
    out.push_back(std::string("# rng: ") + kRngId);
    return out;
}

inline void write_lines(const std::string& path,
                        const std::vector<std::string>& lines) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& l : lines) f << l << '\n';
    f.flush();
    if (!f) throw std::runtime_error("write failed: " + path);
}

inline void write_csv(const std::string& path, const RunStamp& stamp,
                      const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows) {
    std::vector<std::string> lines = stamp_lines(stamp);
    std::string header;
    for (std::size_t k = 0; k < columns.size(); ++k) {
        if (k) header += ',';
        header += columns[k];
    }
    lines.push_back(std::move(header));
    for (const auto& r : rows) {
        if (r.size() != columns.size())
            throw std::invalid_argument("write_csv: row width mismatch in " + path);
        std::string line;
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (k) line += ',';
            line += format_double(r[k]);
        }
        lines.push_back(std::move(line));
    }
    write_lines(path, lines);
}

inline nlohmann::ordered_json params_json(const ModelParams& p) {
    nlohmann::ordered_json j;
    for (const auto& f : param_fields()) j[f.name] = p.*(f.member);
    return j;
}

// One manifest per CLI run: the fully resolved configuration plus the list
// of files the run produced. `settings` carries subcommand-specific values.
inline void write_manifest(const std::string& path, const std::string& command,
                           const ModelParams& p, const RunStamp& stamp,
                           const nlohmann::ordered_json& settings,
                           const std::vector<std::string>& outputs) {
    nlohmann::ordered_json j;
    j["artifact_version"] = kArtifactVersion;
    j["command"] = command;
    j["preset"] = stamp.preset;
    j["seed"] = stamp.seed;
    j["dt"] = stamp.dt;
    j["n_paths"] = stamp.n_paths;
    j["terminal_convention"] = kTerminalConvention;
    j["quality_metric"] = kQualityMetricId;
    j["rng"] = kRngId;
    j["params"] = params_json(p);
    j["settings"] = settings;
    j["outputs"] = outputs;
    write_lines(path, {j.dump(2)});
}

}  // namespace translab::io
