#pragma once

// Deterministic counter-based random streams.
//
// Each normal draw is addressed by the tuple (seed, stream, step, call) and
// produced by hashing the tuple, so generation is stateless: any path, any
// step can be drawn in any order, by any number of threads, and the numbers
// never change. The identifier below is recorded in run manifests so output
// files are traceable to the generator that produced them.

#include <cstdint>

#include "translab/normal.hpp"

namespace translab {

inline constexpr const char* kRngId = "splitmix64-ctr/v1";

// SplitMix64 finalizer (Steele, Lea & Flood): a 64-bit bijective mixer with
// full avalanche.
inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Hash the four-part counter into one word. Chaining the finalizer keeps
// each stage bijective in its own input, so structured counters (small
// consecutive integers) cannot collide systematically.
inline constexpr std::uint64_t counter_word(std::uint64_t seed,
                                            std::uint64_t stream,
                                            std::uint64_t step,
                                            std::uint64_t call) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h + stream);
    h = splitmix64(h + step);
    h = splitmix64(h + call);
    return h;
}

// Uniform in the open interval (0,1): 53 mantissa bits, offset half an ulp
// so 0 and 1 are unreachable (the quantile below needs that).
inline double counter_uniform(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t step, std::uint64_t call) {
    const std::uint64_t w = counter_word(seed, stream, step, call);
    return (static_cast<double>(w >> 11) + 0.5) * 0x1.0p-53;
}

inline double counter_normal(std::uint64_t seed, std::uint64_t stream,
                             std::uint64_t step, std::uint64_t call) {
    return norm_quantile(counter_uniform(seed, stream, step, call));
}

// Independent sub-seed for a named auxiliary purpose (per-condition sweeps,
// bootstrap resampling) so auxiliary draws never overlap path streams.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                           std::uint64_t tag) {
    return counter_word(seed, 0x5EEDULL, tag, 0);
}

// All normal draws of one simulated path.
class PathStream {
  public:
    PathStream(std::uint64_t seed, std::uint64_t stream)
        : seed_(seed), stream_(stream) {}
    // call 0: autonomy shock, call 1: information shock
    double normal(std::uint64_t step, std::uint64_t call) const {
        return counter_normal(seed_, stream_, step, call);
    }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
};

}  // namespace translab
