#pragma once

#include <cstdint>

#include "core/config.hpp"
#include "core/curve.hpp"

namespace csf {

// Deterministic 64-bit generator used for preset perturbation phases; the
// recurrence is fixed so configurations reproduce bit-identically anywhere.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Builds the configured initial curve on the configured model and, for the
// presets whose parameter ranges promise Omega(T) > 0, verifies that at
// construction.
DiscreteCurve make_initial_curve(const ModelPtr &model, const InitialCurveConfig &config);

} // namespace csf
