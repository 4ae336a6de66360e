// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "fhdfrc/types.hpp"

namespace fhdfrc {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent per-trial streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Seed of trial `index` under `master`. Depends only on (master, index), never on scheduling.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ (index * 0xD1B54A32D192ED03ull));
}

inline Rng make_rng(std::uint64_t master, std::uint64_t index) {
    return Rng(trial_seed(master, index));
}

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Circular complex Gaussian with E|z|^2 = variance.
inline Complex cgauss(Rng& rng, double variance) {
    std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
    double re = n(rng);
    double im = n(rng);
    return {re, im};
}

}  // namespace fhdfrc
