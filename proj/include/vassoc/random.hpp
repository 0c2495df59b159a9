// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace vassoc {

/// Seedable generator with platform-independent output.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions are implementation-defined, so the
/// transforms below are spelled out here instead:
///  - uniform01: top 53 bits of one engine draw, scaled by 2^-53 (in [0, 1)).
///  - index(n): rejection sampling on the raw 64-bit draw (no modulo bias).
///  - normal: Box-Muller on two uniform01 draws, both outputs used in turn.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    double uniform01();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    /// Uniform integer in [0, n); n must be positive.
    std::size_t index(std::size_t n);
    double normal(double mean = 0.0, double sigma = 1.0);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace vassoc
