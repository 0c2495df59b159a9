// SPDX-License-Identifier: Apache-2.0
#include "vassoc/random.hpp"

#include "vassoc/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace vassoc {

double Rng::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::index(std::size_t n) {
    if (n == 0) {
        throw Error(Errc::invalid_count, "cannot draw an index from an empty range");
    }
    const std::uint64_t range = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t draw = engine_();
    while (draw >= limit) {
        draw = engine_();
    }
    return static_cast<std::size_t>(draw % range);
}

double Rng::normal(double mean, double sigma) {
    if (has_spare_) {
        has_spare_ = false;
        return mean + sigma * spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) {
        u1 = uniform01();
    }
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return mean + sigma * radius * std::cos(angle);
}

} // namespace vassoc
