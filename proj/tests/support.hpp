// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vassoc/mask.hpp"
#include "vassoc/random.hpp"
#include "vassoc/tracks.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

namespace support {

inline vassoc::Mask disc(int w, int h, double cx, double cy, double r) {
    vassoc::Mask m(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) {
                m.set(x, y);
            }
        }
    }
    return m;
}

/// Convex polygon from sorted random angles on a jittered circle.
inline std::vector<vassoc::Point2d> random_convex(vassoc::Rng& rng, double cx, double cy, double radius) {
    const int n = 3 + static_cast<int>(rng.index(6));
    std::vector<double> angles;
    for (int k = 0; k < n; ++k) {
        angles.push_back(rng.uniform(0.0, 2.0 * std::acos(-1.0)));
    }
    std::sort(angles.begin(), angles.end());
    std::vector<vassoc::Point2d> pts;
    for (double a : angles) {
        pts.push_back({cx + radius * std::cos(a), cy + radius * std::sin(a)});
    }
    return pts;
}

inline std::vector<std::uint8_t> bits_of(const vassoc::Mask& m) {
    return {m.bits().begin(), m.bits().end()};
}

inline vassoc::QueryRecord record(vassoc::Vec embedding, int frame, std::string ref,
                                  vassoc::Kind kind = vassoc::Kind::thing, std::optional<int> class_id = {}) {
    vassoc::QueryRecord r;
    r.embedding = std::move(embedding);
    r.frame = frame;
    r.mask_ref = std::move(ref);
    r.kind = kind;
    r.class_id = class_id;
    return r;
}

inline vassoc::Vec unit(std::size_t dim, std::size_t axis) {
    vassoc::Vec v(dim, 0.0);
    v[axis] = 1.0;
    return v;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("vassoc_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

} // namespace support
