// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vassoc/mask.hpp"

#include <cstdint>
#include <vector>

namespace vassoc {

using Vec = std::vector<double>;

/// Externally supplied backbone features, row-major and channel-last.
class FeatureMap {
public:
    FeatureMap(int width, int height, int channels);
    FeatureMap(int width, int height, int channels, std::vector<float> values);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int channels() const noexcept { return channels_; }

    float at(int x, int y, int c) const noexcept { return values_[offset(x, y) + static_cast<std::size_t>(c)]; }
    void set(int x, int y, int c, float v) noexcept { values_[offset(x, y) + static_cast<std::size_t>(c)] = v; }
    Vec cell(int x, int y) const;

    const std::vector<float>& values() const noexcept { return values_; }

    bool operator==(const FeatureMap&) const = default;

private:
    std::size_t offset(int x, int y) const noexcept {
        return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) *
               static_cast<std::size_t>(channels_);
    }

    int width_;
    int height_;
    int channels_;
    std::vector<float> values_;
};

/// Bilinear point sample, exact at integer coordinates. Throws OutOfBounds
/// unless 0 <= x <= width-1 and 0 <= y <= height-1.
Vec sample_feature(const FeatureMap& fmap, Point2d p);

/// Where the center of region pixel (x, y) lands on the feature map when the
/// region is scaled uniformly onto it (half-pixel aligned, clamped).
Point2d region_to_feature(const FeatureMap& fmap, const Mask& region, int x, int y);

/// Mean of sample_feature over the scaled centers of all true region pixels.
Vec region_mean_feature(const FeatureMap& fmap, const Mask& region);

/// Mean-pools an s x s partition of the map (cells in row-major order) and
/// returns `n` cells chosen uniformly without replacement under `seed`.
std::vector<Vec> grid_partition_features(const FeatureMap& fmap, std::size_t s, std::size_t n, std::uint64_t seed);

/// Indices (row-major cell ids) picked by grid_partition_features.
std::vector<std::size_t> grid_selection(std::size_t s, std::size_t n, std::uint64_t seed);

/// All s x s cell means in row-major order.
std::vector<Vec> grid_cell_means(const FeatureMap& fmap, std::size_t s);

} // namespace vassoc
