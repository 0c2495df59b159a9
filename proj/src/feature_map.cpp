// SPDX-License-Identifier: Apache-2.0
#include "vassoc/feature_map.hpp"

#include "vassoc/error.hpp"
#include "vassoc/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace vassoc {

FeatureMap::FeatureMap(int width, int height, int channels) : FeatureMap(width, height, channels, {}) {}

FeatureMap::FeatureMap(int width, int height, int channels, std::vector<float> values)
    : width_(width), height_(height), channels_(channels), values_(std::move(values)) {
    if (width < 1 || height < 1 || channels < 1) {
        throw Error(Errc::invalid_argument, "feature map dimensions must be positive");
    }
    const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * static_cast<std::size_t>(channels);
    if (values_.empty()) {
        values_.assign(n, 0.0F);
    } else if (values_.size() != n) {
        throw Error(Errc::invalid_argument, "feature map value count does not match its dimensions");
    }
    for (float v : values_) {
        if (!std::isfinite(v)) {
            throw Error(Errc::invalid_argument, "feature map contains a non-finite value");
        }
    }
}

Vec FeatureMap::cell(int x, int y) const {
    Vec out(static_cast<std::size_t>(channels_));
    for (int c = 0; c < channels_; ++c) {
        out[static_cast<std::size_t>(c)] = at(x, y, c);
    }
    return out;
}

Vec sample_feature(const FeatureMap& fmap, Point2d p) {
    const double max_x = fmap.width() - 1;
    const double max_y = fmap.height() - 1;
    if (!(p.x >= 0.0 && p.x <= max_x && p.y >= 0.0 && p.y <= max_y)) {
        throw Error(Errc::out_of_bounds,
                    "sample point (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ") lies outside the feature map");
    }
    const int x0 = static_cast<int>(std::floor(p.x));
    const int y0 = static_cast<int>(std::floor(p.y));
    const int x1 = std::min(x0 + 1, fmap.width() - 1);
    const int y1 = std::min(y0 + 1, fmap.height() - 1);
    const double fx = p.x - x0;
    const double fy = p.y - y0;
    const double w00 = (1.0 - fx) * (1.0 - fy);
    const double w10 = fx * (1.0 - fy);
    const double w01 = (1.0 - fx) * fy;
    const double w11 = fx * fy;

    Vec out(static_cast<std::size_t>(fmap.channels()));
    for (int c = 0; c < fmap.channels(); ++c) {
        out[static_cast<std::size_t>(c)] = w00 * fmap.at(x0, y0, c) + w10 * fmap.at(x1, y0, c) +
                                           w01 * fmap.at(x0, y1, c) + w11 * fmap.at(x1, y1, c);
    }
    return out;
}

Point2d region_to_feature(const FeatureMap& fmap, const Mask& region, int x, int y) {
    const double sx = static_cast<double>(fmap.width()) / region.width();
    const double sy = static_cast<double>(fmap.height()) / region.height();
    const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(fmap.width() - 1));
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(fmap.height() - 1));
    return {fx, fy};
}

Vec region_mean_feature(const FeatureMap& fmap, const Mask& region) {
    if (region.empty()) {
        throw Error(Errc::empty_mask, "region has no pixels to average");
    }
    Vec sum(static_cast<std::size_t>(fmap.channels()), 0.0);
    std::size_t n = 0;
    for (int y = 0; y < region.height(); ++y) {
        for (int x = 0; x < region.width(); ++x) {
            if (!region.at(x, y)) {
                continue;
            }
            const Vec v = sample_feature(fmap, region_to_feature(fmap, region, x, y));
            for (std::size_t c = 0; c < v.size(); ++c) {
                sum[c] += v[c];
            }
            ++n;
        }
    }
    for (double& v : sum) {
        v /= static_cast<double>(n);
    }
    return sum;
}

std::vector<Vec> grid_cell_means(const FeatureMap& fmap, std::size_t s) {
    if (s == 0) {
        throw Error(Errc::invalid_count, "grid size must be at least 1");
    }
    // Cell k spans [floor(k*W/s), floor((k+1)*W/s)), widened to one pixel when s exceeds the map size.
    auto span_of = [s](std::size_t k, int extent) {
        const auto e = static_cast<std::size_t>(extent);
        std::size_t lo = k * e / s;
        std::size_t hi = (k + 1) * e / s;
        lo = std::min(lo, e - 1);
        hi = std::max(hi, lo + 1);
        return std::pair<int, int>{static_cast<int>(lo), static_cast<int>(hi)};
    };

    std::vector<Vec> means;
    means.reserve(s * s);
    for (std::size_t cy = 0; cy < s; ++cy) {
        const auto [y_lo, y_hi] = span_of(cy, fmap.height());
        for (std::size_t cx = 0; cx < s; ++cx) {
            const auto [x_lo, x_hi] = span_of(cx, fmap.width());
            Vec sum(static_cast<std::size_t>(fmap.channels()), 0.0);
            for (int y = y_lo; y < y_hi; ++y) {
                for (int x = x_lo; x < x_hi; ++x) {
                    for (int c = 0; c < fmap.channels(); ++c) {
                        sum[static_cast<std::size_t>(c)] += fmap.at(x, y, c);
                    }
                }
            }
            const double count = static_cast<double>(y_hi - y_lo) * static_cast<double>(x_hi - x_lo);
            for (double& v : sum) {
                v /= count;
            }
            means.push_back(std::move(sum));
        }
    }
    return means;
}

std::vector<std::size_t> grid_selection(std::size_t s, std::size_t n, std::uint64_t seed) {
    if (s == 0 || n == 0 || n > s * s) {
        throw Error(Errc::invalid_count,
                    "cannot select " + std::to_string(n) + " of " + std::to_string(s * s) + " grid cells");
    }
    std::vector<std::size_t> order(s * s);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    // Partial Fisher-Yates: the first n slots end up a uniform sample.
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + rng.index(order.size() - i);
        std::swap(order[i], order[j]);
    }
    order.resize(n);
    return order;
}

std::vector<Vec> grid_partition_features(const FeatureMap& fmap, std::size_t s, std::size_t n, std::uint64_t seed) {
    const auto picks = grid_selection(s, n, seed);
    const auto means = grid_cell_means(fmap, s);
    std::vector<Vec> out;
    out.reserve(n);
    for (std::size_t idx : picks) {
        out.push_back(means[idx]);
    }
    return out;
}

} // namespace vassoc
