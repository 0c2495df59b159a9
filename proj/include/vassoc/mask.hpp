// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace vassoc {

/// Integer pixel coordinate. Pixel centers sit on integer (x, y); x grows
/// rightward and y grows downward.
struct PixelPoint {
    int x = 0;
    int y = 0;

    auto operator<=>(const PixelPoint&) const = default;
};

struct Point2d {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point2d&) const = default;
};

inline constexpr std::size_t kDefaultAnchorCount = 200;

/// Binary occupancy grid for one object in one frame, stored row-major.
class Mask {
public:
    Mask(int width, int height);
    Mask(int width, int height, std::vector<std::uint8_t> bits);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    bool in_image(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width_ && y < height_; }
    bool at(int x, int y) const noexcept { return bits_[index(x, y)] != 0; }
    /// Same as `at` but false outside the image.
    bool test(int x, int y) const noexcept { return in_image(x, y) && at(x, y); }
    void set(int x, int y, bool value = true) noexcept { bits_[index(x, y)] = value ? 1 : 0; }

    std::size_t count() const noexcept;
    bool empty() const noexcept { return count() == 0; }
    std::span<const std::uint8_t> bits() const noexcept { return bits_; }

    bool operator==(const Mask&) const = default;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_;
    int height_;
    std::vector<std::uint8_t> bits_;
};

/// Masks addressed by their reference string (e.g. "f0003_o02").
using MaskStore = std::map<std::string, Mask>;

/// Ordered outer boundary of a mask. The loop is implicitly closed: the
/// successor of the last point is the first point.
struct Contour {
    std::vector<PixelPoint> points;
    bool closed = true;
};

struct AnchorSet {
    std::vector<Point2d> anchors;
    Point2d centroid;
};

/// Largest 8-connected component of `mask`. Ties go to the component whose
/// first pixel comes earliest in raster order.
Mask largest_component(const Mask& mask);

/// Moore-neighbour trace of the largest component's outer boundary.
/// Starts at its topmost-then-leftmost pixel and runs counter-clockwise as
/// displayed (down the left flank first). Holes are ignored.
Contour extract_contour(const Mask& mask);

/// Mean of all true pixel coordinates, over every component.
Point2d centroid(const Mask& mask);

/// `m` points at equal arc-length spacing along the closed contour
/// polyline, the first one at the contour's first point.
AnchorSet sample_anchors(const Contour& contour, std::size_t m, Point2d centroid);

/// extract_contour + centroid + sample_anchors in one call.
AnchorSet anchors_from_mask(const Mask& mask, std::size_t m = kDefaultAnchorCount);

/// Filled rectangle with inclusive corners, clipped to the image.
Mask box_mask(int width, int height, int x0, int y0, int x1, int y1);

/// Pixels whose center lies inside or on the boundary of the polygon.
Mask fill_polygon(int width, int height, std::span<const Point2d> polygon);

/// Number of pixels set in both masks; masks must share dimensions.
std::size_t intersection_count(const Mask& a, const Mask& b);

} // namespace vassoc
