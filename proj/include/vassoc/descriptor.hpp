// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vassoc/feature_map.hpp"
#include "vassoc/mask.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace vassoc {

enum class GridExtent {
    object_scale, ///< outer radius = margin * largest anchor radius
    image_scale,  ///< outer radius = margin * half the image diagonal
};

enum class NegativeMode {
    image_bounds, ///< bin center outside the image frame
    target_mask,  ///< bin center outside the object's own mask
    mask_union,   ///< bin center outside the union of the object and context masks
};

struct DescriptorConfig {
    std::size_t u = 36;  ///< angle bins
    std::size_t v = 12;  ///< radius bins
    std::size_t d_model = 256;
    GridExtent grid_extent = GridExtent::object_scale;
    double radius_margin = 1.25;
    NegativeMode negative_mode = NegativeMode::image_bounds;

    void validate() const;
};

/// Polar histogram of contour anchors about the object centroid.
///
/// `hist` is stored row-major with the angle index as the row:
/// hist[i * v + j] is angle bin i, radius bin j. Occupied bins hold
/// count / sqrt(d_model); bins whose center falls outside the configured
/// region hold exactly -1 / sqrt(d_model).
struct ShapePositionDescriptor {
    std::size_t u = 0;
    std::size_t v = 0;
    std::size_t d_model = 0;
    double r_max = 0.0;
    Point2d center;
    std::vector<double> hist;
    Vec embedded;

    double at(std::size_t i, std::size_t j) const { return hist[i * v + j]; }

    bool operator==(const ShapePositionDescriptor&) const = default;
};

/// Polar coordinates of `p` about `center`: theta in [0, 2*pi) measured from
/// +x toward +y (clockwise on screen), r >= 0. A point on the center maps
/// to (0, 0).
Point2d to_polar(Point2d p, Point2d center);

ShapePositionDescriptor build_descriptor(const AnchorSet& anchors, const Mask& mask,
                                         std::span<const Mask> context_masks, const DescriptorConfig& cfg);

/// Contour, anchors and descriptor for one mask.
ShapePositionDescriptor describe_mask(const Mask& mask, const DescriptorConfig& cfg,
                                      std::size_t anchor_count = kDefaultAnchorCount,
                                      std::span<const Mask> context_masks = {});

/// Length-`out_len` linear resample of `values` with half-sample alignment;
/// the identity when the lengths agree.
Vec resample_linear(std::span<const double> values, std::size_t out_len);

/// Relative L2 change of the histogram from `reference` to `other`:
/// |other - reference| / |reference|. Not symmetric.
double delta_h(const ShapePositionDescriptor& reference, const ShapePositionDescriptor& other);

/// True iff delta_h(reference, other) < tau.
bool is_positive_pair(const ShapePositionDescriptor& reference, const ShapePositionDescriptor& other, double tau);

inline constexpr double kDefaultTau = 0.2;

} // namespace vassoc
