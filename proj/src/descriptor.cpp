// SPDX-License-Identifier: Apache-2.0
#include "vassoc/descriptor.hpp"

#include "vassoc/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace vassoc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool pixel_set(const Mask& mask, double x, double y) {
    const double px = std::floor(x + 0.5);
    const double py = std::floor(y + 0.5);
    if (px < 0.0 || py < 0.0 || px >= mask.width() || py >= mask.height()) {
        return false;
    }
    return mask.at(static_cast<int>(px), static_cast<int>(py));
}

bool inside_image(const Mask& mask, double x, double y) {
    const double px = std::floor(x + 0.5);
    const double py = std::floor(y + 0.5);
    return px >= 0.0 && py >= 0.0 && px < mask.width() && py < mask.height();
}

} // namespace

void DescriptorConfig::validate() const {
    if (u < 2 || v < 1 || d_model < 1) {
        throw Error(Errc::invalid_argument, "descriptor needs u >= 2, v >= 1 and d_model >= 1");
    }
    if (!(radius_margin >= 1.0) || !std::isfinite(radius_margin)) {
        throw Error(Errc::invalid_argument, "radius_margin must be a finite value >= 1");
    }
}

Point2d to_polar(Point2d p, Point2d center) {
    const double dx = p.x - center.x;
    const double dy = p.y - center.y;
    const double r = std::hypot(dx, dy);
    if (r == 0.0) {
        return {0.0, 0.0};
    }
    double theta = std::atan2(dy, dx);
    if (theta < 0.0) {
        theta += kTwoPi;
    }
    if (theta >= kTwoPi) {
        theta = std::nextafter(kTwoPi, 0.0);
    }
    return {theta, r};
}

Vec resample_linear(std::span<const double> values, std::size_t out_len) {
    if (values.empty() || out_len == 0) {
        throw Error(Errc::invalid_count, "resampling needs non-empty input and output");
    }
    const std::size_t in_len = values.size();
    Vec out(out_len);
    const double scale = static_cast<double>(in_len) / static_cast<double>(out_len);
    const double last = static_cast<double>(in_len - 1);
    for (std::size_t k = 0; k < out_len; ++k) {
        const double src = std::clamp((static_cast<double>(k) + 0.5) * scale - 0.5, 0.0, last);
        const auto lo = static_cast<std::size_t>(std::floor(src));
        const std::size_t hi = std::min(lo + 1, in_len - 1);
        const double t = src - static_cast<double>(lo);
        out[k] = t == 0.0 ? values[lo] : (1.0 - t) * values[lo] + t * values[hi];
    }
    return out;
}

ShapePositionDescriptor build_descriptor(const AnchorSet& anchors, const Mask& mask,
                                         std::span<const Mask> context_masks, const DescriptorConfig& cfg) {
    cfg.validate();
    if (anchors.anchors.empty()) {
        throw Error(Errc::empty_anchors, "descriptor needs at least one anchor");
    }
    if (cfg.negative_mode == NegativeMode::mask_union) {
        if (context_masks.empty()) {
            throw Error(Errc::missing_context, "mask_union negative mode needs context masks");
        }
        for (const auto& m : context_masks) {
            if (m.width() != mask.width() || m.height() != mask.height()) {
                throw Error(Errc::dimension_mismatch, "context mask size differs from the target mask");
            }
        }
    }

    std::vector<Point2d> polar;
    polar.reserve(anchors.anchors.size());
    double max_r = 0.0;
    for (const auto& p : anchors.anchors) {
        polar.push_back(to_polar(p, anchors.centroid));
        max_r = std::max(max_r, polar.back().y);
    }

    ShapePositionDescriptor d;
    d.u = cfg.u;
    d.v = cfg.v;
    d.d_model = cfg.d_model;
    d.center = anchors.centroid;
    if (cfg.grid_extent == GridExtent::object_scale) {
        // Half a pixel keeps the grid defined when every anchor sits on the centroid.
        d.r_max = cfg.radius_margin * std::max(max_r, 0.5);
    } else {
        d.r_max = cfg.radius_margin * 0.5 * std::hypot(static_cast<double>(mask.width()), static_cast<double>(mask.height()));
    }

    const double d_theta = kTwoPi / static_cast<double>(cfg.u);
    const double d_r = d.r_max / static_cast<double>(cfg.v);
    const double unit = 1.0 / std::sqrt(static_cast<double>(cfg.d_model));

    std::vector<std::size_t> counts(cfg.u * cfg.v, 0);
    for (const auto& pr : polar) {
        if (pr.y >= d.r_max) {
            continue;
        }
        const auto i = std::min(static_cast<std::size_t>(std::floor(pr.x / d_theta)), cfg.u - 1);
        const auto j = std::min(static_cast<std::size_t>(std::floor(pr.y / d_r)), cfg.v - 1);
        ++counts[i * cfg.v + j];
    }

    d.hist.resize(counts.size());
    for (std::size_t i = 0; i < cfg.u; ++i) {
        const double theta_c = (static_cast<double>(i) + 0.5) * d_theta;
        const double cos_t = std::cos(theta_c);
        const double sin_t = std::sin(theta_c);
        for (std::size_t j = 0; j < cfg.v; ++j) {
            const double r_c = (static_cast<double>(j) + 0.5) * d_r;
            const double bx = d.center.x + r_c * cos_t;
            const double by = d.center.y + r_c * sin_t;
            bool inside = false;
            switch (cfg.negative_mode) {
            case NegativeMode::image_bounds:
                inside = inside_image(mask, bx, by);
                break;
            case NegativeMode::target_mask:
                inside = pixel_set(mask, bx, by);
                break;
            case NegativeMode::mask_union:
                inside = pixel_set(mask, bx, by) ||
                         std::any_of(context_masks.begin(), context_masks.end(),
                                     [&](const Mask& m) { return pixel_set(m, bx, by); });
                break;
            }
            const std::size_t k = i * cfg.v + j;
            d.hist[k] = inside ? static_cast<double>(counts[k]) * unit : -unit;
        }
    }

    d.embedded = resample_linear(d.hist, cfg.d_model);
    return d;
}

ShapePositionDescriptor describe_mask(const Mask& mask, const DescriptorConfig& cfg, std::size_t anchor_count,
                                      std::span<const Mask> context_masks) {
    return build_descriptor(anchors_from_mask(mask, anchor_count), mask, context_masks, cfg);
}

double delta_h(const ShapePositionDescriptor& reference, const ShapePositionDescriptor& other) {
    if (reference.u != other.u || reference.v != other.v || reference.d_model != other.d_model ||
        reference.hist.size() != other.hist.size()) {
        throw Error(Errc::config_mismatch, "descriptors were built with different configurations");
    }
    double diff = 0.0;
    double ref = 0.0;
    for (std::size_t k = 0; k < reference.hist.size(); ++k) {
        const double e = other.hist[k] - reference.hist[k];
        diff += e * e;
        ref += reference.hist[k] * reference.hist[k];
    }
    if (ref == 0.0) {
        throw Error(Errc::zero_reference, "reference descriptor has a zero histogram");
    }
    return std::sqrt(diff) / std::sqrt(ref);
}

bool is_positive_pair(const ShapePositionDescriptor& reference, const ShapePositionDescriptor& other, double tau) {
    return delta_h(reference, other) < tau;
}

} // namespace vassoc
