// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vassoc/association.hpp"
#include "vassoc/descriptor.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace vassoc {

enum class PipelineMode { automatic, instance, semantic, panoptic, exemplar };

std::string_view to_string(PipelineMode mode) noexcept;

/// Every tunable of the command-line pipeline. Read from a `key = value`
/// text file; `#` starts a comment, blank lines are ignored.
///
///   anchors          contour anchor count (200)
///   u, v, d_model    descriptor bins and length (36, 12, 256)
///   grid_extent      object_scale | image_scale
///   radius_margin    outer radius factor (1.25)
///   negative_mode    image_bounds | target_mask | mask_union
///   use_spa          true | false
///   affinity_floor   minimum accepted affinity (0)
///   new_track_policy spawn | drop
///   tau              positive-pair threshold (0.2)
///   n_q, momentum    class bank queue length and prototype momentum (100, 0.99)
///   mode             auto | instance | semantic | panoptic | exemplar
///   window           tube PQ span / baseline sampling window (4)
///   iou_floor        tube matching floor (0.5)
///   seed, threads
struct PipelineConfig {
    DescriptorConfig descriptor;
    std::size_t anchors = kDefaultAnchorCount;
    MatchConfig match;
    double tau = kDefaultTau;
    std::size_t n_q = kDefaultQueueLength;
    double momentum = kDefaultMomentum;
    PipelineMode mode = PipelineMode::automatic;
    int window = 4;
    double iou_floor = 0.5;
    std::uint64_t seed = 0;
    unsigned threads = 1;

    void validate() const;
};

/// Throws ParseError on unknown keys, malformed values or duplicate keys.
PipelineConfig parse_config(std::string_view text, const std::string& origin = "config");

/// Canonical text form; parse_config(format_config(c)) == c.
std::string format_config(const PipelineConfig& cfg);

} // namespace vassoc
