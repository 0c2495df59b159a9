// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vassoc/mask.hpp"
#include "vassoc/tracks.hpp"

#include <cstddef>
#include <map>
#include <vector>

namespace vassoc {

/// Per-frame masks of one object; frames absent from the map are empty.
using Tube = std::map<int, Mask>;

struct TubePair {
    TrackKey pred;
    TrackKey gt;
    double tube_iou = 0.0;
};

struct TrackScore {
    double association_accuracy = 0.0;
    std::size_t id_switches = 0;
    std::size_t matched_detections = 0;
    std::vector<TubePair> matched_pairs;
};

inline constexpr double kDefaultIouFloor = 0.5;
inline constexpr int kDefaultPqWindow = 4;

/// Resolves every record of `track` through `masks`.
Tube tube_of(const Track& track, const MaskStore& masks);

/// Sum of per-frame intersections over sum of per-frame unions. Two empty
/// tubes score 0. Throws FrameMismatch when a shared frame differs in size.
double tube_iou(const Tube& pred, const Tube& gt);

/// Hungarian assignment maximising total tube IoU; pairs at or below
/// `iou_floor` are discarded. Ordered by gt track.
std::vector<TubePair> match_tubes(const TrackSet& preds, const MaskStore& pred_masks, const TrackSet& gts,
                                  const MaskStore& gt_masks, double iou_floor = kDefaultIouFloor);

/// Mean over every length-`window` span of
/// PQ = sum_TP IoU / (|TP| + |FP|/2 + |FN|/2), TP meaning span IoU > 0.5.
/// Spans with no tube on either side are skipped; 1.0 if every span is.
double windowed_tube_pq(const TrackSet& preds, const MaskStore& pred_masks, const TrackSet& gts,
                        const MaskStore& gt_masks, int window = kDefaultPqWindow);

/// Per-frame detections are matched to the gt object of maximal IoU (> 0.5).
/// An ID switch is a change of predicted track between consecutive matched
/// detections of one gt identity; accuracy is the share of matched
/// detections lying in their identity's majority track (0 if none match).
TrackScore score_association(const TrackSet& preds, const MaskStore& pred_masks, const TrackSet& gts,
                             const MaskStore& gt_masks);

/// Frames spanned by either set: max frame index + 1 (0 when both are empty).
int video_length(const TrackSet& a, const TrackSet& b);

} // namespace vassoc
