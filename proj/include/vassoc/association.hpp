// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vassoc/assignment.hpp"
#include "vassoc/class_bank.hpp"
#include "vassoc/feature_map.hpp"
#include "vassoc/tracks.hpp"

#include <span>
#include <variant>
#include <vector>

namespace vassoc {

enum class NewTrackPolicy { spawn, drop };

struct MatchConfig {
    bool use_spa = true;
    double affinity_floor = 0.0;
    NewTrackPolicy new_track_policy = NewTrackPolicy::spawn;
};

/// S_ij = cosine(a_i + H_i, b_j + H_j) with H the descriptor's resampled
/// vector when `use_spa`, otherwise the cosine of the bare embeddings.
AffinityMatrix spa_affinity(std::span<const QueryRecord> a, std::span<const QueryRecord> b, bool use_spa);

/// What one instance step did, for debugging dumps.
struct StepReport {
    int frame = 0;
    std::vector<TrackKey> row_tracks;
    AffinityMatrix affinity;
    std::vector<MatchPair> accepted;
    std::vector<TrackKey> spawned;
};

/// Matches the newest record of every thing track against `frame_records`
/// and extends, spawns or drops accordingly. Unmatched tracks stay active.
StepReport step_instance(TrackSet& tracks, std::span<const QueryRecord> frame_records, const MatchConfig& cfg);

/// Appends each stuff record to the track keyed by its class id; records
/// without a class id take the bank class with the closest prototype.
void step_semantic(TrackSet& tracks, std::span<const QueryRecord> frame_records, const ClassQueryBank& bank);

/// Things follow step_instance, stuff follows step_semantic.
StepReport step_panoptic(TrackSet& tracks, std::span<const QueryRecord> frame_records, const MatchConfig& cfg,
                         const ClassQueryBank& bank);

/// y = W x + b; an empty map is the identity.
struct AffineMap {
    std::size_t in_dim = 0;
    std::size_t out_dim = 0;
    std::vector<double> weight; ///< out_dim x in_dim, row-major
    Vec bias;

    static AffineMap identity() { return {}; }
    bool is_identity() const noexcept { return weight.empty() && bias.empty(); }
    Vec operator()(std::span<const double> x) const;
};

struct PointHint {
    Point2d point;
};

/// Inclusive corners in feature-map cells.
struct BoxHint {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;
};

struct MaskHint {
    Mask mask;
};

using Hint = std::variant<PointHint, BoxHint, MaskHint>;

/// One seed thing record per hint: points are sampled bilinearly, boxes and
/// masks are averaged over their region, then `projector` is applied.
std::vector<QueryRecord> init_exemplar_tracks(std::span<const Hint> hints, const FeatureMap& fmap,
                                              const AffineMap& projector = AffineMap::identity(), int frame = 0);

} // namespace vassoc
