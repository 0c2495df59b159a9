// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vassoc/class_bank.hpp"
#include "vassoc/tracks.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace vassoc {

struct SampleBatch {
    QueryRecord anchor;
    std::vector<QueryRecord> positives;
    std::vector<QueryRecord> negatives;

    std::size_t candidate_count() const noexcept { return positives.size() + negatives.size(); }
};

/// K x N bipartite assignment of ground-truth objects to queries.
struct GroundTruthMatch {
    std::size_t k = 0;
    std::size_t n = 0;
    std::vector<std::uint8_t> indicator; ///< row-major, k * n entries

    void validate() const;
};

/// Row k of the result is the query selected by indicator row k.
std::vector<QueryRecord> gather_matched_queries(std::span<const QueryRecord> queries, const GroundTruthMatch& match);

/// Identifies one record of a ground-truth video.
struct AnchorRef {
    TrackKey track;
    int frame = 0;
};

/// Video-wide thing sampling. Every other record in the video is visited:
/// same-identity records become positives iff delta_h(anchor, record) < tau,
/// everything else is negative. Output is ordered by (frame, track).
SampleBatch sample_thing_batch(const TrackSet& video, const AnchorRef& anchor, double tau);

/// Dataset-wide stuff sampling from the class queues. The one queue entry
/// that is the anchor itself (same source index, else first equal
/// embedding) is left out of the positives.
SampleBatch sample_stuff_batch(const ClassQueryBank& bank, const QueryRecord& anchor);

/// Nearby-frame baseline: only records within +-window frames of the anchor
/// are considered; same identity is positive, other identities negative.
SampleBatch sample_baseline_batch(const TrackSet& video, const AnchorRef& anchor, int window);

} // namespace vassoc
