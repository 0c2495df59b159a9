// SPDX-License-Identifier: Apache-2.0
#include "vassoc/sampling.hpp"

#include "vassoc/descriptor.hpp"
#include "vassoc/error.hpp"

#include <algorithm>
#include <string>
#include <tuple>

namespace vassoc {

void GroundTruthMatch::validate() const {
    if (indicator.size() != k * n) {
        throw Error(Errc::shape_mismatch, "indicator has " + std::to_string(indicator.size()) + " entries, expected " +
                                              std::to_string(k * n));
    }
    std::vector<std::size_t> col_sum(n, 0);
    for (std::size_t r = 0; r < k; ++r) {
        std::size_t ones = 0;
        for (std::size_t c = 0; c < n; ++c) {
            const auto e = indicator[r * n + c];
            if (e > 1) {
                throw Error(Errc::malformed_indicator, "indicator entries must be 0 or 1");
            }
            ones += e;
            col_sum[c] += e;
        }
        if (ones != 1) {
            throw Error(Errc::malformed_indicator, "indicator row " + std::to_string(r) + " has " +
                                                       std::to_string(ones) + " ones");
        }
    }
    for (std::size_t c = 0; c < n; ++c) {
        if (col_sum[c] > 1) {
            throw Error(Errc::malformed_indicator, "query " + std::to_string(c) + " is matched to several objects");
        }
    }
}

std::vector<QueryRecord> gather_matched_queries(std::span<const QueryRecord> queries, const GroundTruthMatch& match) {
    if (match.n != queries.size()) {
        throw Error(Errc::shape_mismatch, "indicator expects " + std::to_string(match.n) + " queries, got " +
                                              std::to_string(queries.size()));
    }
    match.validate();
    std::vector<QueryRecord> out;
    out.reserve(match.k);
    for (std::size_t r = 0; r < match.k; ++r) {
        for (std::size_t c = 0; c < match.n; ++c) {
            if (match.indicator[r * match.n + c] != 0) {
                out.push_back(queries[c]);
                break;
            }
        }
    }
    return out;
}

namespace {

struct VideoEntry {
    int frame;
    TrackKey key;
    const QueryRecord* record;
};

// All records ordered by (frame, track).
std::vector<VideoEntry> flatten(const TrackSet& video) {
    std::vector<VideoEntry> out;
    for (const auto& [key, track] : video.tracks()) {
        for (const auto& r : track.records) {
            out.push_back({r.frame, key, &r});
        }
    }
    std::sort(out.begin(), out.end(), [](const VideoEntry& a, const VideoEntry& b) {
        return std::tie(a.frame, a.key) < std::tie(b.frame, b.key);
    });
    return out;
}

const QueryRecord& find_anchor(const TrackSet& video, const AnchorRef& anchor) {
    const Track* track = video.find(anchor.track);
    const QueryRecord* rec = track != nullptr ? track->at_frame(anchor.frame) : nullptr;
    if (rec == nullptr) {
        throw Error(Errc::unknown_anchor, "no record for track " + std::to_string(anchor.track.id) + " at frame " +
                                              std::to_string(anchor.frame));
    }
    return *rec;
}

bool is_anchor(const VideoEntry& e, const AnchorRef& anchor) {
    return e.key == anchor.track && e.frame == anchor.frame;
}

} // namespace

SampleBatch sample_thing_batch(const TrackSet& video, const AnchorRef& anchor, double tau) {
    const QueryRecord& anchor_rec = find_anchor(video, anchor);
    const auto entries = flatten(video);
    for (const auto& e : entries) {
        if (!e.record->descriptor) {
            throw Error(Errc::missing_descriptor, "record '" + e.record->mask_ref + "' has no descriptor");
        }
    }

    SampleBatch batch;
    batch.anchor = anchor_rec;
    for (const auto& e : entries) {
        if (is_anchor(e, anchor)) {
            continue;
        }
        if (e.key == anchor.track && delta_h(*anchor_rec.descriptor, *e.record->descriptor) < tau) {
            batch.positives.push_back(*e.record);
        } else {
            batch.negatives.push_back(*e.record);
        }
    }
    return batch;
}

SampleBatch sample_stuff_batch(const ClassQueryBank& bank, const QueryRecord& anchor) {
    if (!anchor.class_id) {
        throw Error(Errc::missing_class, "stuff anchor '" + anchor.mask_ref + "' has no class id");
    }
    const int cls = *anchor.class_id;
    const auto& queues = bank.queues();
    const auto own = queues.find(cls);
    const bool own_empty = own == queues.end() || own->second.empty();
    const bool others = std::any_of(queues.begin(), queues.end(),
                                    [cls](const auto& kv) { return kv.first != cls && !kv.second.empty(); });
    if (own_empty && !others) {
        throw Error(Errc::missing_class, "class bank holds nothing to sample for class " + std::to_string(cls));
    }

    auto wrap = [](int class_id, const ClassQueryBank::Entry& e) {
        QueryRecord r;
        r.embedding = e.embedding;
        r.class_id = class_id;
        r.kind = Kind::stuff;
        r.source_index = e.source_index;
        return r;
    };

    SampleBatch batch;
    batch.anchor = anchor;
    if (!own_empty) {
        const auto& queue = own->second;
        std::size_t skip = queue.size();
        if (anchor.source_index) {
            for (std::size_t k = 0; k < queue.size(); ++k) {
                if (queue[k].source_index == anchor.source_index && queue[k].embedding == anchor.embedding) {
                    skip = k;
                    break;
                }
            }
        }
        if (skip == queue.size()) {
            for (std::size_t k = 0; k < queue.size(); ++k) {
                if (queue[k].embedding == anchor.embedding) {
                    skip = k;
                    break;
                }
            }
        }
        for (std::size_t k = 0; k < queue.size(); ++k) {
            if (k != skip) {
                batch.positives.push_back(wrap(cls, queue[k]));
            }
        }
    }
    for (const auto& [other, queue] : queues) {
        if (other == cls) {
            continue;
        }
        for (const auto& e : queue) {
            batch.negatives.push_back(wrap(other, e));
        }
    }
    return batch;
}

SampleBatch sample_baseline_batch(const TrackSet& video, const AnchorRef& anchor, int window) {
    if (window < 0) {
        throw Error(Errc::invalid_count, "window must be non-negative");
    }
    SampleBatch batch;
    batch.anchor = find_anchor(video, anchor);
    for (const auto& e : flatten(video)) {
        if (is_anchor(e, anchor) || std::abs(e.frame - anchor.frame) > window) {
            continue;
        }
        (e.key == anchor.track ? batch.positives : batch.negatives).push_back(*e.record);
    }
    return batch;
}

} // namespace vassoc
