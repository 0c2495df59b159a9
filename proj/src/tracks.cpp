// SPDX-License-Identifier: Apache-2.0
#include "vassoc/tracks.hpp"

#include "vassoc/error.hpp"

#include <cmath>
#include <set>
#include <utility>

namespace vassoc {

std::string_view to_string(Kind kind) noexcept {
    return kind == Kind::thing ? "thing" : "stuff";
}

std::string_view to_string(TrackMode mode) noexcept {
    switch (mode) {
    case TrackMode::instance: return "instance";
    case TrackMode::semantic: return "semantic";
    case TrackMode::panoptic: return "panoptic";
    }
    return "instance";
}

Kind parse_kind(std::string_view text) {
    if (text == "thing") {
        return Kind::thing;
    }
    if (text == "stuff") {
        return Kind::stuff;
    }
    throw Error(Errc::parse_error, "unknown kind '" + std::string(text) + "'");
}

TrackMode parse_track_mode(std::string_view text) {
    if (text == "instance") {
        return TrackMode::instance;
    }
    if (text == "semantic") {
        return TrackMode::semantic;
    }
    if (text == "panoptic") {
        return TrackMode::panoptic;
    }
    throw Error(Errc::parse_error, "unknown track mode '" + std::string(text) + "'");
}

void QueryRecord::validate() const {
    for (double x : embedding) {
        if (!std::isfinite(x)) {
            throw Error(Errc::invalid_argument, "record '" + mask_ref + "' has a non-finite embedding");
        }
    }
    if (descriptor && descriptor->embedded.size() != embedding.size()) {
        throw Error(Errc::dimension_mismatch,
                    "record '" + mask_ref + "' descriptor length differs from its embedding length");
    }
    if (kind == Kind::stuff && !class_id) {
        throw Error(Errc::invalid_argument, "stuff record '" + mask_ref + "' has no class id");
    }
}

const QueryRecord* Track::at_frame(int frame) const {
    for (const auto& r : records) {
        if (r.frame == frame) {
            return &r;
        }
    }
    return nullptr;
}

const Track* TrackSet::find(TrackKey key) const {
    const auto it = tracks_.find(key);
    return it == tracks_.end() ? nullptr : &it->second;
}

std::size_t TrackSet::record_count() const {
    std::size_t n = 0;
    for (const auto& [key, track] : tracks_) {
        n += track.records.size();
    }
    return n;
}

TrackKey TrackSet::spawn(QueryRecord record) {
    TrackKey key{Kind::thing, next_id_};
    append(key, std::move(record));
    return key;
}

void TrackSet::append(TrackKey key, QueryRecord record) {
    auto it = tracks_.find(key);
    if (it == tracks_.end()) {
        Track t;
        t.key = key;
        t.class_id = record.class_id;
        it = tracks_.emplace(key, std::move(t)).first;
        if (key.kind == Kind::thing && key.id >= next_id_) {
            next_id_ = key.id + 1;
        }
    } else if (record.frame <= it->second.last_frame()) {
        throw Error(Errc::frame_order, "track " + std::to_string(key.id) + " already has frame " +
                                           std::to_string(it->second.last_frame()));
    }
    it->second.records.push_back(std::move(record));
}

void TrackSet::advance_to(int frame) {
    if (last_frame_ && frame <= *last_frame_) {
        throw Error(Errc::frame_order, "frame " + std::to_string(frame) + " does not advance past " +
                                           std::to_string(*last_frame_));
    }
    last_frame_ = frame;
}

void TrackSet::validate() const {
    std::set<std::pair<int, std::string>> seen;
    for (const auto& [key, track] : tracks_) {
        for (std::size_t k = 0; k < track.records.size(); ++k) {
            const auto& r = track.records[k];
            if (k > 0 && r.frame <= track.records[k - 1].frame) {
                throw Error(Errc::frame_order, "frames within a track must strictly increase");
            }
            if (!r.mask_ref.empty() && !seen.emplace(r.frame, r.mask_ref).second) {
                throw Error(Errc::invalid_argument, "record '" + r.mask_ref + "' belongs to two tracks");
            }
        }
        if (mode_ == TrackMode::semantic && key.kind == Kind::stuff && track.class_id != key.id) {
            throw Error(Errc::invalid_argument, "semantic track id must equal its class id");
        }
    }
}

} // namespace vassoc
