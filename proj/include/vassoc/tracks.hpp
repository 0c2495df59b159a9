// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vassoc/descriptor.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vassoc {

enum class Kind { thing, stuff };

enum class TrackMode { instance, semantic, panoptic };

std::string_view to_string(Kind kind) noexcept;
std::string_view to_string(TrackMode mode) noexcept;
Kind parse_kind(std::string_view text);
TrackMode parse_track_mode(std::string_view text);

/// One object in one frame: the unit matched across frames.
struct QueryRecord {
    Vec embedding;
    std::optional<ShapePositionDescriptor> descriptor;
    std::optional<int> class_id;
    Kind kind = Kind::thing;
    std::string mask_ref;
    int frame = 0;
    /// Position in the embeddings file this record was read from, if any.
    std::optional<std::size_t> source_index;

    /// Throws unless the embedding is finite, the descriptor (if any) matches
    /// its length, and stuff records carry a class id.
    void validate() const;
};

/// Thing and stuff tracks live in separate id spaces; stuff tracks are keyed
/// by class id.
struct TrackKey {
    Kind kind = Kind::thing;
    int id = 0;

    auto operator<=>(const TrackKey&) const = default;
};

struct Track {
    TrackKey key;
    std::optional<int> class_id;
    std::vector<QueryRecord> records; ///< strictly increasing frames

    const QueryRecord& latest() const { return records.back(); }
    int last_frame() const { return records.back().frame; }
    const QueryRecord* at_frame(int frame) const;
};

/// Per-video mapping from persistent track ids to per-frame records.
class TrackSet {
public:
    explicit TrackSet(TrackMode mode = TrackMode::instance) : mode_(mode) {}

    TrackMode mode() const noexcept { return mode_; }
    const std::map<TrackKey, Track>& tracks() const noexcept { return tracks_; }
    int next_id() const noexcept { return next_id_; }
    std::optional<int> last_frame() const noexcept { return last_frame_; }

    const Track* find(TrackKey key) const;
    std::size_t record_count() const;

    /// New thing track with the next free id.
    TrackKey spawn(QueryRecord record);
    /// Appends to an existing track or creates it under `key`.
    void append(TrackKey key, QueryRecord record);
    /// Marks `frame` as processed; frames must strictly advance.
    void advance_to(int frame);

    /// Throws unless frames increase within each track and no (frame,
    /// mask_ref) pair belongs to two tracks; semantic mode additionally
    /// requires stuff track ids to equal their class ids.
    void validate() const;

private:
    TrackMode mode_;
    std::map<TrackKey, Track> tracks_;
    int next_id_ = 0;
    std::optional<int> last_frame_;
};

} // namespace vassoc
