// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vassoc/class_bank.hpp"
#include "vassoc/descriptor.hpp"
#include "vassoc/feature_map.hpp"
#include "vassoc/mask.hpp"
#include "vassoc/metrics.hpp"
#include "vassoc/sampling.hpp"
#include "vassoc/synth.hpp"
#include "vassoc/tracks.hpp"

#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vassoc {

using Json = nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);
/// Parses JSON text; syntax errors become ParseError naming `origin`.
Json parse_json(std::string_view text, const std::string& origin);
/// Compact dump plus a trailing newline.
std::string dump_json(const Json& j);

// Masks. RLE counts alternate background/foreground runs in row-major order,
// starting with background.
Json mask_to_rle(const Mask& mask);
Mask mask_from_rle(const Json& j);
/// 8-bit grayscale; value > 0 is foreground.
Mask read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const Mask& mask);
/// PNG (by signature) or RLE JSON.
Mask read_mask(const std::filesystem::path& path);

// "GVFM" feature maps: 16-byte header (magic, u32 width, u32 height,
// u32 channels, little-endian) then f32 values, channel-last.
std::string encode_gvfm(const FeatureMap& fmap);
FeatureMap decode_gvfm(std::string_view bytes);

/// Query embeddings as stored on disk.
struct EmbeddingSet {
    std::size_t d_model = 0;
    std::vector<QueryRecord> records;
};

// "GVQE" embeddings: magic, u32 count, u32 d_model, then f32 values. The
// per-record metadata goes to a sidecar JSON.
std::string encode_gvqe(const EmbeddingSet& set);
Json embedding_sidecar(const EmbeddingSet& set);
/// Records get source_index = position in the file.
EmbeddingSet decode_gvqe(std::string_view bytes, const Json& sidecar);

Json descriptor_to_json(const ShapePositionDescriptor& d);
ShapePositionDescriptor descriptor_from_json(const Json& j);

Json tracks_to_json(const TrackSet& tracks);
/// Records carry frame, mask_ref, kind and class id only.
TrackSet tracks_from_json(const Json& j);

Json bank_to_json(const ClassQueryBank& bank);
ClassQueryBank bank_from_json(const Json& j);

/// One JSONL line: record indices (source_index) of anchor, positives and
/// negatives.
Json batch_to_json(const SampleBatch& batch, const TrackKey& track);

Json metrics_to_json(double tube_pq, const TrackScore& score);

Json scene_spec_to_json(const SceneSpec& spec);
SceneSpec scene_spec_from_json(const Json& j);

/// Scene directory contents.
///
///   spec.json          generator input
///   masks/<ref>.json   one RLE mask per record
///   embeddings.gvqe    query embeddings
///   embeddings.json    sidecar for embeddings.gvqe
///   gt_tracks.json     ground-truth tracks
///   descriptors/       optional, <ref>.json per mask
struct SceneData {
    MaskStore masks;
    EmbeddingSet embeddings;
    std::optional<TrackSet> ground_truth;
    std::map<std::string, ShapePositionDescriptor> descriptors;
};

void write_scene(const std::filesystem::path& dir, const SceneTruth& truth);

/// Loads masks, descriptors and (if present) ground truth. With
/// `need_embeddings`, a missing embeddings file or a record/mask count
/// disagreement throws CountMismatch.
SceneData read_scene(const std::filesystem::path& dir, bool need_embeddings);

/// Ground-truth tracks with the scene's embeddings (and descriptors, if
/// loaded) attached to each record by mask_ref.
TrackSet attach_records(const TrackSet& gt, const SceneData& scene);

} // namespace vassoc
