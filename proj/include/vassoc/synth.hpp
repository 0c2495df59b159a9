// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "vassoc/feature_map.hpp"
#include "vassoc/mask.hpp"
#include "vassoc/tracks.hpp"

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace vassoc {

struct EllipseShape {
    double rx = 1.0;
    double ry = 1.0;
};

struct RectangleShape {
    double width = 1.0;
    double height = 1.0;
};

/// Vertices relative to the object center.
struct PolygonShape {
    std::vector<Point2d> points;
};

using Shape = std::variant<EllipseShape, RectangleShape, PolygonShape>;

/// Pose at one frame relative to the object's base center.
struct Pose {
    double dx = 0.0;
    double dy = 0.0;
    double rotation = 0.0; ///< radians, +x toward +y
    double scale = 1.0;
};

struct SceneObject {
    Shape shape;
    Kind kind = Kind::thing;
    std::optional<int> class_id;
    Point2d center;
    std::vector<Pose> trajectory; ///< one pose per frame; empty means static
    Vec embedding_prototype;
    double embedding_noise_sigma = 0.0;
    bool border_test = false;
};

struct SceneSpec {
    int width = 64;
    int height = 64;
    int frames = 1;
    std::vector<SceneObject> objects; ///< z-order: later objects occlude earlier ones
    std::uint64_t seed = 0;
    /// Randomly permute the record order within each frame.
    bool shuffle_records = false;
};

struct SceneTruth {
    SceneSpec spec;
    MaskStore masks;
    /// Frame-major; records[k].source_index == k.
    std::vector<QueryRecord> records;
    /// Object index of each record.
    std::vector<int> object_of;

    /// Things keyed by object index, stuff keyed by class id.
    TrackSet ground_truth() const;
    std::vector<QueryRecord> frame_records(int frame) const;
    /// Ground-truth track key of object `object`.
    TrackKey key_of(int object) const;
};

std::string mask_ref_for(int frame, int object);

/// Mask of `shape` at `pose`; pixels whose center lies inside or on the
/// transformed outline are set.
Mask rasterize(const Shape& shape, Point2d center, const Pose& pose, int width, int height);

/// Rasterises every object per frame, resolves occlusion by z-order, and
/// draws embeddings as prototype + N(0, sigma^2) noise. Deterministic in
/// (spec, seed).
SceneTruth generate(const SceneSpec& spec);

/// Swaps the embedding streams of thing tracks `a` and `b` from `frame` on.
SceneTruth inject_identity_swap(const SceneTruth& truth, int frame, int a, int b);

/// `count` orthonormal vectors of length `dim` (Gram-Schmidt on Gaussian draws).
std::vector<Vec> orthonormal_prototypes(std::size_t count, std::size_t dim, std::uint64_t seed);

/// Objects in horizontal lanes drifting right with varied shapes, small
/// rotation and growth; orthonormal prototypes.
SceneSpec preset_lanes(int objects, int frames, std::size_t dim, double sigma, std::uint64_t seed);

/// Two differently shaped things with one shared prototype and no noise,
/// far apart; record order shuffled each frame.
SceneSpec preset_twins(int frames, std::size_t dim, std::uint64_t seed);

/// Three moving things over two static stuff bands (classes 100, 101).
SceneSpec preset_panoptic(int frames, std::size_t dim, double sigma, std::uint64_t seed);

} // namespace vassoc
