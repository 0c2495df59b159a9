// SPDX-License-Identifier: Apache-2.0
#include "vassoc/synth.hpp"

#include "vassoc/error.hpp"
#include "vassoc/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <string>

namespace vassoc {

namespace {

struct Box {
    double x0, y0, x1, y1;
};

Box local_bounds(const Shape& shape) {
    if (const auto* e = std::get_if<EllipseShape>(&shape)) {
        return {-e->rx, -e->ry, e->rx, e->ry};
    }
    if (const auto* r = std::get_if<RectangleShape>(&shape)) {
        return {-r->width / 2, -r->height / 2, r->width / 2, r->height / 2};
    }
    const auto& pts = std::get<PolygonShape>(shape).points;
    Box b{pts[0].x, pts[0].y, pts[0].x, pts[0].y};
    for (const auto& p : pts) {
        b = {std::min(b.x0, p.x), std::min(b.y0, p.y), std::max(b.x1, p.x), std::max(b.y1, p.y)};
    }
    return b;
}

// Bounding box of the transformed local bounds (conservative under rotation).
Box world_bounds(const Shape& shape, Point2d center, const Pose& pose) {
    const Box lb = local_bounds(shape);
    const double c = std::cos(pose.rotation);
    const double s = std::sin(pose.rotation);
    const std::array<Point2d, 4> corners = {{{lb.x0, lb.y0}, {lb.x1, lb.y0}, {lb.x1, lb.y1}, {lb.x0, lb.y1}}};
    Box out{1e300, 1e300, -1e300, -1e300};
    for (const auto& p : corners) {
        const double x = center.x + pose.dx + pose.scale * (c * p.x - s * p.y);
        const double y = center.y + pose.dy + pose.scale * (s * p.x + c * p.y);
        out = {std::min(out.x0, x), std::min(out.y0, y), std::max(out.x1, x), std::max(out.y1, y)};
    }
    return out;
}

bool polygon_contains(const std::vector<Point2d>& poly, Point2d p) {
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Point2d a = poly[i];
        const Point2d b = poly[j];
        const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        if (std::abs(cross) <= 1e-9 && p.x >= std::min(a.x, b.x) - 1e-9 && p.x <= std::max(a.x, b.x) + 1e-9 &&
            p.y >= std::min(a.y, b.y) - 1e-9 && p.y <= std::max(a.y, b.y) + 1e-9) {
            return true;
        }
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xi = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < xi) {
                inside = !inside;
            }
        }
    }
    return inside;
}

// Absorbs rounding from the inverse pose so points on an edge stay inside.
constexpr double kEdgeSlack = 1e-9;

bool shape_contains(const Shape& shape, Point2d local) {
    if (const auto* e = std::get_if<EllipseShape>(&shape)) {
        const double nx = local.x / e->rx;
        const double ny = local.y / e->ry;
        return nx * nx + ny * ny <= 1.0 + kEdgeSlack;
    }
    if (const auto* r = std::get_if<RectangleShape>(&shape)) {
        return std::abs(local.x) <= r->width / 2 + kEdgeSlack && std::abs(local.y) <= r->height / 2 + kEdgeSlack;
    }
    return polygon_contains(std::get<PolygonShape>(shape).points, local);
}

void validate_shape(const Shape& shape, std::size_t index) {
    bool ok = true;
    if (const auto* e = std::get_if<EllipseShape>(&shape)) {
        ok = e->rx > 0 && e->ry > 0;
    } else if (const auto* r = std::get_if<RectangleShape>(&shape)) {
        ok = r->width > 0 && r->height > 0;
    } else {
        ok = std::get<PolygonShape>(shape).points.size() >= 3;
    }
    if (!ok) {
        throw Error(Errc::degenerate_shape, "object " + std::to_string(index) + " has a degenerate shape");
    }
}

const Pose& pose_at(const SceneObject& obj, int frame) {
    static const Pose kStatic{};
    return obj.trajectory.empty() ? kStatic : obj.trajectory[static_cast<std::size_t>(frame)];
}

void validate_spec(const SceneSpec& spec) {
    if (spec.width < 1 || spec.height < 1 || spec.frames < 1) {
        throw Error(Errc::invalid_argument, "scene needs positive width, height and frame count");
    }
    std::set<int> stuff_classes;
    std::size_t dim = 0;
    for (std::size_t k = 0; k < spec.objects.size(); ++k) {
        const auto& obj = spec.objects[k];
        validate_shape(obj.shape, k);
        if (!obj.trajectory.empty() && obj.trajectory.size() < static_cast<std::size_t>(spec.frames)) {
            throw Error(Errc::invalid_argument, "object " + std::to_string(k) + " trajectory is shorter than the scene");
        }
        if (obj.embedding_prototype.empty()) {
            throw Error(Errc::invalid_argument, "object " + std::to_string(k) + " has no embedding prototype");
        }
        if (dim == 0) {
            dim = obj.embedding_prototype.size();
        } else if (obj.embedding_prototype.size() != dim) {
            throw Error(Errc::dimension_mismatch, "embedding prototypes differ in length");
        }
        if (obj.embedding_noise_sigma < 0.0) {
            throw Error(Errc::invalid_argument, "noise sigma must be non-negative");
        }
        if (obj.kind == Kind::stuff) {
            if (!obj.class_id) {
                throw Error(Errc::invalid_argument, "stuff object " + std::to_string(k) + " needs a class id");
            }
            if (!stuff_classes.insert(*obj.class_id).second) {
                throw Error(Errc::invalid_argument, "stuff class " + std::to_string(*obj.class_id) + " used twice");
            }
        }
        if (!obj.border_test) {
            for (int f = 0; f < spec.frames; ++f) {
                const Box b = world_bounds(obj.shape, obj.center, pose_at(obj, f));
                if (b.x0 < 1.0 || b.y0 < 1.0 || b.x1 > spec.width - 2.0 || b.y1 > spec.height - 2.0) {
                    throw Error(Errc::invalid_argument, "object " + std::to_string(k) + " leaves the image interior at frame " +
                                                            std::to_string(f));
                }
            }
        }
    }
}

} // namespace

std::string mask_ref_for(int frame, int object) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "f%04d_o%02d", frame, object);
    return buf;
}

Mask rasterize(const Shape& shape, Point2d center, const Pose& pose, int width, int height) {
    Mask out(width, height);
    if (!(pose.scale > 0.0)) {
        return out;
    }
    const Box b = world_bounds(shape, center, pose);
    const int x_lo = std::max(0, static_cast<int>(std::floor(b.x0)));
    const int y_lo = std::max(0, static_cast<int>(std::floor(b.y0)));
    const int x_hi = std::min(width - 1, static_cast<int>(std::ceil(b.x1)));
    const int y_hi = std::min(height - 1, static_cast<int>(std::ceil(b.y1)));
    const double c = std::cos(pose.rotation);
    const double s = std::sin(pose.rotation);
    for (int y = y_lo; y <= y_hi; ++y) {
        for (int x = x_lo; x <= x_hi; ++x) {
            const double qx = x - center.x - pose.dx;
            const double qy = y - center.y - pose.dy;
            const Point2d local{(c * qx + s * qy) / pose.scale, (-s * qx + c * qy) / pose.scale};
            if (shape_contains(shape, local)) {
                out.set(x, y);
            }
        }
    }
    return out;
}

TrackKey SceneTruth::key_of(int object) const {
    const auto& obj = spec.objects.at(static_cast<std::size_t>(object));
    return obj.kind == Kind::stuff ? TrackKey{Kind::stuff, *obj.class_id} : TrackKey{Kind::thing, object};
}

TrackSet SceneTruth::ground_truth() const {
    bool things = false;
    bool stuff = false;
    for (const auto& obj : spec.objects) {
        (obj.kind == Kind::thing ? things : stuff) = true;
    }
    const TrackMode mode = things && stuff ? TrackMode::panoptic : (stuff ? TrackMode::semantic : TrackMode::instance);
    TrackSet gt(mode);
    for (std::size_t k = 0; k < records.size(); ++k) {
        gt.append(key_of(object_of[k]), records[k]);
    }
    return gt;
}

std::vector<QueryRecord> SceneTruth::frame_records(int frame) const {
    std::vector<QueryRecord> out;
    for (const auto& r : records) {
        if (r.frame == frame) {
            out.push_back(r);
        }
    }
    return out;
}

SceneTruth generate(const SceneSpec& spec) {
    validate_spec(spec);
    SceneTruth truth;
    truth.spec = spec;
    Rng noise(spec.seed);
    Rng order(spec.seed ^ 0x9E3779B97F4A7C15ULL);

    const std::size_t n_obj = spec.objects.size();
    for (int f = 0; f < spec.frames; ++f) {
        std::vector<int> owner(static_cast<std::size_t>(spec.width) * spec.height, -1);
        for (std::size_t o = 0; o < n_obj; ++o) {
            const auto& obj = spec.objects[o];
            const Mask m = rasterize(obj.shape, obj.center, pose_at(obj, f), spec.width, spec.height);
            if (m.empty()) {
                throw Error(Errc::degenerate_shape, "object " + std::to_string(o) + " covers no pixel at frame " +
                                                        std::to_string(f));
            }
            const auto bits = m.bits();
            for (std::size_t i = 0; i < bits.size(); ++i) {
                if (bits[i] != 0) {
                    owner[i] = static_cast<int>(o);
                }
            }
        }

        std::vector<std::size_t> frame_slots;
        for (std::size_t o = 0; o < n_obj; ++o) {
            const auto& obj = spec.objects[o];
            Vec emb = obj.embedding_prototype;
            for (double& x : emb) {
                x += noise.normal(0.0, obj.embedding_noise_sigma);
            }
            std::vector<std::uint8_t> bits(owner.size(), 0);
            bool visible = false;
            for (std::size_t i = 0; i < owner.size(); ++i) {
                if (owner[i] == static_cast<int>(o)) {
                    bits[i] = 1;
                    visible = true;
                }
            }
            if (!visible) {
                continue; // fully occluded this frame
            }
            const std::string ref = mask_ref_for(f, static_cast<int>(o));
            truth.masks.emplace(ref, Mask(spec.width, spec.height, std::move(bits)));
            QueryRecord r;
            r.embedding = std::move(emb);
            r.class_id = obj.class_id;
            r.kind = obj.kind;
            r.mask_ref = ref;
            r.frame = f;
            truth.records.push_back(std::move(r));
            truth.object_of.push_back(static_cast<int>(o));
            frame_slots.push_back(truth.records.size() - 1);
        }

        if (spec.shuffle_records && frame_slots.size() > 1) {
            const std::size_t first = frame_slots.front();
            for (std::size_t i = frame_slots.size() - 1; i > 0; --i) {
                const std::size_t j = order.index(i + 1);
                std::swap(truth.records[first + i], truth.records[first + j]);
                std::swap(truth.object_of[first + i], truth.object_of[first + j]);
            }
        }
    }
    for (std::size_t k = 0; k < truth.records.size(); ++k) {
        truth.records[k].source_index = k;
    }
    return truth;
}

SceneTruth inject_identity_swap(const SceneTruth& truth, int frame, int a, int b) {
    auto find = [&](int f, int obj) -> std::optional<std::size_t> {
        for (std::size_t k = 0; k < truth.records.size(); ++k) {
            if (truth.records[k].frame == f && truth.object_of[k] == obj && truth.records[k].kind == Kind::thing) {
                return k;
            }
        }
        return std::nullopt;
    };
    if (a == b) {
        throw Error(Errc::invalid_argument, "cannot swap track " + std::to_string(a) + " with itself");
    }
    if (!find(frame, a) || !find(frame, b)) {
        throw Error(Errc::unknown_track, "tracks " + std::to_string(a) + " and " + std::to_string(b) +
                                             " are not both present at frame " + std::to_string(frame));
    }
    SceneTruth out = truth;
    for (int f = frame; f < truth.spec.frames; ++f) {
        const auto ia = find(f, a);
        const auto ib = find(f, b);
        if (ia && ib) {
            std::swap(out.records[*ia].embedding, out.records[*ib].embedding);
        }
    }
    return out;
}

std::vector<Vec> orthonormal_prototypes(std::size_t count, std::size_t dim, std::uint64_t seed) {
    if (count > dim) {
        throw Error(Errc::invalid_count, "cannot build more orthonormal vectors than dimensions");
    }
    Rng rng(seed);
    std::vector<Vec> basis;
    while (basis.size() < count) {
        Vec v(dim);
        for (double& x : v) {
            x = rng.normal();
        }
        for (const auto& b : basis) {
            double dot = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                dot += v[k] * b[k];
            }
            for (std::size_t k = 0; k < dim; ++k) {
                v[k] -= dot * b[k];
            }
        }
        double norm = 0.0;
        for (double x : v) {
            norm += x * x;
        }
        norm = std::sqrt(norm);
        if (norm < 1e-6) {
            continue;
        }
        for (double& x : v) {
            x /= norm;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

SceneSpec preset_lanes(int objects, int frames, std::size_t dim, double sigma, std::uint64_t seed) {
    constexpr int kLane = 28;
    SceneSpec spec;
    spec.width = 96 + 2 * frames;
    spec.height = kLane * objects + 8;
    spec.frames = frames;
    spec.seed = seed;
    const auto protos = orthonormal_prototypes(static_cast<std::size_t>(objects), dim, seed + 1);
    const std::array<Shape, 5> shapes = {
        Shape{EllipseShape{9.0, 6.0}},
        Shape{RectangleShape{14.0, 9.0}},
        Shape{PolygonShape{{{-8.0, 7.0}, {8.0, 7.0}, {0.0, -8.0}}}},
        Shape{EllipseShape{7.0, 7.0}},
        Shape{PolygonShape{{{-9.0, -3.0}, {-3.0, -9.0}, {9.0, -2.0}, {4.0, 8.0}, {-6.0, 6.0}}}},
    };
    for (int o = 0; o < objects; ++o) {
        SceneObject obj;
        obj.shape = shapes[static_cast<std::size_t>(o) % shapes.size()];
        obj.kind = Kind::thing;
        obj.class_id = o % 3;
        obj.center = {20.0 + 6.0 * (o % 4), kLane * o + 4.0 + kLane / 2.0};
        const double spin = (o % 2 == 0 ? 1.0 : -1.0) * 0.02 * (1 + o % 3);
        for (int f = 0; f < frames; ++f) {
            const double t = f;
            obj.trajectory.push_back({1.5 * t, 2.0 * std::sin(0.2 * t + o), spin * t, 1.0 + 0.004 * t});
        }
        obj.embedding_prototype = protos[static_cast<std::size_t>(o)];
        obj.embedding_noise_sigma = sigma;
        spec.objects.push_back(std::move(obj));
    }
    return spec;
}

SceneSpec preset_twins(int frames, std::size_t dim, std::uint64_t seed) {
    SceneSpec spec;
    spec.width = 120;
    spec.height = 40 + 2 * frames;
    spec.frames = frames;
    spec.seed = seed;
    spec.shuffle_records = true;
    const Vec proto = orthonormal_prototypes(1, dim, seed + 1).front();

    SceneObject round;
    round.shape = EllipseShape{8.0, 8.0};
    round.center = {30.0, 16.0};
    SceneObject slab;
    slab.shape = RectangleShape{22.0, 8.0};
    slab.center = {90.0, 16.0};
    for (int f = 0; f < frames; ++f) {
        round.trajectory.push_back({0.0, 1.5 * f, 0.0, 1.0});
        slab.trajectory.push_back({0.0, 1.5 * f, 0.0, 1.0});
    }
    for (auto* obj : {&round, &slab}) {
        obj->kind = Kind::thing;
        obj->class_id = 0;
        obj->embedding_prototype = proto;
        obj->embedding_noise_sigma = 0.0;
        spec.objects.push_back(*obj);
    }
    return spec;
}

SceneSpec preset_panoptic(int frames, std::size_t dim, double sigma, std::uint64_t seed) {
    SceneSpec spec;
    spec.width = 128 + 2 * frames;
    spec.height = 112;
    spec.frames = frames;
    spec.seed = seed;
    const auto protos = orthonormal_prototypes(5, dim, seed + 1);

    SceneObject sky;
    sky.shape = RectangleShape{static_cast<double>(spec.width - 4), 20.0};
    sky.kind = Kind::stuff;
    sky.class_id = 100;
    sky.center = {(spec.width - 1) / 2.0, 12.0};
    SceneObject road;
    road.shape = RectangleShape{static_cast<double>(spec.width - 4), 24.0};
    road.kind = Kind::stuff;
    road.class_id = 101;
    road.center = {(spec.width - 1) / 2.0, 96.0};
    for (auto* obj : {&sky, &road}) {
        obj->embedding_prototype = protos[obj == &sky ? 3 : 4];
        obj->embedding_noise_sigma = sigma;
        spec.objects.push_back(*obj);
    }

    const std::array<Shape, 3> shapes = {
        Shape{EllipseShape{10.0, 7.0}},
        Shape{RectangleShape{12.0, 16.0}},
        Shape{PolygonShape{{{-9.0, 8.0}, {9.0, 8.0}, {0.0, -9.0}}}},
    };
    for (int o = 0; o < 3; ++o) {
        SceneObject thing;
        thing.shape = shapes[static_cast<std::size_t>(o)];
        thing.kind = Kind::thing;
        thing.class_id = o;
        thing.center = {20.0 + 35.0 * o, 40.0 + 12.0 * (o % 2)};
        for (int f = 0; f < frames; ++f) {
            thing.trajectory.push_back({2.0 * f, 3.0 * std::sin(0.3 * f + o), 0.03 * f * (o - 1), 1.0});
        }
        thing.embedding_prototype = protos[static_cast<std::size_t>(o)];
        thing.embedding_noise_sigma = sigma;
        spec.objects.push_back(std::move(thing));
    }
    return spec;
}

} // namespace vassoc
