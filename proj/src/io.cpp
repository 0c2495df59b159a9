// SPDX-License-Identifier: Apache-2.0
#include "vassoc/io.hpp"

#include "vassoc/error.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <png.h>
#include <sstream>

namespace vassoc {

namespace fs = std::filesystem;

namespace {

// Runs `f`, turning nlohmann type/range errors into ParseError.
template <typename F>
auto guarded(const std::string& what, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Json::exception& e) {
        throw Error(Errc::parse_error, what + ": " + e.what());
    }
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int k = 0; k < 4; ++k) {
        out.push_back(static_cast<char>((v >> (8 * k)) & 0xFFu));
    }
}

void put_f32(std::string& out, float f) {
    put_u32(out, std::bit_cast<std::uint32_t>(f));
}

std::uint32_t get_u32(std::string_view in, std::size_t at) {
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) {
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + static_cast<std::size_t>(k)])) << (8 * k);
    }
    return v;
}

float get_f32(std::string_view in, std::size_t at) {
    return std::bit_cast<float>(get_u32(in, at));
}

std::uint32_t to_u32(std::size_t n, const char* what) {
    if (n > 0xFFFFFFFFu) {
        throw Error(Errc::invalid_argument, std::string(what) + " does not fit in 32 bits");
    }
    return static_cast<std::uint32_t>(n);
}

void check_magic(std::string_view bytes, std::string_view magic, std::size_t header) {
    if (bytes.size() < header || bytes.substr(0, 4) != magic) {
        throw Error(Errc::parse_error, "missing " + std::string(magic) + " header");
    }
}

Json key_to_json(const TrackKey& key) {
    return Json{{"kind", to_string(key.kind)}, {"id", key.id}};
}

Json optional_int(const std::optional<int>& v) {
    return v ? Json(*v) : Json(nullptr);
}

std::optional<int> read_optional_int(const Json& j) {
    return j.is_null() ? std::nullopt : std::optional<int>(j.get<int>());
}

Json shape_to_json(const Shape& shape) {
    if (const auto* e = std::get_if<EllipseShape>(&shape)) {
        return Json{{"type", "ellipse"}, {"rx", e->rx}, {"ry", e->ry}};
    }
    if (const auto* r = std::get_if<RectangleShape>(&shape)) {
        return Json{{"type", "rectangle"}, {"width", r->width}, {"height", r->height}};
    }
    Json pts = Json::array();
    for (const auto& p : std::get<PolygonShape>(shape).points) {
        pts.push_back({p.x, p.y});
    }
    return Json{{"type", "polygon"}, {"points", pts}};
}

Shape shape_from_json(const Json& j) {
    const auto type = j.at("type").get<std::string>();
    if (type == "ellipse") {
        return EllipseShape{j.at("rx").get<double>(), j.at("ry").get<double>()};
    }
    if (type == "rectangle") {
        return RectangleShape{j.at("width").get<double>(), j.at("height").get<double>()};
    }
    if (type == "polygon") {
        PolygonShape poly;
        for (const auto& p : j.at("points")) {
            poly.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        }
        return poly;
    }
    throw Error(Errc::parse_error, "unknown shape type '" + type + "'");
}

std::vector<fs::path> sorted_files(const fs::path& dir, std::string_view ext) {
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ext) {
            out.push_back(entry.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::io_error, "cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, std::string_view bytes) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(Errc::io_error, "cannot write '" + path.string() + "'");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error(Errc::io_error, "short write to '" + path.string() + "'");
    }
}

Json parse_json(std::string_view text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw Error(Errc::parse_error, origin + ": " + e.what());
    }
}

std::string dump_json(const Json& j) {
    return j.dump() + "\n";
}

Json mask_to_rle(const Mask& mask) {
    Json counts = Json::array();
    std::uint8_t current = 0;
    std::size_t run = 0;
    for (const auto b : mask.bits()) {
        if (b != current) {
            counts.push_back(run);
            run = 0;
            current = b;
        }
        ++run;
    }
    counts.push_back(run);
    return Json{{"h", mask.height()}, {"w", mask.width()}, {"counts", counts}};
}

Mask mask_from_rle(const Json& j) {
    return guarded("RLE mask", [&] {
        const int h = j.at("h").get<int>();
        const int w = j.at("w").get<int>();
        if (h < 1 || w < 1) {
            throw Error(Errc::parse_error, "RLE mask needs positive h and w");
        }
        const std::size_t total = static_cast<std::size_t>(h) * static_cast<std::size_t>(w);
        std::vector<std::uint8_t> bits;
        bits.reserve(total);
        std::uint8_t value = 0;
        for (const auto& c : j.at("counts")) {
            const auto run = c.get<std::uint64_t>();
            if (run > total - bits.size()) {
                throw Error(Errc::parse_error, "RLE runs exceed h*w");
            }
            bits.insert(bits.end(), static_cast<std::size_t>(run), value);
            value ^= 1;
        }
        if (bits.size() != total) {
            throw Error(Errc::parse_error, "RLE runs sum to " + std::to_string(bits.size()) + ", expected " +
                                               std::to_string(total));
        }
        return Mask(w, h, std::move(bits));
    });
}

Mask read_png(const fs::path& path) {
    png_image img;
    std::memset(&img, 0, sizeof(img));
    img.version = PNG_IMAGE_VERSION;
    if (png_image_begin_read_from_file(&img, path.c_str()) == 0) {
        throw Error(Errc::parse_error, "'" + path.string() + "': " + img.message);
    }
    img.format = PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(img));
    if (png_image_finish_read(&img, nullptr, buf.data(), 0, nullptr) == 0) {
        const std::string msg = img.message;
        png_image_free(&img);
        throw Error(Errc::parse_error, "'" + path.string() + "': " + msg);
    }
    for (auto& b : buf) {
        b = b > 0 ? 1 : 0;
    }
    return Mask(static_cast<int>(img.width), static_cast<int>(img.height), std::move(buf));
}

void write_png(const fs::path& path, const Mask& mask) {
    png_image img;
    std::memset(&img, 0, sizeof(img));
    img.version = PNG_IMAGE_VERSION;
    img.width = static_cast<png_uint_32>(mask.width());
    img.height = static_cast<png_uint_32>(mask.height());
    img.format = PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> buf(mask.bits().begin(), mask.bits().end());
    for (auto& b : buf) {
        b = b != 0 ? 255 : 0;
    }
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    if (png_image_write_to_file(&img, path.c_str(), 0, buf.data(), 0, nullptr) == 0) {
        throw Error(Errc::io_error, "'" + path.string() + "': " + img.message);
    }
}

Mask read_mask(const fs::path& path) {
    const std::string bytes = read_file(path);
    static constexpr std::string_view kPngSignature("\x89PNG", 4);
    if (bytes.compare(0, 4, kPngSignature) == 0) {
        return read_png(path);
    }
    const Json j = parse_json(bytes, path.string());
    try {
        return mask_from_rle(j);
    } catch (const Error& e) {
        throw e.within(path.string());
    }
}

std::string encode_gvfm(const FeatureMap& fmap) {
    std::string out = "GVFM";
    put_u32(out, to_u32(static_cast<std::size_t>(fmap.width()), "width"));
    put_u32(out, to_u32(static_cast<std::size_t>(fmap.height()), "height"));
    put_u32(out, to_u32(static_cast<std::size_t>(fmap.channels()), "channels"));
    out.reserve(out.size() + 4 * fmap.values().size());
    for (float f : fmap.values()) {
        put_f32(out, f);
    }
    return out;
}

FeatureMap decode_gvfm(std::string_view bytes) {
    check_magic(bytes, "GVFM", 16);
    const std::uint32_t w = get_u32(bytes, 4);
    const std::uint32_t h = get_u32(bytes, 8);
    const std::uint32_t c = get_u32(bytes, 12);
    const std::uint64_t n = std::uint64_t{w} * h * c;
    if (bytes.size() - 16 != 4 * n) {
        throw Error(Errc::parse_error, "GVFM payload holds " + std::to_string(bytes.size() - 16) + " bytes, expected " +
                                           std::to_string(4 * n));
    }
    std::vector<float> values(static_cast<std::size_t>(n));
    for (std::size_t k = 0; k < values.size(); ++k) {
        values[k] = get_f32(bytes, 16 + 4 * k);
    }
    try {
        return FeatureMap(static_cast<int>(w), static_cast<int>(h), static_cast<int>(c), std::move(values));
    } catch (const Error& e) {
        throw Error(Errc::parse_error, "GVFM: " + e.detail());
    }
}

std::string encode_gvqe(const EmbeddingSet& set) {
    std::string out = "GVQE";
    put_u32(out, to_u32(set.records.size(), "record count"));
    put_u32(out, to_u32(set.d_model, "d_model"));
    for (const auto& r : set.records) {
        if (r.embedding.size() != set.d_model) {
            throw Error(Errc::dimension_mismatch, "record '" + r.mask_ref + "' has " + std::to_string(r.embedding.size()) +
                                                      " values, expected " + std::to_string(set.d_model));
        }
        for (double x : r.embedding) {
            put_f32(out, static_cast<float>(x));
        }
    }
    return out;
}

Json embedding_sidecar(const EmbeddingSet& set) {
    Json recs = Json::array();
    for (const auto& r : set.records) {
        recs.push_back(Json{{"frame", r.frame},
                            {"mask_ref", r.mask_ref},
                            {"kind", to_string(r.kind)},
                            {"class_id", optional_int(r.class_id)}});
    }
    return Json{{"records", recs}};
}

EmbeddingSet decode_gvqe(std::string_view bytes, const Json& sidecar) {
    check_magic(bytes, "GVQE", 12);
    const std::uint32_t count = get_u32(bytes, 4);
    const std::uint32_t dim = get_u32(bytes, 8);
    const std::uint64_t n = std::uint64_t{count} * dim;
    if (bytes.size() - 12 != 4 * n) {
        throw Error(Errc::parse_error, "GVQE payload holds " + std::to_string(bytes.size() - 12) + " bytes, expected " +
                                           std::to_string(4 * n));
    }
    EmbeddingSet set;
    set.d_model = dim;
    guarded("embeddings sidecar", [&] {
        const auto& recs = sidecar.at("records");
        if (recs.size() != count) {
            throw Error(Errc::count_mismatch, "sidecar lists " + std::to_string(recs.size()) + " records, binary holds " +
                                                  std::to_string(count));
        }
        for (std::uint32_t k = 0; k < count; ++k) {
            const auto& m = recs[k];
            QueryRecord r;
            r.frame = m.at("frame").get<int>();
            r.mask_ref = m.at("mask_ref").get<std::string>();
            r.kind = parse_kind(m.at("kind").get<std::string>());
            r.class_id = read_optional_int(m.at("class_id"));
            r.source_index = k;
            r.embedding.resize(dim);
            for (std::uint32_t c = 0; c < dim; ++c) {
                r.embedding[c] = get_f32(bytes, 12 + 4 * (std::size_t{k} * dim + c));
            }
            set.records.push_back(std::move(r));
        }
    });
    return set;
}

Json descriptor_to_json(const ShapePositionDescriptor& d) {
    return Json{{"u", d.u},
                {"v", d.v},
                {"d_model", d.d_model},
                {"r_max", d.r_max},
                {"center", {d.center.x, d.center.y}},
                {"hist", d.hist},
                {"embedded", d.embedded}};
}

ShapePositionDescriptor descriptor_from_json(const Json& j) {
    return guarded("descriptor", [&] {
        ShapePositionDescriptor d;
        d.u = j.at("u").get<std::size_t>();
        d.v = j.at("v").get<std::size_t>();
        d.d_model = j.at("d_model").get<std::size_t>();
        d.r_max = j.at("r_max").get<double>();
        d.center = {j.at("center").at(0).get<double>(), j.at("center").at(1).get<double>()};
        d.hist = j.at("hist").get<std::vector<double>>();
        d.embedded = j.at("embedded").get<std::vector<double>>();
        if (d.hist.size() != d.u * d.v || d.embedded.size() != d.d_model) {
            throw Error(Errc::parse_error, "descriptor array lengths disagree with u, v, d_model");
        }
        return d;
    });
}

Json tracks_to_json(const TrackSet& tracks) {
    Json arr = Json::array();
    for (const auto& [key, track] : tracks.tracks()) {
        Json frames = Json::array();
        Json refs = Json::array();
        for (const auto& r : track.records) {
            frames.push_back(r.frame);
            refs.push_back(r.mask_ref);
        }
        arr.push_back(Json{{"id", key.id},
                           {"class_id", optional_int(track.class_id)},
                           {"kind", to_string(key.kind)},
                           {"frames", frames},
                           {"mask_refs", refs}});
    }
    return Json{{"mode", to_string(tracks.mode())}, {"tracks", arr}};
}

TrackSet tracks_from_json(const Json& j) {
    return guarded("tracks", [&] {
        TrackSet set(parse_track_mode(j.at("mode").get<std::string>()));
        for (const auto& t : j.at("tracks")) {
            const TrackKey key{parse_kind(t.at("kind").get<std::string>()), t.at("id").get<int>()};
            const auto class_id = read_optional_int(t.at("class_id"));
            const auto& frames = t.at("frames");
            const auto& refs = t.at("mask_refs");
            if (frames.size() != refs.size() || frames.empty()) {
                throw Error(Errc::parse_error, "track " + std::to_string(key.id) + " needs matching, non-empty frames and mask_refs");
            }
            if (set.find(key) != nullptr) {
                throw Error(Errc::parse_error, "track " + std::to_string(key.id) + " listed twice");
            }
            for (std::size_t k = 0; k < frames.size(); ++k) {
                QueryRecord r;
                r.frame = frames[k].get<int>();
                r.mask_ref = refs[k].get<std::string>();
                r.kind = key.kind;
                r.class_id = class_id;
                set.append(key, std::move(r));
            }
        }
        set.validate();
        return set;
    });
}

Json bank_to_json(const ClassQueryBank& bank) {
    Json classes = Json::object();
    for (const auto& [cls, queue] : bank.queues()) {
        Json q = Json::array();
        for (const auto& e : queue) {
            q.push_back(e.embedding);
        }
        classes[std::to_string(cls)] = Json{{"queue", q}, {"prototype", bank.prototypes().at(cls)}};
    }
    return Json{{"momentum", bank.momentum()}, {"n_q", bank.n_q()}, {"classes", classes}};
}

ClassQueryBank bank_from_json(const Json& j) {
    return guarded("class bank", [&] {
        ClassQueryBank bank(j.at("n_q").get<std::size_t>(), j.at("momentum").get<double>());
        for (const auto& [name, body] : j.at("classes").items()) {
            int cls = 0;
            try {
                std::size_t used = 0;
                cls = std::stoi(name, &used);
                if (used != name.size()) {
                    throw std::invalid_argument(name);
                }
            } catch (const std::logic_error&) {
                throw Error(Errc::parse_error, "class key '" + name + "' is not an integer");
            }
            std::deque<ClassQueryBank::Entry> queue;
            for (const auto& e : body.at("queue")) {
                queue.push_back({e.get<Vec>(), std::nullopt});
            }
            bank.restore_class(cls, std::move(queue), body.at("prototype").get<Vec>());
        }
        return bank;
    });
}

Json batch_to_json(const SampleBatch& batch, const TrackKey& track) {
    auto index_of = [](const QueryRecord& r) -> std::size_t {
        if (!r.source_index) {
            throw Error(Errc::invalid_argument, "record '" + r.mask_ref + "' has no index into the embeddings file");
        }
        return *r.source_index;
    };
    Json pos = Json::array();
    Json neg = Json::array();
    for (const auto& r : batch.positives) {
        pos.push_back(index_of(r));
    }
    for (const auto& r : batch.negatives) {
        neg.push_back(index_of(r));
    }
    return Json{{"anchor", index_of(batch.anchor)},
                {"track", key_to_json(track)},
                {"frame", batch.anchor.frame},
                {"positives", pos},
                {"negatives", neg}};
}

Json metrics_to_json(double tube_pq, const TrackScore& score) {
    Json pairs = Json::array();
    for (const auto& p : score.matched_pairs) {
        pairs.push_back(Json{{"pred", key_to_json(p.pred)}, {"gt", key_to_json(p.gt)}, {"tube_iou", p.tube_iou}});
    }
    return Json{{"tube_pq", tube_pq},
                {"assoc_acc", score.association_accuracy},
                {"id_switches", score.id_switches},
                {"pairs", pairs}};
}

Json scene_spec_to_json(const SceneSpec& spec) {
    Json objects = Json::array();
    for (const auto& o : spec.objects) {
        Json traj = Json::array();
        for (const auto& p : o.trajectory) {
            traj.push_back(Json{{"dx", p.dx}, {"dy", p.dy}, {"rotation", p.rotation}, {"scale", p.scale}});
        }
        objects.push_back(Json{{"shape", shape_to_json(o.shape)},
                               {"kind", to_string(o.kind)},
                               {"class_id", optional_int(o.class_id)},
                               {"center", {o.center.x, o.center.y}},
                               {"trajectory", traj},
                               {"embedding_prototype", o.embedding_prototype},
                               {"embedding_noise_sigma", o.embedding_noise_sigma},
                               {"border_test", o.border_test}});
    }
    return Json{{"width", spec.width},
                {"height", spec.height},
                {"frames", spec.frames},
                {"seed", spec.seed},
                {"shuffle_records", spec.shuffle_records},
                {"objects", objects}};
}

SceneSpec scene_spec_from_json(const Json& j) {
    return guarded("scene spec", [&] {
        SceneSpec spec;
        spec.width = j.at("width").get<int>();
        spec.height = j.at("height").get<int>();
        spec.frames = j.at("frames").get<int>();
        spec.seed = j.value("seed", std::uint64_t{0});
        spec.shuffle_records = j.value("shuffle_records", false);
        for (const auto& o : j.at("objects")) {
            SceneObject obj;
            obj.shape = shape_from_json(o.at("shape"));
            obj.kind = parse_kind(o.value("kind", std::string("thing")));
            obj.class_id = o.contains("class_id") ? read_optional_int(o.at("class_id")) : std::nullopt;
            obj.center = {o.at("center").at(0).get<double>(), o.at("center").at(1).get<double>()};
            if (o.contains("trajectory")) {
                for (const auto& p : o.at("trajectory")) {
                    obj.trajectory.push_back({p.value("dx", 0.0), p.value("dy", 0.0), p.value("rotation", 0.0),
                                              p.value("scale", 1.0)});
                }
            }
            obj.embedding_prototype = o.at("embedding_prototype").get<Vec>();
            obj.embedding_noise_sigma = o.value("embedding_noise_sigma", 0.0);
            obj.border_test = o.value("border_test", false);
            spec.objects.push_back(std::move(obj));
        }
        return spec;
    });
}

void write_scene(const fs::path& dir, const SceneTruth& truth) {
    fs::create_directories(dir / "masks");
    write_file(dir / "spec.json", dump_json(scene_spec_to_json(truth.spec)));
    for (const auto& [ref, mask] : truth.masks) {
        write_file(dir / "masks" / (ref + ".json"), dump_json(mask_to_rle(mask)));
    }
    EmbeddingSet set;
    set.d_model = truth.records.empty() ? 0 : truth.records.front().embedding.size();
    set.records = truth.records;
    write_file(dir / "embeddings.gvqe", encode_gvqe(set));
    write_file(dir / "embeddings.json", dump_json(embedding_sidecar(set)));
    write_file(dir / "gt_tracks.json", dump_json(tracks_to_json(truth.ground_truth())));
}

SceneData read_scene(const fs::path& dir, bool need_embeddings) {
    if (!fs::is_directory(dir)) {
        throw Error(Errc::io_error, "'" + dir.string() + "' is not a directory");
    }
    SceneData scene;
    if (fs::is_directory(dir / "masks")) {
        for (const auto& path : sorted_files(dir / "masks", ".json")) {
            scene.masks.emplace(path.stem().string(), read_mask(path));
        }
    }
    if (fs::is_directory(dir / "descriptors")) {
        for (const auto& path : sorted_files(dir / "descriptors", ".json")) {
            scene.descriptors.emplace(path.stem().string(),
                                      descriptor_from_json(parse_json(read_file(path), path.string())));
        }
    }
    const fs::path gt = dir / "gt_tracks.json";
    if (fs::exists(gt)) {
        scene.ground_truth = tracks_from_json(parse_json(read_file(gt), gt.string()));
    }

    const fs::path bin = dir / "embeddings.gvqe";
    const fs::path side = dir / "embeddings.json";
    if (!fs::exists(bin) || !fs::exists(side)) {
        if (need_embeddings) {
            throw Error(Errc::count_mismatch, "missing embeddings in '" + dir.string() + "'");
        }
        return scene;
    }
    scene.embeddings = decode_gvqe(read_file(bin), parse_json(read_file(side), side.string()));
    if (scene.embeddings.records.size() != scene.masks.size()) {
        throw Error(Errc::count_mismatch, std::to_string(scene.embeddings.records.size()) + " embeddings for " +
                                              std::to_string(scene.masks.size()) + " masks");
    }
    for (auto& r : scene.embeddings.records) {
        if (scene.masks.find(r.mask_ref) == scene.masks.end()) {
            throw Error(Errc::count_mismatch, "embedding record '" + r.mask_ref + "' has no mask");
        }
        if (const auto it = scene.descriptors.find(r.mask_ref); it != scene.descriptors.end()) {
            r.descriptor = it->second;
        }
    }
    return scene;
}

TrackSet attach_records(const TrackSet& gt, const SceneData& scene) {
    std::map<std::string, const QueryRecord*> by_ref;
    for (const auto& r : scene.embeddings.records) {
        by_ref.emplace(r.mask_ref, &r);
    }
    TrackSet out(gt.mode());
    for (const auto& [key, track] : gt.tracks()) {
        for (const auto& r : track.records) {
            const auto it = by_ref.find(r.mask_ref);
            if (it == by_ref.end()) {
                throw Error(Errc::count_mismatch, "ground-truth record '" + r.mask_ref + "' has no embedding");
            }
            out.append(key, *it->second);
        }
    }
    return out;
}

} // namespace vassoc
