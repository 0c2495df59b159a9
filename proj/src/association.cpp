// SPDX-License-Identifier: Apache-2.0
#include "vassoc/association.hpp"

#include "vassoc/error.hpp"

#include <string>

namespace vassoc {

namespace {

Vec matching_vector(const QueryRecord& r, bool use_spa) {
    if (!use_spa) {
        return r.embedding;
    }
    if (!r.descriptor) {
        throw Error(Errc::missing_descriptor, "record '" + r.mask_ref + "' has no shape-position descriptor");
    }
    if (r.descriptor->embedded.size() != r.embedding.size()) {
        throw Error(Errc::dimension_mismatch, "descriptor of '" + r.mask_ref + "' does not match the embedding length");
    }
    Vec v = r.embedding;
    for (std::size_t k = 0; k < v.size(); ++k) {
        v[k] += r.descriptor->embedded[k];
    }
    return v;
}

std::optional<int> common_frame(std::span<const QueryRecord> records) {
    if (records.empty()) {
        return std::nullopt;
    }
    const int frame = records.front().frame;
    for (const auto& r : records) {
        if (r.frame != frame) {
            throw Error(Errc::frame_order, "records of one step must share a frame index");
        }
    }
    return frame;
}

void begin_step(TrackSet& tracks, std::span<const QueryRecord> frame_records) {
    if (const auto frame = common_frame(frame_records)) {
        tracks.advance_to(*frame);
    }
}

StepReport match_things(TrackSet& tracks, std::span<const QueryRecord> records, const MatchConfig& cfg) {
    StepReport report;
    if (!records.empty()) {
        report.frame = records.front().frame;
    }
    for (const auto& r : records) {
        if (r.kind != Kind::thing) {
            throw Error(Errc::mode_mismatch, "instance matching received stuff record '" + r.mask_ref + "'");
        }
    }

    std::vector<QueryRecord> latest;
    for (const auto& [key, track] : tracks.tracks()) {
        if (key.kind == Kind::thing) {
            report.row_tracks.push_back(key);
            latest.push_back(track.latest());
        }
    }
    report.affinity = spa_affinity(latest, records, cfg.use_spa);

    std::vector<char> taken(records.size(), 0);
    for (const auto& pair : hungarian(report.affinity)) {
        if (report.affinity.at(pair.row, pair.col) < cfg.affinity_floor) {
            continue;
        }
        report.accepted.push_back(pair);
        taken[pair.col] = 1;
        tracks.append(report.row_tracks[pair.row], records[pair.col]);
    }
    if (cfg.new_track_policy == NewTrackPolicy::spawn) {
        for (std::size_t j = 0; j < records.size(); ++j) {
            if (!taken[j]) {
                report.spawned.push_back(tracks.spawn(records[j]));
            }
        }
    }
    return report;
}

void match_stuff(TrackSet& tracks, std::span<const QueryRecord> records, const ClassQueryBank& bank) {
    std::vector<int> used;
    for (const auto& r : records) {
        if (r.kind != Kind::stuff) {
            throw Error(Errc::mode_mismatch, "semantic matching received thing record '" + r.mask_ref + "'");
        }
        QueryRecord rec = r;
        if (!rec.class_id) {
            if (bank.prototypes().empty()) {
                throw Error(Errc::missing_bank, "record '" + r.mask_ref + "' has no class id and the class bank is empty");
            }
            rec.class_id = bank.nearest_class(rec.embedding);
        }
        const int cls = *rec.class_id;
        for (int u : used) {
            if (u == cls) {
                throw Error(Errc::duplicate_class, "class " + std::to_string(cls) + " appears twice in frame " +
                                                       std::to_string(r.frame));
            }
        }
        used.push_back(cls);
        tracks.append({Kind::stuff, cls}, std::move(rec));
    }
}

} // namespace

AffinityMatrix spa_affinity(std::span<const QueryRecord> a, std::span<const QueryRecord> b, bool use_spa) {
    AffinityMatrix m(a.size(), b.size());
    std::vector<Vec> left;
    std::vector<Vec> right;
    left.reserve(a.size());
    right.reserve(b.size());
    for (const auto& r : a) {
        left.push_back(matching_vector(r, use_spa));
    }
    for (const auto& r : b) {
        right.push_back(matching_vector(r, use_spa));
    }
    const std::size_t dim = !left.empty() ? left.front().size() : (!right.empty() ? right.front().size() : 0);
    for (const auto* side : {&left, &right}) {
        for (const auto& v : *side) {
            if (v.size() != dim) {
                throw Error(Errc::dimension_mismatch, "embeddings differ in length");
            }
        }
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            m.at(i, j) = cosine(left[i], right[j]);
        }
    }
    return m;
}

StepReport step_instance(TrackSet& tracks, std::span<const QueryRecord> frame_records, const MatchConfig& cfg) {
    if (tracks.mode() == TrackMode::semantic) {
        throw Error(Errc::mode_mismatch, "instance step on a semantic track set");
    }
    begin_step(tracks, frame_records);
    return match_things(tracks, frame_records, cfg);
}

void step_semantic(TrackSet& tracks, std::span<const QueryRecord> frame_records, const ClassQueryBank& bank) {
    if (tracks.mode() == TrackMode::instance) {
        throw Error(Errc::mode_mismatch, "semantic step on an instance track set");
    }
    begin_step(tracks, frame_records);
    match_stuff(tracks, frame_records, bank);
}

StepReport step_panoptic(TrackSet& tracks, std::span<const QueryRecord> frame_records, const MatchConfig& cfg,
                         const ClassQueryBank& bank) {
    if (tracks.mode() != TrackMode::panoptic) {
        throw Error(Errc::mode_mismatch, "panoptic step needs a panoptic track set");
    }
    begin_step(tracks, frame_records);
    std::vector<QueryRecord> things;
    std::vector<QueryRecord> stuff;
    for (const auto& r : frame_records) {
        (r.kind == Kind::thing ? things : stuff).push_back(r);
    }
    StepReport report = match_things(tracks, things, cfg);
    match_stuff(tracks, stuff, bank);
    return report;
}

Vec AffineMap::operator()(std::span<const double> x) const {
    if (is_identity()) {
        return Vec(x.begin(), x.end());
    }
    if (x.size() != in_dim || weight.size() != in_dim * out_dim || (!bias.empty() && bias.size() != out_dim)) {
        throw Error(Errc::dimension_mismatch, "projector shape does not fit the input");
    }
    Vec y(out_dim, 0.0);
    for (std::size_t r = 0; r < out_dim; ++r) {
        double acc = bias.empty() ? 0.0 : bias[r];
        for (std::size_t c = 0; c < in_dim; ++c) {
            acc += weight[r * in_dim + c] * x[c];
        }
        y[r] = acc;
    }
    return y;
}

std::vector<QueryRecord> init_exemplar_tracks(std::span<const Hint> hints, const FeatureMap& fmap,
                                              const AffineMap& projector, int frame) {
    if (hints.empty()) {
        throw Error(Errc::invalid_count, "exemplar initialisation needs at least one hint");
    }
    std::vector<QueryRecord> seeds;
    seeds.reserve(hints.size());
    for (std::size_t k = 0; k < hints.size(); ++k) {
        Vec feature;
        if (const auto* p = std::get_if<PointHint>(&hints[k])) {
            feature = sample_feature(fmap, p->point);
        } else if (const auto* b = std::get_if<BoxHint>(&hints[k])) {
            if (b->x0 < 0 || b->y0 < 0 || b->x1 >= fmap.width() || b->y1 >= fmap.height() || b->x0 > b->x1 ||
                b->y0 > b->y1) {
                throw Error(Errc::out_of_bounds, "box hint " + std::to_string(k) + " is outside the feature map");
            }
            feature = region_mean_feature(fmap, box_mask(fmap.width(), fmap.height(), b->x0, b->y0, b->x1, b->y1));
        } else {
            feature = region_mean_feature(fmap, std::get<MaskHint>(hints[k]).mask);
        }
        QueryRecord seed;
        seed.embedding = projector(feature);
        seed.kind = Kind::thing;
        seed.frame = frame;
        seed.mask_ref = "hint_" + std::to_string(k);
        seeds.push_back(std::move(seed));
    }
    return seeds;
}

} // namespace vassoc
