// SPDX-License-Identifier: Apache-2.0
#include "vassoc/cli.hpp"

#include "vassoc/association.hpp"
#include "vassoc/config.hpp"
#include "vassoc/error.hpp"
#include "vassoc/io.hpp"
#include "vassoc/metrics.hpp"
#include "vassoc/random.hpp"
#include "vassoc/sampling.hpp"
#include "vassoc/synth.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <map>
#include <numeric>
#include <thread>

namespace vassoc {

namespace fs = std::filesystem;

namespace {

int exit_code_for(Errc code) {
    switch (code) {
    case Errc::parse_error: return kExitParse;
    case Errc::empty_mask: return kExitEmptyMask;
    case Errc::count_mismatch: return kExitCountMismatch;
    case Errc::missing_descriptor: return kExitMissingDescriptor;
    case Errc::video_mismatch: return kExitVideoMismatch;
    default: return kExitFailure;
    }
}

// Runs fn(0..n-1) on up to `threads` workers. If several calls throw, the
// exception of the lowest index is rethrown so failures are reproducible.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < n; k = next++) {
            try {
                fn(k);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < count; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
    } else {
        write_file(path, text);
    }
}

struct Globals {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;

    PipelineConfig load() const {
        PipelineConfig cfg;
        if (!config_path.empty()) {
            cfg = parse_config(read_file(config_path), config_path);
        }
        if (seed) {
            cfg.seed = *seed;
        }
        if (threads) {
            cfg.threads = std::max(1u, *threads);
        }
        return cfg;
    }
};

// Records of each frame, frames ascending, file order kept within a frame.
std::map<int, std::vector<QueryRecord>> by_frame(const std::vector<QueryRecord>& records) {
    std::map<int, std::vector<QueryRecord>> out;
    for (const auto& r : records) {
        out[r.frame].push_back(r);
    }
    return out;
}

// Fills in descriptors for records that lack one.
void ensure_descriptors(std::vector<QueryRecord>& records, const MaskStore& masks, const PipelineConfig& cfg) {
    std::map<int, std::vector<const Mask*>> frame_masks;
    for (const auto& r : records) {
        frame_masks[r.frame].push_back(&masks.at(r.mask_ref));
    }
    parallel_for(records.size(), cfg.threads, [&](std::size_t k) {
        auto& r = records[k];
        if (r.descriptor) {
            return;
        }
        const Mask& target = masks.at(r.mask_ref);
        std::vector<Mask> context;
        for (const Mask* m : frame_masks[r.frame]) {
            if (m != &target) {
                context.push_back(*m);
            }
        }
        r.descriptor = describe_mask(target, cfg.descriptor, cfg.anchors, context);
    });
}

Json affinity_to_json(const StepReport& report, const std::vector<QueryRecord>& cols) {
    Json rows = Json::array();
    for (const auto& key : report.row_tracks) {
        rows.push_back(key.id);
    }
    Json refs = Json::array();
    for (const auto& r : cols) {
        if (r.kind == Kind::thing) {
            refs.push_back(r.mask_ref);
        }
    }
    Json values = Json::array();
    for (std::size_t i = 0; i < report.affinity.rows; ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < report.affinity.cols; ++j) {
            row.push_back(report.affinity.at(i, j));
        }
        values.push_back(row);
    }
    return Json{{"frame", report.frame}, {"rows", rows}, {"cols", refs}, {"values", values}};
}

std::vector<Hint> hints_from_json(const Json& j) {
    std::vector<Hint> hints;
    for (const auto& h : j.at("hints")) {
        const auto type = h.at("type").get<std::string>();
        if (type == "point") {
            hints.emplace_back(PointHint{{h.at("x").get<double>(), h.at("y").get<double>()}});
        } else if (type == "box") {
            hints.emplace_back(BoxHint{h.at("x0").get<int>(), h.at("y0").get<int>(), h.at("x1").get<int>(),
                                       h.at("y1").get<int>()});
        } else if (type == "mask") {
            hints.emplace_back(MaskHint{mask_from_rle(h.at("mask"))});
        } else {
            throw Error(Errc::parse_error, "unknown hint type '" + type + "'");
        }
    }
    return hints;
}

// ---------------------------------------------------------------- descriptor

struct DescriptorArgs {
    std::vector<std::string> masks;
    std::string out_dir = ".";
};

int cmd_descriptor(const DescriptorArgs& a, const Globals& g, std::ostream& out) {
    const PipelineConfig cfg = g.load();
    std::vector<Mask> masks;
    masks.reserve(a.masks.size());
    for (const auto& path : a.masks) {
        masks.push_back(read_mask(path));
    }
    std::vector<std::string> outputs(masks.size());
    parallel_for(masks.size(), cfg.threads, [&](std::size_t k) {
        std::vector<Mask> context;
        for (std::size_t o = 0; o < masks.size(); ++o) {
            if (o != k) {
                context.push_back(masks[o]);
            }
        }
        try {
            outputs[k] = dump_json(descriptor_to_json(describe_mask(masks[k], cfg.descriptor, cfg.anchors, context)));
        } catch (const Error& e) {
            throw e.within(a.masks[k]);
        }
    });
    for (std::size_t k = 0; k < masks.size(); ++k) {
        const fs::path target = fs::path(a.out_dir) / (fs::path(a.masks[k]).stem().string() + ".json");
        write_file(target, outputs[k]);
        out << target.string() << '\n';
    }
    return kExitOk;
}

// --------------------------------------------------------------------- track

struct TrackArgs {
    std::string scene;
    std::optional<bool> spa;
    std::string out;
    std::string dump_affinity;
    std::string bank_out;
    std::string fmap;
    std::string hints;
};

TrackMode infer_mode(const std::vector<QueryRecord>& records) {
    bool things = false;
    bool stuff = false;
    for (const auto& r : records) {
        (r.kind == Kind::thing ? things : stuff) = true;
    }
    if (things && stuff) {
        return TrackMode::panoptic;
    }
    return stuff ? TrackMode::semantic : TrackMode::instance;
}

int cmd_track(const TrackArgs& a, const Globals& g, std::ostream& out) {
    PipelineConfig cfg = g.load();
    if (a.spa) {
        cfg.match.use_spa = *a.spa;
    }
    SceneData scene = read_scene(a.scene, true);
    cfg.descriptor.d_model = scene.embeddings.d_model;
    auto& records = scene.embeddings.records;
    if (cfg.match.use_spa) {
        for (auto& r : records) {
            if (r.descriptor && r.descriptor->d_model != cfg.descriptor.d_model) {
                r.descriptor.reset();
            }
        }
        ensure_descriptors(records, scene.masks, cfg);
    }

    const bool exemplar = cfg.mode == PipelineMode::exemplar;
    if (exemplar != (!a.fmap.empty() && !a.hints.empty())) {
        throw Error(Errc::parse_error, "exemplar mode needs --fmap and --hints, other modes accept neither");
    }
    TrackMode mode = TrackMode::instance;
    switch (cfg.mode) {
    case PipelineMode::automatic: mode = infer_mode(records); break;
    case PipelineMode::semantic: mode = TrackMode::semantic; break;
    case PipelineMode::panoptic: mode = TrackMode::panoptic; break;
    default: mode = TrackMode::instance; break;
    }

    TrackSet tracks(mode);
    ClassQueryBank bank(cfg.n_q, cfg.momentum);
    Json dumps = Json::array();
    const auto frames = by_frame(records);
    auto frame_it = frames.begin();

    if (exemplar && frame_it != frames.end()) {
        // Hint seeds pick their objects in the first frame by appearance;
        // afterwards only those objects are followed.
        const FeatureMap fmap = decode_gvfm(read_file(a.fmap));
        const auto hints = hints_from_json(parse_json(read_file(a.hints), a.hints));
        const auto seeds = init_exemplar_tracks(hints, fmap, AffineMap::identity(), frame_it->first);
        const auto& first = frame_it->second;
        const AffinityMatrix aff = spa_affinity(seeds, first, false);
        tracks.advance_to(frame_it->first);
        StepReport report;
        report.frame = frame_it->first;
        report.affinity = aff;
        for (std::size_t k = 0; k < seeds.size(); ++k) {
            report.row_tracks.push_back({Kind::thing, static_cast<int>(k)});
        }
        for (const auto& pair : hungarian(aff)) {
            if (aff.at(pair.row, pair.col) >= cfg.match.affinity_floor) {
                tracks.append({Kind::thing, static_cast<int>(pair.row)}, first[pair.col]);
                report.accepted.push_back(pair);
            }
        }
        dumps.push_back(affinity_to_json(report, first));
        cfg.match.new_track_policy = NewTrackPolicy::drop;
        ++frame_it;
    }

    for (; frame_it != frames.end(); ++frame_it) {
        const auto& recs = frame_it->second;
        std::vector<QueryRecord> stuff;
        switch (mode) {
        case TrackMode::instance:
            dumps.push_back(affinity_to_json(step_instance(tracks, recs, cfg.match), recs));
            break;
        case TrackMode::semantic: step_semantic(tracks, recs, bank); break;
        case TrackMode::panoptic:
            dumps.push_back(affinity_to_json(step_panoptic(tracks, recs, cfg.match, bank), recs));
            break;
        }
        for (const auto& r : recs) {
            if (r.kind == Kind::stuff && r.class_id) {
                bank.update(*r.class_id, r.embedding, r.source_index);
            }
        }
    }

    emit(dump_json(tracks_to_json(tracks)), a.out, out);
    if (!a.dump_affinity.empty()) {
        write_file(a.dump_affinity, dump_json(dumps));
    }
    if (!a.bank_out.empty()) {
        write_file(a.bank_out, dump_json(bank_to_json(bank)));
    }
    return kExitOk;
}

// -------------------------------------------------------------------- sample

struct SampleArgs {
    std::string scene;
    std::string strategy = "task";
    int window = 1;
    std::optional<std::size_t> subset;
    std::string out;
};

int cmd_sample(const SampleArgs& a, const Globals& g, std::ostream& out) {
    const PipelineConfig cfg = g.load();
    const SceneData scene = read_scene(a.scene, true);
    if (!scene.ground_truth) {
        throw Error(Errc::io_error, "'" + a.scene + "' has no ground-truth tracks");
    }
    const TrackSet video = attach_records(*scene.ground_truth, scene);
    const bool task = a.strategy == "task";

    struct Anchor {
        int frame;
        TrackKey key;
        const QueryRecord* record;
    };
    std::vector<Anchor> anchors;
    ClassQueryBank bank(cfg.n_q, cfg.momentum);
    for (const auto& [key, track] : video.tracks()) {
        for (const auto& r : track.records) {
            anchors.push_back({r.frame, key, &r});
            if (task && key.kind == Kind::thing && !r.descriptor) {
                throw Error(Errc::missing_descriptor, "no descriptor for '" + r.mask_ref + "'");
            }
        }
    }
    std::sort(anchors.begin(), anchors.end(), [](const Anchor& x, const Anchor& y) {
        return std::tie(x.frame, x.key) < std::tie(y.frame, y.key);
    });
    if (task) {
        for (const auto& an : anchors) {
            if (an.key.kind == Kind::stuff) {
                bank.update(an.key.id, an.record->embedding, an.record->source_index);
            }
        }
    }

    if (a.subset && *a.subset < anchors.size()) {
        // Partial Fisher-Yates under the run seed, then back to (frame, key) order.
        Rng rng(cfg.seed);
        std::vector<std::size_t> order(anchors.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        for (std::size_t k = 0; k < *a.subset; ++k) {
            std::swap(order[k], order[k + rng.index(order.size() - k)]);
        }
        order.resize(*a.subset);
        std::sort(order.begin(), order.end());
        std::vector<Anchor> kept;
        for (std::size_t k : order) {
            kept.push_back(anchors[k]);
        }
        anchors = std::move(kept);
    }

    std::string lines;
    for (const auto& an : anchors) {
        SampleBatch batch;
        if (!task) {
            batch = sample_baseline_batch(video, {an.key, an.frame}, a.window);
        } else if (an.key.kind == Kind::thing) {
            batch = sample_thing_batch(video, {an.key, an.frame}, cfg.tau);
        } else {
            batch = sample_stuff_batch(bank, *an.record);
        }
        lines += dump_json(batch_to_json(batch, an.key));
    }
    emit(lines, a.out, out);
    return kExitOk;
}

// ---------------------------------------------------------------------- eval

struct EvalArgs {
    std::string pred;
    std::string gt_dir;
    std::optional<int> window;
    std::string out;
};

int cmd_eval(const EvalArgs& a, const Globals& g, std::ostream& out) {
    const PipelineConfig cfg = g.load();
    const TrackSet preds = tracks_from_json(parse_json(read_file(a.pred), a.pred));
    const SceneData scene = read_scene(a.gt_dir, false);
    if (!scene.ground_truth) {
        throw Error(Errc::io_error, "'" + a.gt_dir + "' has no ground-truth tracks");
    }
    for (const auto& [key, track] : preds.tracks()) {
        for (const auto& r : track.records) {
            if (scene.masks.find(r.mask_ref) == scene.masks.end()) {
                throw Error(Errc::video_mismatch, "predicted mask '" + r.mask_ref + "' is not part of '" + a.gt_dir + "'");
            }
        }
    }
    const TrackSet& gts = *scene.ground_truth;
    const double pq = windowed_tube_pq(preds, scene.masks, gts, scene.masks, a.window.value_or(cfg.window));
    TrackScore score = score_association(preds, scene.masks, gts, scene.masks);
    score.matched_pairs = match_tubes(preds, scene.masks, gts, scene.masks, cfg.iou_floor);
    emit(dump_json(metrics_to_json(pq, score)), a.out, out);
    return kExitOk;
}

// --------------------------------------------------------------------- synth

struct SynthArgs {
    std::string out_dir;
    std::string preset = "lanes";
    std::string spec;
    int objects = 10;
    int frames = 30;
    std::size_t dim = 256;
    double sigma = 0.05;
    std::vector<int> swap;
    bool descriptors = false;
};

int cmd_synth(const SynthArgs& a, const Globals& g, std::ostream& out) {
    const PipelineConfig cfg = g.load();
    SceneSpec spec;
    if (!a.spec.empty()) {
        spec = scene_spec_from_json(parse_json(read_file(a.spec), a.spec));
        if (g.seed) {
            spec.seed = *g.seed;
        }
    } else if (a.preset == "lanes") {
        spec = preset_lanes(a.objects, a.frames, a.dim, a.sigma, cfg.seed);
    } else if (a.preset == "twins") {
        spec = preset_twins(a.frames, a.dim, cfg.seed);
    } else if (a.preset == "panoptic") {
        spec = preset_panoptic(a.frames, a.dim, a.sigma, cfg.seed);
    } else {
        throw Error(Errc::parse_error, "unknown preset '" + a.preset + "'");
    }
    SceneTruth truth = generate(spec);
    if (!a.swap.empty()) {
        if (a.swap.size() != 3) {
            throw Error(Errc::parse_error, "--swap takes FRAME A B");
        }
        truth = inject_identity_swap(truth, a.swap[0], a.swap[1], a.swap[2]);
    }
    write_scene(a.out_dir, truth);
    if (a.descriptors) {
        PipelineConfig dcfg = cfg;
        dcfg.descriptor.d_model = truth.records.empty() ? cfg.descriptor.d_model : truth.records.front().embedding.size();
        ensure_descriptors(truth.records, truth.masks, dcfg);
        for (const auto& r : truth.records) {
            write_file(fs::path(a.out_dir) / "descriptors" / (r.mask_ref + ".json"),
                       dump_json(descriptor_to_json(*r.descriptor)));
        }
    }
    out << a.out_dir << ": " << truth.spec.frames << " frames, " << truth.records.size() << " records\n";
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Video object association engine"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config_path, "key = value configuration file");
    app.add_option("--seed", g.seed, "overrides the configured seed");
    app.add_option("--threads", g.threads, "worker threads");

    DescriptorArgs da;
    auto* desc = app.add_subcommand("descriptor", "shape-position descriptor per mask file");
    desc->add_option("masks", da.masks, "PNG or RLE JSON masks")->required();
    desc->add_option("--out-dir", da.out_dir, "where <mask stem>.json files go");

    TrackArgs ta;
    auto* track = app.add_subcommand("track", "associate a scene's records into tracks");
    track->add_option("scene", ta.scene, "scene directory")->required();
    track->add_flag_function(
        "--spa,!--no-spa", [&ta](std::int64_t n) { ta.spa = n > 0; }, "shape/position-aware matching");
    track->add_option("-o,--out", ta.out, "tracks JSON (stdout if omitted)");
    track->add_option("--dump-affinity", ta.dump_affinity, "per-frame affinity matrices as JSON");
    track->add_option("--bank-out", ta.bank_out, "class bank checkpoint");
    track->add_option("--fmap", ta.fmap, "GVFM feature map (exemplar mode)");
    track->add_option("--hints", ta.hints, "hints JSON (exemplar mode)");

    SampleArgs sa;
    auto* sample = app.add_subcommand("sample", "contrastive sample batches per ground-truth record");
    sample->add_option("scene", sa.scene, "scene directory")->required();
    sample->add_option("--strategy", sa.strategy, "task | baseline")->check(CLI::IsMember({"task", "baseline"}));
    sample->add_option("--window", sa.window, "baseline frame window")->check(CLI::NonNegativeNumber);
    sample->add_option("--anchors", sa.subset, "random subset of this many anchors (all if omitted)")
        ->check(CLI::PositiveNumber);
    sample->add_option("-o,--out", sa.out, "batches JSONL (stdout if omitted)");

    EvalArgs ea;
    auto* eval = app.add_subcommand("eval", "score predicted tracks against a scene");
    eval->add_option("pred", ea.pred, "predicted tracks JSON")->required();
    eval->add_option("gt", ea.gt_dir, "ground-truth scene directory")->required();
    eval->add_option("--window", ea.window, "tube PQ span length");
    eval->add_option("-o,--out", ea.out, "metrics JSON (stdout if omitted)");

    SynthArgs ya;
    auto* synth = app.add_subcommand("synth", "write a synthetic scene directory");
    synth->add_option("out", ya.out_dir, "output directory")->required();
    synth->add_option("--preset", ya.preset, "lanes | twins | panoptic");
    synth->add_option("--spec", ya.spec, "scene spec JSON instead of a preset");
    synth->add_option("--objects", ya.objects, "objects (lanes)");
    synth->add_option("--frames", ya.frames, "frame count");
    synth->add_option("--dim", ya.dim, "embedding length");
    synth->add_option("--sigma", ya.sigma, "embedding noise");
    synth->add_option("--swap", ya.swap, "FRAME A B: swap two tracks' embeddings from FRAME on")->expected(3);
    synth->add_flag("--descriptors", ya.descriptors, "also write descriptors/");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitParse;
    }

    try {
        if (*desc) {
            return cmd_descriptor(da, g, out);
        }
        if (*track) {
            return cmd_track(ta, g, out);
        }
        if (*sample) {
            return cmd_sample(sa, g, out);
        }
        if (*eval) {
            return cmd_eval(ea, g, out);
        }
        return cmd_synth(ya, g, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    } catch (const Json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitParse;
    }
}

} // namespace vassoc
