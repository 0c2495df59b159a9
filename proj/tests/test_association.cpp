// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"
#include "support.hpp"

#include "vassoc/association.hpp"
#include "vassoc/error.hpp"
#include "vassoc/synth.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

using namespace vassoc;

namespace {

/// Attaches a descriptor to every record, using the other masks of its frame as context.
void attach_descriptors(SceneTruth& truth, std::size_t d_model) {
    DescriptorConfig cfg;
    cfg.d_model = d_model;
    for (auto& r : truth.records) {
        r.descriptor = describe_mask(truth.masks.at(r.mask_ref), cfg);
    }
}

/// Track -> set of ground-truth objects and object -> set of tracks.
struct Correspondence {
    std::map<TrackKey, std::set<int>> objects_of;
    std::map<int, std::set<TrackKey>> tracks_of;

    bool bijective() const {
        for (const auto& [k, objs] : objects_of) {
            if (objs.size() != 1) {
                return false;
            }
        }
        for (const auto& [o, keys] : tracks_of) {
            if (keys.size() != 1) {
                return false;
            }
        }
        return true;
    }
};

Correspondence correspond(const TrackSet& tracks, const SceneTruth& truth) {
    std::map<std::string, int> object_of_ref;
    for (std::size_t k = 0; k < truth.records.size(); ++k) {
        object_of_ref[truth.records[k].mask_ref] = truth.object_of[k];
    }
    Correspondence c;
    for (const auto& [key, track] : tracks.tracks()) {
        for (const auto& r : track.records) {
            const int o = object_of_ref.at(r.mask_ref);
            c.objects_of[key].insert(o);
            c.tracks_of[o].insert(key);
        }
    }
    return c;
}

TrackSet run_instance(const SceneTruth& truth, const MatchConfig& cfg) {
    TrackSet tracks(TrackMode::instance);
    for (int f = 0; f < truth.spec.frames; ++f) {
        const auto recs = truth.frame_records(f);
        step_instance(tracks, recs, cfg);
    }
    return tracks;
}

ShapePositionDescriptor flat_descriptor(Vec embedded) {
    ShapePositionDescriptor d;
    d.u = 1;
    d.v = embedded.size();
    d.d_model = embedded.size();
    d.hist = embedded;
    d.embedded = std::move(embedded);
    return d;
}

std::vector<QueryRecord> random_records(Rng& rng, std::size_t n, std::size_t dim, int frame) {
    std::vector<QueryRecord> out;
    for (std::size_t i = 0; i < n; ++i) {
        Vec e(dim);
        Vec h(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            e[k] = rng.normal();
            h[k] = rng.uniform(-0.3, 0.3);
        }
        auto r = support::record(e, frame, "r" + std::to_string(i));
        r.descriptor = flat_descriptor(h);
        out.push_back(r);
    }
    return out;
}

} // namespace

TEST_SUITE("association") {

TEST_CASE("cosine of a zero vector is zero") {
    const Vec z{0.0, 0.0};
    const Vec a{1.0, 2.0};
    CHECK(cosine(z, a) == 0.0);
    CHECK(cosine(a, a) == doctest::Approx(1.0));
}

TEST_CASE("single record self affinity is one") {
    const std::vector<QueryRecord> a{support::record({0.3, -1.2, 4.0}, 0, "a")};
    const auto m = spa_affinity(a, a, false);
    REQUIRE(m.rows == 1);
    REQUIRE(m.cols == 1);
    CHECK(m.at(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("orthogonal embeddings with zero descriptors give the identity") {
    std::vector<QueryRecord> a{support::record(support::unit(4, 0), 0, "a"), support::record(support::unit(4, 1), 0, "b")};
    for (auto& r : a) {
        r.descriptor = flat_descriptor(Vec(4, 0.0));
    }
    const auto m = spa_affinity(a, a, true);
    CHECK(m.values == std::vector<double>{1.0, 0.0, 0.0, 1.0});
}

TEST_CASE("random 3x4 affinity matches the cosine oracle") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_records(rng, 3, 7, 0);
        const auto b = random_records(rng, 4, 7, 1);
        for (bool spa : {false, true}) {
            const auto m = spa_affinity(a, b, spa);
            for (std::size_t i = 0; i < 3; ++i) {
                for (std::size_t j = 0; j < 4; ++j) {
                    Vec x = a[i].embedding;
                    Vec y = b[j].embedding;
                    if (spa) {
                        for (std::size_t k = 0; k < x.size(); ++k) {
                            x[k] += a[i].descriptor->embedded[k];
                            y[k] += b[j].descriptor->embedded[k];
                        }
                    }
                    const double expect = static_cast<double>(oracle::cosine(x, y));
                    CHECK(std::abs(m.at(i, j) - expect) <= 1e-12);
                    CHECK(std::abs(m.at(i, j)) <= 1.0 + 1e-9);
                }
            }
        }
    }
}

TEST_CASE("spa affinity errors") {
    const std::vector<QueryRecord> a{support::record({1.0, 0.0}, 0, "a")};
    const std::vector<QueryRecord> b{support::record({1.0, 0.0, 0.0}, 1, "b")};
    CHECK_THROWS_AS(spa_affinity(a, b, false), Error);
    try {
        spa_affinity(a, a, true);
        FAIL("expected MissingDescriptor");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::missing_descriptor);
    }
    try {
        spa_affinity(a, b, false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::dimension_mismatch);
    }
}

TEST_CASE("spa separates equal embeddings with different shapes") {
    const Vec e = support::unit(432, 3);
    DescriptorConfig cfg;
    cfg.d_model = 432;
    const auto h1 = describe_mask(support::disc(64, 64, 32, 32, 12), cfg);
    const auto h2 = describe_mask(box_mask(64, 64, 10, 28, 54, 36), cfg);
    REQUIRE(delta_h(h1, h2) > 0.5);
    auto prev = support::record(e, 0, "p");
    prev.descriptor = h1;
    auto same = support::record(e, 1, "s");
    same.descriptor = h1;
    auto other = support::record(e, 1, "o");
    other.descriptor = h2;
    const std::vector<QueryRecord> a{prev};
    const std::vector<QueryRecord> b{same, other};
    const auto spa = spa_affinity(a, b, true);
    const auto plain = spa_affinity(a, b, false);
    CHECK(spa.at(0, 0) > spa.at(0, 1));
    CHECK(plain.at(0, 0) == plain.at(0, 1));
}

TEST_CASE("hungarian on identity-dominant matrix") {
    AffinityMatrix m(3, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        m.at(i, i) = 1.0;
    }
    CHECK(hungarian(m) == std::vector<MatchPair>{{0, 0}, {1, 1}, {2, 2}});
}

TEST_CASE("hungarian on empty matrices") {
    CHECK(hungarian(AffinityMatrix(0, 5)).empty());
    CHECK(hungarian(AffinityMatrix(4, 0)).empty());
    CHECK(hungarian(AffinityMatrix(0, 0)).empty());
}

TEST_CASE("hungarian ties resolve to the lexicographically smallest list") {
    CHECK(hungarian(AffinityMatrix(3, 3)) == std::vector<MatchPair>{{0, 0}, {1, 1}, {2, 2}});
    CHECK(hungarian(AffinityMatrix(2, 4)) == std::vector<MatchPair>{{0, 0}, {1, 1}});
    CHECK(hungarian(AffinityMatrix(4, 2)) == std::vector<MatchPair>{{0, 0}, {1, 1}});
    AffinityMatrix m(2, 2);
    m.values = {0.5, 0.5, 0.5, 0.5};
    CHECK(hungarian(m) == std::vector<MatchPair>{{0, 0}, {1, 1}});
    m.values = {0.2, 0.7, 0.7, 0.2};
    CHECK(hungarian(m) == std::vector<MatchPair>{{0, 1}, {1, 0}});
    // Both assignments total 0.5.
    m.values = {0.5, 0.25, 0.25, 0.0};
    CHECK(hungarian(m) == std::vector<MatchPair>{{0, 0}, {1, 1}});
}

TEST_CASE("hungarian reaches the permutation optimum") {
    Rng rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t rows = 1 + rng.index(6);
        const std::size_t cols = 1 + rng.index(6);
        AffinityMatrix m(rows, cols);
        for (auto& v : m.values) {
            v = rng.uniform(-1.0, 1.0);
        }
        const auto pairs = hungarian(m);
        REQUIRE(pairs.size() == std::min(rows, cols));
        std::set<std::size_t> used_rows;
        std::set<std::size_t> used_cols;
        for (const auto& p : pairs) {
            used_rows.insert(p.row);
            used_cols.insert(p.col);
        }
        CHECK(used_rows.size() == pairs.size());
        CHECK(used_cols.size() == pairs.size());
        CHECK(std::is_sorted(pairs.begin(), pairs.end()));
        const double best = oracle::best_assignment_total(m.values, rows, cols);
        CHECK(std::abs(assignment_total(m, pairs) - best) <= 1e-9);
    }
}

TEST_CASE("step_instance bootstraps ids in input order") {
    TrackSet tracks(TrackMode::instance);
    const std::vector<QueryRecord> recs{support::record(support::unit(3, 0), 0, "a"),
                                        support::record(support::unit(3, 1), 0, "b"),
                                        support::record(support::unit(3, 2), 0, "c")};
    const auto report = step_instance(tracks, recs, {false});
    CHECK(report.spawned == std::vector<TrackKey>{{Kind::thing, 0}, {Kind::thing, 1}, {Kind::thing, 2}});
    CHECK(tracks.find({Kind::thing, 1})->latest().mask_ref == "b");
    CHECK(tracks.next_id() == 3);
}

TEST_CASE("step_instance is order independent") {
    TrackSet tracks(TrackMode::instance);
    const std::vector<QueryRecord> f0{support::record(support::unit(2, 0), 0, "a0"),
                                      support::record(support::unit(2, 1), 0, "b0")};
    step_instance(tracks, f0, {false});
    const std::vector<QueryRecord> f1{support::record(support::unit(2, 1), 1, "b1"),
                                      support::record(support::unit(2, 0), 1, "a1")};
    const auto report = step_instance(tracks, f1, {false});
    CHECK(report.spawned.empty());
    CHECK(tracks.find({Kind::thing, 0})->latest().mask_ref == "a1");
    CHECK(tracks.find({Kind::thing, 1})->latest().mask_ref == "b1");
}

TEST_CASE("unmatched records spawn or drop, unmatched tracks stay alive") {
    MatchConfig cfg{false, 0.5, NewTrackPolicy::spawn};
    TrackSet tracks(TrackMode::instance);
    step_instance(tracks, std::vector<QueryRecord>{support::record(support::unit(3, 0), 0, "a0"),
                                                   support::record(support::unit(3, 1), 0, "b0")},
                  cfg);
    // Only a reappears, plus a stranger below the floor.
    step_instance(tracks, std::vector<QueryRecord>{support::record(support::unit(3, 2), 1, "c1"),
                                                   support::record(support::unit(3, 0), 1, "a1")},
                  cfg);
    CHECK(tracks.tracks().size() == 3);
    CHECK(tracks.find({Kind::thing, 2})->latest().mask_ref == "c1");
    // b comes back two frames later and rejoins its track.
    step_instance(tracks, std::vector<QueryRecord>{support::record(support::unit(3, 1), 2, "b2")}, cfg);
    CHECK(tracks.find({Kind::thing, 1})->records.size() == 2);

    cfg.new_track_policy = NewTrackPolicy::drop;
    step_instance(tracks, std::vector<QueryRecord>{support::record({1.0, 1.0, -5.0}, 3, "x3")}, cfg);
    CHECK(tracks.tracks().size() == 3);
    CHECK(tracks.record_count() == 5);
}

TEST_CASE("frames must advance") {
    TrackSet tracks(TrackMode::instance);
    step_instance(tracks, std::vector<QueryRecord>{support::record({1.0}, 4, "a")}, {false});
    for (int f : {4, 2}) {
        try {
            step_instance(tracks, std::vector<QueryRecord>{support::record({1.0}, f, "b")}, {false});
            FAIL("expected FrameOrder");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::frame_order);
        }
    }
    try {
        step_instance(tracks, std::vector<QueryRecord>{support::record({1.0}, 5, "c"), support::record({1.0}, 6, "d")},
                      {false});
        FAIL("expected FrameOrder");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::frame_order);
    }
}

TEST_CASE("mode errors") {
    TrackSet semantic(TrackMode::semantic);
    CHECK_THROWS_AS(step_instance(semantic, std::vector<QueryRecord>{support::record({1.0}, 0, "a")}, {false}), Error);
    TrackSet instance(TrackMode::instance);
    const ClassQueryBank bank;
    CHECK_THROWS_AS(
        step_semantic(instance, std::vector<QueryRecord>{support::record({1.0}, 0, "s", Kind::stuff, 1)}, bank),
        Error);
    CHECK_THROWS_AS(step_panoptic(instance, {}, {}, bank), Error);
}

TEST_CASE("five-object synthetic scene is tracked without switches") {
    SceneTruth truth = generate(preset_lanes(5, 10, 64, 0.05, 11));
    attach_descriptors(truth, 64);
    const TrackSet tracks = run_instance(truth, {});
    const auto c = correspond(tracks, truth);
    CHECK(c.objects_of.size() == 5);
    CHECK(c.tracks_of.size() == 5);
    CHECK(c.bijective());
    CHECK_NOTHROW(tracks.validate());
}

TEST_CASE("permuting frame records keeps track contents") {
    SceneTruth truth = generate(preset_lanes(4, 6, 32, 0.05, 3));
    attach_descriptors(truth, 32);
    TrackSet a(TrackMode::instance);
    TrackSet b(TrackMode::instance);
    for (int f = 0; f < truth.spec.frames; ++f) {
        auto recs = truth.frame_records(f);
        step_instance(a, recs, {});
        std::reverse(recs.begin(), recs.end());
        step_instance(b, recs, {});
    }
    std::set<std::vector<std::string>> ca;
    std::set<std::vector<std::string>> cb;
    for (const auto* ts : {&a, &b}) {
        for (const auto& [k, t] : ts->tracks()) {
            std::vector<std::string> refs;
            for (const auto& r : t.records) {
                refs.push_back(r.mask_ref);
            }
            (ts == &a ? ca : cb).insert(refs);
        }
    }
    CHECK(ca == cb);
}

TEST_CASE("common positive scale leaves affinities and tracks unchanged") {
    SceneTruth truth = generate(preset_lanes(4, 6, 32, 0.2, 9));
    attach_descriptors(truth, 32);
    SceneTruth scaled = truth;
    for (auto& r : scaled.records) {
        for (auto& x : r.embedding) {
            x *= 3.5;
        }
        for (auto& x : r.descriptor->embedded) {
            x *= 3.5;
        }
    }
    const auto f0 = truth.frame_records(0);
    const auto f1 = truth.frame_records(1);
    const auto s0 = scaled.frame_records(0);
    const auto s1 = scaled.frame_records(1);
    const auto m = spa_affinity(f0, f1, true);
    const auto ms = spa_affinity(s0, s1, true);
    for (std::size_t k = 0; k < m.values.size(); ++k) {
        CHECK(std::abs(m.values[k] - ms.values[k]) <= 1e-12);
    }
    const TrackSet ta = run_instance(truth, {});
    const TrackSet tb = run_instance(scaled, {});
    REQUIRE(ta.tracks().size() == tb.tracks().size());
    for (const auto& [k, t] : ta.tracks()) {
        const Track* u = tb.find(k);
        REQUIRE(u != nullptr);
        REQUIRE(u->records.size() == t.records.size());
        for (std::size_t i = 0; i < t.records.size(); ++i) {
            CHECK(u->records[i].mask_ref == t.records[i].mask_ref);
        }
    }
}

TEST_CASE("step_semantic creates one track per class") {
    TrackSet tracks(TrackMode::semantic);
    const ClassQueryBank bank;
    step_semantic(tracks,
                  std::vector<QueryRecord>{support::record({1.0, 0.0}, 0, "s3", Kind::stuff, 3),
                                           support::record({0.0, 1.0}, 0, "s7", Kind::stuff, 7)},
                  bank);
    CHECK(tracks.tracks().size() == 2);
    CHECK(tracks.find({Kind::stuff, 3}) != nullptr);
    CHECK(tracks.find({Kind::stuff, 7}) != nullptr);
    CHECK_NOTHROW(tracks.validate());
}

TEST_CASE("step_semantic persists a class across frames") {
    TrackSet tracks(TrackMode::semantic);
    const ClassQueryBank bank;
    for (int f = 0; f < 4; ++f) {
        step_semantic(tracks,
                      std::vector<QueryRecord>{support::record({1.0, 0.0}, f, "s" + std::to_string(f), Kind::stuff, 5)},
                      bank);
    }
    REQUIRE(tracks.tracks().size() == 1);
    CHECK(tracks.find({Kind::stuff, 5})->records.size() == 4);
}

TEST_CASE("class-less stuff takes the nearest bank prototype") {
    ClassQueryBank bank;
    const Vec road = support::unit(8, 2);
    const Vec sky = support::unit(8, 5);
    bank.update(101, road);
    bank.update(100, sky);
    Rng rng(4);
    Vec e(8);
    for (std::size_t k = 0; k < 8; ++k) {
        e[k] = 0.9 * road[k] + rng.normal(0.0, 0.05);
    }
    // Cosine argmax by hand.
    const int expect = oracle::cosine(e, road) > oracle::cosine(e, sky) ? 101 : 100;
    REQUIRE(expect == 101);
    auto rec = support::record(e, 0, "x", Kind::stuff);
    TrackSet tracks(TrackMode::semantic);
    step_semantic(tracks, std::vector<QueryRecord>{rec}, bank);
    const Track* t = tracks.find({Kind::stuff, expect});
    REQUIRE(t != nullptr);
    CHECK(t->class_id == expect);
}

TEST_CASE("class-less stuff with an empty bank raises MissingBank") {
    TrackSet tracks(TrackMode::semantic);
    const ClassQueryBank bank;
    try {
        step_semantic(tracks, std::vector<QueryRecord>{support::record({1.0}, 0, "x", Kind::stuff)}, bank);
        FAIL("expected MissingBank");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::missing_bank);
    }
}

TEST_CASE("two records of one class in a frame are rejected") {
    TrackSet tracks(TrackMode::semantic);
    const ClassQueryBank bank;
    try {
        step_semantic(tracks,
                      std::vector<QueryRecord>{support::record({1.0}, 0, "a", Kind::stuff, 2),
                                               support::record({1.0}, 0, "b", Kind::stuff, 2)},
                      bank);
        FAIL("expected DuplicateClass");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::duplicate_class);
    }
}

TEST_CASE("panoptic step degenerates to the instance and semantic steps") {
    SceneTruth truth = generate(preset_lanes(3, 5, 32, 0.05, 21));
    attach_descriptors(truth, 32);
    const ClassQueryBank bank;
    TrackSet inst(TrackMode::instance);
    TrackSet pan(TrackMode::panoptic);
    for (int f = 0; f < truth.spec.frames; ++f) {
        const auto recs = truth.frame_records(f);
        step_instance(inst, recs, {});
        step_panoptic(pan, recs, {}, bank);
    }
    REQUIRE(inst.tracks().size() == pan.tracks().size());
    for (const auto& [k, t] : inst.tracks()) {
        const Track* p = pan.find(k);
        REQUIRE(p != nullptr);
        REQUIRE(p->records.size() == t.records.size());
        for (std::size_t i = 0; i < t.records.size(); ++i) {
            CHECK(p->records[i].mask_ref == t.records[i].mask_ref);
        }
    }

    TrackSet sem(TrackMode::semantic);
    TrackSet pan2(TrackMode::panoptic);
    for (int f = 0; f < 3; ++f) {
        const std::vector<QueryRecord> recs{
            support::record({1.0, 0.0}, f, "a" + std::to_string(f), Kind::stuff, 1),
            support::record({0.0, 1.0}, f, "b" + std::to_string(f), Kind::stuff, 2)};
        step_semantic(sem, recs, bank);
        step_panoptic(pan2, recs, {}, bank);
    }
    REQUIRE(sem.tracks().size() == pan2.tracks().size());
    for (const auto& [k, t] : sem.tracks()) {
        REQUIRE(pan2.find(k) != nullptr);
        CHECK(pan2.find(k)->records.size() == t.records.size());
    }
}

TEST_CASE("mixed panoptic scene") {
    SceneTruth truth = generate(preset_panoptic(10, 64, 0.05, 2));
    attach_descriptors(truth, 64);
    ClassQueryBank bank;
    TrackSet tracks(TrackMode::panoptic);
    for (int f = 0; f < truth.spec.frames; ++f) {
        step_panoptic(tracks, truth.frame_records(f), {}, bank);
    }
    CHECK_NOTHROW(tracks.validate());
    const auto c = correspond(tracks, truth);
    CHECK(c.bijective());
    std::size_t things = 0;
    for (const auto& [key, t] : tracks.tracks()) {
        if (key.kind == Kind::stuff) {
            CHECK(t.class_id == key.id);
            CHECK(t.records.size() == 10);
        } else {
            ++things;
        }
    }
    CHECK(things == 3);
    CHECK(tracks.find({Kind::stuff, 100}) != nullptr);
    CHECK(tracks.find({Kind::stuff, 101}) != nullptr);
}

TEST_CASE("exemplar hints seed one thing record each") {
    Rng rng(6);
    FeatureMap fmap(6, 5, 3);
    for (int y = 0; y < 5; ++y) {
        for (int x = 0; x < 6; ++x) {
            for (int c = 0; c < 3; ++c) {
                fmap.set(x, y, c, static_cast<float>(rng.uniform(-1.0, 1.0)));
            }
        }
    }
    Mask hint_mask(6, 5);
    hint_mask.set(1, 1);
    hint_mask.set(2, 1);
    hint_mask.set(4, 3);
    const std::vector<Hint> hints{PointHint{{2.0, 3.0}}, MaskHint{hint_mask}};
    const auto seeds = init_exemplar_tracks(hints, fmap, AffineMap::identity(), 0);
    REQUIRE(seeds.size() == 2);
    CHECK(seeds[0].kind == Kind::thing);
    CHECK(seeds[0].frame == 0);
    CHECK(seeds[0].embedding == fmap.cell(2, 3));
    for (int c = 0; c < 3; ++c) {
        const long double mean =
            (static_cast<long double>(fmap.at(1, 1, c)) + fmap.at(2, 1, c) + fmap.at(4, 3, c)) / 3.0L;
        CHECK(std::abs(seeds[1].embedding[c] - static_cast<double>(mean)) < 1e-12);
    }
}

TEST_CASE("box hint over a constant map returns the constant") {
    FeatureMap fmap(8, 8, 2, std::vector<float>(128, 0.0f));
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
            fmap.set(x, y, 0, 0.25f);
            fmap.set(x, y, 1, -1.5f);
        }
    }
    const std::vector<Hint> hints{BoxHint{0, 0, 7, 7}};
    const auto seeds = init_exemplar_tracks(hints, fmap);
    REQUIRE(seeds.size() == 1);
    CHECK(seeds[0].embedding == Vec{0.25, -1.5});
}

TEST_CASE("exemplar errors and projector") {
    FeatureMap fmap(4, 4, 2, std::vector<float>(32, 1.0f));
    CHECK_THROWS_AS(init_exemplar_tracks(std::vector<Hint>{}, fmap), Error);
    try {
        init_exemplar_tracks(std::vector<Hint>{PointHint{{4.5, 0.0}}}, fmap);
        FAIL("expected OutOfBounds");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::out_of_bounds);
    }
    try {
        init_exemplar_tracks(std::vector<Hint>{MaskHint{Mask(4, 4)}}, fmap);
        FAIL("expected EmptyMask");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::empty_mask);
    }
    AffineMap proj;
    proj.in_dim = 2;
    proj.out_dim = 1;
    proj.weight = {2.0, -1.0};
    proj.bias = {0.5};
    const auto seeds = init_exemplar_tracks(std::vector<Hint>{PointHint{{1.0, 1.0}}}, fmap, proj);
    CHECK(seeds[0].embedding == Vec{1.5});
}

} // TEST_SUITE
