// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"
#include "support.hpp"

#include "vassoc/descriptor.hpp"
#include "vassoc/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

using namespace vassoc;

namespace {

std::vector<oracle::Pt> as_pts(const AnchorSet& a) {
    std::vector<oracle::Pt> out;
    for (const auto& p : a.anchors) {
        out.push_back({p.x, p.y});
    }
    return out;
}

std::size_t count_at(const ShapePositionDescriptor& d, std::size_t k) {
    return static_cast<std::size_t>(std::lround(d.hist[k] * std::sqrt(double(d.d_model))));
}

bool has_negative(const ShapePositionDescriptor& d) {
    return std::any_of(d.hist.begin(), d.hist.end(), [](double x) { return x < 0.0; });
}

} // namespace

TEST_SUITE("descriptor") {

TEST_CASE("configuration defaults and validation") {
    const DescriptorConfig cfg;
    CHECK(cfg.u == 36);
    CHECK(cfg.v == 12);
    CHECK(cfg.d_model == 256);
    CHECK(cfg.grid_extent == GridExtent::object_scale);
    CHECK(cfg.radius_margin == 1.25);
    CHECK(cfg.negative_mode == NegativeMode::image_bounds);
    DescriptorConfig bad;
    bad.u = 1;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = {};
    bad.radius_margin = 0.9;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("polar conversion") {
    const Point2d c{10, 10};
    CHECK(to_polar({10, 10}, c) == Point2d{0.0, 0.0});
    CHECK(to_polar({13, 10}, c).x == 0.0);
    CHECK(to_polar({10, 12}, c).x == doctest::Approx(std::acos(-1.0) / 2));
    CHECK(to_polar({10, 8}, c).x == doctest::Approx(3 * std::acos(-1.0) / 2));
    CHECK(to_polar({10, 8}, c).y == 2.0);
}

TEST_CASE("centered disc spreads 5 or 6 anchors per angle bin on one ring") {
    const Mask m = support::disc(64, 64, 32, 32, 15);
    const auto d = describe_mask(m, {});
    CHECK(!has_negative(d));
    std::vector<std::size_t> ring(d.v, 0);
    for (std::size_t i = 0; i < d.u; ++i) {
        std::size_t row = 0;
        for (std::size_t j = 0; j < d.v; ++j) {
            row += count_at(d, i * d.v + j);
            ring[j] += count_at(d, i * d.v + j);
        }
        CHECK_MESSAGE((row == 5 || row == 6), "angle bin " << i << " holds " << row);
    }
    std::size_t outer = d.v - 1;
    while (ring[outer] == 0) {
        --outer;
    }
    CHECK(ring[outer] * 2 > 200);
}

TEST_CASE("descriptor is deterministic") {
    Rng rng(8);
    const Mask m = fill_polygon(50, 50, support::random_convex(rng, 25, 25, 14));
    const auto a = describe_mask(m, {});
    const auto b = describe_mask(m, {});
    CHECK(a == b);
}

TEST_CASE("centered square has no negative bins and conserves mass") {
    const Mask m = box_mask(64, 64, 24, 24, 39, 39);
    const AnchorSet anchors = anchors_from_mask(m);
    const auto d = build_descriptor(anchors, m, {}, {});
    CHECK(!has_negative(d));
    double mass = 0.0;
    for (double x : d.hist) {
        mass += x;
    }
    CHECK(mass * 16.0 == 200.0);
    const auto expect = oracle::polar_bin_counts(as_pts(anchors), {anchors.centroid.x, anchors.centroid.y}, 36, 12,
                                                 d.r_max);
    for (std::size_t k = 0; k < expect.size(); ++k) {
        CHECK(count_at(d, k) == expect[k]);
    }
}

TEST_CASE("hist values are k/sqrt(d) or exactly -1/sqrt(d)") {
    Rng rng(31);
    DescriptorConfig cfg;
    cfg.d_model = 100;
    for (int trial = 0; trial < 20; ++trial) {
        // Near the corner so some bin centers leave the image.
        const Mask m = fill_polygon(40, 40, support::random_convex(rng, 8, 8, 7));
        if (m.empty()) {
            continue;
        }
        const auto d = describe_mask(m, cfg);
        for (double x : d.hist) {
            if (x < 0) {
                CHECK(x == -0.1);
            } else {
                const double k = x * 10.0;
                CHECK(std::abs(k - std::round(k)) < 1e-9);
            }
        }
    }
}

TEST_CASE("bins whose center leaves the image are negative") {
    const Mask m = box_mask(40, 40, 0, 0, 9, 9);
    const auto d = describe_mask(m, {});
    const double unit = 1.0 / 16.0;
    const double d_theta = 2 * std::acos(-1.0) / 36;
    const double d_r = d.r_max / 12;
    std::size_t negatives = 0;
    for (std::size_t i = 0; i < 36; ++i) {
        for (std::size_t j = 0; j < 12; ++j) {
            const double x = d.center.x + (j + 0.5) * d_r * std::cos((i + 0.5) * d_theta);
            const double y = d.center.y + (j + 0.5) * d_r * std::sin((i + 0.5) * d_theta);
            const bool outside = std::floor(x + 0.5) < 0 || std::floor(y + 0.5) < 0;
            CHECK((d.at(i, j) == -unit) == outside);
            negatives += outside ? 1 : 0;
        }
    }
    CHECK(negatives > 0);
}

TEST_CASE("target_mask and mask_union negative modes") {
    const Mask a = box_mask(64, 64, 20, 20, 35, 35);
    const Mask b = box_mask(64, 64, 36, 20, 50, 35);
    DescriptorConfig cfg;
    cfg.negative_mode = NegativeMode::target_mask;
    const auto own = describe_mask(a, cfg);
    cfg.negative_mode = NegativeMode::mask_union;
    CHECK_THROWS_AS(describe_mask(a, cfg), Error);
    const std::vector<Mask> ctx{b};
    const auto joint = describe_mask(a, cfg, kDefaultAnchorCount, ctx);
    const auto negs = [](const ShapePositionDescriptor& d) {
        return std::count_if(d.hist.begin(), d.hist.end(), [](double x) { return x < 0; });
    };
    CHECK(negs(own) > 0);
    CHECK(negs(joint) < negs(own));
    for (std::size_t k = 0; k < own.hist.size(); ++k) {
        if (own.hist[k] >= 0) {
            CHECK(joint.hist[k] == own.hist[k]);
        }
    }
}

TEST_CASE("negative override wins over anchor counts") {
    // Thin horizontal bar: bin centers sit 5 degrees off the axis and miss it.
    Mask m(40, 40);
    for (int k = 5; k < 35; ++k) {
        m.set(k, 20);
    }
    DescriptorConfig cfg;
    cfg.negative_mode = NegativeMode::target_mask;
    const AnchorSet anchors = anchors_from_mask(m);
    const auto d = build_descriptor(anchors, m, {}, cfg);
    const auto counts = oracle::polar_bin_counts(as_pts(anchors), {anchors.centroid.x, anchors.centroid.y}, 36, 12,
                                                 d.r_max);
    bool overridden = false;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] > 0 && d.hist[k] < 0) {
            overridden = true;
            CHECK(d.hist[k] == -1.0 / 16.0);
        }
    }
    CHECK(overridden);
}

TEST_CASE("image_scale extent uses the image half-diagonal") {
    DescriptorConfig cfg;
    cfg.grid_extent = GridExtent::image_scale;
    const Mask m = box_mask(30, 40, 10, 10, 20, 20);
    const auto d = describe_mask(m, cfg);
    CHECK(d.r_max == doctest::Approx(1.25 * 25.0));
}

TEST_CASE("rotation by whole bins shifts rows") {
    Rng rng(12);
    const double d_theta = 2 * std::acos(-1.0) / 36;
    const Mask frame(200, 200);
    const Mask shape = fill_polygon(200, 200, support::random_convex(rng, 100, 100, 30));
    const AnchorSet base = anchors_from_mask(shape);
    const auto h0 = build_descriptor(base, frame, {}, {});
    for (std::size_t k : {1u, 9u, 18u}) {
        AnchorSet rot = base;
        const double c = std::cos(k * d_theta);
        const double s = std::sin(k * d_theta);
        for (auto& p : rot.anchors) {
            const double dx = p.x - base.centroid.x;
            const double dy = p.y - base.centroid.y;
            p = {base.centroid.x + c * dx - s * dy, base.centroid.y + s * dx + c * dy};
        }
        const auto hk = build_descriptor(rot, frame, {}, {});
        for (std::size_t i = 0; i < 36; ++i) {
            for (std::size_t j = 0; j < 12; ++j) {
                CHECK(hk.at((i + k) % 36, j) == h0.at(i, j));
            }
        }
    }
}

TEST_CASE("translation inside the image leaves hist unchanged") {
    const Mask a = box_mask(100, 100, 30, 30, 45, 50);
    const Mask b = box_mask(100, 100, 40, 35, 55, 55);
    const auto da = describe_mask(a, {});
    const auto db = describe_mask(b, {});
    CHECK(!has_negative(da));
    CHECK(da.hist == db.hist);
}

TEST_CASE("translation toward the border only changes negative entries") {
    const Mask a = box_mask(100, 100, 40, 40, 55, 60);
    const Mask b = box_mask(100, 100, 1, 40, 16, 60);
    const auto da = describe_mask(a, {});
    const auto db = describe_mask(b, {});
    CHECK(!has_negative(da));
    CHECK(has_negative(db));
    for (std::size_t k = 0; k < da.hist.size(); ++k) {
        if (db.hist[k] >= 0) {
            CHECK(db.hist[k] == da.hist[k]);
        }
    }
}

TEST_CASE("embedded equals hist when d_model = u*v") {
    DescriptorConfig cfg;
    cfg.d_model = 36 * 12;
    const auto d = describe_mask(support::disc(50, 50, 25, 25, 10), cfg);
    CHECK(d.embedded == d.hist);
}

TEST_CASE("linear resample endpoints and midpoints") {
    const std::vector<double> v{0.0, 1.0, 2.0, 3.0};
    const Vec up = resample_linear(v, 8);
    CHECK(up.size() == 8);
    CHECK(up.front() == 0.0);
    CHECK(up.back() == 3.0);
    CHECK(up[3] == doctest::Approx(1.25));
    const Vec down = resample_linear(v, 2);
    CHECK(down[0] == doctest::Approx(0.5));
    CHECK(down[1] == doctest::Approx(2.5));
    CHECK_THROWS_AS(resample_linear(v, 0), Error);
}

TEST_CASE("delta_h examples") {
    const auto h = describe_mask(support::disc(40, 40, 20, 20, 8), {});
    CHECK(delta_h(h, h) == 0.0);

    ShapePositionDescriptor a;
    a.u = 2;
    a.v = 1;
    a.d_model = 4;
    a.hist = {0.25, 0.0};
    ShapePositionDescriptor b = a;
    b.hist = {0.5, 0.0};
    CHECK(delta_h(a, b) == 1.0);
    CHECK(delta_h(b, a) == 0.5); // not symmetric

    ShapePositionDescriptor zero = a;
    zero.hist = {0.0, 0.0};
    CHECK_THROWS_AS(delta_h(zero, a), Error);
    ShapePositionDescriptor other = a;
    other.v = 2;
    other.u = 1;
    CHECK_THROWS_AS(delta_h(a, other), Error);
}

TEST_CASE("rectangles 20x10 vs 20x14 agree with the brute-force relative change") {
    const Mask wide = box_mask(64, 64, 22, 27, 41, 36);
    const Mask tall = box_mask(64, 64, 22, 25, 41, 38);
    const auto a = describe_mask(wide, {});
    const auto b = describe_mask(tall, {});
    CHECK(a.center == b.center);
    const double got = delta_h(a, b);
    const long double expect = oracle::relative_change(a.hist, b.hist);
    CHECK(std::abs(got - static_cast<double>(expect)) <= 1e-12 * static_cast<double>(expect));
    CHECK(is_positive_pair(a, b, kDefaultTau) == (expect < 0.2L));
    CHECK(got > kDefaultTau);
}

TEST_CASE("is_positive_pair uses a strict threshold") {
    const auto a = describe_mask(box_mask(64, 64, 20, 20, 40, 30), {});
    const auto b = describe_mask(box_mask(64, 64, 20, 20, 40, 32), {});
    const double d = delta_h(a, b);
    CHECK(kDefaultTau == 0.2);
    CHECK(is_positive_pair(a, a, kDefaultTau));
    CHECK_FALSE(is_positive_pair(a, b, d));
    CHECK(is_positive_pair(a, b, std::nextafter(d, 1.0)));
}

} // TEST_SUITE
