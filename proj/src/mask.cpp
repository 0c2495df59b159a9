// SPDX-License-Identifier: Apache-2.0
#include "vassoc/mask.hpp"

#include "vassoc/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <string>

namespace vassoc {

Mask::Mask(int width, int height) : Mask(width, height, {}) {}

Mask::Mask(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
    if (width < 1 || height < 1) {
        throw Error(Errc::invalid_argument,
                    "mask dimensions must be positive, got " + std::to_string(width) + "x" + std::to_string(height));
    }
    const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (bits_.empty()) {
        bits_.assign(n, 0);
    } else if (bits_.size() != n) {
        throw Error(Errc::invalid_argument, "mask bit count does not match its dimensions");
    }
    for (auto& b : bits_) {
        b = b != 0 ? 1 : 0;
    }
}

std::size_t Mask::count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

namespace {

// Neighbour ring in counter-clockwise display order (y down), starting west.
constexpr std::array<PixelPoint, 8> kRing = {{
    {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1},
}};

int ring_index(int dx, int dy) {
    for (int i = 0; i < 8; ++i) {
        if (kRing[i].x == dx && kRing[i].y == dy) {
            return i;
        }
    }
    return -1;
}

void require_nonempty(const Mask& mask) {
    if (mask.empty()) {
        throw Error(Errc::empty_mask, "mask has no object pixels");
    }
}

} // namespace

Mask largest_component(const Mask& mask) {
    require_nonempty(mask);
    const int w = mask.width();
    const int h = mask.height();
    std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
    int best_label = -1;
    std::size_t best_size = 0;
    int next_label = 0;
    std::deque<PixelPoint> queue;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask.at(x, y) || label[static_cast<std::size_t>(y) * w + x] >= 0) {
                continue;
            }
            const int current = next_label++;
            std::size_t size = 0;
            label[static_cast<std::size_t>(y) * w + x] = current;
            queue.push_back({x, y});
            while (!queue.empty()) {
                const PixelPoint p = queue.front();
                queue.pop_front();
                ++size;
                for (const auto& d : kRing) {
                    const int nx = p.x + d.x;
                    const int ny = p.y + d.y;
                    if (!mask.test(nx, ny)) {
                        continue;
                    }
                    auto& l = label[static_cast<std::size_t>(ny) * w + nx];
                    if (l < 0) {
                        l = current;
                        queue.push_back({nx, ny});
                    }
                }
            }
            if (size > best_size) {
                best_size = size;
                best_label = current;
            }
        }
    }

    Mask out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (label[static_cast<std::size_t>(y) * w + x] == best_label) {
                out.set(x, y);
            }
        }
    }
    return out;
}

Contour extract_contour(const Mask& mask) {
    const Mask comp = largest_component(mask);

    PixelPoint start{};
    bool found_start = false;
    for (int y = 0; y < comp.height() && !found_start; ++y) {
        for (int x = 0; x < comp.width(); ++x) {
            if (comp.at(x, y)) {
                start = {x, y};
                found_start = true;
                break;
            }
        }
    }

    Contour contour;
    contour.points.push_back(start);

    // The west neighbour of the topmost-leftmost pixel is never in the component.
    int back = 0;
    PixelPoint cur = start;
    bool have_second = false;
    PixelPoint second{};
    const std::size_t guard = 4 * static_cast<std::size_t>(comp.width()) * comp.height() + 8;

    for (std::size_t step = 0; step < guard; ++step) {
        int found = -1;
        for (int k = 1; k <= 8; ++k) {
            const int d = (back + k) % 8;
            if (comp.test(cur.x + kRing[d].x, cur.y + kRing[d].y)) {
                found = d;
                break;
            }
        }
        if (found < 0) {
            return contour; // isolated pixel
        }
        const PixelPoint next{cur.x + kRing[found].x, cur.y + kRing[found].y};
        if (cur == start && have_second && next == second) {
            contour.points.pop_back(); // the loop closed back onto `start`
            return contour;
        }
        const int prev_dir = (found + 7) % 8;
        const PixelPoint prev{cur.x + kRing[prev_dir].x, cur.y + kRing[prev_dir].y};
        back = ring_index(prev.x - next.x, prev.y - next.y);
        if (!have_second) {
            second = next;
            have_second = true;
        }
        contour.points.push_back(next);
        cur = next;
    }
    throw Error(Errc::invalid_argument, "contour trace did not terminate");
}

Point2d centroid(const Mask& mask) {
    require_nonempty(mask);
    double sx = 0.0;
    double sy = 0.0;
    std::size_t n = 0;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (mask.at(x, y)) {
                sx += x;
                sy += y;
                ++n;
            }
        }
    }
    return {sx / static_cast<double>(n), sy / static_cast<double>(n)};
}

AnchorSet sample_anchors(const Contour& contour, std::size_t m, Point2d center) {
    if (contour.points.empty()) {
        throw Error(Errc::invalid_argument, "cannot sample anchors from an empty contour");
    }
    if (m == 0) {
        throw Error(Errc::invalid_count, "anchor count must be at least 1");
    }
    const auto& pts = contour.points;
    const std::size_t n = pts.size();

    std::vector<double> cumulative(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const PixelPoint& a = pts[i];
        const PixelPoint& b = pts[(i + 1) % n];
        const double dx = b.x - a.x;
        const double dy = b.y - a.y;
        cumulative[i + 1] = cumulative[i] + std::sqrt(dx * dx + dy * dy);
    }
    const double perimeter = cumulative[n];

    AnchorSet out;
    out.centroid = center;
    out.anchors.reserve(m);
    std::size_t seg = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const double s = perimeter * static_cast<double>(k) / static_cast<double>(m);
        while (seg + 1 < n && cumulative[seg + 1] <= s) {
            ++seg;
        }
        const PixelPoint& a = pts[seg];
        const PixelPoint& b = pts[(seg + 1) % n];
        const double len = cumulative[seg + 1] - cumulative[seg];
        const double t = len > 0.0 ? (s - cumulative[seg]) / len : 0.0;
        out.anchors.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
    return out;
}

AnchorSet anchors_from_mask(const Mask& mask, std::size_t m) {
    return sample_anchors(extract_contour(mask), m, centroid(mask));
}

Mask box_mask(int width, int height, int x0, int y0, int x1, int y1) {
    Mask out(width, height);
    for (int y = std::max(0, std::min(y0, y1)); y <= std::min(height - 1, std::max(y0, y1)); ++y) {
        for (int x = std::max(0, std::min(x0, x1)); x <= std::min(width - 1, std::max(x0, x1)); ++x) {
            out.set(x, y);
        }
    }
    return out;
}

namespace {

bool on_segment(Point2d p, Point2d a, Point2d b) {
    const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if (std::abs(cross) > 1e-9 * std::max(1.0, len)) {
        return false;
    }
    return p.x >= std::min(a.x, b.x) - 1e-9 && p.x <= std::max(a.x, b.x) + 1e-9 &&
           p.y >= std::min(a.y, b.y) - 1e-9 && p.y <= std::max(a.y, b.y) + 1e-9;
}

bool inside_or_on(Point2d p, std::span<const Point2d> poly) {
    const std::size_t n = poly.size();
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2d a = poly[i];
        const Point2d b = poly[j];
        if (on_segment(p, a, b)) {
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

} // namespace

Mask fill_polygon(int width, int height, std::span<const Point2d> polygon) {
    Mask out(width, height);
    if (polygon.empty()) {
        return out;
    }
    double min_x = polygon[0].x, max_x = polygon[0].x, min_y = polygon[0].y, max_y = polygon[0].y;
    for (const auto& p : polygon) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const int y_lo = std::max(0, static_cast<int>(std::floor(min_y)));
    const int y_hi = std::min(height - 1, static_cast<int>(std::ceil(max_y)));
    const int x_lo = std::max(0, static_cast<int>(std::floor(min_x)));
    const int x_hi = std::min(width - 1, static_cast<int>(std::ceil(max_x)));
    for (int y = y_lo; y <= y_hi; ++y) {
        for (int x = x_lo; x <= x_hi; ++x) {
            if (inside_or_on({static_cast<double>(x), static_cast<double>(y)}, polygon)) {
                out.set(x, y);
            }
        }
    }
    return out;
}

std::size_t intersection_count(const Mask& a, const Mask& b) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw Error(Errc::dimension_mismatch, "masks differ in size");
    }
    const auto ab = a.bits();
    const auto bb = b.bits();
    std::size_t n = 0;
    for (std::size_t i = 0; i < ab.size(); ++i) {
        n += static_cast<std::size_t>(ab[i] & bb[i]);
    }
    return n;
}

} // namespace vassoc
