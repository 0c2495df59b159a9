// SPDX-License-Identifier: Apache-2.0
#include "vassoc/metrics.hpp"

#include "vassoc/assignment.hpp"
#include "vassoc/error.hpp"

#include <algorithm>
#include <string>

namespace vassoc {

namespace {

const Mask& lookup(const MaskStore& masks, const std::string& ref) {
    const auto it = masks.find(ref);
    if (it == masks.end()) {
        throw Error(Errc::invalid_argument, "no mask for reference '" + ref + "'");
    }
    return it->second;
}

struct TubeTable {
    std::vector<TrackKey> keys;
    std::vector<std::optional<int>> classes;
    std::vector<Tube> tubes;
};

TubeTable collect(const TrackSet& set, const MaskStore& masks) {
    TubeTable t;
    for (const auto& [key, track] : set.tracks()) {
        t.keys.push_back(key);
        t.classes.push_back(track.class_id);
        t.tubes.push_back(tube_of(track, masks));
    }
    return t;
}

// Per-frame areas and pairwise intersections over frames [0, length).
struct OverlapTable {
    int length = 0;
    std::vector<std::vector<std::size_t>> pred_area;
    std::vector<std::vector<std::size_t>> gt_area;
    std::vector<std::vector<std::vector<std::size_t>>> inter; // [pred][gt][frame]

    OverlapTable(const TubeTable& preds, const TubeTable& gts, int len) : length(len) {
        auto areas = [len](const Tube& tube) {
            std::vector<std::size_t> a(static_cast<std::size_t>(len), 0);
            for (const auto& [f, m] : tube) {
                if (f >= 0 && f < len) {
                    a[static_cast<std::size_t>(f)] = m.count();
                }
            }
            return a;
        };
        for (const auto& t : preds.tubes) {
            pred_area.push_back(areas(t));
        }
        for (const auto& t : gts.tubes) {
            gt_area.push_back(areas(t));
        }
        inter.assign(preds.tubes.size(), std::vector<std::vector<std::size_t>>(gts.tubes.size()));
        for (std::size_t p = 0; p < preds.tubes.size(); ++p) {
            for (std::size_t g = 0; g < gts.tubes.size(); ++g) {
                auto& row = inter[p][g];
                row.assign(static_cast<std::size_t>(len), 0);
                for (const auto& [f, pm] : preds.tubes[p]) {
                    const auto it = gts.tubes[g].find(f);
                    if (it != gts.tubes[g].end() && f >= 0 && f < len) {
                        if (pm.width() != it->second.width() || pm.height() != it->second.height()) {
                            throw Error(Errc::frame_mismatch, "masks at frame " + std::to_string(f) + " differ in size");
                        }
                        row[static_cast<std::size_t>(f)] = intersection_count(pm, it->second);
                    }
                }
            }
        }
    }

    double iou(std::size_t p, std::size_t g, int first, int last) const {
        std::size_t i = 0;
        std::size_t u = 0;
        for (int f = first; f < last; ++f) {
            const auto k = static_cast<std::size_t>(f);
            i += inter[p][g][k];
            u += pred_area[p][k] + gt_area[g][k] - inter[p][g][k];
        }
        return u == 0 ? 0.0 : static_cast<double>(i) / static_cast<double>(u);
    }

    static bool present(const std::vector<std::size_t>& area, int first, int last) {
        for (int f = first; f < last; ++f) {
            if (area[static_cast<std::size_t>(f)] > 0) {
                return true;
            }
        }
        return false;
    }
};

int max_frame(const TrackSet& set) {
    int m = -1;
    for (const auto& [key, track] : set.tracks()) {
        for (const auto& r : track.records) {
            m = std::max(m, r.frame);
        }
    }
    return m;
}

} // namespace

int video_length(const TrackSet& a, const TrackSet& b) {
    return std::max(max_frame(a), max_frame(b)) + 1;
}

Tube tube_of(const Track& track, const MaskStore& masks) {
    Tube tube;
    for (const auto& r : track.records) {
        tube.emplace(r.frame, lookup(masks, r.mask_ref));
    }
    return tube;
}

double tube_iou(const Tube& pred, const Tube& gt) {
    std::size_t inter = 0;
    std::size_t uni = 0;
    for (const auto& [f, pm] : pred) {
        const auto it = gt.find(f);
        if (it == gt.end()) {
            uni += pm.count();
            continue;
        }
        const Mask& gm = it->second;
        if (pm.width() != gm.width() || pm.height() != gm.height()) {
            throw Error(Errc::frame_mismatch, "tubes disagree on the size of frame " + std::to_string(f));
        }
        const std::size_t i = intersection_count(pm, gm);
        inter += i;
        uni += pm.count() + gm.count() - i;
    }
    for (const auto& [f, gm] : gt) {
        if (pred.find(f) == pred.end()) {
            uni += gm.count();
        }
    }
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<TubePair> match_tubes(const TrackSet& preds, const MaskStore& pred_masks, const TrackSet& gts,
                                  const MaskStore& gt_masks, double iou_floor) {
    const TubeTable p = collect(preds, pred_masks);
    const TubeTable g = collect(gts, gt_masks);
    AffinityMatrix ious(p.tubes.size(), g.tubes.size());
    for (std::size_t i = 0; i < p.tubes.size(); ++i) {
        for (std::size_t j = 0; j < g.tubes.size(); ++j) {
            ious.at(i, j) = tube_iou(p.tubes[i], g.tubes[j]);
        }
    }
    std::vector<TubePair> out;
    for (const auto& m : hungarian(ious)) {
        const double v = ious.at(m.row, m.col);
        if (v > iou_floor) {
            out.push_back({p.keys[m.row], g.keys[m.col], v});
        }
    }
    std::sort(out.begin(), out.end(), [](const TubePair& a, const TubePair& b) { return a.gt < b.gt; });
    return out;
}

double windowed_tube_pq(const TrackSet& preds, const MaskStore& pred_masks, const TrackSet& gts,
                        const MaskStore& gt_masks, int window) {
    const int length = video_length(preds, gts);
    if (window < 1) {
        throw Error(Errc::invalid_count, "window must be at least 1");
    }
    if (window > length) {
        throw Error(Errc::window_too_large,
                    "window " + std::to_string(window) + " exceeds video length " + std::to_string(length));
    }
    const TubeTable p = collect(preds, pred_masks);
    const TubeTable g = collect(gts, gt_masks);
    const OverlapTable table(p, g, length);

    double pq_sum = 0.0;
    int spans = 0;
    for (int first = 0; first + window <= length; ++first) {
        const int last = first + window;
        std::vector<char> pred_tp(p.tubes.size(), 0);
        std::size_t tp = 0;
        std::size_t fn = 0;
        double iou_sum = 0.0;
        for (std::size_t gi = 0; gi < g.tubes.size(); ++gi) {
            if (!OverlapTable::present(table.gt_area[gi], first, last)) {
                continue;
            }
            bool matched = false;
            for (std::size_t pi = 0; pi < p.tubes.size() && !matched; ++pi) {
                if (pred_tp[pi] || p.keys[pi].kind != g.keys[gi].kind ||
                    (p.classes[pi] && g.classes[gi] && *p.classes[pi] != *g.classes[gi])) {
                    continue;
                }
                const double v = table.iou(pi, gi, first, last);
                if (v > 0.5) {
                    pred_tp[pi] = 1;
                    matched = true;
                    ++tp;
                    iou_sum += v;
                }
            }
            if (!matched) {
                ++fn;
            }
        }
        std::size_t fp = 0;
        for (std::size_t pi = 0; pi < p.tubes.size(); ++pi) {
            if (!pred_tp[pi] && OverlapTable::present(table.pred_area[pi], first, last)) {
                ++fp;
            }
        }
        const double denom = static_cast<double>(tp) + 0.5 * static_cast<double>(fp) + 0.5 * static_cast<double>(fn);
        if (denom == 0.0) {
            continue;
        }
        pq_sum += iou_sum / denom;
        ++spans;
    }
    return spans == 0 ? 1.0 : pq_sum / spans;
}

TrackScore score_association(const TrackSet& preds, const MaskStore& pred_masks, const TrackSet& gts,
                             const MaskStore& gt_masks) {
    struct Detection {
        TrackKey key;
        const Mask* mask;
    };
    std::map<int, std::vector<Detection>> pred_by_frame;
    for (const auto& [key, track] : preds.tracks()) {
        for (const auto& r : track.records) {
            pred_by_frame[r.frame].push_back({key, &lookup(pred_masks, r.mask_ref)});
        }
    }

    TrackScore score;
    std::size_t correct = 0;
    for (const auto& [gkey, track] : gts.tracks()) {
        std::vector<TrackKey> assigned;
        for (const auto& r : track.records) {
            const Mask& gm = lookup(gt_masks, r.mask_ref);
            const auto it = pred_by_frame.find(r.frame);
            if (it == pred_by_frame.end()) {
                continue;
            }
            const Detection* best = nullptr;
            double best_iou = 0.5;
            for (const auto& d : it->second) {
                if (d.mask->width() != gm.width() || d.mask->height() != gm.height()) {
                    throw Error(Errc::frame_mismatch, "masks at frame " + std::to_string(r.frame) + " differ in size");
                }
                const std::size_t i = intersection_count(*d.mask, gm);
                const std::size_t u = d.mask->count() + gm.count() - i;
                const double v = u == 0 ? 0.0 : static_cast<double>(i) / static_cast<double>(u);
                if (v > best_iou) {
                    best_iou = v;
                    best = &d;
                }
            }
            if (best != nullptr) {
                assigned.push_back(best->key);
            }
        }
        for (std::size_t k = 1; k < assigned.size(); ++k) {
            if (assigned[k] != assigned[k - 1]) {
                ++score.id_switches;
            }
        }
        std::map<TrackKey, std::size_t> votes;
        for (const auto& key : assigned) {
            ++votes[key];
        }
        std::size_t majority = 0;
        for (const auto& [key, n] : votes) {
            majority = std::max(majority, n);
        }
        correct += majority;
        score.matched_detections += assigned.size();
    }
    score.association_accuracy =
        score.matched_detections == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(score.matched_detections);
    score.matched_pairs = match_tubes(preds, pred_masks, gts, gt_masks);
    return score;
}

} // namespace vassoc
