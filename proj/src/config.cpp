// SPDX-License-Identifier: Apache-2.0
#include "vassoc/config.hpp"

#include "vassoc/error.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace vassoc {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view text, const std::string& where) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw Error(Errc::parse_error, where + ": '" + std::string(text) + "' is not a valid number");
    }
    return value;
}

double parse_real(std::string_view text, const std::string& where) {
    const double v = parse_number<double>(text, where);
    if (!std::isfinite(v)) {
        throw Error(Errc::parse_error, where + ": value must be finite");
    }
    return v;
}

bool parse_bool(std::string_view text, const std::string& where) {
    if (text == "true" || text == "1" || text == "yes") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no") {
        return false;
    }
    throw Error(Errc::parse_error, where + ": '" + std::string(text) + "' is not a boolean");
}

std::string real_text(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

} // namespace

std::string_view to_string(PipelineMode mode) noexcept {
    switch (mode) {
    case PipelineMode::automatic: return "auto";
    case PipelineMode::instance: return "instance";
    case PipelineMode::semantic: return "semantic";
    case PipelineMode::panoptic: return "panoptic";
    case PipelineMode::exemplar: return "exemplar";
    }
    return "auto";
}

void PipelineConfig::validate() const {
    descriptor.validate();
    if (anchors < 1) {
        throw Error(Errc::invalid_argument, "anchors must be positive");
    }
    if (!(tau > 0.0)) {
        throw Error(Errc::invalid_argument, "tau must be positive");
    }
    if (n_q < 1) {
        throw Error(Errc::invalid_argument, "n_q must be positive");
    }
    if (!(momentum >= 0.0 && momentum <= 1.0)) {
        throw Error(Errc::invalid_argument, "momentum must lie in [0, 1]");
    }
    if (window < 1) {
        throw Error(Errc::invalid_argument, "window must be positive");
    }
    if (threads < 1) {
        throw Error(Errc::invalid_argument, "threads must be positive");
    }
}

PipelineConfig parse_config(std::string_view text, const std::string& origin) {
    PipelineConfig cfg;
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) {
            eol = text.size();
        }
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const std::string where = origin + ":" + std::to_string(line_no);
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(Errc::parse_error, where + ": expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (!seen.insert(key).second) {
            throw Error(Errc::parse_error, where + ": duplicate key '" + key + "'");
        }

        if (key == "anchors") {
            cfg.anchors = parse_number<std::size_t>(value, where);
        } else if (key == "u") {
            cfg.descriptor.u = parse_number<std::size_t>(value, where);
        } else if (key == "v") {
            cfg.descriptor.v = parse_number<std::size_t>(value, where);
        } else if (key == "d_model") {
            cfg.descriptor.d_model = parse_number<std::size_t>(value, where);
        } else if (key == "grid_extent") {
            if (value == "object_scale") {
                cfg.descriptor.grid_extent = GridExtent::object_scale;
            } else if (value == "image_scale") {
                cfg.descriptor.grid_extent = GridExtent::image_scale;
            } else {
                throw Error(Errc::parse_error, where + ": unknown grid_extent '" + std::string(value) + "'");
            }
        } else if (key == "radius_margin") {
            cfg.descriptor.radius_margin = parse_real(value, where);
        } else if (key == "negative_mode") {
            if (value == "image_bounds") {
                cfg.descriptor.negative_mode = NegativeMode::image_bounds;
            } else if (value == "target_mask") {
                cfg.descriptor.negative_mode = NegativeMode::target_mask;
            } else if (value == "mask_union") {
                cfg.descriptor.negative_mode = NegativeMode::mask_union;
            } else {
                throw Error(Errc::parse_error, where + ": unknown negative_mode '" + std::string(value) + "'");
            }
        } else if (key == "use_spa") {
            cfg.match.use_spa = parse_bool(value, where);
        } else if (key == "affinity_floor") {
            cfg.match.affinity_floor = parse_real(value, where);
        } else if (key == "new_track_policy") {
            if (value == "spawn") {
                cfg.match.new_track_policy = NewTrackPolicy::spawn;
            } else if (value == "drop") {
                cfg.match.new_track_policy = NewTrackPolicy::drop;
            } else {
                throw Error(Errc::parse_error, where + ": unknown new_track_policy '" + std::string(value) + "'");
            }
        } else if (key == "tau") {
            cfg.tau = parse_real(value, where);
        } else if (key == "n_q") {
            cfg.n_q = parse_number<std::size_t>(value, where);
        } else if (key == "momentum") {
            cfg.momentum = parse_real(value, where);
        } else if (key == "mode") {
            bool found = false;
            for (auto m : {PipelineMode::automatic, PipelineMode::instance, PipelineMode::semantic,
                           PipelineMode::panoptic, PipelineMode::exemplar}) {
                if (value == to_string(m)) {
                    cfg.mode = m;
                    found = true;
                }
            }
            if (!found) {
                throw Error(Errc::parse_error, where + ": unknown mode '" + std::string(value) + "'");
            }
        } else if (key == "window") {
            cfg.window = parse_number<int>(value, where);
        } else if (key == "iou_floor") {
            cfg.iou_floor = parse_real(value, where);
        } else if (key == "seed") {
            cfg.seed = parse_number<std::uint64_t>(value, where);
        } else if (key == "threads") {
            cfg.threads = parse_number<unsigned>(value, where);
        } else {
            throw Error(Errc::parse_error, where + ": unknown key '" + key + "'");
        }
    }
    try {
        cfg.validate();
    } catch (const Error& e) {
        throw Error(Errc::parse_error, origin + ": " + e.detail());
    }
    return cfg;
}

std::string format_config(const PipelineConfig& cfg) {
    std::ostringstream out;
    out << "anchors = " << cfg.anchors << '\n'
        << "u = " << cfg.descriptor.u << '\n'
        << "v = " << cfg.descriptor.v << '\n'
        << "d_model = " << cfg.descriptor.d_model << '\n'
        << "grid_extent = "
        << (cfg.descriptor.grid_extent == GridExtent::object_scale ? "object_scale" : "image_scale") << '\n'
        << "radius_margin = " << real_text(cfg.descriptor.radius_margin) << '\n'
        << "negative_mode = "
        << (cfg.descriptor.negative_mode == NegativeMode::image_bounds ? "image_bounds"
            : cfg.descriptor.negative_mode == NegativeMode::target_mask ? "target_mask"
                                                                       : "mask_union")
        << '\n'
        << "use_spa = " << (cfg.match.use_spa ? "true" : "false") << '\n'
        << "affinity_floor = " << real_text(cfg.match.affinity_floor) << '\n'
        << "new_track_policy = " << (cfg.match.new_track_policy == NewTrackPolicy::spawn ? "spawn" : "drop") << '\n'
        << "tau = " << real_text(cfg.tau) << '\n'
        << "n_q = " << cfg.n_q << '\n'
        << "momentum = " << real_text(cfg.momentum) << '\n'
        << "mode = " << to_string(cfg.mode) << '\n'
        << "window = " << cfg.window << '\n'
        << "iou_floor = " << real_text(cfg.iou_floor) << '\n'
        << "seed = " << cfg.seed << '\n'
        << "threads = " << cfg.threads << '\n';
    return out.str();
}

} // namespace vassoc
