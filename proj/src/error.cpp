// SPDX-License-Identifier: Apache-2.0
#include "vassoc/error.hpp"

namespace vassoc {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::empty_mask: return "EmptyMask";
    case Errc::out_of_bounds: return "OutOfBounds";
    case Errc::invalid_count: return "InvalidCount";
    case Errc::empty_anchors: return "EmptyAnchors";
    case Errc::missing_context: return "MissingContext";
    case Errc::config_mismatch: return "ConfigMismatch";
    case Errc::zero_reference: return "ZeroReference";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::missing_descriptor: return "MissingDescriptor";
    case Errc::frame_order: return "FrameOrder";
    case Errc::mode_mismatch: return "ModeMismatch";
    case Errc::missing_bank: return "MissingBank";
    case Errc::duplicate_class: return "DuplicateClass";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::malformed_indicator: return "MalformedIndicator";
    case Errc::unknown_anchor: return "UnknownAnchor";
    case Errc::missing_class: return "MissingClass";
    case Errc::frame_mismatch: return "FrameMismatch";
    case Errc::window_too_large: return "WindowTooLarge";
    case Errc::degenerate_shape: return "DegenerateShape";
    case Errc::unknown_track: return "UnknownTrack";
    case Errc::parse_error: return "ParseError";
    case Errc::io_error: return "IoError";
    case Errc::count_mismatch: return "CountMismatch";
    case Errc::video_mismatch: return "VideoMismatch";
    }
    return "Unknown";
}

} // namespace vassoc
