// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vassoc {

enum class Errc {
    invalid_argument,
    empty_mask,
    out_of_bounds,
    invalid_count,
    empty_anchors,
    missing_context,
    config_mismatch,
    zero_reference,
    dimension_mismatch,
    missing_descriptor,
    frame_order,
    mode_mismatch,
    missing_bank,
    duplicate_class,
    shape_mismatch,
    malformed_indicator,
    unknown_anchor,
    missing_class,
    frame_mismatch,
    window_too_large,
    degenerate_shape,
    unknown_track,
    parse_error,
    io_error,
    count_mismatch,
    video_mismatch,
};

std::string_view errc_name(Errc code) noexcept;

/// Exception carrying a machine-readable error code; every failure in the
/// library is reported through this type.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code), detail_(what) {}

    Errc code() const noexcept { return code_; }
    /// Message without the code prefix.
    const std::string& detail() const noexcept { return detail_; }

    /// Same code, message prefixed with `where`.
    Error within(const std::string& where) const { return Error(code_, where + ": " + detail_); }

private:
    Errc code_;
    std::string detail_;
};

} // namespace vassoc
