#pragma once

#include <compare>
#include <cstdint>

namespace fransim {

using FileId = std::uint32_t;  // 1-based: files are 1..F

// A transmitter is either an F-AP (cellular) or a CE-D2D user (D2D link).
struct TransmitterId {
    enum class Kind : std::uint8_t { fap = 0, ced2d = 1 };
    Kind kind = Kind::fap;
    int index = 0;  // within kind

    static TransmitterId fap(int k) { return {Kind::fap, k}; }
    static TransmitterId ced2d(int n) { return {Kind::ced2d, n}; }

    bool is_fap() const { return kind == Kind::fap; }
    // Global ordering: F-APs first, then CE-D2D users, ascending.
    int global(int num_faps) const { return is_fap() ? index : num_faps + index; }

    friend auto operator<=>(const TransmitterId&, const TransmitterId&) = default;
};

}  // namespace fransim
