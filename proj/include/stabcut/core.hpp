#ifndef STABCUT_CORE_HPP
#define STABCUT_CORE_HPP

#include <cassert>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace stabcut {

// All geometry lives on the integer grid. Where half-unit offsets are needed
// (stabbing-class representatives, interior sample points) we double every
// coordinate instead of introducing an epsilon, so arithmetic stays exact.
using coord = std::int64_t;

struct point {
    coord x = 0;
    coord y = 0;
    auto operator<=>(const point&) const = default;
};

enum class axis : unsigned char { horizontal, vertical };

inline axis other(axis a) {
    return a == axis::horizontal ? axis::vertical : axis::horizontal;
}

// Axis-aligned segment: lies on `line` of the perpendicular coordinate and
// spans [lo, hi] along its own direction. Openness of the span is decided by
// the user of the struct (reflex segments and stabbing segments are open,
// polygon edges are closed).
struct gseg {
    axis dir = axis::horizontal;
    coord line = 0;  // y for horizontal, x for vertical
    coord lo = 0;
    coord hi = 0;
    auto operator<=>(const gseg&) const = default;
};

inline point seg_lo_point(const gseg& s) {
    return s.dir == axis::horizontal ? point{s.lo, s.line} : point{s.line, s.lo};
}

inline point seg_hi_point(const gseg& s) {
    return s.dir == axis::horizontal ? point{s.hi, s.line} : point{s.line, s.hi};
}

// Proper crossing of the two open segments (perpendicular orientations).
inline bool open_cross(const gseg& h, const gseg& v) {
    assert(h.dir == axis::horizontal && v.dir == axis::vertical);
    return h.lo < v.line && v.line < h.hi && v.lo < h.line && h.line < v.hi;
}

struct grect {
    coord x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // x0 < x1, y0 < y1
    auto operator<=>(const grect&) const = default;
};

inline __int128 rect_area(const grect& r) {
    return static_cast<__int128>(r.x1 - r.x0) * static_cast<__int128>(r.y1 - r.y0);
}

inline std::string point_str(const point& p) {
    return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")";
}

}  // namespace stabcut

#endif
