#ifndef STABCUT_TESTS_FIXTURES_HPP
#define STABCUT_TESTS_FIXTURES_HPP

#include "stabcut/geom.hpp"

namespace fixtures {

using stabcut::polygon;

// L-shape, one reflex vertex at (1,1)
inline polygon l1() {
    return {{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}, {}};
}

// plus shape, four reflex vertices around the central unit square
inline polygon cross() {
    return {{{1, 0}, {2, 0}, {2, 1}, {3, 1}, {3, 2}, {2, 2}, {2, 3}, {1, 3}, {1, 2},
             {0, 2}, {0, 1}, {1, 1}},
            {}};
}

inline polygon unit_square() {
    return {{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {}};
}

// two reflex vertices joined by a shared horizontal segment whose wedges open
// to opposite sides: not a gate
inline polygon fig4d_shape() {
    return {{{0, 0}, {2, 0}, {2, 1}, {3, 1}, {3, 3}, {1, 3}, {1, 1}, {0, 1}}, {}};
}

// 4x4 square with a bottom notch and a right notch whose reflex segments
// cross: not thin
inline polygon notched_square() {
    return {{{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 0}, {4, 0}, {4, 2}, {3, 2}, {3, 3},
             {4, 3}, {4, 4}, {0, 4}},
            {}};
}

}  // namespace fixtures

#endif
