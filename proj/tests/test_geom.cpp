#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "fixtures.hpp"
#include "stabcut/geom.hpp"

using namespace stabcut;

namespace {

// independent reflex-segment construction: walk half-unit steps from each
// reflex vertex and extend while the open segment stays interior
std::set<std::pair<gseg, std::vector<point>>> brute_reflex(const polygon& poly) {
    std::map<gseg, std::vector<point>> found;
    for (const auto& ray : detail::reflex_rays(poly)) {
        coord dx = ray.dir == axis::horizontal ? ray.sign : 0;
        coord dy = ray.dir == axis::vertical ? ray.sign : 0;
        point e = ray.apex;
        while (true) {
            if (e != ray.apex &&
                detail::point2_in_polygon(poly, {2 * e.x, 2 * e.y}) !=
                    detail::containment::inside)
                break;
            point mid{2 * e.x + dx, 2 * e.y + dy};
            if (detail::point2_in_polygon(poly, mid) != detail::containment::inside) break;
            e = {e.x + dx, e.y + dy};
        }
        coord at = ray.dir == axis::horizontal ? ray.apex.y : ray.apex.x;
        coord a = ray.dir == axis::horizontal ? ray.apex.x : ray.apex.y;
        coord b = ray.dir == axis::horizontal ? e.x : e.y;
        gseg s{ray.dir, at, std::min(a, b), std::max(a, b)};
        found[s].push_back(ray.apex);
    }
    std::set<std::pair<gseg, std::vector<point>>> out;
    for (auto& [s, apexes] : found) {
        std::sort(apexes.begin(), apexes.end());
        out.insert({s, apexes});
    }
    return out;
}

std::set<std::pair<gseg, std::vector<point>>> info_as_set(const reflex_info& info) {
    std::set<std::pair<gseg, std::vector<point>>> out;
    for (const auto& rs : info.segments) out.insert({rs.s, rs.apexes});
    return out;
}

}  // namespace

TEST_CASE("validate accepts the fixtures") {
    CHECK(validate(fixtures::l1()).ok());
    CHECK(validate(fixtures::cross()).ok());
    CHECK(validate(fixtures::unit_square()).ok());
    CHECK(validate(fixtures::fig4d_shape()).ok());
    CHECK(validate(fixtures::notched_square()).ok());
}

TEST_CASE("validate rejects a reversed outer ring") {
    polygon p = fixtures::l1();
    std::reverse(p.outer.begin(), p.outer.end());
    auto d = validate(p);
    REQUIRE_FALSE(d.ok());
    bool found = false;
    for (const auto& v : d.violations)
        if (v.rule.find("orientation") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("validate rejects collinear and crossing rings") {
    polygon collinear{{{0, 0}, {1, 0}, {2, 0}, {2, 2}, {0, 2}, {0, 1}}, {}};
    CHECK_FALSE(validate(collinear).ok());

    polygon self_touching{{{0, 0}, {2, 0}, {2, 2}, {1, 2}, {1, 1}, {3, 1}, {3, 3}, {0, 3}}, {}};
    CHECK_FALSE(validate(self_touching).ok());

    polygon hole_outside{{{0, 0}, {2, 0}, {2, 2}, {0, 2}},
                         {{{3, 3}, {3, 4}, {4, 4}, {4, 3}}}};
    CHECK_FALSE(validate(hole_outside).ok());
}

TEST_CASE("reflex segments of L1") {
    auto info = reflex_segments(fixtures::l1());
    REQUIRE(info.segments.size() == 2);
    REQUIRE(info.vertices == std::vector<point>{{1, 1}});
    gseg h{axis::horizontal, 1, 0, 1};
    gseg v{axis::vertical, 1, 0, 1};
    CHECK(info.segments[0].s == h);
    CHECK(info.segments[1].s == v);
    for (const auto& rs : info.segments) {
        REQUIRE(rs.apexes.size() == 1);
        CHECK(rs.apexes[0] == point{1, 1});
    }
}

TEST_CASE("reflex segments of CROSS are four shared sides") {
    auto info = reflex_segments(fixtures::cross());
    REQUIRE(info.segments.size() == 4);
    for (const auto& rs : info.segments) {
        CHECK(rs.apexes.size() == 2);
        CHECK(rs.s.hi - rs.s.lo == 1);
    }
    CHECK(info.vertices.size() == 4);
}

TEST_CASE("reflex segments match the brute-force scan") {
    for (const polygon& p : {fixtures::l1(), fixtures::cross(), fixtures::fig4d_shape(),
                             fixtures::notched_square()}) {
        CHECK(info_as_set(reflex_segments(p)) == brute_reflex(p));
    }
}

TEST_CASE("maximality: half a unit past the far end leaves the interior") {
    for (const polygon& p : {fixtures::l1(), fixtures::cross(), fixtures::fig4d_shape(),
                             fixtures::notched_square()}) {
        auto info = reflex_segments(p);
        for (const auto& rs : info.segments) {
            for (int end = 0; end < 2; ++end) {
                coord e = end == 0 ? rs.s.lo : rs.s.hi;
                point ep = rs.s.dir == axis::horizontal ? point{e, rs.s.line}
                                                        : point{rs.s.line, e};
                bool is_apex = std::find(rs.apexes.begin(), rs.apexes.end(), ep) !=
                               rs.apexes.end();
                if (is_apex) continue;
                coord d = end == 0 ? -1 : 1;
                point beyond = rs.s.dir == axis::horizontal
                                   ? point{2 * e + d, 2 * rs.s.line}
                                   : point{2 * rs.s.line, 2 * e + d};
                CHECK(detail::point2_in_polygon(p, beyond) != detail::containment::inside);
            }
        }
    }
}

TEST_CASE("thinness") {
    CHECK(is_thin(fixtures::l1()));
    CHECK(is_thin(fixtures::cross()));
    CHECK(is_thin(fixtures::fig4d_shape()));
    CHECK_FALSE(is_thin(fixtures::notched_square()));
}

TEST_CASE("general position") {
    CHECK(is_general_position(fixtures::l1()));
    CHECK_FALSE(is_general_position(fixtures::cross()));  // (1,0),(1,1),(1,2),(1,3)
}

TEST_CASE("gates of CROSS are the four central sides; L1 has none") {
    auto cross_gates = find_gates(fixtures::cross());
    CHECK(cross_gates.size() == 4);
    CHECK(find_gates(fixtures::l1()).empty());
}

TEST_CASE("a shared segment with wedges on opposite sides is not a gate") {
    auto info = reflex_segments(fixtures::fig4d_shape());
    bool found_shared = false;
    for (const auto& rs : info.segments)
        if (rs.apexes.size() == 2) found_shared = true;
    CHECK(found_shared);
    CHECK(find_gates(info).empty());
}

TEST_CASE("crossing enumeration finds the notched square conflict") {
    auto info = reflex_segments(fixtures::notched_square());
    auto crossings = reflex_crossings(info);
    REQUIRE_FALSE(crossings.empty());
    for (auto [h, v] : crossings) {
        CHECK(info.segments[h].s.dir == axis::horizontal);
        CHECK(info.segments[v].s.dir == axis::vertical);
        CHECK(open_cross(info.segments[h].s, info.segments[v].s));
    }
}
