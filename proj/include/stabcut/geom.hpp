#ifndef STABCUT_GEOM_HPP
#define STABCUT_GEOM_HPP

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stabcut/core.hpp"
#include "stabcut/rayshoot.hpp"

namespace stabcut {

// Rectilinear polygon on the integer grid: one outer ring (counterclockwise)
// plus hole rings (clockwise), so the interior is on the left of every
// traversal. Ring index 0 is the outer ring, i >= 1 is holes[i-1].
struct polygon {
    std::vector<point> outer;
    std::vector<std::vector<point>> holes;

    std::size_t ring_count() const { return holes.size() + 1; }
    const std::vector<point>& ring(std::size_t i) const {
        return i == 0 ? outer : holes[i - 1];
    }
    std::size_t vertex_count() const {
        std::size_t n = outer.size();
        for (const auto& h : holes) n += h.size();
        return n;
    }
};

struct violation {
    int ring = 0;  // 0 = outer, i >= 1 = hole i-1
    int edge = -1;
    std::string rule;
};

struct diagnostics {
    std::vector<violation> violations;
    bool ok() const { return violations.empty(); }
    std::string str() const {
        std::string s;
        for (const auto& v : violations) {
            s += "ring " + std::to_string(v.ring) + " edge " + std::to_string(v.edge) + ": " +
                 v.rule + "\n";
        }
        return s;
    }
};

namespace detail {

inline __int128 ring_area2(const std::vector<point>& r) {
    __int128 a = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const point& p = r[i];
        const point& q = r[(i + 1) % r.size()];
        a += static_cast<__int128>(p.x) * q.y - static_cast<__int128>(q.x) * p.y;
    }
    return a;
}

struct sweep_item {
    coord line = 0;  // y for horizontal items, x for vertical
    coord lo = 0;
    coord hi = 0;
    bool open = false;
    std::uint32_t id = 0;
};

// Reports every contact between a horizontal and a vertical item, honoring
// each item's open/closed span semantics. Runs in O((n + hits) log n).
template <typename F>
void sweep_hv_contacts(const std::vector<sweep_item>& hs, const std::vector<sweep_item>& vs,
                       F&& report) {
    // phases at equal x: closed-activate < open-deactivate < query < closed-deactivate
    // < open-activate
    struct event {
        coord x;
        int phase;
        std::uint32_t idx;
        bool operator<(const event& o) const { return std::tie(x, phase) < std::tie(o.x, o.phase); }
    };
    std::vector<event> evs;
    evs.reserve(hs.size() * 2 + vs.size());
    for (std::uint32_t i = 0; i < hs.size(); ++i) {
        const auto& h = hs[i];
        if (h.open) {
            evs.push_back({h.lo, 4, i});
            evs.push_back({h.hi, 1, i});
        } else {
            evs.push_back({h.lo, 0, i});
            evs.push_back({h.hi, 3, i});
        }
    }
    for (std::uint32_t i = 0; i < vs.size(); ++i) evs.push_back({vs[i].line, 2, i});
    std::sort(evs.begin(), evs.end());
    std::set<std::pair<coord, std::uint32_t>> active;  // (y, h index)
    for (const auto& ev : evs) {
        if (ev.phase == 0 || ev.phase == 4) {
            active.emplace(hs[ev.idx].line, ev.idx);
        } else if (ev.phase == 1 || ev.phase == 3) {
            active.erase({hs[ev.idx].line, ev.idx});
        } else {
            const auto& v = vs[ev.idx];
            auto it = v.open ? active.upper_bound({v.lo, UINT32_MAX})
                             : active.lower_bound({v.lo, 0});
            for (; it != active.end(); ++it) {
                if (v.open ? it->first >= v.hi : it->first > v.hi) break;
                report(it->second, ev.idx);
            }
        }
    }
}

enum class containment { inside, outside, boundary };

// Parity test in doubled coordinates: ring vertices are implicitly scaled by
// two so p2 may sit between grid lines.
inline containment point2_in_ring(const std::vector<point>& ring, point p2) {
    bool in = false;
    std::size_t m = ring.size();
    for (std::size_t i = 0; i < m; ++i) {
        point a = ring[i], b = ring[(i + 1) % m];
        coord ax = 2 * a.x, ay = 2 * a.y, bx = 2 * b.x, by = 2 * b.y;
        if (ax == bx) {  // vertical edge
            coord ylo = std::min(ay, by), yhi = std::max(ay, by);
            if (ax == p2.x && ylo <= p2.y && p2.y <= yhi) return containment::boundary;
            if (ax > p2.x && ylo <= p2.y && p2.y < yhi) in = !in;
        } else {  // horizontal edge
            coord xlo = std::min(ax, bx), xhi = std::max(ax, bx);
            if (ay == p2.y && xlo <= p2.x && p2.x <= xhi) return containment::boundary;
        }
    }
    return in ? containment::inside : containment::outside;
}

inline containment point2_in_polygon(const polygon& poly, point p2) {
    containment c = point2_in_ring(poly.outer, p2);
    if (c != containment::inside) return c;
    for (const auto& h : poly.holes) {
        containment ch = point2_in_ring(h, p2);
        if (ch == containment::boundary) return containment::boundary;
        if (ch == containment::inside) return containment::outside;
    }
    return containment::inside;
}

}  // namespace detail

// Verifies every structural invariant; an empty violation list means ok.
inline diagnostics validate(const polygon& poly) {
    diagnostics d;
    auto bad = [&](int ring, int edge, std::string rule) {
        d.violations.push_back({ring, edge, std::move(rule)});
    };

    for (std::size_t r = 0; r < poly.ring_count(); ++r) {
        const auto& ring = poly.ring(r);
        int ri = static_cast<int>(r);
        if (ring.size() < 4) {
            bad(ri, -1, "ring has fewer than 4 vertices");
            return d;
        }
        if (ring.size() % 2 != 0) bad(ri, -1, "odd vertex count");
        for (std::size_t i = 0; i < ring.size(); ++i) {
            const point& a = ring[i];
            const point& b = ring[(i + 1) % ring.size()];
            if (a == b) {
                bad(ri, static_cast<int>(i), "zero-length edge");
                return d;
            }
            if (a.x != b.x && a.y != b.y) {
                bad(ri, static_cast<int>(i), "edge not axis-aligned");
                return d;
            }
        }
        for (std::size_t i = 0; i < ring.size(); ++i) {
            const point& a = ring[i];
            const point& b = ring[(i + 1) % ring.size()];
            const point& c = ring[(i + 2) % ring.size()];
            bool e1h = a.y == b.y, e2h = b.y == c.y;
            if (e1h == e2h) bad(ri, static_cast<int>(i), "collinear consecutive edges");
        }
    }
    if (!d.ok()) return d;

    // orientation conventions are verified, not assumed
    if (detail::ring_area2(poly.outer) <= 0) bad(0, -1, "outer ring orientation (must be ccw)");
    for (std::size_t h = 0; h < poly.holes.size(); ++h)
        if (detail::ring_area2(poly.holes[h]) >= 0)
            bad(static_cast<int>(h + 1), -1, "hole ring orientation (must be cw)");

    // simplicity and pairwise ring disjointness: no two same-orientation edges
    // may touch, and perpendicular edges may only touch at a shared ring vertex
    struct edge_id {
        int ring;
        int edge;
    };
    std::vector<detail::sweep_item> hs, vs;
    std::vector<edge_id> h_ids, v_ids;
    for (std::size_t r = 0; r < poly.ring_count(); ++r) {
        const auto& ring = poly.ring(r);
        for (std::size_t i = 0; i < ring.size(); ++i) {
            point a = ring[i], b = ring[(i + 1) % ring.size()];
            if (a.y == b.y) {
                hs.push_back({a.y, std::min(a.x, b.x), std::max(a.x, b.x), false,
                              static_cast<std::uint32_t>(hs.size())});
                h_ids.push_back({static_cast<int>(r), static_cast<int>(i)});
            } else {
                vs.push_back({a.x, std::min(a.y, b.y), std::max(a.y, b.y), false,
                              static_cast<std::uint32_t>(vs.size())});
                v_ids.push_back({static_cast<int>(r), static_cast<int>(i)});
            }
        }
    }
    auto check_parallel_overlaps = [&](std::vector<detail::sweep_item> items,
                                       const std::vector<edge_id>& ids) {
        std::sort(items.begin(), items.end(),
                  [](const detail::sweep_item& a, const detail::sweep_item& b) {
                      return std::tie(a.line, a.lo) < std::tie(b.line, b.lo);
                  });
        for (std::size_t i = 1; i < items.size(); ++i) {
            if (items[i].line != items[i - 1].line) continue;
            if (items[i].lo <= items[i - 1].hi)
                bad(ids[items[i].id].ring, ids[items[i].id].edge,
                    "parallel edges touch or overlap");
        }
    };
    check_parallel_overlaps(hs, h_ids);
    check_parallel_overlaps(vs, v_ids);

    detail::sweep_hv_contacts(hs, vs, [&](std::uint32_t hi, std::uint32_t vi) {
        edge_id he = h_ids[hi], ve = v_ids[vi];
        point contact{vs[vi].line, hs[hi].line};
        if (he.ring == ve.ring) {
            const auto& ring = poly.ring(he.ring);
            int m = static_cast<int>(ring.size());
            bool consecutive = (he.edge + 1) % m == ve.edge || (ve.edge + 1) % m == he.edge;
            if (consecutive) {
                // shared vertex is the head of the earlier edge
                int first = (he.edge + 1) % m == ve.edge ? he.edge : ve.edge;
                if (ring[(first + 1) % m] == contact) return;
            }
        }
        bad(he.ring, he.edge, "perpendicular edges cross or touch at " + point_str(contact));
    });
    if (!d.ok()) return d;

    // holes strictly inside the outer ring, and not nested in each other
    for (std::size_t h = 0; h < poly.holes.size(); ++h) {
        point v2{2 * poly.holes[h][0].x, 2 * poly.holes[h][0].y};
        if (detail::point2_in_ring(poly.outer, v2) != detail::containment::inside)
            bad(static_cast<int>(h + 1), -1, "hole not strictly inside outer ring");
        for (std::size_t g = 0; g < poly.holes.size(); ++g) {
            if (g == h) continue;
            if (detail::point2_in_ring(poly.holes[g], v2) == detail::containment::inside)
                bad(static_cast<int>(h + 1), -1, "hole nested inside another hole");
        }
    }
    return d;
}

// Maximal open axis-aligned segment with a reflex vertex at one endpoint. A
// segment whose far end lands on another reflex vertex is shared: both apexes
// are recorded and the canonical entry is kept once.
struct reflex_segment {
    gseg s;                       // open span
    std::vector<point> apexes;    // 1 or 2, sorted
    std::vector<int> apex_side;   // per apex: side of the apex's wedge (+1/-1 across s)
};

// A shared reflex segment whose two wedge-pixels lie on the same side.
struct gate {
    int segment_id = -1;
    point p, q;
    int side = 0;  // +1: wedge-pixels above/right of the segment, -1: below/left
};

struct reflex_info {
    std::vector<reflex_segment> segments;       // canonical order; index is the id
    std::vector<point> vertices;                // reflex vertices, sorted
    std::map<point, std::array<int, 2>> by_apex;  // apex -> {horizontal id, vertical id}

    int id_of(point apex, axis dir) const {
        auto it = by_apex.find(apex);
        if (it == by_apex.end()) return -1;
        return it->second[dir == axis::horizontal ? 0 : 1];
    }
};

namespace detail {

struct reflex_ray {
    point apex;
    axis dir;       // orientation of the emitted segment
    int sign;       // emitted direction along dir (+1/-1)
    int perp_sign;  // direction of the apex's other reflex segment (wedge side)
};

inline std::vector<reflex_ray> reflex_rays(const polygon& poly) {
    std::vector<reflex_ray> rays;
    for (std::size_t r = 0; r < poly.ring_count(); ++r) {
        const auto& ring = poly.ring(r);
        std::size_t m = ring.size();
        for (std::size_t i = 0; i < m; ++i) {
            point prev = ring[(i + m - 1) % m];
            point cur = ring[i];
            point next = ring[(i + 1) % m];
            coord ux = cur.x - prev.x, uy = cur.y - prev.y;
            coord vx = next.x - cur.x, vy = next.y - cur.y;
            auto sgn = [](coord c) { return c > 0 ? 1 : (c < 0 ? -1 : 0); };
            // interior is on the left; a right turn marks a reflex vertex
            __int128 cross = static_cast<__int128>(ux) * vy - static_cast<__int128>(uy) * vx;
            if (cross >= 0) continue;
            if (uy == 0) {
                // incoming horizontal: h extends it, v extends the outgoing edge backwards
                rays.push_back({cur, axis::horizontal, sgn(ux), -sgn(vy)});
                rays.push_back({cur, axis::vertical, -sgn(vy), sgn(ux)});
            } else {
                rays.push_back({cur, axis::vertical, sgn(uy), -sgn(vx)});
                rays.push_back({cur, axis::horizontal, -sgn(vx), sgn(uy)});
            }
        }
    }
    return rays;
}

}  // namespace detail

// Builds both reflex segments of every reflex vertex, deduplicated by
// geometry. O(n log^2 n) via boundary ray shooting.
inline reflex_info reflex_segments(const polygon& poly) {
    reflex_info info;
    auto rays = detail::reflex_rays(poly);

    // boundary edges as closed obstacles, one store per orientation
    std::vector<ray_segment> h_edges, v_edges;
    for (std::size_t r = 0; r < poly.ring_count(); ++r) {
        const auto& ring = poly.ring(r);
        for (std::size_t i = 0; i < ring.size(); ++i) {
            point a = ring[i], b = ring[(i + 1) % ring.size()];
            if (a.y == b.y)
                h_edges.push_back({a.y, std::min(a.x, b.x), std::max(a.x, b.x), false});
            else
                v_edges.push_back({a.x, std::min(a.y, b.y), std::max(a.y, b.y), false});
        }
    }
    ray_shooter h_store(std::move(h_edges));  // blocks vertical rays
    ray_shooter v_store(std::move(v_edges));  // blocks horizontal rays

    std::map<gseg, std::size_t> index;
    for (const auto& ray : rays) {
        const ray_shooter& store = ray.dir == axis::horizontal ? v_store : h_store;
        coord at = ray.dir == axis::horizontal ? ray.apex.y : ray.apex.x;
        coord from = ray.dir == axis::horizontal ? ray.apex.x : ray.apex.y;
        auto hit = store.first_hit(at, from, ray.sign > 0);
        assert(hit && "reflex ray must hit the boundary");
        gseg s{ray.dir, at, std::min(from, hit->line), std::max(from, hit->line)};
        auto [it, fresh] = index.try_emplace(s, info.segments.size());
        if (fresh) info.segments.push_back({s, {}, {}});
        auto& seg = info.segments[it->second];
        seg.apexes.push_back(ray.apex);
        seg.apex_side.push_back(ray.perp_sign);
    }

    // canonical order: orientation, then line, then span
    std::vector<std::size_t> order(info.segments.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return info.segments[a].s < info.segments[b].s;
    });
    std::vector<reflex_segment> sorted;
    sorted.reserve(order.size());
    for (std::size_t i : order) sorted.push_back(std::move(info.segments[i]));
    info.segments = std::move(sorted);

    for (std::size_t id = 0; id < info.segments.size(); ++id) {
        auto& seg = info.segments[id];
        assert(seg.apexes.size() <= 2);
        if (seg.apexes.size() == 2 && seg.apexes[1] < seg.apexes[0]) {
            std::swap(seg.apexes[0], seg.apexes[1]);
            std::swap(seg.apex_side[0], seg.apex_side[1]);
        }
        for (const point& a : seg.apexes) {
            auto [it, _] = info.by_apex.try_emplace(a, std::array<int, 2>{-1, -1});
            it->second[seg.s.dir == axis::horizontal ? 0 : 1] = static_cast<int>(id);
        }
    }
    for (const auto& [p, ids] : info.by_apex) {
        assert(ids[0] >= 0 && ids[1] >= 0 && "reflex vertex must have both segments");
        info.vertices.push_back(p);
    }
    return info;
}

// No two reflex segments share a point. Shared apexes do not count: only
// proper crossings of the open segments can occur (collinear maximal segments
// coincide and were deduplicated).
inline bool is_thin(const polygon& poly, const reflex_info& info) {
    std::vector<detail::sweep_item> hs, vs;
    for (std::uint32_t i = 0; i < info.segments.size(); ++i) {
        const gseg& s = info.segments[i].s;
        (s.dir == axis::horizontal ? hs : vs).push_back({s.line, s.lo, s.hi, true, i});
    }
    bool thin = true;
    detail::sweep_hv_contacts(hs, vs, [&](std::uint32_t, std::uint32_t) { thin = false; });
    return thin;
}

inline bool is_thin(const polygon& poly) { return is_thin(poly, reflex_segments(poly)); }

// Every crossing pair of open reflex segments, as (horizontal id, vertical id).
inline std::vector<std::pair<int, int>> reflex_crossings(const reflex_info& info) {
    std::vector<detail::sweep_item> hs, vs;
    for (std::uint32_t i = 0; i < info.segments.size(); ++i) {
        const gseg& s = info.segments[i].s;
        (s.dir == axis::horizontal ? hs : vs).push_back({s.line, s.lo, s.hi, true, i});
    }
    std::vector<std::pair<int, int>> out;
    detail::sweep_hv_contacts(hs, vs, [&](std::uint32_t h, std::uint32_t v) {
        out.emplace_back(static_cast<int>(hs[h].id), static_cast<int>(vs[v].id));
    });
    std::sort(out.begin(), out.end());
    return out;
}

// No three polygon vertices on one axis-aligned line.
inline bool is_general_position(const polygon& poly) {
    std::map<coord, int> xs, ys;
    for (std::size_t r = 0; r < poly.ring_count(); ++r) {
        for (const point& p : poly.ring(r)) {
            if (++xs[p.x] >= 3 || ++ys[p.y] >= 3) return false;
        }
    }
    return true;
}

// A gate is a shared reflex segment whose two apex wedges open to the same
// side of it.
inline std::vector<gate> find_gates(const reflex_info& info) {
    std::vector<gate> gates;
    for (std::size_t id = 0; id < info.segments.size(); ++id) {
        const auto& seg = info.segments[id];
        if (seg.apexes.size() == 2 && seg.apex_side[0] == seg.apex_side[1]) {
            gates.push_back({static_cast<int>(id), seg.apexes[0], seg.apexes[1],
                             seg.apex_side[0]});
        }
    }
    return gates;
}

inline std::vector<gate> find_gates(const polygon& poly) {
    return find_gates(reflex_segments(poly));
}

}  // namespace stabcut

#endif
