#ifndef STABCUT_PARTITION_HPP
#define STABCUT_PARTITION_HPP

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "stabcut/geom.hpp"
#include "stabcut/grid.hpp"
#include "stabcut/pixelation.hpp"

namespace stabcut {

// A conforming partition, described by the chosen reflex segments.
struct conforming_partition {
    std::vector<int> chosen;  // canonical ids, sorted, unique

    void normalize() {
        std::sort(chosen.begin(), chosen.end());
        chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
    }
};

struct rect_partition {
    std::vector<grect> rects;
};

struct check_result {
    bool ok = true;
    std::string message;
};

// Conforming = every reflex vertex covered by a chosen segment with that
// apex, and no two chosen open segments intersect.
inline check_result check_conforming(const reflex_info& info, const conforming_partition& cp) {
    std::vector<char> flag(info.segments.size(), 0);
    for (int id : cp.chosen) {
        if (id < 0 || id >= static_cast<int>(info.segments.size()))
            return {false, "unknown segment id " + std::to_string(id)};
        flag[id] = 1;
    }
    for (const point& p : info.vertices) {
        auto ids = info.by_apex.at(p);
        if (!flag[ids[0]] && !flag[ids[1]])
            return {false, "uncovered reflex vertex " + point_str(p)};
    }
    std::vector<detail::sweep_item> hs, vs;
    for (int id : cp.chosen) {
        const gseg& s = info.segments[id].s;
        (s.dir == axis::horizontal ? hs : vs)
            .push_back({s.line, s.lo, s.hi, true, static_cast<std::uint32_t>(id)});
    }
    check_result res;
    detail::sweep_hv_contacts(hs, vs, [&](std::uint32_t h, std::uint32_t v) {
        res = {false, "intersecting segments " + std::to_string(hs[h].id) + " and " +
                          std::to_string(vs[v].id)};
    });
    return res;
}

// Faces of the chosen-segment arrangement inside the polygon. Every face of a
// conforming partition must come out rectangular; anything else is an
// internal error and is surfaced.
inline rect_partition rectangles_of(const polygon& poly, const reflex_info& info,
                                    const conforming_partition& cp) {
    std::vector<gseg> segs;
    segs.reserve(cp.chosen.size());
    for (int id : cp.chosen) segs.push_back(info.segments[id].s);
    cell_grid g = build_cell_grid(poly, segs);
    face_set f = compute_faces(g);
    rect_partition rp;
    for (int i = 0; i < f.count; ++i) {
        if (!face_is_rect(f, i))
            throw std::logic_error("rectangles_of: non-rectangular face (checker bug)");
        rp.rects.push_back(f.bbox[i]);
    }
    std::sort(rp.rects.begin(), rp.rects.end(),
              [](const grect& a, const grect& b) {
                  return std::tie(a.y0, a.x0) < std::tie(b.y0, b.x0);
              });
    return rp;
}

struct stab_report {
    int value = 1;
    int witness_class = -1;            // index into the classes vector
    std::vector<int> per_class;        // rectangle count per class (strip classes)
    bool grid_line_tie = false;        // audit: a grid-line class ties the maximum
};

// Rectangle count along every strip-interior class: 1 + transversal crossings
// with chosen segments. Grid-line classes are audited via rectangle-interior
// intersection; they can tie but never dominate.
inline stab_report stabbing_number_conforming(const pixelation& px,
                                              const conforming_partition& cp,
                                              bool audit_grid_lines = true) {
    std::vector<char> flag(px.reflex.segments.size(), 0);
    for (int id : cp.chosen) flag.at(id) = 1;
    stab_report rep;
    rep.per_class.assign(px.classes.size(), 0);
    for (std::size_t c = 0; c < px.classes.size(); ++c) {
        const stab_class& cls = px.classes[c];
        if (cls.grid_line) continue;
        int count = 1;
        for (int id : cls.crossed) count += flag[id];
        rep.per_class[c] = count;
        if (count > rep.value) {
            rep.value = count;
            rep.witness_class = static_cast<int>(c);
        }
    }
    if (rep.witness_class < 0 && !px.classes.empty()) {
        for (std::size_t c = 0; c < px.classes.size(); ++c)
            if (!px.classes[c].grid_line) {
                rep.witness_class = static_cast<int>(c);
                break;
            }
    }
    if (audit_grid_lines) {
        rect_partition rp = rectangles_of(px.poly, px.reflex, cp);
        for (std::size_t c = 0; c < px.classes.size(); ++c) {
            const stab_class& cls = px.classes[c];
            if (!cls.grid_line) continue;
            int count = 0;
            for (const grect& r : rp.rects) {
                coord c2lo = cls.dir == axis::horizontal ? 2 * r.y0 : 2 * r.x0;
                coord c2hi = cls.dir == axis::horizontal ? 2 * r.y1 : 2 * r.x1;
                coord s2lo = cls.dir == axis::horizontal ? 2 * r.x0 : 2 * r.y0;
                coord s2hi = cls.dir == axis::horizontal ? 2 * r.x1 : 2 * r.y1;
                if (c2lo < cls.cross2 && cls.cross2 < c2hi &&
                    std::max(s2lo, cls.lo2) < std::min(s2hi, cls.hi2))
                    ++count;
            }
            rep.per_class[c] = count;
            if (count > rep.value)
                throw std::logic_error("grid-line class dominates (counting bug)");
            if (count == rep.value) rep.grid_line_tie = true;
        }
    }
    return rep;
}

// Light evaluator for search loops: strip classes only, via a chosen-flag
// vector indexed by segment id.
inline int strip_stab_value(const std::vector<stab_class>& classes,
                            const std::vector<char>& chosen_flag) {
    int value = 1;
    for (const auto& cls : classes) {
        if (cls.grid_line) continue;
        int count = 1;
        for (int id : cls.crossed) count += chosen_flag[id];
        value = std::max(value, count);
    }
    return value;
}

namespace detail {

// Exact cover check: rectangles are interior-disjoint and tile the polygon.
inline check_result check_rect_cover(const polygon& poly, const rect_partition& rp) {
    std::vector<polygon> frags(1, poly);
    std::vector<gseg> segs;
    for (const grect& r : rp.rects) {
        if (r.x0 >= r.x1 || r.y0 >= r.y1) return {false, "degenerate rectangle"};
        segs.push_back({axis::vertical, r.x0, r.y0, r.y1});
        segs.push_back({axis::vertical, r.x1, r.y0, r.y1});
        segs.push_back({axis::horizontal, r.y0, r.x0, r.x1});
        segs.push_back({axis::horizontal, r.y1, r.x0, r.x1});
    }
    // only the cuts and interior flags matter for this grid
    cell_grid g;
    for (std::size_t r = 0; r < poly.ring_count(); ++r)
        for (const point& p : poly.ring(r)) {
            g.xs.push_back(p.x);
            g.ys.push_back(p.y);
        }
    for (const grect& r : rp.rects) {
        g.xs.push_back(r.x0);
        g.xs.push_back(r.x1);
        g.ys.push_back(r.y0);
        g.ys.push_back(r.y1);
    }
    std::sort(g.xs.begin(), g.xs.end());
    g.xs.erase(std::unique(g.xs.begin(), g.xs.end()), g.xs.end());
    std::sort(g.ys.begin(), g.ys.end());
    g.ys.erase(std::unique(g.ys.begin(), g.ys.end()), g.ys.end());
    g.nx = std::max<int>(0, static_cast<int>(g.xs.size()) - 1);
    g.ny = std::max<int>(0, static_cast<int>(g.ys.size()) - 1);
    g.inside.assign(static_cast<std::size_t>(g.nx) * g.ny, 0);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            point center{g.xs[i] + g.xs[i + 1], g.ys[j] + g.ys[j + 1]};
            g.inside[g.cell(i, j)] = point2_in_polygon(poly, center) == containment::inside;
        }
    }
    std::vector<int> cover(static_cast<std::size_t>(g.nx) * g.ny, 0);
    for (const grect& r : rp.rects) {
        int i0 = g.xindex(r.x0), i1 = g.xindex(r.x1);
        int j0 = g.yindex(r.y0), j1 = g.yindex(r.y1);
        for (int j = j0; j < j1; ++j)
            for (int i = i0; i < i1; ++i) ++cover[g.cell(i, j)];
    }
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            int want = g.inside[g.cell(i, j)] ? 1 : 0;
            if (cover[g.cell(i, j)] != want) {
                return {false, want == 1 ? "polygon not covered near cell" : "rectangles overlap or leak"};
            }
        }
    }
    return {true, ""};
}

}  // namespace detail

// Stabbing number of an arbitrary rectangle partition: maximal interior
// segments on the compressed grid of all rectangle edges, counted by
// rectangle-interior intersection.
inline stab_report stabbing_number_rects(const polygon& poly, const rect_partition& rp) {
    auto cover = detail::check_rect_cover(poly, rp);
    if (!cover.ok) throw std::invalid_argument("stabbing_number_rects: " + cover.message);

    stab_report rep;
    for (int orient = 0; orient < 2; ++orient) {
        axis dir = orient == 0 ? axis::horizontal : axis::vertical;
        auto flip = [&](point p) { return dir == axis::horizontal ? p : point{p.y, p.x}; };
        std::vector<coord> events;
        std::vector<detail::hline> edges;
        for (std::size_t r = 0; r < poly.ring_count(); ++r) {
            const auto& ring = poly.ring(r);
            for (std::size_t i = 0; i < ring.size(); ++i) {
                point a = flip(ring[i]), b = flip(ring[(i + 1) % ring.size()]);
                if (a.y == b.y) {
                    edges.push_back({a.y, std::min(a.x, b.x), std::max(a.x, b.x)});
                    events.push_back(a.y);
                }
            }
        }
        for (const grect& r : rp.rects) {
            events.push_back(dir == axis::horizontal ? r.y0 : r.x0);
            events.push_back(dir == axis::horizontal ? r.y1 : r.x1);
        }
        std::sort(events.begin(), events.end());
        events.erase(std::unique(events.begin(), events.end()), events.end());
        std::sort(edges.begin(), edges.end(), [](const detail::hline& a, const detail::hline& b) {
            return std::tie(a.line, a.lo) < std::tie(b.line, b.lo);
        });
        std::map<coord, int> parity;
        for (std::size_t e = 0; e + 1 < events.size(); ++e) {
            coord y = events[e];
            auto it = std::lower_bound(edges.begin(), edges.end(), y,
                                       [](const detail::hline& s, coord l) { return s.line < l; });
            for (; it != edges.end() && it->line == y; ++it) {
                for (coord x : {it->lo, it->hi}) {
                    auto [pit, _] = parity.try_emplace(x, 0);
                    pit->second ^= 1;
                    if (pit->second == 0) parity.erase(pit);
                }
            }
            coord rep_cross = 2 * y + 1;
            for (auto pit = parity.begin(); pit != parity.end();) {
                coord lo = pit->first;
                ++pit;
                coord hi = pit->first;
                ++pit;
                int count = 0;
                for (const grect& r : rp.rects) {
                    coord c2lo = dir == axis::horizontal ? 2 * r.y0 : 2 * r.x0;
                    coord c2hi = dir == axis::horizontal ? 2 * r.y1 : 2 * r.x1;
                    coord s2lo = dir == axis::horizontal ? 2 * r.x0 : 2 * r.y0;
                    coord s2hi = dir == axis::horizontal ? 2 * r.x1 : 2 * r.y1;
                    if (c2lo < rep_cross && rep_cross < c2hi &&
                        std::max(s2lo, 2 * lo) < std::min(s2hi, 2 * hi))
                        ++count;
                }
                if (count > rep.value) rep.value = count;
            }
        }
    }
    return rep;
}

// No chosen segment can be dropped: a segment is removable iff every apex of
// it is covered by its other reflex segment.
inline bool is_minimal(const reflex_info& info, const conforming_partition& cp) {
    std::vector<char> flag(info.segments.size(), 0);
    for (int id : cp.chosen) flag.at(id) = 1;
    for (int id : cp.chosen) {
        bool removable = true;
        for (const point& apex : info.segments[id].apexes) {
            auto ids = info.by_apex.at(apex);
            int other_seg = ids[0] == id ? ids[1] : ids[0];
            if (!flag[other_seg]) {
                removable = false;
                break;
            }
        }
        if (removable) return false;
    }
    return true;
}

// Steiner-point elimination on thin polygons: repeatedly merge rectangle
// pairs across full shared sides that do not lie on a reflex segment. On a
// thin polygon this terminates with a conforming partition and never
// increases the stabbing number.
inline conforming_partition eliminate_steiner_thin(const polygon& poly, const reflex_info& info,
                                                   const rect_partition& input) {
    if (!is_thin(poly, info))
        throw std::invalid_argument("eliminate_steiner_thin: polygon is not thin");
    auto cover = detail::check_rect_cover(poly, input);
    if (!cover.ok) throw std::invalid_argument("eliminate_steiner_thin: " + cover.message);

    // reflex segments grouped by supporting line for containment lookups
    auto side_in_reflex = [&](axis dir, coord line, coord lo, coord hi) {
        for (const auto& rs : info.segments) {
            if (rs.s.dir == dir && rs.s.line == line && rs.s.lo <= lo && hi <= rs.s.hi)
                return true;
        }
        return false;
    };

    std::vector<grect> rects = input.rects;
    bool merged = true;
    while (merged) {
        merged = false;
        for (std::size_t a = 0; a < rects.size() && !merged; ++a) {
            for (std::size_t b = a + 1; b < rects.size() && !merged; ++b) {
                const grect &A = rects[a], &B = rects[b];
                // horizontal neighbors sharing a full vertical side
                if (A.y0 == B.y0 && A.y1 == B.y1 && (A.x1 == B.x0 || B.x1 == A.x0)) {
                    coord line = A.x1 == B.x0 ? A.x1 : B.x1;
                    if (!side_in_reflex(axis::vertical, line, A.y0, A.y1)) {
                        rects[a] = {std::min(A.x0, B.x0), A.y0, std::max(A.x1, B.x1), A.y1};
                        rects.erase(rects.begin() + b);
                        merged = true;
                    }
                } else if (A.x0 == B.x0 && A.x1 == B.x1 && (A.y1 == B.y0 || B.y1 == A.y0)) {
                    coord line = A.y1 == B.y0 ? A.y1 : B.y1;
                    if (!side_in_reflex(axis::horizontal, line, A.x0, A.x1)) {
                        rects[a] = {A.x0, std::min(A.y0, B.y0), A.x1, std::max(A.y1, B.y1)};
                        rects.erase(rects.begin() + b);
                        merged = true;
                    }
                }
            }
        }
    }

    // remaining internal sides must assemble into whole reflex segments
    std::map<int, std::vector<std::pair<coord, coord>>> pieces;  // segment id -> side spans
    auto record_side = [&](axis dir, coord line, coord lo, coord hi) {
        // clip away parts on the polygon boundary
        std::vector<std::pair<coord, coord>> parts{{lo, hi}};
        for (std::size_t r = 0; r < poly.ring_count(); ++r) {
            const auto& ring = poly.ring(r);
            for (std::size_t i = 0; i < ring.size(); ++i) {
                point a = ring[i], b = ring[(i + 1) % ring.size()];
                gseg e{a.y == b.y ? axis::horizontal : axis::vertical,
                       a.y == b.y ? a.y : a.x,
                       a.y == b.y ? std::min(a.x, b.x) : std::min(a.y, b.y),
                       a.y == b.y ? std::max(a.x, b.x) : std::max(a.y, b.y)};
                if (e.dir != dir || e.line != line) continue;
                std::vector<std::pair<coord, coord>> next;
                for (auto [plo, phi] : parts) {
                    if (e.lo > plo) next.emplace_back(plo, std::min(e.lo, phi));
                    if (e.hi < phi) next.emplace_back(std::max(e.hi, plo), phi);
                }
                parts = std::move(next);
            }
        }
        for (auto [plo, phi] : parts) {
            if (plo >= phi) continue;
            bool placed = false;
            for (std::size_t s = 0; s < info.segments.size(); ++s) {
                const gseg& rs = info.segments[s].s;
                if (rs.dir == dir && rs.line == line && rs.lo <= plo && phi <= rs.hi) {
                    pieces[static_cast<int>(s)].emplace_back(plo, phi);
                    placed = true;
                    break;
                }
            }
            if (!placed)
                throw std::logic_error(
                    "eliminate_steiner_thin: stuck with a non-reflex internal side");
        }
    };
    for (const grect& r : rects) {
        record_side(axis::vertical, r.x0, r.y0, r.y1);
        record_side(axis::vertical, r.x1, r.y0, r.y1);
        record_side(axis::horizontal, r.y0, r.x0, r.x1);
        record_side(axis::horizontal, r.y1, r.x0, r.x1);
    }

    conforming_partition cp;
    for (auto& [seg_id, spans] : pieces) {
        std::sort(spans.begin(), spans.end());
        const gseg& rs = info.segments[seg_id].s;
        coord at = rs.lo;
        for (auto [lo, hi] : spans) {
            if (lo > at) break;
            at = std::max(at, hi);
        }
        if (at < rs.hi)
            throw std::logic_error("eliminate_steiner_thin: partial reflex segment remains");
        cp.chosen.push_back(seg_id);
    }
    cp.normalize();
    auto chk = check_conforming(info, cp);
    if (!chk.ok)
        throw std::logic_error("eliminate_steiner_thin: result not conforming: " + chk.message);
    return cp;
}

}  // namespace stabcut

#endif
