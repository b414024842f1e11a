#ifndef STABCUT_PIXELATION_HPP
#define STABCUT_PIXELATION_HPP

#include <algorithm>
#include <array>
#include <climits>
#include <map>
#include <stdexcept>
#include <vector>

#include "stabcut/geom.hpp"
#include "stabcut/grid.hpp"

namespace stabcut {

// One equivalence class of stabbing segments. The representative lives in
// doubled coordinates: cross2 is odd for strip-interior classes and even for
// grid-line classes (segments lying exactly on a reflex-segment line; kept
// for audit, they never dominate under the rectangle-interior counting
// convention).
struct stab_class {
    axis dir = axis::horizontal;
    coord cross2 = 0;
    coord lo2 = 0, hi2 = 0;  // open span of the representative, doubled
    bool grid_line = false;
    std::vector<int> pixels;   // filled by stab_classes(pixelation)
    std::vector<int> crossed;  // reflex segment ids crossed transversally, in span order
};

namespace detail {

struct hline {
    coord line, lo, hi;
};

// Strip-interior classes of one orientation, merged so that consecutive
// strips whose run matches and is not separated by any structure on the
// shared line form a single class (this is exactly pixel-chain equivalence).
// For axis::horizontal the classes are horizontal segments.
inline std::vector<stab_class> sweep_classes(const polygon& poly, const reflex_info& info,
                                             axis dir, bool with_grid_lines) {
    // work in a rotated frame: "y" is the cross coordinate, "x" the span one
    auto flip = [&](point p) { return dir == axis::horizontal ? p : point{p.y, p.x}; };
    std::vector<hline> structure;  // blocking lines parallel to the class direction
    for (std::size_t r = 0; r < poly.ring_count(); ++r) {
        const auto& ring = poly.ring(r);
        for (std::size_t i = 0; i < ring.size(); ++i) {
            point a = flip(ring[i]), b = flip(ring[(i + 1) % ring.size()]);
            if (a.y == b.y) structure.push_back({a.y, std::min(a.x, b.x), std::max(a.x, b.x)});
        }
    }
    std::vector<hline> edges_only = structure;  // polygon edges drive the cross-section
    for (const auto& rs : info.segments) {
        if (rs.s.dir == dir)
            structure.push_back({rs.s.line, rs.s.lo, rs.s.hi});
    }
    std::sort(structure.begin(), structure.end(), [](const hline& a, const hline& b) {
        return std::tie(a.line, a.lo) < std::tie(b.line, b.lo);
    });
    std::sort(edges_only.begin(), edges_only.end(), [](const hline& a, const hline& b) {
        return std::tie(a.line, a.lo) < std::tie(b.line, b.lo);
    });

    std::vector<coord> events;
    for (const auto& s : structure) events.push_back(s.line);
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());

    // any structure piece intersecting the open interval (lo,hi) on `line`?
    auto blocked = [&](coord line, coord lo, coord hi) {
        auto it = std::lower_bound(structure.begin(), structure.end(), line,
                                   [](const hline& s, coord l) { return s.line < l; });
        for (; it != structure.end() && it->line == line; ++it) {
            if (it->lo >= hi) break;
            if (it->hi > lo) return true;
        }
        return false;
    };

    std::vector<stab_class> classes;
    std::map<std::pair<coord, coord>, std::size_t> open_runs;  // run -> class index
    std::map<coord, int> parity;  // x breakpoints of the current cross-section
    std::vector<std::pair<coord, coord>> prev_runs;

    for (std::size_t e = 0; e < events.size(); ++e) {
        coord y = events[e];
        // cross-section changes only at polygon edges
        auto it = std::lower_bound(edges_only.begin(), edges_only.end(), y,
                                   [](const hline& s, coord l) { return s.line < l; });
        for (; it != edges_only.end() && it->line == y; ++it) {
            for (coord x : {it->lo, it->hi}) {
                auto [pit, _] = parity.try_emplace(x, 0);
                pit->second ^= 1;
                if (pit->second == 0) parity.erase(pit);
            }
        }
        std::vector<std::pair<coord, coord>> runs;
        for (auto pit = parity.begin(); pit != parity.end();) {
            coord lo = pit->first;
            ++pit;
            if (pit == parity.end()) throw std::logic_error("sweep_classes: odd cross-section");
            runs.emplace_back(lo, pit->first);
            ++pit;
        }
        if (e + 1 < events.size() && !runs.empty()) {
            std::map<std::pair<coord, coord>, std::size_t> next_open;
            for (const auto& run : runs) {
                auto prev = open_runs.find(run);
                if (prev != open_runs.end() && !blocked(y, run.first, run.second)) {
                    next_open.emplace(run, prev->second);  // same class continues
                } else {
                    stab_class c;
                    c.dir = dir;
                    c.cross2 = 2 * y + 1;
                    c.lo2 = 2 * run.first;
                    c.hi2 = 2 * run.second;
                    next_open.emplace(run, classes.size());
                    classes.push_back(c);
                }
            }
            open_runs = std::move(next_open);
        } else {
            open_runs.clear();
        }

        if (with_grid_lines) {
            // interior pieces exactly on this line: previous strip ∩ next strip
            // minus structure spans
            std::vector<std::pair<coord, coord>> on_line;
            std::size_t a = 0, b = 0;
            while (a < prev_runs.size() && b < runs.size()) {
                coord lo = std::max(prev_runs[a].first, runs[b].first);
                coord hi = std::min(prev_runs[a].second, runs[b].second);
                if (lo < hi) on_line.emplace_back(lo, hi);
                if (prev_runs[a].second < runs[b].second)
                    ++a;
                else
                    ++b;
            }
            auto sit = std::lower_bound(structure.begin(), structure.end(), y,
                                        [](const hline& s, coord l) { return s.line < l; });
            std::vector<std::pair<coord, coord>> spans;
            for (; sit != structure.end() && sit->line == y; ++sit)
                spans.emplace_back(sit->lo, sit->hi);
            for (auto [lo, hi] : on_line) {
                coord cur = lo;
                for (auto [slo, shi] : spans) {
                    if (shi <= cur) continue;
                    if (slo >= hi) break;
                    if (slo > cur) {
                        stab_class c;
                        c.dir = dir;
                        c.cross2 = 2 * y;
                        c.lo2 = 2 * cur;
                        c.hi2 = 2 * slo;
                        c.grid_line = true;
                        classes.push_back(c);
                    }
                    cur = std::max(cur, shi);
                }
                if (cur < hi) {
                    stab_class c;
                    c.dir = dir;
                    c.cross2 = 2 * y;
                    c.lo2 = 2 * cur;
                    c.hi2 = 2 * hi;
                    c.grid_line = true;
                    classes.push_back(c);
                }
            }
        }
        prev_runs = std::move(runs);
    }
    return classes;
}

}  // namespace detail

// Strip-interior stabbing classes of both orientations (no pixel or crossing
// decoration); O(n log n + output) and safe at large sizes.
inline std::vector<stab_class> stab_classes_raw(const polygon& poly, const reflex_info& info,
                                                bool with_grid_lines = false) {
    auto h = detail::sweep_classes(poly, info, axis::horizontal, with_grid_lines);
    auto v = detail::sweep_classes(poly, info, axis::vertical, with_grid_lines);
    h.insert(h.end(), v.begin(), v.end());
    return h;
}

// A pixel: maximal region meeting no reflex segment. Sides are uniform: each
// holds exactly one reflex segment (possibly a longer one passing by) or
// polygon boundary.
struct pixel {
    grect rect;
    // structure per side, order W,E,S,N: kBoundary or a reflex segment id
    std::array<int, 4> side{};
    std::array<int, 4> neighbor{};  // adjacent pixel per side, -1 if boundary
    std::array<int, 4> corner{};    // V_P vertex ids: SW, SE, NW, NE
};

inline constexpr int kBoundary = -2;

struct pix_vertex {
    point p;
    bool on_boundary = false;
    bool is_reflex_corner = false;
    int h_seg = -1;  // horizontal reflex segment through this vertex
    int v_seg = -1;
};

struct pixelation {
    polygon poly;
    reflex_info reflex;
    cell_grid grid;
    face_set faces;
    std::vector<pixel> pixels;
    std::vector<pix_vertex> vertices;         // V_P
    std::map<point, int> vertex_at;
    std::vector<std::vector<int>> seg_vertices;  // per reflex segment, chain of V_P ids
    std::vector<stab_class> classes;             // strip classes first, then grid-line
    int max_cross = 0;                           // max |crossed| over strip classes
};

inline pixelation pixelate(const polygon& poly) {
    pixelation px;
    px.poly = poly;
    px.reflex = reflex_segments(poly);

    std::vector<gseg> segs;
    segs.reserve(px.reflex.segments.size());
    for (const auto& rs : px.reflex.segments) segs.push_back(rs.s);
    px.grid = build_cell_grid(poly, segs);
    px.faces = compute_faces(px.grid);

    const cell_grid& g = px.grid;

    // V_P: grid nodes where perpendicular structure pieces meet
    auto hpiece_struct = [&](int i, int j) -> int {  // y=ys[j], column i; kBoundary/-1/seg
        if (i < 0 || i >= g.nx || j < 0 || j > g.ny) return -1;
        if (g.hseg[g.hpiece(i, j)] >= 0) return g.hseg[g.hpiece(i, j)];
        return g.hboundary[g.hpiece(i, j)] ? kBoundary : -1;
    };
    auto vpiece_struct = [&](int i, int j) -> int {
        if (i < 0 || i > g.nx || j < 0 || j >= g.ny) return -1;
        if (g.vseg[g.vpiece(i, j)] >= 0) return g.vseg[g.vpiece(i, j)];
        return g.vboundary[g.vpiece(i, j)] ? kBoundary : -1;
    };
    for (int j = 0; j <= g.ny; ++j) {
        for (int i = 0; i <= g.nx; ++i) {
            int hw = hpiece_struct(i - 1, j), he = hpiece_struct(i, j);
            int vs = vpiece_struct(i, j - 1), vn = vpiece_struct(i, j);
            bool h_any = hw != -1 || he != -1;
            bool v_any = vs != -1 || vn != -1;
            if (!h_any || !v_any) continue;
            pix_vertex v;
            v.p = {g.xs[i], g.ys[j]};
            v.on_boundary = hw == kBoundary || he == kBoundary || vs == kBoundary ||
                            vn == kBoundary;
            v.is_reflex_corner = px.reflex.by_apex.count(v.p) > 0;
            v.h_seg = std::max(hw, he) >= 0 ? std::max(hw, he) : -1;
            v.v_seg = std::max(vs, vn) >= 0 ? std::max(vs, vn) : -1;
            if (hw >= 0 && he >= 0 && hw != he)
                throw std::logic_error("pixelate: two horizontal segments at one vertex");
            if (vs >= 0 && vn >= 0 && vs != vn)
                throw std::logic_error("pixelate: two vertical segments at one vertex");
            px.vertex_at.emplace(v.p, static_cast<int>(px.vertices.size()));
            px.vertices.push_back(v);
        }
    }

    px.seg_vertices.assign(px.reflex.segments.size(), {});
    for (int vid = 0; vid < static_cast<int>(px.vertices.size()); ++vid) {
        const auto& v = px.vertices[vid];
        if (v.h_seg >= 0) px.seg_vertices[v.h_seg].push_back(vid);
        if (v.v_seg >= 0) px.seg_vertices[v.v_seg].push_back(vid);
    }
    for (std::size_t s = 0; s < px.seg_vertices.size(); ++s) {
        axis d = px.reflex.segments[s].s.dir;
        std::sort(px.seg_vertices[s].begin(), px.seg_vertices[s].end(), [&](int a, int b) {
            return d == axis::horizontal ? px.vertices[a].p.x < px.vertices[b].p.x
                                         : px.vertices[a].p.y < px.vertices[b].p.y;
        });
    }

    // pixels = faces; each must be an exact rectangle
    px.pixels.resize(px.faces.count);
    for (int f = 0; f < px.faces.count; ++f) {
        if (!face_is_rect(px.faces, f))
            throw std::logic_error("pixelate: non-rectangular pixel");
        pixel& p = px.pixels[f];
        p.rect = px.faces.bbox[f];
        int i0 = g.xindex(p.rect.x0), i1 = g.xindex(p.rect.x1);
        int j0 = g.yindex(p.rect.y0), j1 = g.yindex(p.rect.y1);
        auto corner_of = [&](coord x, coord y) {
            auto it = px.vertex_at.find({x, y});
            if (it == px.vertex_at.end())
                throw std::logic_error("pixelate: pixel corner is not a vertex");
            return it->second;
        };
        p.corner = {corner_of(p.rect.x0, p.rect.y0), corner_of(p.rect.x1, p.rect.y0),
                    corner_of(p.rect.x0, p.rect.y1), corner_of(p.rect.x1, p.rect.y1)};
        auto side_struct = [&](bool vertical, int fixed, int lo, int hi) {
            int found = -1;
            for (int t = lo; t < hi; ++t) {
                int s = vertical ? vpiece_struct(fixed, t) : hpiece_struct(t, fixed);
                if (s == -1) throw std::logic_error("pixelate: unstructured pixel side");
                if (found == -1)
                    found = s;
                else if (found != s)
                    throw std::logic_error("pixelate: mixed pixel side");
            }
            return found;
        };
        p.side[0] = side_struct(true, i0, j0, j1);
        p.side[1] = side_struct(true, i1, j0, j1);
        p.side[2] = side_struct(false, j0, i0, i1);
        p.side[3] = side_struct(false, j1, i0, i1);
        auto neighbor_face = [&](int di, int dj) -> int {
            int ci = di < 0 ? i0 - 1 : (di > 0 ? i1 : i0);
            int cj = dj < 0 ? j0 - 1 : (dj > 0 ? j1 : j0);
            if (!g.cell_inside(ci, cj)) return -1;
            return px.faces.face_of[g.cell(ci, cj)];
        };
        p.neighbor[0] = p.side[0] == kBoundary ? -1 : neighbor_face(-1, 0);
        p.neighbor[1] = p.side[1] == kBoundary ? -1 : neighbor_face(1, 0);
        p.neighbor[2] = p.side[2] == kBoundary ? -1 : neighbor_face(0, -1);
        p.neighbor[3] = p.side[3] == kBoundary ? -1 : neighbor_face(0, 1);
    }

    // classes, decorated with pixel chains and transversal crossings
    px.classes = stab_classes_raw(poly, px.reflex, true);
    std::vector<std::pair<coord, int>> h_by_line, v_by_line;  // (line, seg id)
    for (int s = 0; s < static_cast<int>(px.reflex.segments.size()); ++s) {
        const gseg& gs = px.reflex.segments[s].s;
        (gs.dir == axis::horizontal ? h_by_line : v_by_line).emplace_back(gs.line, s);
    }
    std::sort(h_by_line.begin(), h_by_line.end());
    std::sort(v_by_line.begin(), v_by_line.end());
    for (auto& c : px.classes) {
        if (c.grid_line) continue;
        const auto& perp = c.dir == axis::horizontal ? v_by_line : h_by_line;
        auto it = std::lower_bound(perp.begin(), perp.end(),
                                   std::make_pair((c.lo2 / 2) + 1, INT_MIN));
        for (; it != perp.end() && 2 * it->first < c.hi2; ++it) {
            const gseg& s = px.reflex.segments[it->second].s;
            if (2 * s.lo < c.cross2 && c.cross2 < 2 * s.hi) c.crossed.push_back(it->second);
        }
        // pixel chain: walk cells of the grid row/column holding the representative
        if (c.dir == axis::horizontal) {
            int j = g.yindex((c.cross2 - 1) / 2);
            int i0 = g.xindex(c.lo2 / 2), i1 = g.xindex(c.hi2 / 2);
            int last = -1;
            for (int i = i0; i < i1; ++i) {
                int f = px.faces.face_of[g.cell(i, j)];
                if (f != last) c.pixels.push_back(f);
                last = f;
            }
        } else {
            int i = g.xindex((c.cross2 - 1) / 2);
            int j0 = g.yindex(c.lo2 / 2), j1 = g.yindex(c.hi2 / 2);
            int last = -1;
            for (int j = j0; j < j1; ++j) {
                int f = px.faces.face_of[g.cell(i, j)];
                if (f != last) c.pixels.push_back(f);
                last = f;
            }
        }
        px.max_cross = std::max(px.max_cross, static_cast<int>(c.crossed.size()));
    }
    return px;
}

inline const std::vector<stab_class>& stab_classes(const pixelation& px) { return px.classes; }

// The unique pixel incident to a reflex vertex and both of its reflex
// segments.
inline int wedge_pixel(const pixelation& px, point p) {
    auto it = px.reflex.by_apex.find(p);
    if (it == px.reflex.by_apex.end())
        throw std::invalid_argument("wedge_pixel: not a reflex vertex");
    auto dir_from_apex = [&](int seg_id) {
        const auto& rs = px.reflex.segments[seg_id];
        const gseg& s = rs.s;
        coord at = s.dir == axis::horizontal ? p.x : p.y;
        return at == s.lo ? 1 : -1;
    };
    int hx = dir_from_apex(it->second[0]);
    int vy = dir_from_apex(it->second[1]);
    const cell_grid& g = px.grid;
    int i = g.xindex(p.x), j = g.yindex(p.y);
    int ci = hx > 0 ? i : i - 1;
    int cj = vy > 0 ? j : j - 1;
    if (!g.cell_inside(ci, cj)) throw std::logic_error("wedge_pixel: wedge cell outside");
    return px.faces.face_of[g.cell(ci, cj)];
}

// Bipartite vertex/pixel incidence graph with quadrant labels.
struct radial_graph_edge {
    int vertex;
    int pixel;
    int quadrant;  // 1 NE, 2 NW, 3 SW, 4 SE (pixel's position around the vertex)
};

struct radial_graph {
    int num_vertices = 0;  // V_P
    int num_pixels = 0;
    std::vector<radial_graph_edge> edges;
};

inline radial_graph build_radial_graph(const pixelation& px) {
    radial_graph rg;
    rg.num_vertices = static_cast<int>(px.vertices.size());
    rg.num_pixels = static_cast<int>(px.pixels.size());
    for (int f = 0; f < rg.num_pixels; ++f) {
        const pixel& p = px.pixels[f];
        rg.edges.push_back({p.corner[0], f, 1});  // pixel NE of its SW corner
        rg.edges.push_back({p.corner[1], f, 2});
        rg.edges.push_back({p.corner[2], f, 4});
        rg.edges.push_back({p.corner[3], f, 3});
    }
    return rg;
}

// Number of inner (non-boundary) pixelation-graph vertices on each reflex
// segment; the maximum drives the gate-free FPT dichotomy.
inline int max_reflex_length(const pixelation& px) {
    int best = 0;
    for (const auto& chain : px.seg_vertices) {
        int inner = 0;
        for (int v : chain)
            if (!px.vertices[v].on_boundary) ++inner;
        best = std::max(best, inner);
    }
    return best;
}

}  // namespace stabcut

#endif
