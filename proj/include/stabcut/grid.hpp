#ifndef STABCUT_GRID_HPP
#define STABCUT_GRID_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "stabcut/geom.hpp"

namespace stabcut {

// Compressed arrangement of one or more polygons plus axis-aligned chord
// segments. Cell (i,j) spans (xs[i],xs[i+1]) x (ys[j],ys[j+1]). Structure on
// the grid lines between cells records what separates them: polygon boundary
// (tracked by parity, so an edge shared by two glued fragments cancels out)
// or one of the chord segments.
struct cell_grid {
    std::vector<coord> xs, ys;
    int nx = 0, ny = 0;
    std::vector<char> inside;       // nx*ny
    std::vector<char> vboundary;    // (nx+1)*ny, boundary parity on x=xs[i] at row j
    std::vector<char> hboundary;    // nx*(ny+1)
    std::vector<int> vseg;          // chord id on the piece, -1 if none
    std::vector<int> hseg;

    int cell(int i, int j) const { return j * nx + i; }
    int vpiece(int i, int j) const { return j * (nx + 1) + i; }
    int hpiece(int i, int j) const { return j * nx + i; }
    bool cell_inside(int i, int j) const {
        return i >= 0 && i < nx && j >= 0 && j < ny && inside[cell(i, j)];
    }
    bool vblocked(int i, int j) const { return vboundary[vpiece(i, j)] || vseg[vpiece(i, j)] >= 0; }
    bool hblocked(int i, int j) const { return hboundary[hpiece(i, j)] || hseg[hpiece(i, j)] >= 0; }

    int xindex(coord x) const {
        auto it = std::lower_bound(xs.begin(), xs.end(), x);
        if (it == xs.end() || *it != x) throw std::logic_error("grid: x not a cut");
        return static_cast<int>(it - xs.begin());
    }
    int yindex(coord y) const {
        auto it = std::lower_bound(ys.begin(), ys.end(), y);
        if (it == ys.end() || *it != y) throw std::logic_error("grid: y not a cut");
        return static_cast<int>(it - ys.begin());
    }
};

inline cell_grid build_cell_grid(std::span<const polygon> fragments, std::span<const gseg> segs) {
    cell_grid g;
    for (const polygon& poly : fragments) {
        for (std::size_t r = 0; r < poly.ring_count(); ++r) {
            for (const point& p : poly.ring(r)) {
                g.xs.push_back(p.x);
                g.ys.push_back(p.y);
            }
        }
    }
    for (const gseg& s : segs) {
        if (s.dir == axis::vertical) {
            g.xs.push_back(s.line);
            g.ys.push_back(s.lo);
            g.ys.push_back(s.hi);
        } else {
            g.ys.push_back(s.line);
            g.xs.push_back(s.lo);
            g.xs.push_back(s.hi);
        }
    }
    auto uniq = [](std::vector<coord>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    uniq(g.xs);
    uniq(g.ys);
    g.nx = std::max<int>(0, static_cast<int>(g.xs.size()) - 1);
    g.ny = std::max<int>(0, static_cast<int>(g.ys.size()) - 1);
    g.inside.assign(static_cast<std::size_t>(g.nx) * g.ny, 0);
    g.vboundary.assign(static_cast<std::size_t>(g.nx + 1) * g.ny, 0);
    g.hboundary.assign(static_cast<std::size_t>(g.nx) * (g.ny + 1), 0);
    g.vseg.assign(g.vboundary.size(), -1);
    g.hseg.assign(g.hboundary.size(), -1);

    // gather edges once
    struct vedge {
        coord x, ylo, yhi;
    };
    struct hedge {
        coord y, xlo, xhi;
    };
    std::vector<vedge> vedges;
    std::vector<hedge> hedges;
    for (const polygon& poly : fragments) {
        for (std::size_t r = 0; r < poly.ring_count(); ++r) {
            const auto& ring = poly.ring(r);
            for (std::size_t i = 0; i < ring.size(); ++i) {
                point a = ring[i], b = ring[(i + 1) % ring.size()];
                if (a.x == b.x)
                    vedges.push_back({a.x, std::min(a.y, b.y), std::max(a.y, b.y)});
                else
                    hedges.push_back({a.y, std::min(a.x, b.x), std::max(a.x, b.x)});
            }
        }
    }

    // interior fill per row strip: parity over vertical edges spanning the strip
    std::vector<std::vector<coord>> row_toggles(g.ny);
    for (const auto& e : vedges) {
        int jlo = g.yindex(e.ylo), jhi = g.yindex(e.yhi);
        for (int j = jlo; j < jhi; ++j) row_toggles[j].push_back(e.x);
        // boundary parity on the pieces
        int i = g.xindex(e.x);
        for (int j = jlo; j < jhi; ++j) g.vboundary[g.vpiece(i, j)] ^= 1;
    }
    for (int j = 0; j < g.ny; ++j) {
        auto& tg = row_toggles[j];
        std::sort(tg.begin(), tg.end());
        bool in = false;
        std::size_t t = 0;
        for (int i = 0; i < g.nx; ++i) {
            while (t < tg.size() && tg[t] <= g.xs[i]) {
                in = !in;
                ++t;
            }
            g.inside[g.cell(i, j)] = in;
        }
    }
    for (const auto& e : hedges) {
        int ilo = g.xindex(e.xlo), ihi = g.xindex(e.xhi);
        int j = g.yindex(e.y);
        for (int i = ilo; i < ihi; ++i) g.hboundary[g.hpiece(i, j)] ^= 1;
    }

    for (std::size_t sid = 0; sid < segs.size(); ++sid) {
        const gseg& s = segs[sid];
        if (s.dir == axis::vertical) {
            int i = g.xindex(s.line);
            int jlo = g.yindex(s.lo), jhi = g.yindex(s.hi);
            for (int j = jlo; j < jhi; ++j) {
                int pc = g.vpiece(i, j);
                if (g.vseg[pc] >= 0) throw std::logic_error("grid: overlapping chords");
                g.vseg[pc] = static_cast<int>(sid);
            }
        } else {
            int j = g.yindex(s.line);
            int ilo = g.xindex(s.lo), ihi = g.xindex(s.hi);
            for (int i = ilo; i < ihi; ++i) {
                int pc = g.hpiece(i, j);
                if (g.hseg[pc] >= 0) throw std::logic_error("grid: overlapping chords");
                g.hseg[pc] = static_cast<int>(sid);
            }
        }
    }
    return g;
}

inline cell_grid build_cell_grid(const polygon& poly, std::span<const gseg> segs) {
    return build_cell_grid(std::span<const polygon>(&poly, 1), segs);
}

// Connected components of inside cells, where adjacent cells merge unless a
// boundary-odd piece or a chord separates them.
struct face_set {
    std::vector<int> face_of;  // per cell, -1 outside
    int count = 0;
    std::vector<grect> bbox;   // per face
    std::vector<__int128> area;
};

inline face_set compute_faces(const cell_grid& g) {
    face_set f;
    f.face_of.assign(g.inside.size(), -1);
    std::vector<int> parent(g.inside.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (!g.cell_inside(i, j)) continue;
            if (g.cell_inside(i + 1, j) && !g.vblocked(i + 1, j))
                parent[find(g.cell(i, j))] = find(g.cell(i + 1, j));
            if (g.cell_inside(i, j + 1) && !g.hblocked(i, j + 1))
                parent[find(g.cell(i, j))] = find(g.cell(i, j + 1));
        }
    }
    std::map<int, int> ids;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (!g.cell_inside(i, j)) continue;
            int root = find(g.cell(i, j));
            auto [it, fresh] = ids.try_emplace(root, f.count);
            if (fresh) {
                ++f.count;
                f.bbox.push_back({g.xs[i], g.ys[j], g.xs[i + 1], g.ys[j + 1]});
                f.area.push_back(0);
            }
            int id = it->second;
            f.face_of[g.cell(i, j)] = id;
            grect& bb = f.bbox[id];
            bb.x0 = std::min(bb.x0, g.xs[i]);
            bb.y0 = std::min(bb.y0, g.ys[j]);
            bb.x1 = std::max(bb.x1, g.xs[i + 1]);
            bb.y1 = std::max(bb.y1, g.ys[j + 1]);
            f.area[id] += rect_area({g.xs[i], g.ys[j], g.xs[i + 1], g.ys[j + 1]});
        }
    }
    return f;
}

// Exact rectangle test: the face covers its bounding box completely.
inline bool face_is_rect(const face_set& f, int face) {
    return f.area[face] == rect_area(f.bbox[face]);
}

// Traces the boundary of one face into a polygon (outer ring ccw, holes cw).
// Fails loudly on dangling chords or pinch points; neither occurs for
// arrangements of boundary-to-boundary segments.
inline polygon trace_face(const cell_grid& g, const face_set& f, int face) {
    struct edgelet {
        point from, to;
        bool used = false;
    };
    std::vector<edgelet> lets;
    auto differs_v = [&](int i, int j, int ic, int jc) {
        // piece x=xs[i], row j between cell (ic,jc) of this face and its neighbor
        bool nb = false;
        int ni = ic == i ? i - 1 : i;  // neighbor column on the other side
        if (ni >= 0 && ni < g.nx && g.cell_inside(ni, jc))
            nb = f.face_of[g.cell(ni, jc)] == face;
        if (!g.vblocked(i, j)) return !nb;
        if (nb) throw std::logic_error("trace_face: dangling chord inside face");
        return true;
    };
    auto differs_h = [&](int i, int j, int ic, int jc) {
        bool nb = false;
        int nj = jc == j ? j - 1 : j;
        if (nj >= 0 && nj < g.ny && g.cell_inside(ic, nj))
            nb = f.face_of[g.cell(ic, nj)] == face;
        if (!g.hblocked(i, j)) return !nb;
        if (nb) throw std::logic_error("trace_face: dangling chord inside face");
        return true;
    };
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (!g.cell_inside(i, j) || f.face_of[g.cell(i, j)] != face) continue;
            // face interior stays on the left of each edgelet
            if (differs_v(i, j, i, j))  // left side, face to the east: go south
                lets.push_back({{g.xs[i], g.ys[j + 1]}, {g.xs[i], g.ys[j]}});
            if (differs_v(i + 1, j, i, j))  // right side, face west: go north
                lets.push_back({{g.xs[i + 1], g.ys[j]}, {g.xs[i + 1], g.ys[j + 1]}});
            if (differs_h(i, j, i, j))  // bottom, face above: go east
                lets.push_back({{g.xs[i], g.ys[j]}, {g.xs[i + 1], g.ys[j]}});
            if (differs_h(i, j + 1, i, j))  // top, face below: go west
                lets.push_back({{g.xs[i + 1], g.ys[j + 1]}, {g.xs[i], g.ys[j + 1]}});
        }
    }
    std::map<point, std::vector<std::size_t>> by_start;
    for (std::size_t i = 0; i < lets.size(); ++i) by_start[lets[i].from].push_back(i);

    std::vector<std::vector<point>> rings;
    for (std::size_t s = 0; s < lets.size(); ++s) {
        if (lets[s].used) continue;
        std::vector<point> ring;
        std::size_t cur = s;
        while (!lets[cur].used) {
            lets[cur].used = true;
            ring.push_back(lets[cur].from);
            const auto& outs = by_start.at(lets[cur].to);
            std::size_t next = SIZE_MAX;
            for (std::size_t cand : outs) {
                if (lets[cand].used) continue;
                if (next != SIZE_MAX) throw std::logic_error("trace_face: pinch point");
                next = cand;
            }
            if (next == SIZE_MAX) break;  // ring closed
            cur = next;
        }
        // merge collinear runs
        std::vector<point> merged;
        std::size_t m = ring.size();
        for (std::size_t i = 0; i < m; ++i) {
            point prev = ring[(i + m - 1) % m];
            point cur_p = ring[i];
            point next_p = ring[(i + 1) % m];
            bool collinear = (prev.x == cur_p.x && cur_p.x == next_p.x) ||
                             (prev.y == cur_p.y && cur_p.y == next_p.y);
            if (!collinear) merged.push_back(cur_p);
        }
        rings.push_back(std::move(merged));
    }

    polygon out;
    bool outer_set = false;
    for (auto& ring : rings) {
        if (detail::ring_area2(ring) > 0) {
            if (outer_set) throw std::logic_error("trace_face: two outer rings");
            out.outer = std::move(ring);
            outer_set = true;
        } else {
            out.holes.push_back(std::move(ring));
        }
    }
    if (!outer_set) throw std::logic_error("trace_face: no outer ring");
    return out;
}

}  // namespace stabcut

#endif
